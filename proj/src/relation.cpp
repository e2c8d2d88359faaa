#include "sgb/relation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace sgb {

const Column* Relation::findColumn(std::string_view columnName) const {
    for (const auto& c : columns) {
        if (c.name == columnName) {
            return &c;
        }
    }
    return nullptr;
}

namespace {

// RFC-4180-ish field splitting: quoted fields may contain commas and doubled
// quotes. No multi-line fields.
std::vector<std::string> splitCsvLine(const std::string& line, std::size_t lineNo) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        throw IngestError("line " + std::to_string(lineNo) + ": unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

bool parseInteger(const std::string& s, std::int64_t& out) {
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

// Accepts the usual decimal forms plus nan/inf spellings, which is what lets
// the non-finite row rejection see them as numeric.
bool parseReal(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

}  // namespace

Relation ingestCsvText(std::string_view text, std::string relationName) {
    std::vector<std::vector<std::string>> raw;
    std::string line;
    std::istringstream in{std::string(text)};
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() && raw.empty()) {
            continue;
        }
        raw.push_back(splitCsvLine(line, lineNo));
    }
    // Drop trailing blank lines.
    while (!raw.empty() && raw.back().size() == 1 && raw.back().front().empty()) {
        raw.pop_back();
    }
    if (raw.empty()) {
        throw IngestError(relationName + ": missing header row");
    }

    const std::size_t width = raw.front().size();
    for (std::size_t r = 1; r < raw.size(); ++r) {
        if (raw[r].size() != width) {
            throw IngestError(relationName + ": ragged row " + std::to_string(r + 1) + " (" +
                              std::to_string(raw[r].size()) + " fields, expected " +
                              std::to_string(width) + ")");
        }
    }

    Relation rel;
    rel.name = std::move(relationName);
    rel.columns.resize(width);
    for (std::size_t c = 0; c < width; ++c) {
        rel.columns[c].name = trim(raw.front()[c]);
    }

    const std::size_t dataRows = raw.size() - 1;
    std::vector<ColumnType> types(width, ColumnType::Integer);
    for (std::size_t c = 0; c < width; ++c) {
        for (std::size_t r = 0; r < dataRows; ++r) {
            const std::string value = trim(raw[r + 1][c]);
            std::int64_t i = 0;
            double d = 0.0;
            if (types[c] == ColumnType::Integer && !parseInteger(value, i)) {
                types[c] = ColumnType::Real;
            }
            if (types[c] == ColumnType::Real && !parseReal(value, d)) {
                types[c] = ColumnType::Text;
                break;
            }
        }
        rel.columns[c].type = types[c];
    }

    for (std::size_t r = 0; r < dataRows; ++r) {
        bool finite = true;
        for (std::size_t c = 0; c < width && finite; ++c) {
            if (types[c] == ColumnType::Real) {
                double d = 0.0;
                parseReal(trim(raw[r + 1][c]), d);
                finite = std::isfinite(d);
            }
        }
        if (!finite) {
            ++rel.skippedRows;
            continue;
        }
        for (std::size_t c = 0; c < width; ++c) {
            const std::string value = trim(raw[r + 1][c]);
            Column& col = rel.columns[c];
            switch (types[c]) {
                case ColumnType::Integer: {
                    std::int64_t i = 0;
                    parseInteger(value, i);
                    col.ints.push_back(i);
                    break;
                }
                case ColumnType::Real: {
                    double d = 0.0;
                    parseReal(value, d);
                    col.reals.push_back(d);
                    break;
                }
                case ColumnType::Text:
                    col.texts.push_back(value);
                    break;
            }
        }
        ++rel.rowCount;
    }
    return rel;
}

Relation ingestCsv(const std::string& path, std::string relationName) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingestCsvText(buffer.str(), std::move(relationName));
}

}  // namespace sgb
