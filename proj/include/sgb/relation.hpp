#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgb {

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ColumnType { Real, Integer, Text };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Text;
    std::vector<double> reals;
    std::vector<std::int64_t> ints;
    std::vector<std::string> texts;

    bool numeric() const { return type != ColumnType::Text; }
    double numberAt(std::size_t row) const {
        return type == ColumnType::Real ? reals[row] : static_cast<double>(ints[row]);
    }
};

// Typed columnar slice of one CSV file. Row ids are 0-based positions in file
// order over the accepted rows. Rows carrying a non-finite value in a numeric
// column are dropped at ingest and counted, so no NaN/Inf survives past here.
struct Relation {
    std::string name;
    std::vector<Column> columns;
    std::size_t rowCount = 0;
    std::size_t skippedRows = 0;

    const Column* findColumn(std::string_view columnName) const;
};

// Reads a headered CSV file. Throws IngestError on unreadable files and
// ragged rows. Column types are inferred: all-integer -> Integer, otherwise
// all-numeric -> Real, otherwise Text.
Relation ingestCsv(const std::string& path, std::string relationName);

// Same, from an in-memory buffer.
Relation ingestCsvText(std::string_view text, std::string relationName);

}  // namespace sgb
