// sgb: similarity group-by engine CLI.
//
//   sgb run   --input data.csv --query "SELECT ..."   execute one query
//   sgb bench --spec bench.toml | flags               measurement matrix
//
// Exit codes: 0 ok, 2 parse error, 3 semantic error, 4 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgb/bench.hpp"
#include "sgb/executor.hpp"
#include "sgb/query.hpp"
#include "sgb/relation.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSemantic = 3;
constexpr int kExitIo = 4;

std::string loadQueryArgument(const std::string& arg) {
    if (arg.empty() || arg.front() != '@') {
        return arg;
    }
    std::ifstream in(arg.substr(1));
    if (!in) {
        throw sgb::IngestError("cannot open query file " + arg.substr(1));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

sgb::Strategy parseStrategy(const std::string& name) {
    if (name == "all-pairs") {
        return sgb::Strategy::AllPairs;
    }
    if (name == "bounds") {
        return sgb::Strategy::BoundsChecking;
    }
    if (name == "indexed") {
        return sgb::Strategy::Indexed;
    }
    throw CLI::ValidationError("--strategy", "expected all-pairs, bounds or indexed");
}

int runQueryCommand(const std::string& inputPath, const std::string& queryArg,
                    const std::string& strategyName, const std::string& format,
                    std::optional<std::uint64_t> seed,
                    const std::vector<std::string>& paramArgs, const std::string& outputPath) {
    const std::string queryText = loadQueryArgument(queryArg);
    const sgb::QueryPlan plan = sgb::parseQuery(queryText);
    const sgb::Relation relation = sgb::ingestCsv(inputPath, plan.source);
    if (relation.skippedRows > 0) {
        std::cerr << "warning: skipped " << relation.skippedRows
                  << " row(s) with non-finite numeric values\n";
    }

    sgb::ExecOptions options;
    options.joinAnySeed = seed;
    const sgb::Strategy strategy = parseStrategy(strategyName);
    options.allStrategy = strategy;
    if (strategy == sgb::Strategy::BoundsChecking && plan.mode == sgb::GroupMode::Any) {
        throw sgb::SemanticError("the bounds strategy applies to DISTANCE-TO-ALL queries only");
    }
    options.anyStrategy = strategy == sgb::Strategy::AllPairs
                              ? sgb::SgbAnyConfig::Strategy::AllPairs
                              : sgb::SgbAnyConfig::Strategy::Indexed;
    for (const std::string& p : paramArgs) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--param", "expected name=value");
        }
        options.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    }

    const sgb::ResultSet result = sgb::execute(plan, relation, options);
    const std::string text = sgb::renderResult(
        result, format == "json" ? sgb::OutputFormat::Json : sgb::OutputFormat::Csv);
    if (outputPath.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(outputPath);
        if (!out) {
            throw sgb::IngestError("cannot write " + outputPath);
        }
        out << text;
    }
    if (result.eliminatedCount > 0) {
        std::cerr << "eliminated " << result.eliminatedCount << " overlapping record(s)\n";
    }
    return 0;
}

// Minimal TOML subset for bench specs: `key = value` lines, with strings,
// numbers, booleans and flat arrays. Comments start with '#'.
std::map<std::string, std::vector<std::string>> parseSpecFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw sgb::IngestError("cannot open spec file " + path);
    }
    std::map<std::string, std::vector<std::string>> values;
    std::string line;
    int lineNo = 0;
    auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) {
            return std::string();
        }
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = strip(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw sgb::IngestError(path + ":" + std::to_string(lineNo) + ": expected key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        std::vector<std::string> items;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') {
                throw sgb::IngestError(path + ":" + std::to_string(lineNo) + ": unterminated array");
            }
            std::stringstream ss(value.substr(1, value.size() - 2));
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = strip(item);
                if (!item.empty()) {
                    items.push_back(item);
                }
            }
        } else {
            items.push_back(value);
        }
        for (auto& item : items) {
            if (item.size() >= 2 && item.front() == '"' && item.back() == '"') {
                item = item.substr(1, item.size() - 2);
            }
        }
        values[key] = items;
    }
    return values;
}

void applySpecFile(const std::string& path, sgb::BenchSpec& spec) {
    const auto values = parseSpecFile(path);
    auto has = [&](const char* key) { return values.count(key) != 0; };
    if (has("generator")) {
        const std::string& g = values.at("generator").front();
        if (g == "uniform") {
            spec.generator = sgb::DataGenerator::Uniform;
        } else if (g == "gauss") {
            spec.generator = sgb::DataGenerator::GaussClusters;
        } else if (g == "csv") {
            spec.generator = sgb::DataGenerator::Csv;
        } else {
            throw sgb::IngestError("unknown generator '" + g + "'");
        }
    }
    if (has("clusters")) {
        spec.clusters = std::stoi(values.at("clusters").front());
    }
    if (has("sigma")) {
        spec.sigma = std::stod(values.at("sigma").front());
    }
    if (has("csv")) {
        spec.csvPath = values.at("csv").front();
    }
    if (has("n")) {
        spec.sizes.clear();
        for (const auto& v : values.at("n")) {
            spec.sizes.push_back(static_cast<std::size_t>(std::stoull(v)));
        }
    }
    if (has("eps")) {
        spec.epsList.clear();
        for (const auto& v : values.at("eps")) {
            spec.epsList.push_back(std::stod(v));
        }
    }
    if (has("modes")) {
        spec.modes.clear();
        for (const auto& v : values.at("modes")) {
            spec.modes.push_back(v == "all" ? sgb::GroupMode::All : sgb::GroupMode::Any);
        }
    }
    if (has("policies")) {
        spec.policies.clear();
        for (const auto& v : values.at("policies")) {
            if (v == "join-any") {
                spec.policies.push_back(sgb::OverlapPolicy::JoinAny);
            } else if (v == "eliminate") {
                spec.policies.push_back(sgb::OverlapPolicy::Eliminate);
            } else if (v == "form-new-group" || v == "form-new") {
                spec.policies.push_back(sgb::OverlapPolicy::FormNewGroup);
            } else {
                throw sgb::IngestError("unknown policy '" + v + "'");
            }
        }
    }
    if (has("metrics")) {
        spec.metrics.clear();
        for (const auto& v : values.at("metrics")) {
            spec.metrics.push_back(v == "linf" ? sgb::Metric::LInf : sgb::Metric::L2);
        }
    }
    if (has("strategies")) {
        spec.strategies.clear();
        for (const auto& v : values.at("strategies")) {
            spec.strategies.push_back(parseStrategy(v));
        }
    }
    if (has("repetitions")) {
        spec.repetitions = std::stoi(values.at("repetitions").front());
    }
    if (has("seed")) {
        spec.seed = std::stoull(values.at("seed").front());
    }
    if (has("parallel")) {
        spec.parallelCells = values.at("parallel").front() == "true";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"similarity group-by engine"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute one grouping query over a CSV relation");
    std::string inputPath;
    std::string queryArg;
    std::string strategyName = "indexed";
    std::string format = "csv";
    std::string outputPath;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> paramArgs;
    run->add_option("--input", inputPath, "CSV file bound to the query's FROM relation")
        ->required();
    run->add_option("--query", queryArg, "query text, or @file")->required();
    run->add_option("--strategy", strategyName, "all-pairs | bounds | indexed");
    run->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--seed", seed, "seeded JOIN-ANY arbitration (default: lowest group id)");
    run->add_option("--param", paramArgs, "bind a WITHIN parameter, name=value")
        ->take_all();
    run->add_option("--output", outputPath, "write the result here instead of stdout");

    auto* bench = app.add_subcommand("bench", "run a measurement matrix");
    std::string specPath;
    std::string outDir = ".";
    sgb::BenchSpec spec;
    std::string generatorName;
    std::vector<std::string> strategyNames;
    std::vector<std::string> modeNames;
    std::vector<std::string> policyNames;
    std::vector<std::string> metricNames;
    bench->add_option("--spec", specPath, "spec file (toml subset: key = value)");
    bench->add_option("--generator", generatorName, "uniform | gauss | csv");
    bench->add_option("--csv", spec.csvPath, "input file for the csv generator");
    bench->add_option("--clusters", spec.clusters, "gauss generator cluster count");
    bench->add_option("--sigma", spec.sigma, "gauss generator spread");
    bench->add_option("--sizes", spec.sizes, "dataset sizes")->delimiter(',');
    bench->add_option("--eps", spec.epsList, "thresholds")->delimiter(',');
    bench->add_option("--modes", modeNames, "all,any")->delimiter(',');
    bench->add_option("--policies", policyNames, "join-any,eliminate,form-new-group")
        ->delimiter(',');
    bench->add_option("--metrics", metricNames, "l2,linf")->delimiter(',');
    bench->add_option("--strategies", strategyNames, "all-pairs,bounds,indexed")->delimiter(',');
    bench->add_option("--reps", spec.repetitions, "repetitions per cell (median)");
    bench->add_option("--seed", spec.seed, "dataset seed");
    bench->add_flag("--parallel", spec.parallelCells, "shard cells across threads");
    bench->add_option("--out-dir", outDir, "where bench.csv / speedup.txt go");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return runQueryCommand(inputPath, queryArg, strategyName, format, seed, paramArgs,
                                   outputPath);
        }

        if (!specPath.empty()) {
            applySpecFile(specPath, spec);
        }
        if (!generatorName.empty()) {
            if (generatorName == "uniform") {
                spec.generator = sgb::DataGenerator::Uniform;
            } else if (generatorName == "gauss") {
                spec.generator = sgb::DataGenerator::GaussClusters;
            } else if (generatorName == "csv") {
                spec.generator = sgb::DataGenerator::Csv;
            } else {
                throw CLI::ValidationError("--generator", "expected uniform, gauss or csv");
            }
        }
        if (!modeNames.empty()) {
            spec.modes.clear();
            for (const auto& m : modeNames) {
                spec.modes.push_back(m == "all" ? sgb::GroupMode::All : sgb::GroupMode::Any);
            }
        }
        if (!policyNames.empty()) {
            spec.policies.clear();
            for (const auto& p : policyNames) {
                if (p == "join-any") {
                    spec.policies.push_back(sgb::OverlapPolicy::JoinAny);
                } else if (p == "eliminate") {
                    spec.policies.push_back(sgb::OverlapPolicy::Eliminate);
                } else {
                    spec.policies.push_back(sgb::OverlapPolicy::FormNewGroup);
                }
            }
        }
        if (!metricNames.empty()) {
            spec.metrics.clear();
            for (const auto& m : metricNames) {
                spec.metrics.push_back(m == "linf" ? sgb::Metric::LInf : sgb::Metric::L2);
            }
        }
        if (!strategyNames.empty()) {
            spec.strategies.clear();
            for (const auto& s : strategyNames) {
                spec.strategies.push_back(parseStrategy(s));
            }
        }

        const auto rows = sgb::runMatrix(spec, &std::cerr);
        sgb::writeBenchCsv(rows, outDir + "/bench.csv");
        const std::string report = sgb::buildSpeedupReport(rows);
        std::ofstream speedup(outDir + "/speedup.txt");
        if (!speedup) {
            throw sgb::IngestError("cannot write " + outDir + "/speedup.txt");
        }
        speedup << report;
        sgb::writePlotData(rows, outDir);
        std::cout << report;
        return 0;
    } catch (const sgb::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const sgb::SemanticError& e) {
        std::cerr << "semantic error: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const sgb::IngestError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
