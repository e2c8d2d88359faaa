#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgb/sgb_any.hpp"
#include "sgb/types.hpp"

namespace sgb {

enum class DataGenerator { Uniform, GaussClusters, Csv };

// One measurement matrix: datasets x thresholds x engine configurations.
struct BenchSpec {
    DataGenerator generator = DataGenerator::Uniform;
    int clusters = 20;     // GaussClusters
    double sigma = 0.01;   // GaussClusters
    std::string csvPath;   // Csv

    std::vector<std::size_t> sizes{1000};
    std::vector<double> epsList{0.1};
    std::vector<GroupMode> modes{GroupMode::Any};
    std::vector<OverlapPolicy> policies{OverlapPolicy::JoinAny};  // All-mode cells
    std::vector<Metric> metrics{Metric::L2};
    std::vector<Strategy> strategies{Strategy::AllPairs, Strategy::Indexed};
    int repetitions = 3;
    std::uint64_t seed = 42;
    // Shards cells across worker threads; timings are noisier, off by default.
    bool parallelCells = false;
};

struct BenchRow {
    GroupMode mode = GroupMode::Any;
    OverlapPolicy policy = OverlapPolicy::JoinAny;  // meaningful in All mode only
    Metric metric = Metric::L2;
    Strategy strategy = Strategy::AllPairs;
    std::size_t n = 0;
    double eps = 0.0;
    double ms = 0.0;  // median over repetitions, cold per run
    std::size_t groups = 0;
    std::size_t eliminated = 0;
};

// Deterministic dataset for (spec, n, seed): uniform points in the unit
// square, or Gaussian blobs around uniformly placed centers, or the first two
// numeric columns of a CSV file.
std::vector<InputPoint> generatePoints(const BenchSpec& spec, std::size_t n, std::uint64_t seed);

// Measures every cell (one warm-up run discarded, median of `repetitions`)
// and revalidates the grouping invariants on a 1% sample of each cell's
// groups. Progress lines go to `progress` when given.
std::vector<BenchRow> runMatrix(const BenchSpec& spec, std::ostream* progress = nullptr);

// Fixed column set: mode,policy,metric,strategy,n,eps,ms,groups,eliminated.
std::string benchCsvHeader();
std::string toCsvRow(const BenchRow& row);
void writeBenchCsv(const std::vector<BenchRow>& rows, const std::string& path);

// Per-configuration speedup table, time(all-pairs) / time(strategy).
std::string buildSpeedupReport(const std::vector<BenchRow>& rows);

// One whitespace-separated data file per (mode, policy, metric) for plotting:
// n eps ms-per-strategy columns.
void writePlotData(const std::vector<BenchRow>& rows, const std::string& directory);

// Invariant checks used by the piggyback validation; exact, index-free.
bool isClique(const std::vector<Point>& members, Metric m, double eps);
bool isConnectedUnderEps(const std::vector<Point>& members, Metric m, double eps);

const char* modeName(GroupMode mode);
const char* policyLabel(OverlapPolicy policy);
const char* metricName(Metric metric);
const char* strategyName(Strategy strategy);

}  // namespace sgb
