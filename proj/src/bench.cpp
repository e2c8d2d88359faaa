#include "sgb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "sgb/query.hpp"
#include "sgb/relation.hpp"

namespace sgb {

const char* modeName(GroupMode mode) {
    return mode == GroupMode::All ? "all" : "any";
}

const char* policyLabel(OverlapPolicy policy) {
    switch (policy) {
        case OverlapPolicy::JoinAny:
            return "join-any";
        case OverlapPolicy::Eliminate:
            return "eliminate";
        case OverlapPolicy::FormNewGroup:
            return "form-new-group";
    }
    return "?";
}

const char* metricName(Metric metric) {
    return metric == Metric::L2 ? "l2" : "linf";
}

const char* strategyName(Strategy strategy) {
    switch (strategy) {
        case Strategy::AllPairs:
            return "all-pairs";
        case Strategy::BoundsChecking:
            return "bounds";
        case Strategy::Indexed:
            return "indexed";
    }
    return "?";
}

std::vector<InputPoint> generatePoints(const BenchSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("bench: dataset size must be at least 1");
    }
    std::vector<InputPoint> points;
    points.reserve(n);

    if (spec.generator == DataGenerator::Csv) {
        const Relation rel = ingestCsv(spec.csvPath, "bench");
        const Column* x = nullptr;
        const Column* y = nullptr;
        for (const auto& col : rel.columns) {
            if (!col.numeric()) {
                continue;
            }
            if (x == nullptr) {
                x = &col;
            } else if (y == nullptr) {
                y = &col;
                break;
            }
        }
        if (y == nullptr) {
            throw std::invalid_argument("bench: csv needs two numeric columns");
        }
        const std::size_t count = std::min(n, rel.rowCount);
        for (std::size_t row = 0; row < count; ++row) {
            points.push_back({static_cast<RecordId>(row), {x->numberAt(row), y->numberAt(row)}});
        }
        return points;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (spec.generator == DataGenerator::Uniform) {
        for (std::size_t i = 0; i < n; ++i) {
            points.push_back({static_cast<RecordId>(i), {unit(rng), unit(rng)}});
        }
        return points;
    }

    if (spec.clusters < 1 || !(spec.sigma > 0.0)) {
        throw std::invalid_argument("bench: gauss generator needs clusters >= 1 and sigma > 0");
    }
    std::vector<Point> centers;
    centers.reserve(static_cast<std::size_t>(spec.clusters));
    for (int c = 0; c < spec.clusters; ++c) {
        centers.push_back({unit(rng), unit(rng)});
    }
    std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
    std::normal_distribution<double> offset(0.0, spec.sigma);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& c = centers[pick(rng)];
        points.push_back({static_cast<RecordId>(i), {c.x + offset(rng), c.y + offset(rng)}});
    }
    return points;
}

bool isClique(const std::vector<Point>& members, Metric m, double eps) {
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (!similar(members[i], members[j], m, eps)) {
                return false;
            }
        }
    }
    return true;
}

namespace {

struct CellKey {
    std::int64_t cx;
    std::int64_t cy;

    friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        return std::hash<std::int64_t>()(k.cx * 1000003 + k.cy);
    }
};

CellKey cellOf(const Point& p, double eps) {
    return {static_cast<std::int64_t>(std::floor(p.x / eps)),
            static_cast<std::int64_t>(std::floor(p.y / eps))};
}

}  // namespace

// Grid-bucketed BFS: linear-ish in the member count, so it stays affordable
// for the giant components the Any mode produces.
bool isConnectedUnderEps(const std::vector<Point>& members, Metric m, double eps) {
    if (members.size() <= 1) {
        return true;
    }
    std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
    grid.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        grid[cellOf(members[i], eps)].push_back(i);
    }
    std::vector<bool> visited(members.size(), false);
    std::vector<std::size_t> queue{0};
    visited[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const std::size_t cur = queue.back();
        queue.pop_back();
        const CellKey base = cellOf(members[cur], eps);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({base.cx + dx, base.cy + dy});
                if (it == grid.end()) {
                    continue;
                }
                for (std::size_t other : it->second) {
                    if (!visited[other] && similar(members[cur], members[other], m, eps)) {
                        visited[other] = true;
                        ++reached;
                        queue.push_back(other);
                    }
                }
            }
        }
    }
    return reached == members.size();
}

namespace {

struct Cell {
    GroupMode mode;
    OverlapPolicy policy;
    Metric metric;
    Strategy strategy;
    std::size_t n;
    double eps;
};

GroupingResult runCell(const Cell& cell, std::span<const InputPoint> points) {
    if (cell.mode == GroupMode::All) {
        SgbAllConfig cfg;
        cfg.metric = cell.metric;
        cfg.eps = cell.eps;
        cfg.policy = cell.policy;
        cfg.strategy = cell.strategy;
        return runSgbAll(points, cfg);
    }
    SgbAnyConfig cfg;
    cfg.metric = cell.metric;
    cfg.eps = cell.eps;
    cfg.strategy = cell.strategy == Strategy::AllPairs ? SgbAnyConfig::Strategy::AllPairs
                                                       : SgbAnyConfig::Strategy::Indexed;
    return runSgbAny(points, cfg);
}

// Revalidates roughly 1% of the result's groups: pairwise predicate for All
// mode, grid connectivity for Any mode.
void validateSample(const Cell& cell, std::span<const InputPoint> points,
                    const GroupingResult& result) {
    if (result.groups.empty()) {
        return;
    }
    const std::size_t sampleCount = std::max<std::size_t>(1, result.groups.size() / 100);
    const std::size_t stride = std::max<std::size_t>(1, result.groups.size() / sampleCount);
    for (std::size_t g = 0; g < result.groups.size(); g += stride) {
        std::vector<Point> memberPoints;
        memberPoints.reserve(result.groups[g].members.size());
        for (RecordId m : result.groups[g].members) {
            memberPoints.push_back(points[static_cast<std::size_t>(m)].pos);
        }
        const bool ok = cell.mode == GroupMode::All
                            ? isClique(memberPoints, cell.metric, cell.eps)
                            : isConnectedUnderEps(memberPoints, cell.metric, cell.eps);
        if (!ok) {
            throw std::logic_error("bench: group invariant violated in sampled group");
        }
    }
}

BenchRow measureCell(const Cell& cell, std::span<const InputPoint> points, int repetitions) {
    using Clock = std::chrono::steady_clock;
    runCell(cell, points);  // warm-up, discarded
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    GroupingResult last;
    for (int rep = 0; rep < repetitions; ++rep) {
        const auto start = Clock::now();
        GroupingResult result = runCell(cell, points);
        const auto stop = Clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        last = std::move(result);
    }
    std::sort(times.begin(), times.end());
    validateSample(cell, points, last);

    BenchRow row;
    row.mode = cell.mode;
    row.policy = cell.policy;
    row.metric = cell.metric;
    row.strategy = cell.strategy;
    row.n = cell.n;
    row.eps = cell.eps;
    row.ms = times[times.size() / 2];
    row.groups = last.groups.size();
    row.eliminated = last.eliminated.size();
    return row;
}

}  // namespace

std::vector<BenchRow> runMatrix(const BenchSpec& spec, std::ostream* progress) {
    if (spec.repetitions < 1) {
        throw std::invalid_argument("bench: repetitions must be at least 1");
    }
    std::vector<Cell> cells;
    for (std::size_t n : spec.sizes) {
        for (double eps : spec.epsList) {
            for (GroupMode mode : spec.modes) {
                for (Metric metric : spec.metrics) {
                    for (Strategy strategy : spec.strategies) {
                        if (mode == GroupMode::Any) {
                            if (strategy == Strategy::BoundsChecking) {
                                continue;  // no bounds-checking variant for Any
                            }
                            cells.push_back({mode, OverlapPolicy::JoinAny, metric, strategy, n, eps});
                        } else {
                            for (OverlapPolicy policy : spec.policies) {
                                cells.push_back({mode, policy, metric, strategy, n, eps});
                            }
                        }
                    }
                }
            }
        }
    }

    // Datasets are shared across the cells of one size.
    std::map<std::size_t, std::vector<InputPoint>> datasets;
    for (std::size_t n : spec.sizes) {
        datasets.emplace(n, generatePoints(spec, n, spec.seed));
    }

    std::vector<BenchRow> rows(cells.size());
    auto runOne = [&](std::size_t i) {
        rows[i] = measureCell(cells[i], datasets.at(cells[i].n), spec.repetitions);
    };

    if (!spec.parallelCells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            runOne(i);
            if (progress != nullptr) {
                *progress << toCsvRow(rows[i]) << "\n";
            }
        }
        return rows;
    }

    std::size_t nextCell = 0;
    std::mutex mutex;
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (nextCell == cells.size()) {
                        return;
                    }
                    i = nextCell++;
                }
                runOne(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (progress != nullptr) {
        for (const auto& row : rows) {
            *progress << toCsvRow(row) << "\n";
        }
    }
    return rows;
}

std::string benchCsvHeader() {
    return "mode,policy,metric,strategy,n,eps,ms,groups,eliminated";
}

std::string toCsvRow(const BenchRow& row) {
    std::ostringstream out;
    out << modeName(row.mode) << ","
        << (row.mode == GroupMode::All ? policyLabel(row.policy) : "-") << ","
        << metricName(row.metric) << "," << strategyName(row.strategy) << "," << row.n << ","
        << formatDouble(row.eps) << "," << formatDouble(row.ms) << "," << row.groups << ","
        << row.eliminated;
    return out.str();
}

void writeBenchCsv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("bench: cannot write " + path);
    }
    out << benchCsvHeader() << "\n";
    for (const auto& row : rows) {
        out << toCsvRow(row) << "\n";
    }
}

namespace {

std::string cellLabel(const BenchRow& row) {
    std::ostringstream out;
    out << "mode=" << modeName(row.mode);
    if (row.mode == GroupMode::All) {
        out << " policy=" << policyLabel(row.policy);
    }
    out << " metric=" << metricName(row.metric) << " n=" << row.n
        << " eps=" << formatDouble(row.eps);
    return out.str();
}

}  // namespace

std::string buildSpeedupReport(const std::vector<BenchRow>& rows) {
    // Group rows by everything except the strategy.
    std::map<std::string, std::vector<const BenchRow*>> byCell;
    for (const auto& row : rows) {
        byCell[cellLabel(row)].push_back(&row);
    }
    std::ostringstream out;
    for (const auto& [label, group] : byCell) {
        const BenchRow* base = nullptr;
        for (const BenchRow* row : group) {
            if (row->strategy == Strategy::AllPairs) {
                base = row;
            }
        }
        out << label << "\n";
        for (const BenchRow* row : group) {
            out << "  " << strategyName(row->strategy) << " " << formatDouble(row->ms) << " ms";
            if (base != nullptr && row->ms > 0.0) {
                out << "  speedup " << formatDouble(base->ms / row->ms) << "x";
            }
            out << "  groups " << row->groups;
            if (row->mode == GroupMode::All) {
                out << "  eliminated " << row->eliminated;
            }
            out << "\n";
        }
    }
    return out.str();
}

void writePlotData(const std::vector<BenchRow>& rows, const std::string& directory) {
    // One file per (mode, policy, metric): n eps then a column per strategy.
    struct Series {
        std::map<std::pair<std::size_t, double>, std::map<Strategy, double>> cells;
    };
    std::map<std::string, Series> files;
    for (const auto& row : rows) {
        std::ostringstream name;
        name << "plot_" << modeName(row.mode);
        if (row.mode == GroupMode::All) {
            name << "_" << policyLabel(row.policy);
        }
        name << "_" << metricName(row.metric) << ".dat";
        files[name.str()].cells[{row.n, row.eps}][row.strategy] = row.ms;
    }
    const Strategy order[] = {Strategy::AllPairs, Strategy::BoundsChecking, Strategy::Indexed};
    for (const auto& [name, series] : files) {
        std::ofstream out(directory + "/" + name);
        if (!out) {
            throw std::runtime_error("bench: cannot write " + directory + "/" + name);
        }
        out << "# n eps ms(all-pairs) ms(bounds) ms(indexed)\n";
        for (const auto& [key, ms] : series.cells) {
            out << key.first << " " << formatDouble(key.second);
            for (Strategy s : order) {
                auto it = ms.find(s);
                if (it == ms.end()) {
                    out << " -";
                } else {
                    out << " " << formatDouble(it->second);
                }
            }
            out << "\n";
        }
    }
}

}  // namespace sgb
