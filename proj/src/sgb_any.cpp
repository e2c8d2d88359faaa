#include "sgb/sgb_any.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace sgb {

namespace {

void findCandidateGroupsAnyInto(const Point& p, const RTree& pointsIx, DisjointSet& dsf,
                                const SgbAnyConfig& cfg, std::vector<IndexEntry>& hits,
                                std::vector<RecordId>& roots) {
    pointsIx.windowQueryEntries(epsSquare(p, cfg.eps), hits);
    roots.clear();
    for (const auto& entry : hits) {
        // Keys are degenerate rects, so lo is the stored point. The window is
        // exact for LInf; L2 needs the true distance check.
        if (cfg.metric == Metric::L2 && !similar(p, entry.key.lo, Metric::L2, cfg.eps)) {
            continue;
        }
        roots.push_back(dsf.find(entry.id));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
}

}  // namespace

std::vector<RecordId> findCandidateGroupsAny(const Point& p, const RTree& pointsIx,
                                             DisjointSet& dsf, const SgbAnyConfig& cfg) {
    std::vector<IndexEntry> hits;
    std::vector<RecordId> roots;
    findCandidateGroupsAnyInto(p, pointsIx, dsf, cfg, hits, roots);
    return roots;
}

void processGroupingAny(RecordId record, const std::vector<RecordId>& candidateRoots,
                        DisjointSet& dsf) {
    // No candidates: the record stays its own (new) group.
    RecordId merged = record;
    for (RecordId root : candidateRoots) {
        merged = dsf.unite(merged, root);
    }
}

namespace {

GroupingResult materializePartition(std::span<const InputPoint> input, DisjointSet& dsf) {
    GroupingResult result;
    std::unordered_map<RecordId, std::size_t> groupOf;  // root -> index in result
    groupOf.reserve(input.size());
    for (const auto& p : input) {
        const RecordId root = dsf.find(p.record);
        auto [it, fresh] = groupOf.try_emplace(root, result.groups.size());
        if (fresh) {
            result.groups.push_back({static_cast<GroupId>(result.groups.size()), {}});
        }
        result.groups[it->second].members.push_back(p.record);
    }
    return result;
}

GroupingResult runAllPairs(std::span<const InputPoint> input, const SgbAnyConfig& cfg) {
    DisjointSet dsf;
    dsf.reserve(input.size());
    std::vector<InputPoint> processed;
    processed.reserve(input.size());
    for (const auto& p : input) {
        dsf.makeSet(p.record);
        for (const auto& q : processed) {
            if (similar(p.pos, q.pos, cfg.metric, cfg.eps)) {
                dsf.unite(p.record, q.record);
            }
        }
        processed.push_back(p);
    }
    return materializePartition(input, dsf);
}

GroupingResult runIndexed(std::span<const InputPoint> input, const SgbAnyConfig& cfg) {
    DisjointSet dsf;
    dsf.reserve(input.size());
    RTree pointsIx;
    std::vector<IndexEntry> hits;
    std::vector<RecordId> roots;
    for (const auto& p : input) {
        dsf.makeSet(p.record);
        findCandidateGroupsAnyInto(p.pos, pointsIx, dsf, cfg, hits, roots);
        processGroupingAny(p.record, roots, dsf);
        pointsIx.insert({{p.pos, p.pos}, p.record});
    }
    return materializePartition(input, dsf);
}

}  // namespace

GroupingResult runSgbAny(std::span<const InputPoint> input, const SgbAnyConfig& cfg) {
    if (!(cfg.eps > 0.0)) {
        throw std::invalid_argument("sgb-any: eps must be positive");
    }
    switch (cfg.strategy) {
        case SgbAnyConfig::Strategy::AllPairs:
            return runAllPairs(input, cfg);
        case SgbAnyConfig::Strategy::Indexed:
            return runIndexed(input, cfg);
    }
    throw std::invalid_argument("sgb-any: unknown strategy");
}

}  // namespace sgb
