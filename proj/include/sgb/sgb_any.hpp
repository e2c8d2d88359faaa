#pragma once

#include <span>
#include <vector>

#include "sgb/disjoint_set.hpp"
#include "sgb/rtree.hpp"
#include "sgb/sgb_all.hpp"
#include "sgb/types.hpp"

namespace sgb {

// Distance-to-any grouping: output groups are the connected components of the
// eps-neighborhood graph. No overlap arbitration; overlapping groups merge.
struct SgbAnyConfig {
    enum class Strategy { AllPairs, Indexed };

    Metric metric = Metric::L2;
    double eps = 1.0;
    Strategy strategy = Strategy::Indexed;
};

// Window query with the 2*eps square around p against the processed-points
// index, exact-distance verification when the metric is L2, then the distinct
// roots of the surviving points (ascending). Does not insert p.
std::vector<RecordId> findCandidateGroupsAny(const Point& p, const RTree& pointsIx,
                                             DisjointSet& dsf, const SgbAnyConfig& cfg);

// Union the candidate roots into one class and attach the new record to it.
void processGroupingAny(RecordId record, const std::vector<RecordId>& candidateRoots,
                        DisjointSet& dsf);

// Runs the full pass; the final partition is order-independent. Group ids are
// assigned by first appearance of a member in the input.
GroupingResult runSgbAny(std::span<const InputPoint> input, const SgbAnyConfig& cfg);

}  // namespace sgb
