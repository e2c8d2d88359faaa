#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sgb/group_store.hpp"
#include "sgb/rtree.hpp"
#include "sgb/types.hpp"

namespace sgb {

// Arbitration for points qualifying for more than one group.
enum class OverlapPolicy { JoinAny, Eliminate, FormNewGroup };

enum class Strategy { AllPairs, BoundsChecking, Indexed };

struct SgbAllConfig {
    Metric metric = Metric::LInf;
    double eps = 1.0;
    OverlapPolicy policy = OverlapPolicy::JoinAny;
    Strategy strategy = Strategy::AllPairs;
    // Unset: deterministic arbitration (lowest group id). Set: seeded uniform
    // choice among the candidates.
    std::optional<std::uint64_t> joinAnySeed;
    // Pass cap for FORM-NEW-GROUP reprocessing; leftovers become singleton
    // groups and the result is flagged truncated.
    int maxRecursionDepth = 64;
};

struct GroupingResult {
    struct OutputGroup {
        GroupId id = 0;
        std::vector<RecordId> members;  // insertion order

        friend bool operator==(const OutputGroup&, const OutputGroup&) = default;
    };

    std::vector<OutputGroup> groups;  // ascending group id
    std::vector<RecordId> eliminated;
    int passCount = 1;
    bool truncated = false;

    // Group sizes in descending order, the shape the count(*) examples use.
    std::vector<std::size_t> groupSizes() const;

    friend bool operator==(const GroupingResult&, const GroupingResult&) = default;
};

// Output of one FindCloseGroups step, both sets ascending by group id.
// candidates: groups where every member is within eps of p. overlaps: groups
// with at least one but not all members within eps (tracked only when the
// policy needs them).
struct CloseGroups {
    std::vector<GroupId> candidates;
    std::vector<GroupId> overlaps;

    friend bool operator==(const CloseGroups&, const CloseGroups&) = default;
};

// Member-scan classification over every group with id >= scopeBegin.
CloseGroups findCloseGroupsAllPairs(const Point& p, const GroupStore& groups, GroupId scopeBegin,
                                    const SgbAllConfig& cfg);

// Rectangle filter per group (plus hull refinement under L2); members are
// scanned only when the candidate test fails and the rectangles meet.
CloseGroups findCloseGroupsBounds(const Point& p, const GroupStore& groups, GroupId scopeBegin,
                                  const SgbAllConfig& cfg);

// Window query on the group-rectangle index with the 2*eps square around p,
// then the bounds-checking classification restricted to the hits.
CloseGroups findCloseGroupsIndexed(const Point& p, const GroupStore& groups, const RTree& groupsIx,
                                   const SgbAllConfig& cfg);

// One distance-to-all grouping run. Semantics are order-defined: points are
// processed in input order and results are deterministic for a fixed config.
class SgbAllEngine {
public:
    explicit SgbAllEngine(const SgbAllConfig& cfg);  // throws std::invalid_argument on bad config

    GroupingResult run(std::span<const InputPoint> input);

    // Framework steps, exposed so tests can drive them directly.
    CloseGroups findCloseGroups(const Point& p) const;
    void processGrouping(const InputPoint& p, const std::vector<GroupId>& candidates);
    void processOverlap(const InputPoint& p, const std::vector<GroupId>& overlaps);

    const GroupStore& store() const { return store_; }
    GroupStore& store() { return store_; }
    RTree& groupsIndex() { return groupsIx_; }

private:
    void joinGroup(GroupId id, const InputPoint& p);
    GroupId chooseCandidate(const std::vector<GroupId>& candidates);
    GroupingResult materialize() const;

    SgbAllConfig cfg_;
    GroupStore store_;
    RTree groupsIx_;            // live group rectangles (Indexed strategy)
    GroupId scopeBegin_ = 0;    // groups created before this id are closed
    std::vector<InputPoint> deferred_;  // the S' set of the current pass
    Oset eliminated_;
    std::mt19937_64 rng_;
    int passCount_ = 1;
    bool truncated_ = false;
};

GroupingResult runSgbAll(std::span<const InputPoint> input, const SgbAllConfig& cfg);

}  // namespace sgb
