#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sgb/geometry.hpp"
#include "sgb/types.hpp"

namespace sgb {

struct GroupMember {
    RecordId record = 0;
    Point pos;
};

// One similarity group under distance-to-all semantics. `rect` is the group's
// eps-all bounding rectangle: the intersection of the 2*eps squares centered
// at the members. Under LInf containment in `rect` is exactly "within eps of
// every member"; under L2 it is a conservative filter refined by the convex
// hull test. The hull over the member points is cached and rebuilt lazily.
struct Group {
    GroupId id = 0;
    std::vector<GroupMember> members;  // insertion order
    Rect rect;

    const Hull& hull() const;
    void invalidateHull() { hullDirty_ = true; }

private:
    mutable Hull hullCache_;
    mutable bool hullDirty_ = true;
};

// Record ids dropped (ELIMINATE) or deferred (FORM-NEW-GROUP) by overlap
// arbitration.
struct Oset {
    std::vector<RecordId> records;
};

// Owns the live groups of one engine run. Group ids are creation-ordered and
// never reused; iteration is always in ascending id order.
class GroupStore {
public:
    explicit GroupStore(double eps);

    double eps() const { return eps_; }
    std::size_t size() const { return groups_.size(); }
    GroupId nextId() const { return nextId_; }

    Group& create(RecordId record, const Point& p);

    // Caller guarantees p passed the membership test. Shrinks the rectangle;
    // an empty intersection means the precondition was violated and throws
    // std::logic_error.
    void addMember(Group& g, RecordId record, const Point& p);

    struct RemoveResult {
        bool destroyed = false;
        bool rectChanged = false;
    };
    // Removes the given records (each must be present), recomputes the
    // rectangle from the survivors, destroys the group when it empties.
    RemoveResult removeMembers(GroupId id, const std::vector<RecordId>& records);

    Group* findGroup(GroupId id);
    const Group* findGroup(GroupId id) const;

    template <typename F>
    void forEachGroupFrom(GroupId begin, F&& f) const {
        for (auto it = groups_.lower_bound(begin); it != groups_.end(); ++it) {
            f(it->second);
        }
    }

    // Exact membership test under LInf: p inside the group rectangle iff p is
    // within eps of every member.
    bool candidateTestLinf(const Group& g, const Point& p) const;

    // Filter-refine membership test under L2: rectangle first, then inside
    // the member hull or within eps of the farthest hull vertex. Exact when
    // the group's members are pairwise within eps, which the engine
    // guarantees by construction.
    bool candidateTestL2(const Group& g, const Point& p) const;

    // True iff some member is within eps of p; early exit member scan.
    bool overlapTest(const Group& g, const Point& p, Metric m) const;

    // Hull vertex maximizing L2 distance from p; lexicographically least on
    // ties. Group must be non-empty.
    Point farthestHullVertex(const Group& g, const Point& p) const;

private:
    double eps_;
    GroupId nextId_ = 0;
    std::map<GroupId, Group> groups_;
};

}  // namespace sgb
