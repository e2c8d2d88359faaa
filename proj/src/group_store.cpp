#include "sgb/group_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sgb {

const Hull& Group::hull() const {
    if (hullDirty_) {
        std::vector<Point> pts;
        pts.reserve(members.size());
        for (const auto& m : members) {
            pts.push_back(m.pos);
        }
        hullCache_ = convexHull(std::move(pts));
        hullDirty_ = false;
    }
    return hullCache_;
}

GroupStore::GroupStore(double eps) : eps_(eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("group store: eps must be positive");
    }
}

Group& GroupStore::create(RecordId record, const Point& p) {
    const GroupId id = nextId_++;
    Group g;
    g.id = id;
    g.members.push_back({record, p});
    g.rect = epsSquare(p, eps_);
    auto [it, inserted] = groups_.emplace(id, std::move(g));
    return it->second;
}

void GroupStore::addMember(Group& g, RecordId record, const Point& p) {
    Rect shrunk;
    if (!rectIntersection(g.rect, epsSquare(p, eps_), shrunk)) {
        throw std::logic_error("group store: member admitted outside the group rectangle");
    }
    g.members.push_back({record, p});
    g.rect = shrunk;
    g.invalidateHull();
}

GroupStore::RemoveResult GroupStore::removeMembers(GroupId id, const std::vector<RecordId>& records) {
    auto it = groups_.find(id);
    if (it == groups_.end()) {
        throw std::invalid_argument("group store: unknown group " + std::to_string(id));
    }
    Group& g = it->second;
    for (RecordId r : records) {
        auto m = std::find_if(g.members.begin(), g.members.end(),
                              [&](const GroupMember& gm) { return gm.record == r; });
        if (m == g.members.end()) {
            throw std::invalid_argument("group store: record " + std::to_string(r) +
                                        " not in group " + std::to_string(id));
        }
        g.members.erase(m);
    }
    if (records.empty()) {
        return {};
    }
    if (g.members.empty()) {
        groups_.erase(it);
        return {.destroyed = true, .rectChanged = true};
    }
    // Removing members relaxes constraints, so rebuild from scratch.
    Rect rect = epsSquare(g.members.front().pos, eps_);
    for (std::size_t i = 1; i < g.members.size(); ++i) {
        rectIntersection(rect, epsSquare(g.members[i].pos, eps_), rect);
    }
    const bool changed = !(rect == g.rect);
    g.rect = rect;
    g.invalidateHull();
    return {.destroyed = false, .rectChanged = changed};
}

Group* GroupStore::findGroup(GroupId id) {
    auto it = groups_.find(id);
    return it == groups_.end() ? nullptr : &it->second;
}

const Group* GroupStore::findGroup(GroupId id) const {
    auto it = groups_.find(id);
    return it == groups_.end() ? nullptr : &it->second;
}

bool GroupStore::candidateTestLinf(const Group& g, const Point& p) const {
    return rectContains(g.rect, p);
}

bool GroupStore::candidateTestL2(const Group& g, const Point& p) const {
    if (!rectContains(g.rect, p)) {
        return false;
    }
    if (pointInHull(p, g.hull())) {
        return true;
    }
    return similar(p, farthestHullVertex(g, p), Metric::L2, eps_);
}

bool GroupStore::overlapTest(const Group& g, const Point& p, Metric m) const {
    for (const auto& member : g.members) {
        if (similar(p, member.pos, m, eps_)) {
            return true;
        }
    }
    return false;
}

Point GroupStore::farthestHullVertex(const Group& g, const Point& p) const {
    const auto& vertices = g.hull().vertices;
    if (vertices.empty()) {
        throw std::invalid_argument("group store: farthest vertex of an empty group");
    }
    Point best = vertices.front();
    double bestDist = l2Squared(p, best);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const double d = l2Squared(p, vertices[i]);
        if (d > bestDist || (d == bestDist && lexLess(vertices[i], best))) {
            best = vertices[i];
            bestDist = d;
        }
    }
    return best;
}

}  // namespace sgb
