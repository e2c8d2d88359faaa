#include "sgb/sgb_all.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace sgb {

std::vector<std::size_t> GroupingResult::groupSizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) {
        sizes.push_back(g.members.size());
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

CloseGroups findCloseGroupsAllPairs(const Point& p, const GroupStore& groups, GroupId scopeBegin,
                                    const SgbAllConfig& cfg) {
    CloseGroups out;
    groups.forEachGroupFrom(scopeBegin, [&](const Group& g) {
        bool candidate = true;
        bool overlap = false;
        for (const auto& member : g.members) {
            if (similar(p, member.pos, cfg.metric, cfg.eps)) {
                overlap = true;
            } else {
                candidate = false;
                if (cfg.policy == OverlapPolicy::JoinAny) {
                    break;  // overlaps are not tracked under JOIN-ANY
                }
            }
        }
        if (candidate) {
            out.candidates.push_back(g.id);
        } else if (cfg.policy != OverlapPolicy::JoinAny && overlap) {
            out.overlaps.push_back(g.id);
        }
    });
    return out;
}

namespace {

bool candidateTest(const GroupStore& groups, const Group& g, const Point& p, Metric m) {
    return m == Metric::LInf ? groups.candidateTestLinf(g, p) : groups.candidateTestL2(g, p);
}

}  // namespace

CloseGroups findCloseGroupsBounds(const Point& p, const GroupStore& groups, GroupId scopeBegin,
                                  const SgbAllConfig& cfg) {
    CloseGroups out;
    const Rect window = epsSquare(p, cfg.eps);
    groups.forEachGroupFrom(scopeBegin, [&](const Group& g) {
        if (candidateTest(groups, g, p, cfg.metric)) {
            out.candidates.push_back(g.id);
        } else if (cfg.policy != OverlapPolicy::JoinAny && rectIntersects(window, g.rect) &&
                   groups.overlapTest(g, p, cfg.metric)) {
            out.overlaps.push_back(g.id);
        }
    });
    return out;
}

CloseGroups findCloseGroupsIndexed(const Point& p, const GroupStore& groups, const RTree& groupsIx,
                                   const SgbAllConfig& cfg) {
    CloseGroups out;
    // Groups whose rectangle misses the 2*eps window can be neither
    // candidates nor overlaps.
    std::vector<std::int64_t> hits;
    groupsIx.windowQuery(epsSquare(p, cfg.eps), hits);
    for (std::int64_t id : hits) {
        const Group* g = groups.findGroup(id);
        if (g == nullptr) {
            throw std::logic_error("sgb-all: group index out of sync");
        }
        if (candidateTest(groups, *g, p, cfg.metric)) {
            out.candidates.push_back(id);
        } else if (cfg.policy != OverlapPolicy::JoinAny && groups.overlapTest(*g, p, cfg.metric)) {
            out.overlaps.push_back(id);
        }
    }
    return out;
}

SgbAllEngine::SgbAllEngine(const SgbAllConfig& cfg)
    : cfg_(cfg), store_(cfg.eps), rng_(cfg.joinAnySeed.value_or(0)) {
    if (cfg.maxRecursionDepth < 1) {
        throw std::invalid_argument("sgb-all: maxRecursionDepth must be at least 1");
    }
}

CloseGroups SgbAllEngine::findCloseGroups(const Point& p) const {
    switch (cfg_.strategy) {
        case Strategy::AllPairs:
            return findCloseGroupsAllPairs(p, store_, scopeBegin_, cfg_);
        case Strategy::BoundsChecking:
            return findCloseGroupsBounds(p, store_, scopeBegin_, cfg_);
        case Strategy::Indexed:
            return findCloseGroupsIndexed(p, store_, groupsIx_, cfg_);
    }
    throw std::invalid_argument("sgb-all: unknown strategy");
}

GroupId SgbAllEngine::chooseCandidate(const std::vector<GroupId>& candidates) {
    if (cfg_.joinAnySeed.has_value()) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        return candidates[pick(rng_)];
    }
    return candidates.front();  // ascending order: the lowest group id
}

void SgbAllEngine::joinGroup(GroupId id, const InputPoint& p) {
    Group* g = store_.findGroup(id);
    const Rect before = g->rect;
    store_.addMember(*g, p.record, p.pos);
    if (cfg_.strategy == Strategy::Indexed && !(before == g->rect)) {
        groupsIx_.updateKey(id, g->rect);
    }
}

void SgbAllEngine::processGrouping(const InputPoint& p, const std::vector<GroupId>& candidates) {
    if (candidates.empty()) {
        Group& g = store_.create(p.record, p.pos);
        if (cfg_.strategy == Strategy::Indexed) {
            groupsIx_.insert({g.rect, g.id});
        }
        return;
    }
    if (candidates.size() == 1) {
        joinGroup(candidates.front(), p);
        return;
    }
    switch (cfg_.policy) {
        case OverlapPolicy::JoinAny:
            joinGroup(chooseCandidate(candidates), p);
            break;
        case OverlapPolicy::Eliminate:
            eliminated_.records.push_back(p.record);
            break;
        case OverlapPolicy::FormNewGroup:
            deferred_.push_back(p);
            break;
    }
}

void SgbAllEngine::processOverlap(const InputPoint& p, const std::vector<GroupId>& overlaps) {
    for (GroupId id : overlaps) {
        Group* g = store_.findGroup(id);
        std::vector<RecordId> hit;
        for (const auto& member : g->members) {
            if (similar(p.pos, member.pos, cfg_.metric, cfg_.eps)) {
                hit.push_back(member.record);
                if (cfg_.policy == OverlapPolicy::FormNewGroup) {
                    deferred_.push_back({member.record, member.pos});
                } else {
                    eliminated_.records.push_back(member.record);
                }
            }
        }
        // An overlap group has a member within eps by construction.
        assert(!hit.empty());
        if (hit.empty()) {
            continue;
        }
        const auto result = store_.removeMembers(id, hit);
        if (cfg_.strategy == Strategy::Indexed) {
            if (result.destroyed) {
                groupsIx_.remove(id);
            } else if (result.rectChanged) {
                groupsIx_.updateKey(id, store_.findGroup(id)->rect);
            }
        }
    }
}

GroupingResult SgbAllEngine::materialize() const {
    GroupingResult result;
    store_.forEachGroupFrom(0, [&](const Group& g) {
        GroupingResult::OutputGroup out;
        out.id = g.id;
        out.members.reserve(g.members.size());
        for (const auto& m : g.members) {
            out.members.push_back(m.record);
        }
        result.groups.push_back(std::move(out));
    });
    result.eliminated = eliminated_.records;
    result.passCount = passCount_;
    result.truncated = truncated_;
    return result;
}

GroupingResult SgbAllEngine::run(std::span<const InputPoint> input) {
    std::vector<InputPoint> current(input.begin(), input.end());
    passCount_ = 0;
    while (true) {
        ++passCount_;
        // Each pass groups its working set from scratch: earlier groups are
        // closed and invisible to classification.
        scopeBegin_ = store_.nextId();
        if (cfg_.strategy == Strategy::Indexed) {
            groupsIx_.clear();
        }
        deferred_.clear();
        for (const auto& p : current) {
            const CloseGroups close = findCloseGroups(p.pos);
            processGrouping(p, close.candidates);
            if (cfg_.policy != OverlapPolicy::JoinAny && !close.overlaps.empty()) {
                processOverlap(p, close.overlaps);
            }
        }
        if (cfg_.policy != OverlapPolicy::FormNewGroup || deferred_.empty()) {
            break;
        }
        if (passCount_ >= cfg_.maxRecursionDepth) {
            truncated_ = true;
            for (const auto& p : deferred_) {
                store_.create(p.record, p.pos);
            }
            break;
        }
        current = std::move(deferred_);
        deferred_ = {};
    }
    return materialize();
}

GroupingResult runSgbAll(std::span<const InputPoint> input, const SgbAllConfig& cfg) {
    SgbAllEngine engine(cfg);
    return engine.run(input);
}

}  // namespace sgb
