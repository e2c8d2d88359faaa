#include "sgb/group_store.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sgb;

namespace {

// Recompute-from-scratch oracle for the group rectangle.
Rect intersectionOfSquares(const std::vector<Point>& members, double eps) {
    Rect rect = epsSquare(members.front(), eps);
    for (std::size_t i = 1; i < members.size(); ++i) {
        rectIntersection(rect, epsSquare(members[i], eps), rect);
    }
    return rect;
}

// Builds an LInf clique group by rejection sampling around a center.
Group& makeRandomCliqueGroup(GroupStore& store, std::mt19937_64& rng, Metric m, double eps,
                             int targetSize, RecordId firstRecord) {
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::uniform_real_distribution<double> offset(-eps, eps);
    const Point center{coord(rng), coord(rng)};
    Group& g = store.create(firstRecord, center);
    std::vector<Point> members{center};
    RecordId record = firstRecord + 1;
    int attempts = 0;
    while (static_cast<int>(members.size()) < targetSize && attempts < 200) {
        ++attempts;
        const Point p{center.x + offset(rng), center.y + offset(rng)};
        const bool fits = std::all_of(members.begin(), members.end(), [&](const Point& q) {
            return similar(p, q, m, eps);
        });
        if (fits) {
            store.addMember(g, record++, p);
            members.push_back(p);
        }
    }
    return g;
}

}  // namespace

TEST(GroupStore, NewGroupRect) {
    GroupStore store(2.0);
    const Group& g = store.create(0, {5, 5});
    EXPECT_EQ(g.rect, (Rect{{3, 3}, {7, 7}}));

    GroupStore store3(3.0);
    const Group& g2 = store3.create(0, {0, 0});
    EXPECT_EQ(g2.rect, (Rect{{-3, -3}, {3, 3}}));
    EXPECT_TRUE(rectContains(g2.rect, {0, 0}));
}

TEST(GroupStore, EpsMustBePositive) {
    EXPECT_THROW(GroupStore(0.0), std::invalid_argument);
    EXPECT_THROW(GroupStore(-1.0), std::invalid_argument);
}

TEST(GroupStore, AddMemberShrinksRect) {
    GroupStore store(2.0);
    Group& g = store.create(0, {0, 0});
    store.addMember(g, 1, {1, 0});
    EXPECT_EQ(g.rect, (Rect{{-1, -2}, {2, 2}}));

    // A duplicate position leaves the rect unchanged.
    const Rect before = g.rect;
    store.addMember(g, 2, {1, 0});
    EXPECT_EQ(g.rect, before);
    EXPECT_EQ(g.members.size(), 3u);
}

TEST(GroupStore, AddMemberOutsideThrows) {
    GroupStore store(1.0);
    Group& g = store.create(0, {0, 0});
    EXPECT_THROW(store.addMember(g, 1, {10, 10}), std::logic_error);
}

TEST(GroupStore, RectIsIntersectionOfMemberSquares) {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 50; ++round) {
        const double eps = 1.5;
        GroupStore store(eps);
        Group& g = makeRandomCliqueGroup(store, rng, Metric::LInf, eps, 8, 0);
        std::vector<Point> members;
        for (const auto& m : g.members) {
            members.push_back(m.pos);
        }
        EXPECT_EQ(g.rect, intersectionOfSquares(members, eps));
        // LInf clique: side lengths stay within [eps, 2 eps].
        EXPECT_GE(g.rect.hi.x - g.rect.lo.x, eps);
        EXPECT_LE(g.rect.hi.x - g.rect.lo.x, 2 * eps);
        EXPECT_GE(g.rect.hi.y - g.rect.lo.y, eps);
        EXPECT_LE(g.rect.hi.y - g.rect.lo.y, 2 * eps);
    }
}

TEST(GroupStore, RemoveMembers) {
    GroupStore store(2.0);
    Group& g = store.create(0, {0, 0});
    store.addMember(g, 1, {1, 0});
    const GroupId id = g.id;

    // Removing nothing changes nothing.
    auto none = store.removeMembers(id, {});
    EXPECT_FALSE(none.destroyed);
    EXPECT_FALSE(none.rectChanged);

    // Removing one of two reverts to the survivor's square.
    auto one = store.removeMembers(id, {0});
    EXPECT_FALSE(one.destroyed);
    EXPECT_TRUE(one.rectChanged);
    EXPECT_EQ(store.findGroup(id)->rect, epsSquare({1, 0}, 2.0));

    // Removing the last member destroys the group.
    auto last = store.removeMembers(id, {1});
    EXPECT_TRUE(last.destroyed);
    EXPECT_EQ(store.findGroup(id), nullptr);
    EXPECT_EQ(store.size(), 0u);

    EXPECT_THROW(store.removeMembers(id, {0}), std::invalid_argument);
}

TEST(GroupStore, RemoveUnknownRecordThrows) {
    GroupStore store(2.0);
    Group& g = store.create(0, {0, 0});
    EXPECT_THROW(store.removeMembers(g.id, {99}), std::invalid_argument);
}

TEST(GroupStore, RemoveRecomputeMatchesOracle) {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 30; ++round) {
        const double eps = 2.0;
        GroupStore store(eps);
        Group& g = makeRandomCliqueGroup(store, rng, Metric::LInf, eps, 10, 0);
        if (g.members.size() < 3) {
            continue;
        }
        const GroupId id = g.id;
        std::vector<RecordId> toRemove{g.members[1].record, g.members.back().record};
        store.removeMembers(id, toRemove);
        const Group* after = store.findGroup(id);
        ASSERT_NE(after, nullptr);
        std::vector<Point> members;
        for (const auto& m : after->members) {
            members.push_back(m.pos);
        }
        EXPECT_EQ(after->rect, intersectionOfSquares(members, eps));
    }
}

TEST(GroupStore, CandidateTestLinfMatchesAllPairs) {
    std::mt19937_64 rng(47);
    const double eps = 1.0;
    GroupStore store(eps);
    std::vector<Group*> groups;
    for (int i = 0; i < 20; ++i) {
        groups.push_back(&makeRandomCliqueGroup(store, rng, Metric::LInf, eps, 6,
                                                static_cast<RecordId>(i) * 100));
    }
    std::uniform_real_distribution<double> coord(-1.0, 11.0);
    for (int i = 0; i < 200; ++i) {
        const Point p{coord(rng), coord(rng)};
        for (const Group* g : groups) {
            const bool expected = std::all_of(
                g->members.begin(), g->members.end(),
                [&](const GroupMember& m) { return similar(p, m.pos, Metric::LInf, eps); });
            EXPECT_EQ(store.candidateTestLinf(*g, p), expected);
        }
    }
}

TEST(GroupStore, CandidateTestLinfBoundaryInclusive) {
    GroupStore store(2.0);
    const Group& g = store.create(0, {0, 0});
    EXPECT_TRUE(store.candidateTestLinf(g, {2, 2}));   // rect corner
    EXPECT_TRUE(store.candidateTestLinf(g, {2, 0}));   // rect edge
    EXPECT_FALSE(store.candidateTestLinf(g, {2.1, 0}));
}

TEST(GroupStore, CandidateTestL2RejectsRectCorners) {
    // Inside the rectangle but outside the eps-circle: the false positives
    // the hull refinement must catch.
    GroupStore store(5.0);
    const Group& g = store.create(0, {0, 0});
    EXPECT_TRUE(rectContains(g.rect, {4, 4}));
    EXPECT_FALSE(similar({4, 4}, {0, 0}, Metric::L2, 5.0));
    EXPECT_FALSE(store.candidateTestL2(g, {4, 4}));
    EXPECT_TRUE(store.candidateTestL2(g, {3, 4}));  // exactly on the circle
    EXPECT_FALSE(store.candidateTestL2(g, {5.5, 0}));  // outside the rect filter
}

TEST(GroupStore, CandidateTestL2InsideHullAccepted) {
    const double eps = 6.0;
    GroupStore store(eps);
    Group& g = store.create(0, {0, 0});
    store.addMember(g, 1, {4, 0});
    store.addMember(g, 2, {4, 4});
    store.addMember(g, 3, {0, 4});
    EXPECT_TRUE(store.candidateTestL2(g, {2, 2}));
}

TEST(GroupStore, CandidateTestL2MatchesAllPairs) {
    std::mt19937_64 rng(53);
    const double eps = 1.5;
    std::uniform_real_distribution<double> coord(-1.0, 11.0);
    for (int round = 0; round < 20; ++round) {
        GroupStore store(eps);
        Group& g = makeRandomCliqueGroup(store, rng, Metric::L2, eps, 8, 0);
        for (int i = 0; i < 500; ++i) {
            Point p{coord(rng), coord(rng)};
            if (i % 3 == 0) {
                // Bias probes into the rectangle where refinement matters.
                std::uniform_real_distribution<double> px(g.rect.lo.x, g.rect.hi.x);
                std::uniform_real_distribution<double> py(g.rect.lo.y, g.rect.hi.y);
                p = {px(rng), py(rng)};
            }
            const bool expected = std::all_of(
                g.members.begin(), g.members.end(),
                [&](const GroupMember& m) { return similar(p, m.pos, Metric::L2, eps); });
            EXPECT_EQ(store.candidateTestL2(g, p), expected);
        }
    }
}

TEST(GroupStore, OverlapTest) {
    GroupStore store(4.0);
    // Only (4,2) is within LInf 4 of the probe at the origin.
    Group& g = store.create(0, {4, 2});
    store.addMember(g, 1, {6, 5});
    store.addMember(g, 2, {7, 4});
    EXPECT_TRUE(store.overlapTest(g, {0, 0}, Metric::LInf));

    GroupStore far(4.0);
    Group& g2 = far.create(0, {20, 20});
    far.addMember(g2, 1, {21, 21});
    EXPECT_FALSE(far.overlapTest(g2, {0, 0}, Metric::LInf));
}

TEST(GroupStore, OverlapTestMatchesBruteForce) {
    std::mt19937_64 rng(59);
    const double eps = 1.0;
    GroupStore store(eps);
    std::vector<Group*> groups;
    for (int i = 0; i < 15; ++i) {
        groups.push_back(&makeRandomCliqueGroup(store, rng, Metric::L2, eps, 5,
                                                static_cast<RecordId>(i) * 100));
    }
    std::uniform_real_distribution<double> coord(-1.0, 11.0);
    for (int i = 0; i < 300; ++i) {
        const Point p{coord(rng), coord(rng)};
        for (Metric m : {Metric::L2, Metric::LInf}) {
            for (const Group* g : groups) {
                const bool expected = std::any_of(
                    g->members.begin(), g->members.end(),
                    [&](const GroupMember& member) { return similar(p, member.pos, m, eps); });
                EXPECT_EQ(store.overlapTest(*g, p, m), expected);
            }
        }
    }
}

TEST(GroupStore, FarthestHullVertex) {
    GroupStore store(10.0);
    Group& g = store.create(0, {0, 0});
    store.addMember(g, 1, {4, 0});
    store.addMember(g, 2, {4, 4});
    store.addMember(g, 3, {0, 4});

    // Both right corners tie; the lexicographically least wins.
    EXPECT_EQ(store.farthestHullVertex(g, {-5, 2}), (Point{4, 0}));
    // Probe at a vertex: the far corner.
    EXPECT_EQ(store.farthestHullVertex(g, {0, 0}), (Point{4, 4}));

    GroupStore single(10.0);
    const Group& s = single.create(0, {3, 3});
    EXPECT_EQ(single.farthestHullVertex(s, {-1, -1}), (Point{3, 3}));
}

TEST(GroupStore, FarthestHullVertexMatchesMemberScan) {
    std::mt19937_64 rng(61);
    const double eps = 2.0;
    GroupStore store(eps);
    Group& g = makeRandomCliqueGroup(store, rng, Metric::L2, eps, 12, 0);
    std::uniform_real_distribution<double> coord(-2.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const Point p{coord(rng), coord(rng)};
        double best = -1.0;
        for (const auto& m : g.members) {
            best = std::max(best, l2Squared(p, m.pos));
        }
        EXPECT_DOUBLE_EQ(l2Squared(p, store.farthestHullVertex(g, p)), best);
    }
}

TEST(GroupStore, HullCacheInvalidatedByMutation) {
    GroupStore store(5.0);
    Group& g = store.create(0, {0, 0});
    EXPECT_EQ(g.hull().vertices.size(), 1u);
    store.addMember(g, 1, {2, 0});
    EXPECT_EQ(g.hull().vertices.size(), 2u);
    store.addMember(g, 2, {1, 2});
    EXPECT_EQ(g.hull().vertices.size(), 3u);
    store.removeMembers(g.id, {2});
    EXPECT_EQ(store.findGroup(g.id)->hull().vertices.size(), 2u);
}
