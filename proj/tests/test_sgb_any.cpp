#include "sgb/sgb_any.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sgb;

namespace {

SgbAnyConfig config(Metric m, double eps, SgbAnyConfig::Strategy s) {
    SgbAnyConfig cfg;
    cfg.metric = m;
    cfg.eps = eps;
    cfg.strategy = s;
    return cfg;
}

std::vector<std::vector<RecordId>> partitionOf(const GroupingResult& result) {
    std::vector<std::vector<RecordId>> parts;
    for (const auto& g : result.groups) {
        parts.push_back(g.members);
    }
    return sgb::testing::normalizePartition(std::move(parts));
}

}  // namespace

TEST(SgbAny, FivePointsMergeIntoOne) {
    const std::vector<InputPoint> pts = {
        {0, {0, 0}}, {1, {1, 0}}, {2, {5, 0}}, {3, {6, 0}}, {4, {3, 0}},
    };
    for (Metric m : {Metric::L2, Metric::LInf}) {
        for (auto s : {SgbAnyConfig::Strategy::AllPairs, SgbAnyConfig::Strategy::Indexed}) {
            const auto result = runSgbAny(pts, config(m, 3.0, s));
            EXPECT_EQ(result.groupSizes(), std::vector<std::size_t>{5});
            EXPECT_TRUE(result.eliminated.empty());
        }
    }
}

TEST(SgbAny, ChainConnectsDistantEnds) {
    // Eight points, each within 3 of its neighbor, ends far apart.
    std::vector<InputPoint> chain;
    for (int i = 0; i < 8; ++i) {
        chain.push_back({i, {i * 2.5, 0}});
    }
    const auto result = runSgbAny(chain, config(Metric::L2, 3.0, SgbAnyConfig::Strategy::Indexed));
    EXPECT_EQ(result.groupSizes(), std::vector<std::size_t>{8});
}

TEST(SgbAny, SeparatedClustersStaySeparate) {
    const std::vector<InputPoint> pts = {
        {0, {0, 0}}, {1, {0.5, 0}}, {2, {10, 10}}, {3, {10.5, 10}},
    };
    const auto result = runSgbAny(pts, config(Metric::L2, 1.0, SgbAnyConfig::Strategy::Indexed));
    EXPECT_EQ(result.groupSizes(), (std::vector<std::size_t>{2, 2}));
}

TEST(SgbAny, FindCandidateGroupsWindowLayout) {
    // Three established groups with exactly six points inside the probe's
    // window; the far tail of the first group stays outside.
    const std::vector<InputPoint> pts = {
        {0, {-7, 3}},  {1, {-6, 6}},  {2, {-3, 2}},   // group of a-points
        {3, {2, 1}},   {4, {3, 2}},   {5, {2, 3}},    // group of c-points
        {6, {2, -4}},  {7, {4, -4}},                  // group of b-points
    };
    const SgbAnyConfig cfg = config(Metric::LInf, 4.0, SgbAnyConfig::Strategy::Indexed);

    DisjointSet dsf;
    RTree pointsIx;
    for (const auto& p : pts) {
        dsf.makeSet(p.record);
        const auto candidates = findCandidateGroupsAny(p.pos, pointsIx, dsf, cfg);
        processGroupingAny(p.record, candidates, dsf);
        pointsIx.insert({{p.pos, p.pos}, p.record});
    }
    // Three distinct groups so far.
    EXPECT_EQ(dsf.classCount(), 3u);

    const Point probe{0, 0};
    EXPECT_EQ(pointsIx.windowQuery(epsSquare(probe, 4.0)),
              (std::vector<std::int64_t>{2, 3, 4, 5, 6, 7}));
    const auto candidates = findCandidateGroupsAny(probe, pointsIx, dsf, cfg);
    ASSERT_EQ(candidates.size(), 3u);  // one root per group

    dsf.makeSet(100);
    processGroupingAny(100, candidates, dsf);
    EXPECT_EQ(dsf.classCount(), 1u);
    EXPECT_EQ(dsf.classSize(100), 9);
}

TEST(SgbAny, FirstPointHasNoCandidates) {
    DisjointSet dsf;
    RTree pointsIx;
    const SgbAnyConfig cfg = config(Metric::L2, 1.0, SgbAnyConfig::Strategy::Indexed);
    EXPECT_TRUE(findCandidateGroupsAny({0, 0}, pointsIx, dsf, cfg).empty());
}

TEST(SgbAny, L2WindowHitOutsideCircleFiltered) {
    DisjointSet dsf;
    RTree pointsIx;
    dsf.makeSet(0);
    pointsIx.insert({{{3.9, 3.9}, {3.9, 3.9}}, 0});

    // Inside the square window, outside the L2 circle.
    const SgbAnyConfig l2 = config(Metric::L2, 4.0, SgbAnyConfig::Strategy::Indexed);
    EXPECT_TRUE(findCandidateGroupsAny({0, 0}, pointsIx, dsf, l2).empty());

    const SgbAnyConfig linf = config(Metric::LInf, 4.0, SgbAnyConfig::Strategy::Indexed);
    EXPECT_EQ(findCandidateGroupsAny({0, 0}, pointsIx, dsf, linf), std::vector<RecordId>{0});
}

TEST(SgbAny, MatchesBfsComponents) {
    std::mt19937_64 rng(101);
    for (int round = 0; round < 20; ++round) {
        const Metric m = round % 2 == 0 ? Metric::L2 : Metric::LInf;
        const std::size_t n = 200 + rng() % 800;
        const bool clustered = round % 4 < 2;
        const auto pts = clustered ? sgb::testing::clusteredPoints(n, 10, 0.03, rng())
                                   : sgb::testing::uniformPoints(n, rng());
        const double eps = 0.02 + 0.04 * std::uniform_real_distribution<double>(0, 1)(rng);
        const auto expected = sgb::testing::bfsComponents(pts, m, eps);
        for (auto s : {SgbAnyConfig::Strategy::AllPairs, SgbAnyConfig::Strategy::Indexed}) {
            const auto result = runSgbAny(pts, config(m, eps, s));
            EXPECT_EQ(partitionOf(result), expected) << "round " << round;
        }
    }
}

TEST(SgbAny, StrategiesProduceIdenticalResults) {
    const auto pts = sgb::testing::uniformPoints(1500, 103);
    const auto ap = runSgbAny(pts, config(Metric::L2, 0.03, SgbAnyConfig::Strategy::AllPairs));
    const auto ix = runSgbAny(pts, config(Metric::L2, 0.03, SgbAnyConfig::Strategy::Indexed));
    EXPECT_EQ(ap, ix);
}

TEST(SgbAny, OrderIndependentPartition) {
    auto pts = sgb::testing::uniformPoints(600, 107);
    const auto cfg = config(Metric::LInf, 0.04, SgbAnyConfig::Strategy::Indexed);
    const auto before = partitionOf(runSgbAny(pts, cfg));
    std::mt19937_64 rng(109);
    std::shuffle(pts.begin(), pts.end(), rng);
    EXPECT_EQ(partitionOf(runSgbAny(pts, cfg)), before);
}

TEST(SgbAny, EpsMonotonicity) {
    const auto pts = sgb::testing::uniformPoints(800, 113);
    const auto cfg = [&](double eps) {
        return config(Metric::L2, eps, SgbAnyConfig::Strategy::Indexed);
    };
    std::size_t lastCount = pts.size() + 1;
    std::vector<std::vector<RecordId>> finer;
    for (double eps : {0.01, 0.02, 0.04, 0.08, 0.16}) {
        const auto result = runSgbAny(pts, cfg(eps));
        EXPECT_LE(result.groups.size(), lastCount);
        lastCount = result.groups.size();

        // Refinement: each finer group sits inside one coarser group.
        const auto parts = partitionOf(result);
        if (!finer.empty()) {
            for (const auto& fine : finer) {
                int containers = 0;
                for (const auto& coarse : parts) {
                    if (std::includes(coarse.begin(), coarse.end(), fine.begin(), fine.end())) {
                        ++containers;
                    }
                }
                EXPECT_EQ(containers, 1);
            }
        }
        finer = parts;
    }
}

TEST(SgbAny, InvalidEpsRejected) {
    EXPECT_THROW(
        runSgbAny(std::vector<InputPoint>{}, config(Metric::L2, 0.0, SgbAnyConfig::Strategy::Indexed)),
        std::invalid_argument);
}
