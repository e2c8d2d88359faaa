#include "sgb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace sgb;

TEST(Distance, KnownValues) {
    EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}, Metric::L2), 5.0);
    EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}, Metric::LInf), 4.0);
    EXPECT_DOUBLE_EQ(distance({1, 1}, {1, 1}, Metric::L2), 0.0);
    EXPECT_DOUBLE_EQ(distance({1, 1}, {1, 1}, Metric::LInf), 0.0);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const Point a{coord(rng), coord(rng)};
        const Point b{coord(rng), coord(rng)};
        const Point c{coord(rng), coord(rng)};
        for (Metric m : {Metric::L2, Metric::LInf}) {
            EXPECT_NEAR(distance(a, b, m), distance(b, a, m), 1e-9);
            EXPECT_GE(distance(a, b, m), 0.0);
            EXPECT_LE(distance(a, b, m), distance(a, c, m) + distance(c, b, m) + 1e-9);
        }
        EXPECT_DOUBLE_EQ(distance(a, a, Metric::L2), 0.0);
    }
}

TEST(Distance, NormOrdering) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const Point a{coord(rng), coord(rng)};
        const Point b{coord(rng), coord(rng)};
        const double linf = distance(a, b, Metric::LInf);
        const double l2 = distance(a, b, Metric::L2);
        EXPECT_LE(linf, l2 + 1e-12);
        EXPECT_LE(l2, std::sqrt(2.0) * linf + 1e-12);
    }
}

TEST(Similar, BoundaryInclusive) {
    EXPECT_TRUE(similar({0, 0}, {3, 0}, Metric::LInf, 3.0));
    EXPECT_FALSE(similar({0, 0}, {3, 4}, Metric::L2, 4.99));
    EXPECT_TRUE(similar({0, 0}, {2, 2}, Metric::L2, 3.0));  // sqrt(8) ~ 2.828
    EXPECT_TRUE(similar({0, 0}, {3, 4}, Metric::L2, 5.0));
}

TEST(Rect, ContainsAndIntersectsInclusive) {
    const Rect r{{0, 0}, {4, 4}};
    EXPECT_TRUE(rectContains(r, {4, 4}));
    EXPECT_TRUE(rectContains(r, {0, 4}));
    EXPECT_FALSE(rectContains(r, {4.0001, 2}));
    EXPECT_TRUE(rectIntersects({{0, 0}, {2, 2}}, {{2, 2}, {5, 5}}));
    EXPECT_FALSE(rectIntersects({{0, 0}, {1, 1}}, {{3, 3}, {4, 4}}));
}

TEST(Rect, Intersection) {
    Rect out;
    ASSERT_TRUE(rectIntersection({{0, 0}, {4, 4}}, {{2, -1}, {6, 3}}, out));
    EXPECT_EQ(out, (Rect{{2, 0}, {4, 3}}));
    EXPECT_FALSE(rectIntersection({{0, 0}, {1, 1}}, {{2, 2}, {3, 3}}, out));
    // Touching edges intersect in a degenerate rect.
    ASSERT_TRUE(rectIntersection({{0, 0}, {1, 1}}, {{1, 0}, {2, 1}}, out));
    EXPECT_EQ(out, (Rect{{1, 0}, {1, 1}}));
}

TEST(Hull, Degenerate) {
    const Hull single = convexHull({{0, 0}});
    ASSERT_EQ(single.vertices.size(), 1u);
    EXPECT_EQ(single.vertices[0], (Point{0, 0}));

    const Hull repeated = convexHull({{1, 2}, {1, 2}, {1, 2}});
    EXPECT_EQ(repeated.vertices.size(), 1u);

    const Hull collinear = convexHull({{0, 0}, {2, 2}, {1, 1}, {3, 3}});
    ASSERT_EQ(collinear.vertices.size(), 2u);
    EXPECT_EQ(collinear.vertices[0], (Point{0, 0}));
    EXPECT_EQ(collinear.vertices[1], (Point{3, 3}));
}

TEST(Hull, SquareDropsInteriorAndCollinear) {
    const Hull h = convexHull({{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}, {2, 0}});
    ASSERT_EQ(h.vertices.size(), 4u);
    EXPECT_EQ(h.vertices[0], (Point{0, 0}));  // lexicographically least first
    EXPECT_EQ(h.vertices[1], (Point{4, 0}));  // counter-clockwise
    EXPECT_EQ(h.vertices[2], (Point{4, 4}));
    EXPECT_EQ(h.vertices[3], (Point{0, 4}));
}

TEST(Hull, MatchesBruteForceOnRandomSets) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    for (int round = 0; round < 20; ++round) {
        std::vector<Point> pts;
        for (int i = 0; i < 50; ++i) {
            pts.push_back({coord(rng), coord(rng)});
        }
        const Hull h = convexHull(pts);

        std::vector<Point> got = h.vertices;
        std::sort(got.begin(), got.end(), lexLess);
        const std::vector<Point> expected = sgb::testing::hullVerticesBruteForce(pts);
        EXPECT_EQ(got, expected);

        // Every input point is inside; agreement with the half-plane oracle.
        for (const Point& p : pts) {
            EXPECT_TRUE(pointInHull(p, h));
            EXPECT_EQ(pointInHull(p, h), sgb::testing::hullContainsBruteForce(pts, p));
        }
    }
}

TEST(Hull, Idempotent) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i) {
        pts.push_back({coord(rng), coord(rng)});
    }
    const Hull h = convexHull(pts);
    EXPECT_EQ(convexHull(h.vertices), h);
}

TEST(Hull, VerticesAreInside) {
    const Hull h = convexHull({{0, 0}, {5, 1}, {6, 4}, {2, 6}, {-1, 3}});
    for (const Point& v : h.vertices) {
        EXPECT_TRUE(pointInHull(v, h));
    }
}

TEST(PointInHull, SquareCases) {
    const Hull square = convexHull({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    EXPECT_TRUE(pointInHull({2, 2}, square));
    EXPECT_FALSE(pointInHull({9, 9}, square));
    EXPECT_TRUE(pointInHull({4, 2}, square));  // boundary is inside
    EXPECT_TRUE(pointInHull({0, 0}, square));
    EXPECT_FALSE(pointInHull({-0.0001, 2}, square));
}

TEST(PointInHull, SegmentAndPoint) {
    const Hull segment = convexHull({{0, 0}, {4, 4}});
    EXPECT_TRUE(pointInHull({2, 2}, segment));
    EXPECT_FALSE(pointInHull({2, 2.0001}, segment));
    EXPECT_FALSE(pointInHull({5, 5}, segment));

    const Hull point = convexHull({{1, 1}});
    EXPECT_TRUE(pointInHull({1, 1}, point));
    EXPECT_FALSE(pointInHull({1, 1.5}, point));
}

TEST(PointInHull, RandomAgainstOracle) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 30; ++i) {
        pts.push_back({coord(rng), coord(rng)});
    }
    const Hull h = convexHull(pts);
    for (int i = 0; i < 500; ++i) {
        const Point probe{coord(rng) * 1.4 - 0.2, coord(rng) * 1.4 - 0.2};
        EXPECT_EQ(pointInHull(probe, h), sgb::testing::hullContainsBruteForce(pts, probe));
    }
}
