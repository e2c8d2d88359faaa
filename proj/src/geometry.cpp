#include "sgb/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sgb {

double distance(const Point& a, const Point& b, Metric m) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    if (m == Metric::L2) {
        return std::sqrt(dx * dx + dy * dy);
    }
    return std::max(std::fabs(dx), std::fabs(dy));
}

bool similar(const Point& a, const Point& b, Metric m, double eps) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    if (m == Metric::L2) {
        return dx * dx + dy * dy <= eps * eps;
    }
    return std::fabs(dx) <= eps && std::fabs(dy) <= eps;
}

bool rectContains(const Rect& r, const Point& p) {
    return r.lo.x <= p.x && p.x <= r.hi.x && r.lo.y <= p.y && p.y <= r.hi.y;
}

bool rectIntersects(const Rect& a, const Rect& b) {
    return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}

bool rectIntersection(const Rect& a, const Rect& b, Rect& out) {
    const Rect r{{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)},
                 {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
    if (!r.valid()) {
        return false;
    }
    out = r;
    return true;
}

Rect epsSquare(const Point& p, double eps) {
    return {{p.x - eps, p.y - eps}, {p.x + eps, p.y + eps}};
}

Hull convexHull(std::vector<Point> points) {
    std::sort(points.begin(), points.end(), lexLess);
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const std::size_t n = points.size();
    if (n <= 2) {
        return Hull{std::move(points)};
    }

    // Lower then upper chain; comparisons are exact, cross == 0 drops
    // collinear vertices.
    std::vector<Point> chain;
    chain.reserve(2 * n);
    for (const Point& p : points) {
        while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), p) <= 0.0) {
            chain.pop_back();
        }
        chain.push_back(p);
    }
    const std::size_t lower = chain.size() + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        const Point& p = points[i];
        while (chain.size() >= lower && cross(chain[chain.size() - 2], chain.back(), p) <= 0.0) {
            chain.pop_back();
        }
        chain.push_back(p);
    }
    chain.pop_back();  // closes back at points[0]
    return Hull{std::move(chain)};
}

namespace {

bool onSegment(const Point& a, const Point& b, const Point& p) {
    if (cross(a, b, p) != 0.0) {
        return false;
    }
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool pointInHull(const Point& p, const Hull& h) {
    const auto& v = h.vertices;
    if (v.empty()) {
        return false;
    }
    if (v.size() == 1) {
        return p == v[0];
    }
    if (v.size() == 2) {
        return onSegment(v[0], v[1], p);
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        if (cross(a, b, p) < 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace sgb
