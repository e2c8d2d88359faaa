#pragma once

#include <vector>

namespace sgb {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

// Lexicographic order (x, then y); the deterministic tie-breaker used
// throughout.
inline bool lexLess(const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

enum class Metric { L2, LInf };

double distance(const Point& a, const Point& b, Metric m);

inline double l2Squared(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// distance(a, b, m) <= eps, boundary inclusive. L2 compares squared values so
// every membership decision in the engine goes through the same arithmetic.
bool similar(const Point& a, const Point& b, Metric m, double eps);

// Axis-aligned rectangle, lo <= hi componentwise. Both containment and
// intersection treat boundaries as inclusive.
struct Rect {
    Point lo;
    Point hi;

    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline bool rectContains(const Rect& r, const Point& p) {
    return r.lo.x <= p.x && p.x <= r.hi.x && r.lo.y <= p.y && p.y <= r.hi.y;
}

inline bool rectIntersects(const Rect& a, const Rect& b) {
    return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}

// Intersection of two rects; returns false (and leaves `out` untouched) when
// they do not meet.
bool rectIntersection(const Rect& a, const Rect& b, Rect& out);

// The square of side 2*eps centered at p.
inline Rect epsSquare(const Point& p, double eps) {
    return {{p.x - eps, p.y - eps}, {p.x + eps, p.y + eps}};
}

// Cross product of (a - o) x (b - o): > 0 left turn, < 0 right turn,
// == 0 collinear.
inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Convex polygon in counter-clockwise order starting at the lexicographically
// least vertex. No three collinear vertices are kept; a single point or a
// collinear set degenerates to one or two vertices.
struct Hull {
    std::vector<Point> vertices;

    friend bool operator==(const Hull&, const Hull&) = default;
};

// Monotone chain over the (copied) input. The input must be non-empty;
// duplicates are fine.
Hull convexHull(std::vector<Point> points);

// Inside-or-on-boundary test against a valid hull.
bool pointInHull(const Point& p, const Hull& h);

}  // namespace sgb
