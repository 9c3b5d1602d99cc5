#include "ccasters/geometry.hpp"

#include <algorithm>

namespace ccasters {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool within_box(Point p, Point q, Point r) {
  constexpr double eps = 1e-12;
  return std::min(p.x, r.x) - eps <= q.x && q.x <= std::max(p.x, r.x) + eps &&
         std::min(p.y, r.y) - eps <= q.y && q.y <= std::max(p.y, r.y) + eps;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool segments_touch(Point p1, Point p2, Point q1, Point q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && within_box(q1, p1, q2)) return true;
  if (d2 == 0 && within_box(q1, p2, q2)) return true;
  if (d3 == 0 && within_box(p1, q1, p2)) return true;
  if (d4 == 0 && within_box(p1, q2, p2)) return true;
  return false;
}

bool visible(Point from, Point to, std::span<const Wall> walls) {
  return std::none_of(walls.begin(), walls.end(), [&](const Wall& w) {
    return segments_touch(from, to, w.a, w.b);
  });
}

}  // namespace ccasters
