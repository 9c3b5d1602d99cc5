#pragma once

#include <span>
#include <vector>

namespace ccasters {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Wall {
  Point a;
  Point b;
};

// True when the closed segments [p1,p2] and [q1,q2] share at least one
// point. Touching a wall endpoint counts as blocked.
bool segments_touch(Point p1, Point p2, Point q1, Point q2);

// Visibility between two positions against a wall list.
bool visible(Point from, Point to, std::span<const Wall> walls);

}  // namespace ccasters
