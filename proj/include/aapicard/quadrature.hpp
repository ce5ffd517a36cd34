#pragma once

#include <array>
#include <cmath>

namespace aapicard {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

struct QuadraturePoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the triangle area; weights sum to 1
};

// 7-point symmetric rule, exact for polynomials of degree 5.
inline const std::array<QuadraturePoint, 7>& triangle_rule() {
  static const std::array<QuadraturePoint, 7> rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, w1 = (155.0 - s) / 1200.0;
    const double a2 = (6.0 + s) / 21.0, w2 = (155.0 + s) / 1200.0;
    const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
    return std::array<QuadraturePoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
        {{b1, a1, a1}, w1},
        {{a1, b1, a1}, w1},
        {{a1, a1, b1}, w1},
        {{b2, a2, a2}, w2},
        {{a2, b2, a2}, w2},
        {{a2, a2, b2}, w2},
    }};
  }();
  return rule;
}

// Quadratic Lagrange basis on a triangle. Local nodes 0..2 are the vertices,
// 3, 4, 5 the midpoints of edges (0,1), (1,2), (2,0).
inline constexpr std::array<std::array<int, 2>, 3> kP2LocalEdges{{{0, 1}, {1, 2}, {2, 0}}};

inline std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

inline std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& l, const std::array<Vec2, 3>& gl) {
  std::array<Vec2, 6> g;
  for (int i = 0; i < 3; ++i) {
    const double s = 4.0 * l[i] - 1.0;
    g[i] = {s * gl[i].x, s * gl[i].y};
  }
  for (int e = 0; e < 3; ++e) {
    const int a = kP2LocalEdges[e][0], b = kP2LocalEdges[e][1];
    g[3 + e] = {4.0 * (l[a] * gl[b].x + l[b] * gl[a].x), 4.0 * (l[a] * gl[b].y + l[b] * gl[a].y)};
  }
  return g;
}

}  // namespace aapicard
