#include "aapicard/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aapicard/quadrature.hpp"

namespace aapicard {

ErrorNorms manufactured_error(const TaylorHoodSpace& space, const ExactVelocity& exact,
                              std::span<const double> velocity) {
  if (velocity.size() != static_cast<std::size_t>(space.num_velocity_dofs())) {
    throw std::invalid_argument("manufactured_error: velocity has wrong length");
  }
  const TriMesh& mesh = space.mesh();
  const int nn = space.num_nodes();
  const auto& rule = triangle_rule();
  double l2 = 0.0, h1 = 0.0;

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& nodes = space.element_nodes()[t];
    const Point& p0 = mesh.vertices()[tri[0]];
    const Point& p1 = mesh.vertices()[tri[1]];
    const Point& p2 = mesh.vertices()[tri[2]];
    const double area = mesh.signed_area(t);
    const double s = 1.0 / (2.0 * area);
    const std::array<Vec2, 3> gl{{{(p1.y - p2.y) * s, (p2.x - p1.x) * s},
                                  {(p2.y - p0.y) * s, (p0.x - p2.x) * s},
                                  {(p0.y - p1.y) * s, (p1.x - p0.x) * s}}};

    for (const auto& qp : rule) {
      const auto& l = qp.bary;
      const double x = l[0] * p0.x + l[1] * p1.x + l[2] * p2.x;
      const double y = l[0] * p0.y + l[1] * p1.y + l[2] * p2.y;
      const auto phi = p2_values(l);
      const auto grad = p2_gradients(l, gl);
      double uh[2] = {0.0, 0.0};
      double duh[4] = {0.0, 0.0, 0.0, 0.0};
      for (int i = 0; i < 6; ++i) {
        const double cx = velocity[nodes[i]];
        const double cy = velocity[nn + nodes[i]];
        uh[0] += cx * phi[i];
        uh[1] += cy * phi[i];
        duh[0] += cx * grad[i].x;
        duh[1] += cx * grad[i].y;
        duh[2] += cy * grad[i].x;
        duh[3] += cy * grad[i].y;
      }
      const auto u = exact.value(x, y);
      const auto du = exact.jacobian(x, y);
      const double w = qp.weight * area;
      l2 += w * ((u[0] - uh[0]) * (u[0] - uh[0]) + (u[1] - uh[1]) * (u[1] - uh[1]));
      for (int k = 0; k < 4; ++k) h1 += w * (du[k] - duh[k]) * (du[k] - duh[k]);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

namespace {

struct Poly {
  // q(t) = t^2 (1-t)^2 and derivatives.
  static double f0(double t) { return t * t * (1 - t) * (1 - t); }
  static double f1(double t) { return 2 * t * (1 - t) * (1 - 2 * t); }
  static double f2(double t) { return 2 * (1 - 6 * t + 6 * t * t); }
  static double f3(double t) { return 24 * t - 12; }
};

}  // namespace

ManufacturedSolution stream_function_solution(double nu, bool include_convection) {
  using P = Poly;
  constexpr double pi = std::numbers::pi;
  ManufacturedSolution sol;
  sol.velocity.value = [](double x, double y) -> std::array<double, 2> {
    return {P::f0(x) * P::f1(y), -P::f1(x) * P::f0(y)};
  };
  sol.velocity.jacobian = [](double x, double y) -> std::array<double, 4> {
    return {P::f1(x) * P::f1(y), P::f0(x) * P::f2(y), -P::f2(x) * P::f0(y), -P::f1(x) * P::f1(y)};
  };
  sol.pressure = [](double x, double y) { return std::sin(pi * x) * std::cos(pi * y); };
  sol.body_force = [nu, include_convection](double x, double y) -> std::array<double, 2> {
    const double u1 = P::f0(x) * P::f1(y);
    const double u2 = -P::f1(x) * P::f0(y);
    const double lap1 = P::f2(x) * P::f1(y) + P::f0(x) * P::f3(y);
    const double lap2 = -P::f3(x) * P::f0(y) - P::f1(x) * P::f2(y);
    double conv1 = 0.0, conv2 = 0.0;
    if (include_convection) {
      conv1 = u1 * (P::f1(x) * P::f1(y)) + u2 * (P::f0(x) * P::f2(y));
      conv2 = u1 * (-P::f2(x) * P::f0(y)) + u2 * (-P::f1(x) * P::f1(y));
    }
    const double px = pi * std::cos(pi * x) * std::cos(pi * y);
    const double py = -pi * std::sin(pi * x) * std::sin(pi * y);
    return {-nu * lap1 + conv1 + px, -nu * lap2 + conv2 + py};
  };
  return sol;
}

}  // namespace aapicard
