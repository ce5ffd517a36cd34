#pragma once

#include <array>
#include <functional>
#include <span>

#include "aapicard/space.hpp"

namespace aapicard {

// Closed-form velocity field with its Jacobian
// (du1/dx, du1/dy, du2/dx, du2/dy).
struct ExactVelocity {
  VelocityFunction value;
  std::function<std::array<double, 4>(double x, double y)> jacobian;
};

struct ErrorNorms {
  double l2 = 0.0;
  // H^1 seminorm of the error.
  double h1 = 0.0;
};

// L2 and H1-seminorm errors of a P2 velocity against an exact field, using the
// degree-5 rule on every triangle.
ErrorNorms manufactured_error(const TaylorHoodSpace& space, const ExactVelocity& exact,
                              std::span<const double> velocity);

// Divergence-free solution u = curl psi, psi = x^2(1-x)^2 y^2(1-y)^2 on the unit
// square (zero on the boundary), with pressure p = sin(pi x) cos(pi y) and the
// body force that makes (u, p) solve the steady Navier-Stokes equations.
struct ManufacturedSolution {
  ExactVelocity velocity;
  std::function<double(double x, double y)> pressure;
  VelocityFunction body_force;
};

ManufacturedSolution stream_function_solution(double nu, bool include_convection = true);

}  // namespace aapicard
