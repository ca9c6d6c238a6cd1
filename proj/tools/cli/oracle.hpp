#pragma once

#include <cstdint>
#include <vector>

#include "tfpl/core_types.hpp"

namespace tfpl::cli {

/// Linear fractional Laplacian of (1 - |x|^2)_+^s with K = c r^-(n+2s):
/// pi^(n/2 + 1) / (Gamma(n/2) sin(pi s)) times c, at every |x| < 1.
double barrier_constant_p2(int n, double s, double c_norm = 1.0);

struct OracleOptions {
  std::vector<double> s_values{0.3, 0.5, 0.7};
  std::vector<Point> points{{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}, {0.6, 0.0, 0.0}, {0.9, 0.0, 0.0}};
  /// Refinement check compares depths refine_depth and refine_depth + 1.
  int refine_depth = 1;
  QuadratureSpec quad;
  int tail_draws = 50;
  std::uint64_t seed = 1;
  /// Evaluates the third point with c_norm scaled by 1.1 (exercises the failure path).
  bool force_failure = false;
};

/// p = 2 constancy and closed-form value per s, kernel closed form, kernel
/// tails against an independent quadrature, and the tail-mass bound.
DiagnosticsReport run_oracle_suite(const OracleOptions& opts);

}  // namespace tfpl::cli
