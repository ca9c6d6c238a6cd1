#pragma once

#include <functional>
#include <vector>

#include "tfpl/field.hpp"
#include "tfpl/params.hpp"

namespace tfpl {

/// An explicitly given function u on R^n.
struct ScalarFieldFn {
  enum class Smoothness {
    /// C^{1,1} inside the support.
    c11_interior,
    /// C^{1,1} inside, Hoelder-s decay at the support boundary (e.g. the barrier).
    holder_at_boundary,
  };

  std::function<double(const Point&)> value;
  /// u(x) = 0 for |x| >= support_radius.
  double support_radius = 1.0;
  /// Radii of origin-centred spheres across which u may be non-smooth.
  std::vector<double> interfaces;
  Smoothness smoothness = Smoothness::holder_at_boundary;

  ScalarFieldFn negated() const;
};

/// (1 - |x|^2)_+^s
double barrier_phi(const Point& x, double s) noexcept;

/// amplitude * barrier_phi as a ScalarFieldFn.
ScalarFieldFn barrier_function(double s, double amplitude = 1.0);

struct FunctionEvalResult {
  double value = 0.0;
  double previous = 0.0;
  int depth = 0;
};

/// Value of the quadrature at one refinement level.
double eval_function_at_depth(const ScalarFieldFn& u, const Point& x, const OperatorParams& params,
                              const QuadratureSpec& quad, int depth);

/// Refines from quad.min_depth until two successive levels agree to quad.eps_quad
/// (relative). Throws QuadratureError with the last two estimates otherwise.
FunctionEvalResult eval_function_detailed(const ScalarFieldFn& u, const Point& x,
                                          const OperatorParams& params,
                                          const QuadratureSpec& quad = {});

double eval_function(const ScalarFieldFn& u, const Point& x, const OperatorParams& params,
                     const QuadratureSpec& quad = {});

}  // namespace tfpl
