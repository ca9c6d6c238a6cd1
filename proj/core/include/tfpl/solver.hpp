#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "tfpl/core_types.hpp"
#include "tfpl/function_operator.hpp"
#include "tfpl/grid_operator.hpp"
#include "tfpl/radial_operator.hpp"

namespace tfpl {

struct Trajectory {
  SimulationConfig config;
  std::vector<double> times;
  std::vector<Field> snapshots;
  /// (t after the step, max|u' - u| / dt) for every step.
  std::vector<std::pair<double, double>> residuals;
};

struct RunResult {
  Trajectory trajectory;
  SteadyProfile steady;
  std::size_t steps = 0;
  double seconds = 0.0;
};

/// min(dt_max, 0.5 / (Lambda + L_g)) with Lambda = (p-1) (2 |u|_inf)^(p-2) * row_mass
/// and L_g the reaction's Lipschitz bound on [-|u|_inf - 1, |u|_inf + 1].
/// Falls back to dt_max when Lambda + L_g = 0.
double stable_dt(double u_max, double row_mass, const OperatorParams& params,
                 const ReactionTerm& reaction, double dt_max);

/// Samples the configured initial data on the configured layout.
Field make_initial_field(const SimulationConfig& config);

/// Deterministic initial data as a function on R^n, cut off at |x| = 1.
/// Throws ContractViolation for random data.
ScalarFieldFn initial_function(const InitialDataSpec& spec, double s);

/// Owns the discretized operator for one configuration.
class Solver {
 public:
  explicit Solver(SimulationConfig config);

  const SimulationConfig& config() const noexcept { return config_; }
  Field initial_field() const { return make_initial_field(config_); }

  /// Discrete operator applied to u; exterior entries are 0.
  Field apply(const Field& u) const;
  double row_mass() const noexcept;
  double stable_dt(const Field& u) const;

  /// u + dt (g(t, u) - L u) at interior nodes. Throws NumericalAbort on non-finite output.
  Field step(const Field& u, double t, double dt) const;

  /// Integrates from `initial` (or the configured data) to t_end or until steady.
  RunResult run() const { return run(initial_field()); }
  RunResult run(Field initial) const;

  const GridOperator* grid_operator() const noexcept { return grid_.get(); }
  const RadialOperator* radial_operator() const noexcept { return radial_.get(); }

 private:
  SimulationConfig config_;
  std::shared_ptr<const GridOperator> grid_;
  std::shared_ptr<const RadialOperator> radial_;
};

/// Free-function forms; each builds the operator for u's layout.
double stable_dt(const Field& u, const OperatorParams& params, const ReactionTerm& reaction,
                 double dt_max, const QuadratureSpec& quad = {});
Field step(const Field& u, double t, double dt, const OperatorParams& params,
           const ReactionTerm& reaction, const QuadratureSpec& quad = {});

}  // namespace tfpl
