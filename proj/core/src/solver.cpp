#include "tfpl/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "tfpl/function_operator.hpp"
#include "tfpl/kernel.hpp"

namespace tfpl {

namespace {

// 53 random bits -> [0, 1); avoids the implementation-defined std distributions
// so random initial data are identical across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double initial_value(const InitialDataSpec& spec, double s, const Point& x) {
  switch (spec.kind) {
    case InitialDataSpec::Kind::zero:
      return 0.0;
    case InitialDataSpec::Kind::barrier:
      return spec.amplitude * barrier_phi(x, s);
    case InitialDataSpec::Kind::bump: {
      double r2 = 0.0;
      for (int d = 0; d < 3; ++d) r2 += (x[d] - spec.center[d]) * (x[d] - spec.center[d]);
      const double t = 1.0 - r2 / (spec.radius * spec.radius);
      return t > 0.0 ? spec.amplitude * t * t : 0.0;
    }
    case InitialDataSpec::Kind::random:
      break;
  }
  return 0.0;
}

template <typename F>
F step_impl(const F& u, const F& Lu, double t, double dt, const ReactionTerm& g) {
  F out = u;
  const auto v = u.values();
  const auto L = Lu.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    double next;
    if constexpr (std::is_same_v<F, GridField>) {
      if (!u.geometry().interior(i)) continue;
    } else {
      if (i == u.boundary_index()) continue;
    }
    next = v[i] + dt * (g(t, v[i]) - L[i]);
    if (!std::isfinite(next)) {
      throw NumericalAbort("non-finite value after step at t = " + std::to_string(t) +
                           " (dt = " + std::to_string(dt) + " may be too large)");
    }
    out.set(i, next);
  }
  return out;
}

}  // namespace

double stable_dt(double u_max, double row_mass, const OperatorParams& params,
                 const ReactionTerm& reaction, double dt_max) {
  const double U = std::abs(u_max);
  const double p = params.p;
  const double lambda_op =
      (p == 2.0 ? 1.0 : (p - 1.0) * std::pow(2.0 * U, p - 2.0)) * row_mass;
  const double lg = reaction.lipschitz_bound(U + 1.0);
  const double denom = lambda_op + lg;
  if (!(denom > 0.0)) return dt_max;
  return std::min(dt_max, 0.5 / denom);
}

ScalarFieldFn initial_function(const InitialDataSpec& spec, double s) {
  if (spec.kind == InitialDataSpec::Kind::random) {
    throw ContractViolation("random initial data have no closed form");
  }
  if (spec.kind == InitialDataSpec::Kind::barrier) return barrier_function(s, spec.amplitude);
  ScalarFieldFn f;
  f.value = [spec, s](const Point& x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 1.0 ? initial_value(spec, s, x) : 0.0;
  };
  f.smoothness = ScalarFieldFn::Smoothness::c11_interior;
  return f;
}

Field make_initial_field(const SimulationConfig& config) {
  config.validate();
  const auto& spec = config.initial;
  const double s = config.params.s;
  const int n = config.params.n;
  std::mt19937_64 rng(spec.seed);
  const bool random = spec.kind == InitialDataSpec::Kind::random;
  if (config.layout == Layout::grid) {
    auto geom = make_grid(n, config.h);
    return GridField::sample(geom, [&](const Point& x) {
      return random ? spec.amplitude * unit_uniform(rng) : initial_value(spec, s, x);
    });
  }
  return RadialField::sample(n, config.radial_cells(), [&](double r) {
    return random ? spec.amplitude * unit_uniform(rng) : initial_value(spec, s, Point{r, 0.0, 0.0});
  });
}

Solver::Solver(SimulationConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.layout == Layout::grid) {
    grid_ = std::make_shared<const GridOperator>(make_grid(config_.params.n, config_.h),
                                                 config_.params, config_.quad);
  } else {
    const RadialField like = RadialField::uniform(config_.params.n, config_.radial_cells());
    radial_ = std::make_shared<const RadialOperator>(like, config_.params, config_.quad);
  }
}

Field Solver::apply(const Field& u) const {
  if (const auto* g = std::get_if<GridField>(&u)) {
    if (!grid_) throw ContractViolation("solver was configured for radial fields");
    return grid_->eval_all(*g);
  }
  if (!radial_) throw ContractViolation("solver was configured for grid fields");
  return radial_->eval_all(std::get<RadialField>(u));
}

double Solver::row_mass() const noexcept { return grid_ ? grid_->row_mass() : radial_->row_mass(); }

double Solver::stable_dt(const Field& u) const {
  return tfpl::stable_dt(field_max_abs(u), row_mass(), config_.params, config_.reaction, config_.dt);
}

Field Solver::step(const Field& u, double t, double dt) const {
  const Field Lu = apply(u);
  if (const auto* g = std::get_if<GridField>(&u)) {
    return step_impl(*g, std::get<GridField>(Lu), t, dt, config_.reaction);
  }
  return step_impl(std::get<RadialField>(u), std::get<RadialField>(Lu), t, dt, config_.reaction);
}

RunResult Solver::run(Field initial) const {
  const auto t0 = std::chrono::steady_clock::now();
  Trajectory traj;
  traj.config = config_;
  const double t_end = config_.t_end;
  const double every = config_.snapshot_every;

  Field u = std::move(initial);
  double t = 0.0;
  traj.times.push_back(t);
  traj.snapshots.push_back(u);
  double next_snap = every;

  double calm_since = -1.0;  // start of the current below-tolerance stretch
  double window_max = 0.0;
  bool converged = false;
  std::size_t steps = 0;

  while (t < t_end && steps < config_.max_steps) {
    double dt = config_.dt_policy == SimulationConfig::DtPolicy::automatic ? stable_dt(u) : config_.dt;
    dt = std::min(dt, t_end - t);
    Field next = step(u, t, dt);
    const double residual = field_max_diff(next, u) / dt;
    u = std::move(next);
    t += dt;
    ++steps;
    traj.residuals.emplace_back(t, residual);

    if (residual < config_.tol_steady) {
      if (calm_since < 0.0) {
        calm_since = t - dt;
        window_max = 0.0;
      }
      window_max = std::max(window_max, residual);
    } else {
      calm_since = -1.0;
    }
    if (t >= next_snap - 1e-12 * every) {
      traj.times.push_back(t);
      traj.snapshots.push_back(u);
      while (next_snap <= t + 1e-12 * every) next_snap += every;
    }
    if (calm_since >= 0.0 && t - calm_since >= config_.steady_window) {
      converged = true;
      break;
    }
  }
  if (traj.times.back() < t) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  }

  double residual = window_max;
  if (!converged) {
    // Largest residual over the trailing window of the run.
    residual = 0.0;
    for (auto it = traj.residuals.rbegin(); it != traj.residuals.rend(); ++it) {
      if (it->first < t - config_.steady_window) break;
      residual = std::max(residual, it->second);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return RunResult{std::move(traj), SteadyProfile{std::move(u), t, residual, converged}, steps, secs};
}

double stable_dt(const Field& u, const OperatorParams& params, const ReactionTerm& reaction,
                 double dt_max, const QuadratureSpec& quad) {
  double mass;
  if (const auto* g = std::get_if<GridField>(&u)) {
    mass = GridOperator(g->geometry_ptr(), params, quad).row_mass();
  } else {
    mass = RadialOperator(std::get<RadialField>(u), params, quad).row_mass();
  }
  return stable_dt(field_max_abs(u), mass, params, reaction, dt_max);
}

Field step(const Field& u, double t, double dt, const OperatorParams& params,
           const ReactionTerm& reaction, const QuadratureSpec& quad) {
  if (const auto* g = std::get_if<GridField>(&u)) {
    const GridOperator op(g->geometry_ptr(), params, quad);
    return step_impl(*g, op.eval_all(*g), t, dt, reaction);
  }
  const auto& r = std::get<RadialField>(u);
  const RadialOperator op(r, params, quad);
  return step_impl(r, op.eval_all(r), t, dt, reaction);
}

}  // namespace tfpl
