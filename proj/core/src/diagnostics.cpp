#include "tfpl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>

#include "tfpl/kernel.hpp"
#include "tfpl/quadrature.hpp"

namespace tfpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckRecord make_record(std::string name, double value, double threshold, bool passed, std::string verdict,
                        std::string detail = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.value = value;
  r.threshold = threshold;
  r.passed = passed;
  r.verdict = std::move(verdict);
  r.detail = std::move(detail);
  return r;
}

/// Calls fn(index, distance to the boundary, value) for each interior sample.
template <typename Fn>
void for_each_interior(const Field& f, Fn&& fn) {
  if (const auto* g = std::get_if<GridField>(&f)) {
    const GridGeometry& geom = g->geometry();
    const int n = geom.dim();
    for (std::size_t i : geom.interior_nodes()) fn(i, 1.0 - norm(geom.point(i), n), (*g)[i]);
  } else {
    const auto& r = std::get<RadialField>(f);
    for (std::size_t k = 0; k < r.boundary_index(); ++k) fn(k, 1.0 - r.radii()[k], r[k]);
  }
}

void require_converged(const SteadyProfile& phi, const char* who) {
  if (!phi.converged) throw ContractViolation(std::string(who) + " requires a converged profile");
}

std::vector<Point> boundary_directions(int n) {
  std::vector<Point> dirs;
  if (n == 1) {
    dirs = {Point{1.0, 0.0, 0.0}, Point{-1.0, 0.0, 0.0}};
  } else if (n == 2) {
    for (int k = 0; k < 8; ++k) {
      const double a = k * (std::numbers::pi / 4.0);
      dirs.push_back(Point{std::cos(a), std::sin(a), 0.0});
    }
  } else {
    for (int d = 0; d < 3; ++d) {
      for (double sg : {1.0, -1.0}) {
        Point e{0.0, 0.0, 0.0};
        e[d] = sg;
        dirs.push_back(e);
      }
    }
    const double c = 1.0 / std::sqrt(3.0);
    for (int m = 0; m < 8; ++m) {
      dirs.push_back(Point{(m & 1) ? -c : c, (m & 2) ? -c : c, (m & 4) ? -c : c});
    }
  }
  return dirs;
}

double field_min(const SigmaField& f, const std::vector<std::size_t>* subset = nullptr) {
  double m = kInf;
  if (subset) {
    for (std::size_t k : *subset) m = std::min(m, f.values[k]);
  } else {
    for (double v : f.values) m = std::min(m, v);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

bool HopfResult::all_normals_negative() const noexcept {
  return std::all_of(normals.begin(), normals.end(), [](const NormalEstimate& e) { return e.extrapolated < 0.0; });
}

CheckRecord HopfResult::record() const {
  std::string detail = "band=[" + num(d_lo) + "," + num(d_hi) + "] nodes=" + std::to_string(band_nodes);
  double worst = -kInf;
  for (const auto& e : normals) worst = std::max(worst, e.extrapolated);
  if (!normals.empty()) detail += " max_normal_derivative=" + num(worst);
  if (!std::isnan(temporal_spread)) detail += " temporal_spread=" + num(temporal_spread);
  if (trivial) return make_record("hopf_ratio", c_hat, 0.0, true, "trivial", detail + " (Hopf fails / trivial profile)");
  const bool ok = c_hat > 0.0 && all_normals_negative() && (std::isnan(temporal_spread) || temporal_spread <= 0.05);
  return make_record("hopf_ratio", c_hat, 0.0, ok, ok ? "pass" : "fail", detail);
}

double band_min_ratio(const Field& phi, double s, double d_lo, double d_hi, std::size_t* count,
                      double* argmin_distance) {
  double best = kInf;
  double at = kNaN;
  std::size_t c = 0;
  for_each_interior(phi, [&](std::size_t, double d, double v) {
    if (d < d_lo || d > d_hi) return;
    ++c;
    const double ratio = v / std::pow(d, s);
    if (ratio < best) {
      best = ratio;
      at = d;
    }
  });
  if (c == 0) throw ContractViolation("Hopf band [" + num(d_lo) + ", " + num(d_hi) + "] contains no node");
  if (count) *count = c;
  if (argmin_distance) *argmin_distance = at;
  return best;
}

HopfResult hopf_ratio(const SteadyProfile& phi, double s, double d_lo, double d_hi, const Trajectory* history) {
  require_converged(phi, "hopf_ratio");
  const double h = field_spacing(phi.field);
  if (d_lo < 2.0 * h * (1.0 - 1e-12)) throw ContractViolation("Hopf band must start at d >= 2h");
  if (!(d_hi > d_lo)) throw ContractViolation("Hopf band is empty");

  HopfResult out;
  out.d_lo = d_lo;
  out.d_hi = d_hi;
  out.c_hat = std::max(0.0, band_min_ratio(phi.field, s, d_lo, d_hi, &out.band_nodes, &out.argmin_distance));
  out.trivial = out.c_hat == 0.0;

  const int n = field_dim(phi.field);
  const bool radial = std::holds_alternative<RadialField>(phi.field);
  const std::vector<Point> dirs = radial ? std::vector<Point>{Point{1.0, 0.0, 0.0}} : boundary_directions(n);
  for (const Point& nu : dirs) {
    NormalEstimate e;
    e.direction = nu;
    double mt = 0.0, mq = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double tau = (4 << k) * h;
      const Point x{nu[0] * (1.0 - tau), nu[1] * (1.0 - tau), nu[2] * (1.0 - tau)};
      e.tau[k] = tau;
      e.quotient[k] = -field_value_at(phi.field, x) / std::pow(tau, s);
      mt += tau / 3.0;
      mq += e.quotient[k] / 3.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (int k = 0; k < 3; ++k) {
      sxy += (e.tau[k] - mt) * (e.quotient[k] - mq);
      sxx += (e.tau[k] - mt) * (e.tau[k] - mt);
    }
    e.extrapolated = mq - (sxy / sxx) * mt;
    out.normals.push_back(e);
  }

  if (history && history->snapshots.size() >= 3) {
    double lo = kInf, hi = -kInf;
    const auto& snaps = history->snapshots;
    for (std::size_t k = snaps.size() - 3; k < snaps.size(); ++k) {
      const double c = band_min_ratio(snaps[k], s, d_lo, d_hi);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    out.temporal_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(DichotomyVerdict v) noexcept {
  switch (v) {
    case DichotomyVerdict::identically_zero:
      return "identically-zero";
    case DichotomyVerdict::strictly_positive:
      return "strictly-positive";
    case DichotomyVerdict::violation:
      return "VIOLATION";
  }
  return "?";
}

CheckRecord DichotomyResult::record() const {
  std::string detail = "max=" + num(max_value) + " min_inner=" + num(min_inner);
  if (!offending.empty()) detail += " offending=" + std::to_string(offending.size());
  const double value = verdict == DichotomyVerdict::identically_zero ? max_value : min_inner;
  return make_record("dichotomy", value, tol, verdict != DichotomyVerdict::violation, to_string(verdict), detail);
}

DichotomyResult dichotomy_check(const SteadyProfile& phi, double tol) {
  require_converged(phi, "dichotomy_check");
  const double h = field_spacing(phi.field);
  DichotomyResult out;
  out.tol = tol;
  out.max_value = -kInf;
  out.min_inner = kInf;
  for_each_interior(phi.field, [&](std::size_t, double d, double v) {
    out.max_value = std::max(out.max_value, v);
    if (d >= 2.0 * h * (1.0 - 1e-12)) out.min_inner = std::min(out.min_inner, v);
  });
  if (out.max_value <= tol) {
    out.verdict = DichotomyVerdict::identically_zero;
  } else if (out.min_inner > tol) {
    out.verdict = DichotomyVerdict::strictly_positive;
  } else {
    out.verdict = DichotomyVerdict::violation;
    for_each_interior(phi.field, [&](std::size_t i, double d, double v) {
      if (d >= 2.0 * h * (1.0 - 1e-12) && v <= tol) out.offending.push_back(i);
    });
  }
  return out;
}

// ---------------------------------------------------------------------------

GridField to_grid(const RadialField& u, double h) {
  return GridField::sample(make_grid(u.dim(), h), [&](const Point& x) { return u.interpolate(x); });
}

GridField as_grid(const Field& u) {
  if (const auto* g = std::get_if<GridField>(&u)) return *g;
  const auto& r = std::get<RadialField>(u);
  return to_grid(r, r.spacing());
}

GridField reflected(const GridField& phi, const ReflectionSpec& spec) {
  const GridGeometry& geom = phi.geometry();
  spec.validate(geom.dim());
  return GridField::sample(phi.geometry_ptr(), [&](const Point& x) { return phi.interpolate(reflect_point(x, spec)); });
}

double SigmaField::min() const noexcept {
  double m = kInf;
  for (double v : values) m = std::min(m, v);
  return m;
}

std::size_t SigmaField::argmin_node() const {
  if (values.empty()) throw ContractViolation("empty reflection cap");
  return nodes[static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin())];
}

SigmaField reflect_field(const GridField& phi, const ReflectionSpec& spec) {
  const GridGeometry& geom = phi.geometry();
  spec.validate(geom.dim());
  SigmaField out;
  out.spec = spec;
  for (std::size_t i : geom.interior_nodes()) {
    const Point x = geom.point(i);
    if (!(x[spec.axis] < spec.alpha)) continue;
    out.nodes.push_back(i);
    out.values.push_back(phi.interpolate(reflect_point(x, spec)) - phi[i]);
  }
  return out;
}

CheckRecord MovingPlaneResult::record() const {
  double worst = kInf;
  double at = kNaN;
  std::size_t empties = 0;
  for (const auto& r : rows) {
    if (r.empty()) {
      ++empties;
      continue;
    }
    if (r.min_psi < worst) {
      worst = r.min_psi;
      at = r.alpha;
    }
  }
  std::string detail = "planes=" + std::to_string(rows.size()) + " worst_alpha=" + num(at);
  if (empties) detail += " empty=" + std::to_string(empties);
  if (asymmetry_detected) detail += " asymmetry detected";
  std::string verdict = passed ? "pass" : "fail";
  if (asymmetry_detected) verdict += " (asymmetry detected)";
  return make_record("moving_plane", std::isfinite(worst) ? worst : 0.0, -tol, passed, verdict, detail);
}

MovingPlaneResult moving_plane_scan(const GridField& phi, const std::vector<double>& alphas, double tol, int axis) {
  MovingPlaneResult out;
  out.tol = tol;
  // Below this a near-steady profile's leftover asymmetry is not reported.
  const double noise = 1e-6 * phi.max_abs();
  for (double alpha : alphas) {
    const SigmaField psi = reflect_field(phi, ReflectionSpec{alpha, axis});
    MovingPlaneRow row;
    row.alpha = alpha;
    row.nodes = psi.nodes.size();
    if (!psi.empty()) {
      row.min_psi = psi.min();
      row.argmin = phi.geometry().point(psi.argmin_node());
      if (row.min_psi < -tol) out.passed = false;
      if (row.min_psi < -noise) out.asymmetry_detected = true;
    }
    out.rows.push_back(row);
  }
  return out;
}

MovingPlaneResult moving_plane_scan(const SteadyProfile& phi, const std::vector<double>& alphas, double tol,
                                    int axis) {
  require_converged(phi, "moving_plane_scan");
  return moving_plane_scan(as_grid(phi.field), alphas, tol, axis);
}

// ---------------------------------------------------------------------------

std::size_t late_start(std::size_t count) noexcept {
  if (count == 0) return 0;
  const auto late = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(count)));
  return count - std::max<std::size_t>(1, late);
}

CheckRecord WSeries::record() const {
  const std::string detail = "alpha=" + num(spec.alpha) + " overall_min=" + num(overall_min) +
                             " late_min=" + num(late_min) + " late_threshold=" + num(-tol_w / 10.0);
  return make_record("antisymmetric_evolution", overall_min, -tol_w, passed, passed ? "pass" : "fail", detail);
}

namespace {

void check_w_precondition(const Field& u0, const ReflectionSpec& spec, double tol_w) {
  const double m = reflect_field(as_grid(u0), spec).min();
  if (m < -tol_w / 10.0) {
    throw ContractViolation("initial data violate w_alpha >= 0 for alpha = " + num(spec.alpha) +
                            " (min " + num(m) + ")");
  }
}

}  // namespace

WSeries antisymmetric_evolution_check(const Trajectory& traj, const ReflectionSpec& spec, double tol_w) {
  if (traj.snapshots.empty()) throw ContractViolation("trajectory holds no snapshot");
  check_w_precondition(traj.snapshots.front(), spec, tol_w);
  WSeries out;
  out.spec = spec;
  out.tol_w = tol_w;
  out.times = traj.times;
  for (const Field& f : traj.snapshots) out.min_w.push_back(reflect_field(as_grid(f), spec).min());
  out.overall_min = *std::min_element(out.min_w.begin(), out.min_w.end());
  out.late_min = *std::min_element(out.min_w.begin() + static_cast<std::ptrdiff_t>(late_start(out.min_w.size())),
                                   out.min_w.end());
  out.passed = out.overall_min >= -tol_w && out.late_min >= -tol_w / 10.0;
  return out;
}

WSeries antisymmetric_evolution_check(const SimulationConfig& config, const ReflectionSpec& spec, double tol_w) {
  check_w_precondition(make_initial_field(config), spec, tol_w);
  return antisymmetric_evolution_check(Solver(config).run().trajectory, spec, tol_w);
}

CheckRecord NarrowRegionResult::record() const {
  const std::string detail = "alpha=" + num(spec.alpha) + " delta=" + num(delta_strip) +
                             " strip_nodes=" + std::to_string(strip_nodes) +
                             " region_late_min=" + num(region_late_min);
  return make_record("narrow_region", strip_late_min, -tol_w, passed, passed ? "pass" : "fail", detail);
}

NarrowRegionResult narrow_region_check(const Trajectory& traj, const ReflectionSpec& spec, double delta_strip,
                                       double tol_w) {
  if (traj.snapshots.empty()) throw ContractViolation("trajectory holds no snapshot");
  const double h = field_spacing(traj.snapshots.front());
  if (delta_strip < h) throw ContractViolation("strip unresolved: delta_strip < h");
  check_w_precondition(traj.snapshots.front(), spec, tol_w);

  NarrowRegionResult out;
  out.spec = spec;
  out.delta_strip = delta_strip;
  out.tol_w = tol_w;
  out.strip_late_min = kInf;
  out.region_late_min = kInf;
  const std::size_t first_late = late_start(traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const GridField u = as_grid(traj.snapshots[k]);
    const SigmaField w = reflect_field(u, spec);
    std::vector<std::size_t> strip;
    for (std::size_t j = 0; j < w.nodes.size(); ++j) {
      if (u.geometry().point(w.nodes[j])[spec.axis] > spec.alpha - delta_strip) strip.push_back(j);
    }
    if (strip.empty()) throw ContractViolation("narrow strip contains no interior node");
    out.strip_nodes = strip.size();
    const double sm = field_min(w, &strip);
    out.strip_min.push_back(sm);
    if (k >= first_late) {
      out.strip_late_min = std::min(out.strip_late_min, sm);
      out.region_late_min = std::min(out.region_late_min, field_min(w));
    }
  }
  out.passed = out.strip_late_min >= -tol_w;
  return out;
}

NarrowRegionResult narrow_region_check(const SimulationConfig& config, const ReflectionSpec& spec,
                                       double delta_strip, double tol_w) {
  if (delta_strip < config.h) throw ContractViolation("strip unresolved: delta_strip < h");
  check_w_precondition(make_initial_field(config), spec, tol_w);
  return narrow_region_check(Solver(config).run().trajectory, spec, delta_strip, tol_w);
}

// ---------------------------------------------------------------------------

CheckRecord BarrierScanResult::record() const {
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, p.rel_change);
  for (const auto& p : trend) worst = std::max(worst, p.rel_change);
  std::string detail = "max_abs=" + num(max_abs) + " bound=" + num(bound);
  if (!increment_ratios.empty()) detail += " last_increment_ratio=" + num(increment_ratios.back());
  if (!no_growth) detail += " growth trend";
  if (reduced_accuracy) detail += " reduced quadrature accuracy (s >= 1 - 1/p)";
  return make_record("barrier_boundedness", worst, 0.05, passed, passed ? "pass" : "fail", detail);
}

std::vector<double> default_barrier_radii(double h) { return {0.0, 0.5, 0.9, 0.99, 1.0 - 4.0 * h}; }

BarrierScanResult barrier_boundedness_scan(const OperatorParams& params, const std::vector<double>& radii, double h,
                                           const QuadratureSpec& quad, int trend_levels) {
  params.validate();
  if (!(h > 0.0 && h < 0.25)) throw ValidationError("h", "h must lie in (0, 0.25)");
  if (trend_levels < 4) throw ValidationError("trend_levels", "trend needs at least 4 levels");
  const ScalarFieldFn phi = barrier_function(params.s);
  auto point = [&](double r) {
    if (!(r >= 0.0 && r < 1.0)) throw ValidationError("radii", "scan radii must lie in [0, 1)");
    const FunctionEvalResult res = eval_function_detailed(phi, Point{r, 0.0, 0.0}, params, quad);
    BarrierPoint bp;
    bp.radius = r;
    bp.value = res.value;
    bp.previous = res.previous;
    bp.depth = res.depth;
    bp.rel_change = res.value != 0.0 ? std::abs(res.value - res.previous) / std::abs(res.value)
                                     : std::abs(res.previous);
    return bp;
  };

  BarrierScanResult out;
  out.reduced_accuracy = params.reduced_accuracy_regime();
  for (double r : radii) out.points.push_back(point(r));
  double d = 4.0 * h;
  for (int k = 0; k < trend_levels; ++k, d *= 0.5) out.trend.push_back(point(1.0 - d));

  out.stable = true;
  for (const auto* set : {&out.points, &out.trend}) {
    for (const auto& p : *set) {
      out.max_abs = std::max(out.max_abs, std::abs(p.value));
      if (!(p.rel_change < 0.05)) out.stable = false;
    }
  }

  // Increments below the quadrature noise floor count as flat.
  std::vector<double> inc;
  for (std::size_t k = 0; k + 1 < out.trend.size(); ++k) {
    inc.push_back(std::abs(out.trend[k + 1].value - out.trend[k].value));
  }
  const double floor = std::max(10.0 * quad.eps_quad, 1e-12) * out.max_abs;
  for (std::size_t k = 0; k + 1 < inc.size(); ++k) {
    out.increment_ratios.push_back(inc[k] > 0.0 ? inc[k + 1] / inc[k] : (inc[k + 1] > 0.0 ? kInf : 0.0));
  }
  out.no_growth = true;
  for (std::size_t k = inc.size() - 3; k + 1 < inc.size(); ++k) {
    if (!(inc[k + 1] <= floor || inc[k + 1] < inc[k])) out.no_growth = false;
  }
  if (!(inc.back() > floor)) {
    out.bound = out.max_abs;
  } else if (out.no_growth) {
    const double rho = out.increment_ratios.back();
    out.bound = std::max(out.max_abs, std::abs(out.trend.back().value) + inc.back() * rho / (1.0 - rho));
  } else {
    out.bound = kInf;
  }
  out.passed = out.stable && out.no_growth;
  return out;
}

// ---------------------------------------------------------------------------

void SubsolutionSpec::validate(int n) const {
  if (!(r_d > 0.0 && r_d < 1.0)) throw ValidationError("r_d", "r_d must lie in (0, 1)");
  if (!(delta >= 0.0)) throw ValidationError("delta", "delta must be >= 0");
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ValidationError("eps0", "eps0 must lie in (0, 1)");
  if (!(eps > 0.0)) throw ValidationError("eps", "eps must be > 0");
  const double xb = norm(x_bar, n);
  if (xb - eps < r_d) throw ValidationError("x_bar", "B_eps(x_bar) must not meet D");
  if (xb + eps >= 1.0) throw ValidationError("x_bar", "B_eps(x_bar) must lie inside B_1");
  if (time_samples < 2) throw ValidationError("time_samples", "need at least two time samples");
  if (bisection_steps < 1) throw ValidationError("bisection_steps", "need at least one bisection step");
}

namespace {

double smoothstep5(double x) noexcept { return x * x * x * (x * (6.0 * x - 15.0) + 10.0); }
double smoothstep5_prime(double x) noexcept { return 30.0 * x * x * (x - 1.0) * (x - 1.0); }

}  // namespace

double SubsolutionSpec::eta(double t) const noexcept {
  const double tau = (std::abs(t - 1.0) - 0.5 * eps0) / (0.5 * eps0);
  if (tau <= 0.0) return 1.0;
  if (tau >= 1.0) return 0.0;
  return 1.0 - smoothstep5(tau);
}

double SubsolutionSpec::eta_prime(double t) const noexcept {
  const double tau = (std::abs(t - 1.0) - 0.5 * eps0) / (0.5 * eps0);
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  const double sign = t > 1.0 ? 1.0 : -1.0;
  return -smoothstep5_prime(tau) * sign / (0.5 * eps0);
}

CheckRecord SubsolutionResult::record() const {
  const std::string detail = "max_at_delta0=" + num(max_at_zero) + " delta_star=" + num(delta_star) +
                             " delta_hi=" + num(delta_hi) + " probes=" + std::to_string(probes.size());
  return make_record("subsolution", max_value, 0.0, passed, passed ? "pass" : "fail", detail);
}

namespace {

ScalarFieldFn subsolution_with_amplitude(std::shared_ptr<const Field> u_inf, double r_d, double s, double a) {
  ScalarFieldFn fn;
  const int n = field_dim(*u_inf);
  fn.value = [u_inf, r_d, s, a, n](const Point& y) {
    const double core = norm(y, n) < r_d ? field_value_at(*u_inf, y) : 0.0;
    return a == 0.0 ? core : core + a * barrier_phi(y, s);
  };
  fn.support_radius = 1.0;
  fn.interfaces = {r_d};
  fn.smoothness = ScalarFieldFn::Smoothness::holder_at_boundary;
  return fn;
}

}  // namespace

ScalarFieldFn subsolution_function(const Field& u_inf, const SubsolutionSpec& spec, double s, double t) {
  return subsolution_with_amplitude(std::make_shared<const Field>(u_inf), spec.r_d, s, spec.delta * spec.eta(t));
}

namespace {

/// Integral of fn over D = B_{r_d}(0) in polar coordinates: Gauss-Legendre
/// panels in the radius between `breaks`, periodic trapezoid in angle.
template <typename Fn>
double disk_integral(int n, const std::vector<double>& breaks, Fn&& fn) {
  const QuadratureRule& gl = gauss_legendre(8);
  NeumaierSum total;
  double lo = 0.0;
  for (double hi : breaks) {
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q];
      const double wr = 0.5 * (hi - lo) * gl.weights[q];
      double shell = 0.0;
      if (n == 1) {
        shell = fn(Point{rho, 0.0, 0.0}) + fn(Point{-rho, 0.0, 0.0});
      } else if (n == 2) {
        constexpr int kAngles = 256;
        for (int j = 0; j < kAngles; ++j) {
          const double th = 2.0 * std::numbers::pi * j / kAngles;
          shell += fn(Point{rho * std::cos(th), rho * std::sin(th), 0.0});
        }
        shell *= 2.0 * std::numbers::pi / kAngles * rho;
      } else {
        constexpr int kAzimuth = 96;
        const QuadratureRule& gm = gauss_legendre(48);
        for (std::size_t i = 0; i < gm.nodes.size(); ++i) {
          const double mu = gm.nodes[i];
          const double st = std::sqrt(1.0 - mu * mu);
          double ring = 0.0;
          for (int j = 0; j < kAzimuth; ++j) {
            const double ph = 2.0 * std::numbers::pi * j / kAzimuth;
            ring += fn(Point{rho * st * std::cos(ph), rho * st * std::sin(ph), rho * mu});
          }
          shell += gm.weights[i] * ring * (2.0 * std::numbers::pi / kAzimuth);
        }
        shell *= rho * rho;
      }
      total.add(wr * shell);
    }
    lo = hi;
  }
  return total.value();
}

std::vector<double> disk_breaks(const Field& u_inf, double r_d) {
  // Radial panel breaks follow the profile's own kinks.
  std::vector<double> breaks;
  if (const auto* r = std::get_if<RadialField>(&u_inf)) {
    for (double rk : r->radii()) {
      if (rk > 0.0 && rk < r_d) breaks.push_back(rk);
    }
  } else {
    const double step = 0.5 * field_spacing(u_inf);
    for (double rk = step; rk < r_d; rk += step) breaks.push_back(rk);
  }
  breaks.push_back(r_d);
  return breaks;
}

double sq_dist(const Point& x, const Point& y, int n) noexcept {
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += (x[d] - y[d]) * (x[d] - y[d]);
  return r2;
}

// For x outside D and a = delta eta(t) >= 0 the operator splits exactly:
//   L u_(x) = a^(p-1) (L Phi(x) - I_Phi(x)) + I_D(x, a)
// with I_Phi = int_D G(Phi(x) - Phi(y)) K and I_D = int_D G(a Phi(x) - u_inf(y) - a Phi(y)) K.
// Both D integrals have a smooth kernel because x stays away from D.
struct SplitOperator {
  const Field& u_inf;
  const OperatorParams& params;
  KernelSpec kernel;
  std::vector<double> breaks;
  int n;

  SplitOperator(const Field& u, double r_d, const OperatorParams& prm)
      : u_inf(u), params(prm), kernel(prm), breaks(disk_breaks(u, r_d)), n(field_dim(u)) {}

  double barrier_part(const Point& x, const QuadratureSpec& quad) const {
    const double s = params.s;
    const double phx = barrier_phi(x, s);
    const double inner = disk_integral(n, breaks, [&](const Point& y) {
      return g_power(phx - barrier_phi(y, s), params.p) * kernel(std::sqrt(sq_dist(x, y, n)));
    });
    return eval_function(barrier_function(s), x, params, quad) - inner;
  }

  double value(const Point& x, double a, double barrier) const {
    const double s = params.s;
    const double p = params.p;
    const double phx = barrier_phi(x, s);
    const double i_d = disk_integral(n, breaks, [&](const Point& y) {
      return g_power(a * phx - field_value_at(u_inf, y) - a * barrier_phi(y, s), p) *
             kernel(std::sqrt(sq_dist(x, y, n)));
    });
    return (a > 0.0 ? std::pow(a, p - 1.0) * barrier : 0.0) + i_d;
  }
};

void check_subsolution_inputs(const Field& u_inf, const SubsolutionSpec& spec, const OperatorParams& params) {
  const int n = field_dim(u_inf);
  if (params.n != n) throw ContractViolation("profile dimension does not match parameters");
  spec.validate(n);
  double min_d = kInf;
  for_each_interior(u_inf, [&](std::size_t, double d, double v) {
    if (1.0 - d < spec.r_d) min_d = std::min(min_d, v);
  });
  if (!(min_d > 0.0)) throw ContractViolation("u_inf must be positive on D");
}

}  // namespace

double subsolution_operator(const Field& u_inf, const SubsolutionSpec& spec, const OperatorParams& params,
                            const Point& x, double amplitude, const QuadratureSpec& quad) {
  check_subsolution_inputs(u_inf, spec, params);
  if (norm(x, params.n) <= spec.r_d) throw ContractViolation("subsolution_operator needs x outside D");
  if (!(amplitude >= 0.0)) throw ContractViolation("amplitude must be >= 0");
  const SplitOperator op(u_inf, spec.r_d, params);
  return op.value(x, amplitude, amplitude > 0.0 ? op.barrier_part(x, quad) : 0.0);
}

SubsolutionResult subsolution_comparison_test(const SteadyProfile& u_inf, const SubsolutionSpec& spec,
                                              const OperatorParams& params, const QuadratureSpec& quad) {
  check_subsolution_inputs(u_inf.field, spec, params);
  const int n = params.n;
  const double s = params.s;
  std::vector<Point> xs{spec.x_bar};
  for (int k = 0; k < n; ++k) {
    for (double sg : {0.5, -0.5}) {
      Point x = spec.x_bar;
      x[k] += sg * spec.eps;
      xs.push_back(x);
    }
  }
  std::vector<double> ts;
  for (int k = 0; k < spec.time_samples; ++k) {
    ts.push_back(1.0 - spec.eps0 + 2.0 * spec.eps0 * k / (spec.time_samples - 1));
  }
  const SplitOperator op(u_inf.field, spec.r_d, params);
  std::vector<double> barrier;
  for (const Point& x : xs) barrier.push_back(op.barrier_part(x, quad));
  auto operator_at = [&](std::size_t k, double a) { return op.value(xs[k], a, barrier[k]); };

  // L u_ depends on t only through a; cache per amplitude.
  auto max_for = [&](double delta) {
    std::map<double, std::vector<double>> by_amp;
    double worst = -kInf;
    for (double t : ts) {
      const double a = delta * spec.eta(t);
      auto it = by_amp.find(a);
      if (it == by_amp.end()) {
        std::vector<double> vals;
        for (std::size_t k = 0; k < xs.size(); ++k) vals.push_back(operator_at(k, a));
        it = by_amp.emplace(a, std::move(vals)).first;
      }
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dt_term = delta * spec.eta_prime(t) * barrier_phi(xs[k], s);
        worst = std::max(worst, dt_term + it->second[k]);
      }
    }
    return worst;
  };

  SubsolutionResult out;
  out.max_at_zero = max_for(0.0);
  out.max_value = spec.delta == 0.0 ? out.max_at_zero : max_for(spec.delta);
  out.delta_hi = 10.0 * field_max_abs(u_inf.field);
  const double at_hi = max_for(out.delta_hi);
  out.probes.emplace_back(out.delta_hi, at_hi);
  if (out.max_at_zero >= 0.0) {
    out.delta_star = 0.0;
  } else if (at_hi <= 0.0) {
    out.delta_star = out.delta_hi;
  } else {
    // Halve until the inequality holds, then bisect inside [hi / 2, hi].
    double hi = out.delta_hi;
    double lo = 0.5 * hi;
    for (int k = 0; k < 60; ++k) {
      const double m = max_for(lo);
      out.probes.emplace_back(lo, m);
      if (m <= 0.0) break;
      hi = lo;
      lo *= 0.5;
    }
    if (out.probes.back().second > 0.0) lo = 0.0;
    for (int k = 0; k < spec.bisection_steps && lo > 0.0; ++k) {
      const double mid = 0.5 * (lo + hi);
      const double m = max_for(mid);
      out.probes.emplace_back(mid, m);
      (m <= 0.0 ? lo : hi) = mid;
    }
    out.delta_star = lo;
  }
  out.passed = out.max_value <= 0.0 && out.max_at_zero < 0.0 && out.delta_star > 0.0;
  return out;
}

}  // namespace tfpl
