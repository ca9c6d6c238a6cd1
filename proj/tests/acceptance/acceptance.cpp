// Acceptance run: one line per criterion, non-zero exit if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tfpl/diagnostics.hpp"
#include "tfpl/function_operator.hpp"
#include "tfpl/kernel.hpp"
#include "tfpl/quadrature.hpp"
#include "tfpl/snapshot.hpp"
#include "tfpl/solver.hpp"

using namespace tfpl;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  return (*hi - *lo) / std::abs(mean / static_cast<double>(v.size()));
}

SimulationConfig logistic_config(Layout layout, double h) {
  SimulationConfig c;
  c.params.n = 2;
  c.params.s = 0.5;
  c.params.p = 2.5;
  c.params.lambda = 0.1;
  c.params.f = TemperingFunction::identity();
  c.reaction = ReactionTerm::logistic();
  c.layout = layout;
  c.h = h;
  c.initial.kind = InitialDataSpec::Kind::barrier;
  c.initial.amplitude = 0.5;
  c.t_end = 60.0;
  c.tol_steady = 1e-6;
  return c;
}

// The radial h = 1/64 logistic run is shared by criteria 3, 4 and 5.
const RunResult& radial_run() {
  static const RunResult r = Solver(logistic_config(Layout::radial, 1.0 / 64)).run();
  return r;
}

const RunResult& grid_symmetric_run() {
  static const RunResult r = Solver(logistic_config(Layout::grid, 1.0 / 32)).run();
  return r;
}

const std::vector<double> kPlaneAlphas{-0.9, -0.7, -0.5, -0.3, -0.1, 0.0};
const std::vector<double> kReflectionAlphas{-0.5, -0.25, 0.0};

// 1. Oracle constancy for p = 2.
Outcome criterion1() {
  Outcome out{true, ""};
  const std::vector<Point> xs{{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}, {0.6, 0.0, 0.0}, {0.9, 0.0, 0.0}};
  const int k = 1;
  for (double s : {0.3, 0.5, 0.7}) {
    OperatorParams p;
    p.n = 2;
    p.s = s;
    p.p = 2.0;
    const ScalarFieldFn phi = barrier_function(s);
    std::vector<double> conv, lk, lk1;
    for (const Point& x : xs) {
      conv.push_back(eval_function(phi, x, p));
      lk.push_back(eval_function_at_depth(phi, x, p, {}, k));
      lk1.push_back(eval_function_at_depth(phi, x, p, {}, k + 1));
    }
    const double sp = spread(conv), a = spread(lk), b = spread(lk1);
    const bool ok = sp <= 0.02 && b <= 0.5 * a;
    out.passed &= ok;
    out.detail += fmt("s=%.1f spread=%.2e (tol 2e-2) depth%d->%d %.2e->%.2e; ", s, sp, k, k + 1, a, b);
  }
  return out;
}

// 2. Refinement-stable, non-growing operator values on the barrier.
Outcome criterion2() {
  struct Set {
    double p, s, lambda;
    TemperingFunction f;
  };
  const std::vector<Set> sets{{3.0, 0.5, 0.1, TemperingFunction::identity()},
                              {2.5, 0.4, 0.05, TemperingFunction::power(0.5)},
                              {4.0, 0.3, 0.0, TemperingFunction::zero()}};
  const double h = 1.0 / 64;
  Outcome out{true, ""};
  for (const Set& st : sets) {
    OperatorParams p;
    p.n = 2;
    p.p = st.p;
    p.s = st.s;
    p.lambda = st.lambda;
    p.f = st.f;
    const BarrierScanResult r = barrier_boundedness_scan(p, default_barrier_radii(h), h);
    double worst = 0.0;
    for (const auto& pt : r.points) worst = std::max(worst, pt.rel_change);
    for (const auto& pt : r.trend) worst = std::max(worst, pt.rel_change);
    const bool ok = r.stable && r.no_growth;
    out.passed &= ok;
    out.detail += fmt("(p=%.1f s=%.1f) max_rel_change=%.1e (tol 5e-2) last_ratio=%.2f %s; ", st.p, st.s, worst,
                      r.increment_ratios.empty() ? 0.0 : r.increment_ratios.back(), ok ? "ok" : "FAIL");
  }
  return out;
}

// 3. Hopf behaviour of the logistic steady state.
Outcome criterion3() {
  const RunResult& r64 = radial_run();
  const double s = 0.5;
  const SteadyProfile& phi = r64.steady;
  Outcome out;
  if (!phi.converged || !(phi.residual < 1e-6)) {
    out.detail = fmt("run not converged (residual %.2e)", phi.residual);
    return out;
  }
  const DichotomyResult dich = dichotomy_check(phi, 1e-8);
  const HopfResult hopf = hopf_ratio(phi, s, 2.0 / 64, 0.2, &r64.trajectory);
  const RunResult r96 = Solver(logistic_config(Layout::radial, 1.0 / 96)).run();
  if (!r96.steady.converged) {
    out.detail = "h = 1/96 run not converged";
    return out;
  }
  const HopfResult hopf96 = hopf_ratio(r96.steady, s, 2.0 / 96, 0.2);
  const double rel = std::abs(hopf.c_hat - hopf96.c_hat) / std::max(hopf.c_hat, hopf96.c_hat);
  double worst_normal = -INFINITY;
  for (const auto& nm : hopf.normals) worst_normal = std::max(worst_normal, nm.extrapolated);
  out.passed = dich.verdict == DichotomyVerdict::strictly_positive && hopf.c_hat > 0.0 &&
               hopf.all_normals_negative() && hopf96.all_normals_negative() && rel <= 0.2;
  out.detail = fmt("residual=%.2e dichotomy=%s c_hat(1/64)=%.5f c_hat(1/96)=%.5f rel_diff=%.3f (tol 0.2) "
                   "max_normal_derivative=%.5f (must be < 0)",
                   phi.residual, to_string(dich.verdict), hopf.c_hat, hopf96.c_hat, rel, worst_normal);
  return out;
}

// 4. Antisymmetric and narrow-region checks along the radial run.
Outcome criterion4() {
  const RunResult& run = radial_run();
  const double h = 1.0 / 64;
  Outcome out{true, ""};
  for (double alpha : kReflectionAlphas) {
    const WSeries w = antisymmetric_evolution_check(run.trajectory, {alpha, 0}, 10 * h);
    const NarrowRegionResult nr = narrow_region_check(run.trajectory, {alpha, 0}, 0.1, 10 * h);
    const bool ok = w.passed && nr.passed && w.overall_min >= -10 * h && w.late_min >= -h &&
                    nr.strip_late_min >= -h;
    out.passed &= ok;
    out.detail += fmt("a=%.2f min_w=%.2e late=%.2e strip_late=%.2e; ", alpha, w.overall_min, w.late_min,
                      nr.strip_late_min);
  }
  out.detail += fmt("(tol -10h=%.3g, late -h=%.3g)", -10 * h, -h);
  return out;
}

// 5. Subsolution inequality.
Outcome criterion5() {
  const RunResult& run = radial_run();
  SubsolutionSpec spec;
  spec.delta = 0.0;
  const SubsolutionResult r = subsolution_comparison_test(run.steady, spec, run.trajectory.config.params);
  bool below = true;
  for (const auto& [delta, value] : r.probes) {
    if (delta <= r.delta_star) below &= value <= 0.0;
  }
  Outcome out;
  out.passed = r.passed && r.max_at_zero < 0.0 && r.delta_star > 0.0 && below;
  out.detail = fmt("max(delta=0)=%.3e (must be < 0) delta*=%.3e probes=%zu all_probes_below=%s", r.max_at_zero,
                   r.delta_star, r.probes.size(), below ? "yes" : "no");
  return out;
}

// 6. Moving planes on the steady state, a symmetrizing bump run and its early snapshot.
Outcome criterion6() {
  const double h = 1.0 / 32;
  const double tol = 10 * h;
  const RunResult& sym = grid_symmetric_run();
  Outcome out;
  if (!sym.steady.converged) {
    out.detail = "symmetric grid run not converged";
    return out;
  }
  const MovingPlaneResult steady = moving_plane_scan(sym.steady, kPlaneAlphas, tol);

  SimulationConfig bc = logistic_config(Layout::grid, h);
  bc.initial.kind = InitialDataSpec::Kind::bump;
  bc.initial.center = {-0.3, 0.0, 0.0};
  bc.initial.radius = 0.6;
  const RunResult bump = Solver(bc).run();
  if (!bump.steady.converged) {
    out.detail = "bump run not converged";
    return out;
  }
  const double diff = field_max_diff(bump.steady.field, sym.steady.field);
  const MovingPlaneResult bump_scan = moving_plane_scan(bump.steady, kPlaneAlphas, tol);
  const std::size_t early_index = std::min<std::size_t>(1, bump.trajectory.snapshots.size() - 1);
  const MovingPlaneResult early =
      moving_plane_scan(as_grid(bump.trajectory.snapshots[early_index]), kPlaneAlphas, tol);
  double early_min = INFINITY, steady_min = INFINITY, bump_min = INFINITY;
  for (const auto& row : early.rows) early_min = std::min(early_min, row.min_psi);
  for (const auto& row : steady.rows) steady_min = std::min(steady_min, row.min_psi);
  for (const auto& row : bump_scan.rows) bump_min = std::min(bump_min, row.min_psi);
  const bool same_state = diff <= tol;
  out.passed = steady.passed && bump_scan.passed && same_state && early.asymmetry_detected && early_min < 0.0;
  out.detail = fmt("steady min_psi=%.2e bump-limit min_psi=%.2e (tol -%.3g) |bump-sym|=%.2e early(t=%.2f) "
                   "min_psi=%.3f (must be < 0)",
                   steady_min, bump_min, tol, diff, bump.trajectory.times[early_index], early_min);
  return out;
}

// 7. Structural properties.
Outcome criterion7() {
  std::string detail;
  bool all = true;
  auto note = [&](const char* name, bool ok) {
    all &= ok;
    detail += std::string(name) + (ok ? "=ok " : "=FAIL ");
  };

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  OperatorParams p;
  p.n = 2;
  p.s = 0.45;
  p.p = 3.2;
  p.lambda = 0.2;
  p.f = TemperingFunction::identity();

  {
    const auto g = make_grid(2, 1.0 / 24);
    const GridOperator op(g, p);
    const GridField u = GridField::sample(g, [&](const Point&) { return U(rng); });
    const GridField a = op.eval_all(u), b = op.eval_all(u.negated());
    bool odd = true;
    for (std::size_t i = 0; i < a.size(); ++i) odd &= b[i] == -a[i];
    const auto ur = RadialField::sample(2, 48, [&](double) { return U(rng); });
    const RadialOperator rop(ur, p);
    const RadialField ra = rop.eval_all(ur), rb = rop.eval_all(ur.negated());
    for (std::size_t i = 0; i < ra.size(); ++i) odd &= rb[i] == -ra[i];
    const ScalarFieldFn phi = barrier_function(p.s, 0.8);
    for (int depth : {1, 2, 4}) {
      odd &= eval_function_at_depth(phi.negated(), {0.2, 0.3, 0.0}, p, {}, depth) ==
             -eval_function_at_depth(phi, {0.2, 0.3, 0.0}, p, {}, depth);
    }
    note("oddness", odd);

    set_thread_count(1);
    const GridField t1 = op.eval_all(u);
    set_thread_count(4);
    const GridField t4 = op.eval_all(u);
    set_thread_count(1);
    note("thread_determinism", t1 == t4);

    const std::string text = format_snapshot(u, 1.0 / 3.0, p);
    const Snapshot back = parse_snapshot(text);
    note("snapshot_roundtrip", std::get<GridField>(back.field) == u && back.t == 1.0 / 3.0 &&
                                   format_snapshot(back.field, back.t, back.params) == text);
  }

  {
    SimulationConfig c = logistic_config(Layout::grid, 1.0 / 16);
    c.t_end = 2.0;
    c.initial.kind = InitialDataSpec::Kind::zero;
    const RunResult z = Solver(c).run();
    note("zero_fixed_point", field_max_abs(z.steady.field) == 0.0);

    c.initial.kind = InitialDataSpec::Kind::barrier;
    c.initial.amplitude = 0.6;
    // One fixed step, stable for |u| <= 1, so both runs share snapshot times.
    c.dt_policy = SimulationConfig::DtPolicy::fixed;
    c.dt = stable_dt(1.0, Solver(c).row_mass(), c.params, c.reaction, 0.01);
    const Solver solver(c);
    const GridField v0 = std::get<GridField>(solver.initial_field());
    GridField u0 = v0;
    for (std::size_t i : v0.geometry().interior_nodes()) u0.set(i, v0[i] * (0.5 + 0.5 * std::abs(U(rng))));
    const RunResult ru = solver.run(u0), rv = solver.run(v0);
    // Compare at matching snapshot times.
    bool ordered = ru.trajectory.times == rv.trajectory.times;
    for (std::size_t k = 0; ordered && k < ru.trajectory.snapshots.size(); ++k) {
      const auto& a = std::get<GridField>(ru.trajectory.snapshots[k]);
      const auto& b = std::get<GridField>(rv.trajectory.snapshots[k]);
      for (std::size_t i = 0; i < a.size(); ++i) ordered &= a[i] <= b[i] + 1e-10;
    }
    note("comparison", ordered);
    c.t_end = 0.5;
    c.dt_policy = SimulationConfig::DtPolicy::automatic;
    set_thread_count(1);
    const RunResult s1 = Solver(c).run();
    set_thread_count(3);
    const RunResult s3 = Solver(c).run();
    set_thread_count(1);
    note("run_determinism", std::get<GridField>(s1.steady.field) == std::get<GridField>(s3.steady.field));
  }

  {
    bool bound_ok = true;
    for (int draw = 0; draw < 50; ++draw) {
      OperatorParams q;
      q.n = 2 + draw % 2;
      q.s = 0.05 + 0.9 * (0.5 + 0.5 * U(rng));
      q.p = 2.0 + 3.0 * (0.5 + 0.5 * U(rng));
      q.lambda = 2.0 * (0.5 + 0.5 * U(rng));
      q.f = draw % 3 == 0 ? TemperingFunction::zero()
                          : (draw % 3 == 1 ? TemperingFunction::identity() : TemperingFunction::power(1.5));
      const KernelSpec k(q);
      const double R = 0.05 + 3.0 * (0.5 + 0.5 * U(rng));
      const double mass = sphere_area(q.n) * k.radial_tail(R, 1e-10);
      bound_ok &= mass <= tail_mass(R, k) * (1.0 + 1e-9);
    }
    note("tail_bound_50_draws", bound_ok);
  }
  return Outcome{all, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle constancy", 120.0, criterion1},
      {2, "barrier boundedness", 300.0, criterion2},
      {3, "asymptotic Hopf", 600.0, criterion3},
      {4, "antisymmetric and narrow region", 600.0, criterion4},
      {5, "subsolution inequality", 180.0, criterion5},
      {6, "moving-plane symmetry", 600.0, criterion6},
      {7, "structural suites", 120.0, criterion7},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  // Criteria 3-5 share one run; its cost is charged to the first that needs it.
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool ok = o.passed && in_time;
    failures += !ok;
    std::printf("criterion %d %-32s %s  %.1fs (limit %.0fs)  %s\n", c.id, c.name, ok ? "PASS" : "FAIL", secs,
                c.limit_seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
