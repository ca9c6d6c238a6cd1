#include <catch_amalgamated.hpp>

#include <cmath>

#include "tfpl/diagnostics.hpp"

using namespace tfpl;

namespace {

SteadyProfile converged(Field f) { return SteadyProfile{std::move(f), 10.0, 0.0, true, "test"}; }

RadialField scaled_barrier(int M, double s, double c) {
  return RadialField::sample(2, M, [&](double r) { return c * std::pow(1.0 - r * r, s); });
}

GridField grid_bump(double h, double cx, double amplitude = 1.0) {
  return GridField::sample(make_grid(2, h), [&](const Point& x) {
    const double q = 1.0 - ((x[0] - cx) * (x[0] - cx) + x[1] * x[1]) / 0.36;
    return q > 0.0 ? amplitude * q * q : 0.0;
  });
}

}  // namespace

TEST_CASE("band ratio of a scaled barrier") {
  const double s = 0.5, c = 0.3;
  const RadialField u = scaled_barrier(64, s, c);
  std::size_t count = 0;
  double at = 0.0;
  const double ratio = band_min_ratio(u, s, 2.0 / 64, 0.2, &count, &at);
  // phi / d^s = c (1 + r)^s, smallest at the innermost band node d = 12/64.
  CHECK(ratio == Catch::Approx(c * std::pow(2.0 - 0.1875, s)).epsilon(1e-12));
  CHECK(at == Catch::Approx(0.1875));
  CHECK(count == 11);
  CHECK_THROWS_AS(band_min_ratio(u, s, 0.50001, 0.5001), ContractViolation);
}

TEST_CASE("Hopf ratio on analytic profiles") {
  const double s = 0.5;
  const auto prof = converged(scaled_barrier(64, s, 0.3));
  const HopfResult r = hopf_ratio(prof, s, 2.0 / 64, 0.2);
  CHECK(r.c_hat > 0.0);
  CHECK_FALSE(r.trivial);
  REQUIRE(r.normals.size() == 1);
  CHECK(r.all_normals_negative());
  CHECK(r.normals[0].extrapolated == Catch::Approx(-0.3 * std::pow(2.0, s)).epsilon(0.05));
  CHECK(r.record().passed);

  CHECK_THROWS_AS(hopf_ratio(prof, s, 1.0 / 64, 0.2), ContractViolation);
  SteadyProfile running = prof;
  running.converged = false;
  CHECK_THROWS_AS(hopf_ratio(running, s, 2.0 / 64, 0.2), ContractViolation);

  const HopfResult z = hopf_ratio(converged(RadialField::uniform(2, 64)), s, 2.0 / 64, 0.2);
  CHECK(z.trivial);
  CHECK(z.record().passed);

  const auto grid = converged(to_grid(scaled_barrier(64, s, 0.3), 1.0 / 32));
  const HopfResult g = hopf_ratio(grid, s, 2.0 / 32, 0.2);
  CHECK(g.normals.size() == 8);
  CHECK(g.all_normals_negative());
}

TEST_CASE("dichotomy verdicts") {
  CHECK(dichotomy_check(converged(RadialField::uniform(2, 32)), 1e-8).verdict == DichotomyVerdict::identically_zero);
  CHECK(dichotomy_check(converged(scaled_barrier(32, 0.5, 0.2)), 1e-8).verdict ==
        DichotomyVerdict::strictly_positive);
  RadialField hole = scaled_barrier(32, 0.5, 0.2);
  hole.set(10, 0.0);
  const DichotomyResult v = dichotomy_check(converged(hole), 1e-8);
  CHECK(v.verdict == DichotomyVerdict::violation);
  CHECK(v.offending == std::vector<std::size_t>{10});
  CHECK_FALSE(v.record().passed);
  CHECK(std::string(to_string(DichotomyVerdict::strictly_positive)) == "strictly-positive");
}

TEST_CASE("radial resampling") {
  const RadialField u = scaled_barrier(32, 0.5, 1.0);
  const GridField g = to_grid(u, 1.0 / 32);
  CHECK(g[g.geometry().index({0, 0, 0})] == Catch::Approx(1.0));
  CHECK(g[g.geometry().index({16, 0, 0})] == Catch::Approx(u.value_at_radius(0.5)));
  CHECK(as_grid(Field(g)) == g);
}

TEST_CASE("reflections of radial profiles are nonnegative on caps") {
  const GridField g = to_grid(scaled_barrier(32, 0.5, 1.0), 1.0 / 32);
  for (double alpha : {-0.7, -0.3, 0.0}) {
    const SigmaField sig = reflect_field(g, {alpha, 0});
    REQUIRE_FALSE(sig.empty());
    CHECK(sig.min() >= -1e-12);
  }
  const GridField r = reflected(g, {0.0, 1});
  for (std::size_t i : g.geometry().interior_nodes()) CHECK(r[i] == Catch::Approx(g[i]).margin(1e-14));
}

TEST_CASE("moving-plane scan detects asymmetry") {
  const double h = 1.0 / 32;
  const auto sym = converged(grid_bump(h, 0.0));
  const MovingPlaneResult ok = moving_plane_scan(sym, {-0.9, -0.5, -0.1, 0.0}, 10 * h);
  CHECK(ok.passed);
  CHECK_FALSE(ok.asymmetry_detected);
  CHECK(ok.rows.size() == 4);

  const MovingPlaneResult bad = moving_plane_scan(grid_bump(h, -0.3), {-0.5, -0.1, 0.0}, 10 * h);
  CHECK(bad.asymmetry_detected);
  CHECK(bad.rows.back().min_psi < -0.3);
  CHECK_FALSE(bad.passed);
  CHECK(bad.rows.back().argmin[0] < 0.0);

  SteadyProfile running = sym;
  running.converged = false;
  CHECK_THROWS_AS(moving_plane_scan(running, {0.0}, 10 * h), ContractViolation);
}

TEST_CASE("late window") {
  CHECK(late_start(1) == 0);
  CHECK(late_start(3) == 2);
  CHECK(late_start(10) == 8);
  CHECK(late_start(41) == 32);
}

TEST_CASE("antisymmetric check preconditions") {
  SimulationConfig c;
  c.params.p = 2.5;
  c.reaction = ReactionTerm::logistic();
  c.h = 1.0 / 16;
  c.t_end = 0.5;
  c.initial.kind = InitialDataSpec::Kind::bump;
  c.initial.center = {-0.3, 0.0, 0.0};
  c.initial.radius = 0.6;
  CHECK_THROWS_AS(antisymmetric_evolution_check(c, {0.0, 0}, 10 * c.h), ContractViolation);
  c.initial.center = {0.3, 0.0, 0.0};
  const WSeries w = antisymmetric_evolution_check(c, {0.0, 0}, 10 * c.h);
  CHECK(w.times.size() == w.min_w.size());
  CHECK(w.passed);
  CHECK_THROWS_AS(narrow_region_check(c, {0.0, 0}, c.h / 2, 10 * c.h), ContractViolation);
}

TEST_CASE("subsolution cutoff and spec validation") {
  SubsolutionSpec spec;
  REQUIRE_NOTHROW(spec.validate(2));
  CHECK(spec.eta(1.0) == 1.0);
  CHECK(spec.eta(1.0 + spec.eps0 / 2) == 1.0);
  CHECK(spec.eta(1.0 - spec.eps0) == 0.0);
  CHECK(spec.eta(1.6) == 0.0);
  const double t = 0.6, dt = 1e-6;
  CHECK(spec.eta_prime(t) == Catch::Approx((spec.eta(t + dt) - spec.eta(t - dt)) / (2 * dt)).epsilon(1e-5));
  for (double x = 0.5; x < 1.5; x += 0.01) {
    CHECK(spec.eta(x) >= 0.0);
    CHECK(spec.eta(x) <= 1.0);
  }

  SubsolutionSpec bad = spec;
  bad.x_bar = {0.35, 0.0, 0.0};
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
  bad = spec;
  bad.eps0 = 1.0;
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
  bad = spec;
  bad.x_bar = {0.95, 0.0, 0.0};
  CHECK_THROWS_AS(bad.validate(2), ValidationError);
}

TEST_CASE("split subsolution operator matches the generic evaluator") {
  OperatorParams p;
  p.s = 0.5;
  p.p = 2.5;
  const RadialField u = scaled_barrier(64, 0.5, 0.02);
  SubsolutionSpec spec;
  spec.delta = 0.01;
  const Point x{0.65, 0.0, 0.0};
  const double split = subsolution_operator(u, spec, p, x, spec.delta);
  // eta(1) = 1, so at t = 1 the generic form carries exactly delta Phi.
  const ScalarFieldFn f = subsolution_function(u, spec, p.s, 1.0);
  QuadratureSpec loose;
  loose.eps_quad = 1e-4;
  const double generic = eval_function_at_depth(f, x, p, loose, 6);
  CHECK(split == Catch::Approx(generic).epsilon(1e-3));
  CHECK_THROWS_AS(subsolution_operator(u, spec, p, {0.1, 0.0, 0.0}, spec.delta), ContractViolation);
}

TEST_CASE("barrier scan returns finite trend") {
  OperatorParams p;
  p.s = 0.3;
  p.p = 3.0;
  const double h = 1.0 / 32;
  const BarrierScanResult r = barrier_boundedness_scan(p, {0.0, 0.5}, h, {}, 4);
  CHECK(r.points.size() == 2);
  CHECK(r.trend.size() == 4);
  CHECK(r.increment_ratios.size() == 2);
  for (const auto& pt : r.points) CHECK(std::isfinite(pt.value));
  CHECK(r.stable);
  CHECK(default_barrier_radii(h).back() == Catch::Approx(1.0 - 4 * h));
}
