#include "cli/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "tfpl/function_operator.hpp"
#include "tfpl/kernel.hpp"

namespace tfpl::cli {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  return (*hi - *lo) / std::abs(mean);
}

// Independent reference for int_rho^inf K(r) r^(n-1) dr.
double reference_tail(const KernelSpec& k, double rho) {
  const int n = k.params().n;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double t) {
    const double r = rho + t;
    return k(r) * std::pow(r, n - 1);
  };
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
}

CheckRecord make(std::string name, double value, double threshold, bool passed, std::string detail = {}) {
  CheckRecord r;
  r.name = std::move(name);
  r.value = value;
  r.threshold = threshold;
  r.passed = passed;
  r.verdict = passed ? "pass" : "fail";
  r.detail = std::move(detail);
  return r;
}

}  // namespace

double barrier_constant_p2(int n, double s, double c_norm) {
  const double pi = std::numbers::pi;
  return c_norm * std::pow(pi, 0.5 * n + 1.0) / (std::tgamma(0.5 * n) * std::sin(pi * s));
}

DiagnosticsReport run_oracle_suite(const OracleOptions& opts) {
  DiagnosticsReport report;
  report.metadata["oracle_points"] = std::to_string(opts.points.size());

  for (double s : opts.s_values) {
    OperatorParams params;
    params.n = 2;
    params.s = s;
    params.p = 2.0;
    const ScalarFieldFn phi = barrier_function(s);
    std::vector<double> converged, level1, level2;
    for (std::size_t i = 0; i < opts.points.size(); ++i) {
      OperatorParams pi = params;
      if (opts.force_failure && i == 2) pi.c_norm *= 1.1;
      converged.push_back(eval_function(phi, opts.points[i], pi, opts.quad));
      level1.push_back(eval_function_at_depth(phi, opts.points[i], pi, opts.quad, opts.refine_depth));
      level2.push_back(eval_function_at_depth(phi, opts.points[i], pi, opts.quad, opts.refine_depth + 1));
    }
    const std::string tag = fmt("s=%.3g", s);
    const double sp = spread(converged);
    report.add(make("oracle_constancy_" + tag, sp, 0.02, sp <= 0.02, fmt("mean value %.10g", converged[0])));

    const double exact = barrier_constant_p2(2, s);
    double worst = 0.0;
    for (double v : converged) worst = std::max(worst, std::abs(v - exact) / exact);
    report.add(make("oracle_closed_form_" + tag, worst, 1e-5, worst <= 1e-5, fmt("exact %.10g", exact)));

    const double s1 = spread(level1), s2 = spread(level2);
    const double ratio = s1 > 0.0 ? s2 / s1 : 0.0;
    report.add(make("oracle_refinement_" + tag, ratio, 0.5, ratio <= 0.5,
                    fmt("spread %.3g", s1) + fmt(" -> %.3g", s2)));
  }

  {
    OperatorParams params;
    params.n = 3;
    params.s = 0.4;
    params.p = 3.0;
    params.lambda = 0.7;
    params.f = TemperingFunction::identity();
    params.c_norm = 1.3;
    const KernelSpec k(params);
    double worst = 0.0;
    for (double r : {1e-3, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double expect = 1.3 * std::exp(-0.7 * r) * std::pow(r, -(3.0 + 0.4 * 3.0));
      worst = std::max(worst, std::abs(k(r) - expect) / expect);
    }
    report.add(make("kernel_closed_form", worst, 1e-13, worst <= 1e-13));
  }

  {
    double worst = 0.0;
    for (int n : {2, 3}) {
      const double exact = n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
      worst = std::max(worst, std::abs(sphere_area(n) - exact) / exact);
    }
    report.add(make("sphere_area", worst, 1e-15, worst <= 1e-15));
  }

  {
    // Tails: random parameters, comparison against exp-sinh integration,
    // and the closed-form bound sigma c e^(-lambda f(R)) R^-sp / sp.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst_tail = 0.0, worst_bound = -INFINITY;
    for (int draw = 0; draw < opts.tail_draws; ++draw) {
      OperatorParams params;
      params.n = U(rng) < 0.5 ? 2 : 3;
      params.s = 0.1 + 0.8 * U(rng);
      params.p = 2.0 + 2.0 * U(rng);
      params.lambda = 2.0 * U(rng);
      params.f = U(rng) < 0.5 ? TemperingFunction::identity() : TemperingFunction::power(0.5 + U(rng));
      params.c_norm = 0.5 + U(rng);
      const KernelSpec k(params);
      const double rho = 0.05 + 2.0 * U(rng);
      const double ref = reference_tail(k, rho);
      worst_tail = std::max(worst_tail, std::abs(k.radial_tail(rho) - ref) / ref);
      const double mass = sphere_area(params.n) * ref;
      worst_bound = std::max(worst_bound, (mass - tail_mass(rho, k)) / mass);
    }
    report.add(make("kernel_tail_reference", worst_tail, 1e-6, worst_tail <= 1e-6,
                    std::to_string(opts.tail_draws) + " random draws"));
    report.add(make("kernel_tail_bound", worst_bound, 1e-12, worst_bound <= 1e-12,
                    "max relative excess of the true mass over the bound"));
  }
  return report;
}

}  // namespace tfpl::cli
