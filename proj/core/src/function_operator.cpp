#include "tfpl/function_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfpl/kernel.hpp"
#include "tfpl/quadrature.hpp"

namespace tfpl {

namespace {

constexpr double kPi = std::numbers::pi;

struct Direction {
  Point w;
  double weight;
};

// Full-sphere rule ordered so that dirs[i + H] = -dirs[i] for i < H = size / 2.
std::vector<Direction> directions(int n, int level) {
  std::vector<Direction> half;
  if (n == 1) {
    half.push_back({{1.0, 0.0, 0.0}, 1.0});
  } else if (n == 2) {
    const int N = 8 << level;
    for (int l = 0; l < N / 2; ++l) {
      const double t = (l + 0.5) * 2.0 * kPi / N;
      half.push_back({{std::cos(t), std::sin(t), 0.0}, 2.0 * kPi / N});
    }
  } else {
    const int nmu = std::min(128, 4 << (level / 2));
    const int naz = 2 * nmu;
    const auto& gl = gauss_legendre(nmu);
    for (int i = 0; i < nmu; ++i) {
      const double mu = gl.nodes[static_cast<std::size_t>(i)];
      if (mu <= 0.0) continue;
      const double st = std::sqrt(1.0 - mu * mu);
      for (int m = 0; m < naz; ++m) {
        const double ph = (m + 0.5) * 2.0 * kPi / naz;
        half.push_back({{st * std::cos(ph), st * std::sin(ph), mu},
                        gl.weights[static_cast<std::size_t>(i)] * 2.0 * kPi / naz});
      }
    }
  }
  std::vector<Direction> all = half;
  for (const auto& d : half) all.push_back({{-d.w[0], -d.w[1], -d.w[2]}, d.weight});
  return all;
}

Point along(const Point& x, const Point& w, double rho) noexcept {
  return {x[0] + rho * w[0], x[1] + rho * w[1], x[2] + rho * w[2]};
}

double dot(const Point& a, const Point& b) noexcept { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

ScalarFieldFn ScalarFieldFn::negated() const {
  ScalarFieldFn out = *this;
  auto inner = value;
  out.value = [inner](const Point& y) { return -inner(y); };
  return out;
}

double barrier_phi(const Point& x, double s) noexcept {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (r2 >= 1.0) return 0.0;
  return std::pow(1.0 - r2, s);
}

ScalarFieldFn barrier_function(double s, double amplitude) {
  ScalarFieldFn fn;
  fn.value = [s, amplitude](const Point& y) { return amplitude * barrier_phi(y, s); };
  fn.support_radius = 1.0;
  fn.smoothness = ScalarFieldFn::Smoothness::holder_at_boundary;
  return fn;
}

double eval_function_at_depth(const ScalarFieldFn& u, const Point& x, const OperatorParams& params,
                              const QuadratureSpec& quad, int depth) {
  const int n = params.n;
  if (n < 1 || n > 3) throw ValidationError("n", "function mode supports n in {1, 2, 3}");
  for (int d = n; d < 3; ++d) {
    if (x[d] != 0.0) throw ContractViolation("evaluation point has more coordinates than n");
  }
  const double rx = norm(x, n);
  if (!(rx < 1.0)) throw ContractViolation("eval_function requires |x| < 1");
  if (!(u.support_radius > 0.0 && u.support_radius <= 1.0)) {
    throw ContractViolation("support radius must lie in (0, 1]");
  }

  std::vector<double> spheres{u.support_radius};
  spheres.insert(spheres.end(), u.interfaces.begin(), u.interfaces.end());
  double clearance = std::abs(u.support_radius - rx);
  for (double R : u.interfaces) clearance = std::min(clearance, std::abs(R - rx));
  const double r0 = 0.5 * clearance;
  if (!(r0 > 0.0)) throw ContractViolation("evaluation point lies on an interface of u");

  const KernelSpec K(params);
  const double p = params.p;
  const double u0 = u.value(x);
  const auto dirs = directions(n, depth);
  const std::size_t H = dirs.size() / 2;

  // Inner ball: antipodal pairs on geometric shells [r0 2^-(j+1), r0 2^-j].
  // Deeper shells lose the paired second-order signal to roundoff, so the
  // count is fixed and the rest comes from the geometric remainder.
  const int panels = 16;
  const auto& gl = gauss_legendre(std::min(128, 4 + depth));
  NeumaierSum inner;
  double last = 0.0;
  double before_last = 0.0;
  for (int j = 0; j < panels; ++j) {
    const double hi = std::ldexp(r0, -j);
    const double lo = 0.5 * hi;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    NeumaierSum panel;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double rho = mid + half * gl.nodes[q];
      NeumaierSum ang;
      for (std::size_t i = 0; i < H; ++i) {
        const Point& w = dirs[i].w;
        const double a = u0 - u.value(along(x, w, rho));
        const double b = u0 - u.value(along(x, w, -rho));
        ang.add(dirs[i].weight * (g_power(a, p) + g_power(b, p)));
      }
      panel.add(half * gl.weights[q] * std::pow(rho, n - 1) * K(rho) * ang.value());
    }
    before_last = last;
    last = panel.value();
    inner.add(last);
  }
  // Geometric remainder for [0, r0 2^-panels].
  if (before_last != 0.0) {
    const double ratio = last / before_last;
    if (ratio > 0.0 && ratio < 0.999) inner.add(last * ratio / (1.0 - ratio));
  }

  // Outer region per direction: piecewise tanh-sinh in log(rho), then the exact tail.
  const double step = std::pow(0.5, 1.0 + 0.5 * depth);
  NeumaierSum outer;
  std::vector<double> breaks;
  for (const auto& dir : dirs) {
    const double b = dot(x, dir.w);
    const double c = rx * rx;
    breaks.clear();
    double exit = r0;
    for (std::size_t s = 0; s < spheres.size(); ++s) {
      const double R = spheres[s];
      const double disc = b * b - (c - R * R);
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      for (double root : {-b - sq, -b + sq}) {
        if (root > r0) {
          breaks.push_back(root);
          if (s == 0) exit = std::max(exit, root);
        }
      }
    }
    std::sort(breaks.begin(), breaks.end());
    NeumaierSum ray;
    double lo = r0;
    for (double br : breaks) {
      if (br > exit) break;
      if (br <= lo) continue;
      const QuadratureRule rule = tanh_sinh(std::log(lo), std::log(br), step);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double rho = std::exp(rule.nodes[q]);
        const double diff = u0 - u.value(along(x, dir.w, rho));
        if (diff == 0.0) continue;
        ray.add(rule.weights[q] * std::pow(rho, n) * K(rho) * g_power(diff, p));
      }
      lo = br;
    }
    if (u0 != 0.0) ray.add(g_power(u0, p) * K.radial_tail(exit, quad.tail_tolerance));
    outer.add(dir.weight * ray.value());
  }

  NeumaierSum total;
  total.add(inner.value());
  total.add(outer.value());
  return total.value();
}

FunctionEvalResult eval_function_detailed(const ScalarFieldFn& u, const Point& x,
                                          const OperatorParams& params,
                                          const QuadratureSpec& quad) {
  quad.validate();
  double prev = eval_function_at_depth(u, x, params, quad, quad.min_depth);
  double prev2 = prev;
  for (int k = quad.min_depth + 1; k <= quad.max_depth; ++k) {
    const double v = eval_function_at_depth(u, x, params, quad, k);
    if (std::abs(v - prev) <= quad.eps_quad * std::abs(v)) return {v, prev, k};
    prev2 = prev;
    prev = v;
  }
  throw QuadratureError("eval_function did not converge before max_depth", prev2, prev,
                        quad.max_depth);
}

double eval_function(const ScalarFieldFn& u, const Point& x, const OperatorParams& params,
                     const QuadratureSpec& quad) {
  return eval_function_detailed(u, x, params, quad).value;
}

}  // namespace tfpl
