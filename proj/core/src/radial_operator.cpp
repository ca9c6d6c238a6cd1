#include "tfpl/radial_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tfpl/quadrature.hpp"

namespace tfpl {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

RadialOperator::RadialOperator(const RadialField& like, const OperatorParams& params,
                               const QuadratureSpec& quad)
    : RadialOperator(like.dim(), std::vector<double>(like.radii().begin(), like.radii().end()),
                     params, quad) {}

RadialOperator::RadialOperator(int n, std::vector<double> radii, const OperatorParams& params,
                               const QuadratureSpec& quad)
    : n_(n), radii_(std::move(radii)), params_(params), quad_(quad), kernel_(params) {
  quad_.validate();
  if (n_ != 2 && n_ != 3) throw ValidationError("n", "radial mode supports n = 2 or n = 3");
  if (params_.n != n_) throw ContractViolation("operator dimension does not match radial field");
  // Reuse the field's layout checks.
  (void)RadialField(n_, radii_, std::vector<double>(radii_.size(), 0.0));

  cells_ = radii_.size() - 1;  // samples with r < 1
  std::vector<double> edge(cells_ + 1);
  edge[0] = 0.0;
  for (std::size_t k = 1; k < cells_; ++k) edge[k] = 0.5 * (radii_[k - 1] + radii_[k]);
  edge[cells_] = 0.5 * (radii_[cells_ - 1] + 1.0);
  const double a = edge[cells_];
  const double sigma = sphere_area(n_);
  const double tol = quad_.tail_tolerance;
  const auto& gl8 = gauss_legendre(8);

  w_.assign(cells_ * cells_, 0.0);
  exterior_.assign(cells_, 0.0);

  // Row 0: the distance is rho itself, so cell weights are exact tail differences.
  {
    std::vector<double> tails(cells_ + 1);
    for (std::size_t k = 1; k <= cells_; ++k) tails[k] = kernel_.radial_tail(edge[k], tol);
    for (std::size_t k = 1; k < cells_; ++k) w_[k] = sigma * (tails[k] - tails[k + 1]);
    exterior_[0] = sigma * tails[cells_];
  }

  parallel_for(cells_ - 1, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t jj = begin; jj < end; ++jj) {
      const std::size_t j = jj + 1;
      const double r = radii_[j];
      for (std::size_t k = 0; k < cells_; ++k) {
        if (k == j) continue;
        const double lo = edge[k];
        const double hi = edge[k + 1];
        const std::size_t gap = k > j ? k - j : j - k;
        double wjk = 0.0;
        if (gap <= 2 || k == 0) {
          // Near cells: the ring integrand varies like |r - rho|^-(1+sp) across the cell.
          const double mid = 0.5 * (lo + hi);
          const double half = 0.5 * (hi - lo);
          for (std::size_t q = 0; q < gl8.nodes.size(); ++q) {
            const double rho = mid + half * gl8.nodes[q];
            wjk += half * gl8.weights[q] * std::pow(rho, n_ - 1) * angular_kernel(r, rho);
          }
        } else {
          const double vol = (std::pow(hi, n_) - std::pow(lo, n_)) / n_;
          wjk = vol * angular_kernel(r, radii_[k]);
        }
        w_[j * cells_ + k] = wjk;
      }
      exterior_[j] = exterior_kernel_mass(r, a);
    }
  });

  for (std::size_t j = 0; j < cells_; ++j) {
    double m = exterior_[j];
    for (std::size_t k = 0; k < cells_; ++k) m += w_[j * cells_ + k];
    row_mass_ = std::max(row_mass_, m);
  }
}

double RadialOperator::angular_kernel(double r, double rho) const {
  if (r == 0.0 || rho == 0.0) return sphere_area(n_) * kernel_(std::max(r, rho));
  const auto& gl = gauss_legendre(6);
  const double uniform = 2.0 * kPi / quad_.angular_points;
  const double dr2 = (r - rho) * (r - rho);
  const double c = 4.0 * r * rho;
  double w = std::clamp(std::abs(r - rho) / std::sqrt(r * rho), 1e-12, uniform);
  double theta = 0.0;
  double sum = 0.0;
  while (theta < kPi) {
    const double b = std::min(kPi, theta + w);
    const double mid = 0.5 * (theta + b);
    const double half = 0.5 * (b - theta);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = mid + half * gl.nodes[q];
      const double sn = std::sin(0.5 * t);
      double f = kernel_(std::sqrt(dr2 + c * sn * sn));
      if (n_ == 3) f *= std::sin(t);
      sum += half * gl.weights[q] * f;
    }
    theta = b;
    w = std::min(2.0 * w, uniform);
  }
  return n_ == 2 ? 2.0 * sum : 2.0 * kPi * sum;
}

double RadialOperator::exterior_kernel_mass(double r, double a) const {
  const double tol = quad_.tail_tolerance;
  if (r == 0.0) return sphere_area(n_) * kernel_.radial_tail(a, tol);
  if (!(r < a)) throw ContractViolation("exterior mass needs r < a");
  const auto& gl = gauss_legendre(8);
  const double cap = kPi / 32.0;
  double w = std::clamp((a - r) / a, 1e-9, cap);
  double theta = 0.0;
  double sum = 0.0;
  while (theta < kPi) {
    const double b = std::min(kPi, theta + w);
    const double mid = 0.5 * (theta + b);
    const double half = 0.5 * (b - theta);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = mid + half * gl.nodes[q];
      const double st = r * std::sin(t);
      const double exit = -r * std::cos(t) + std::sqrt(a * a - st * st);
      double f = kernel_.radial_tail(exit, tol);
      if (n_ == 3) f *= std::sin(t);
      sum += half * gl.weights[q] * f;
    }
    theta = b;
    w = std::min(2.0 * w, cap);
  }
  return n_ == 2 ? 2.0 * sum : 2.0 * kPi * sum;
}

void RadialOperator::check_field(const RadialField& U) const {
  if (U.dim() != n_ || U.size() != radii_.size() ||
      !std::equal(radii_.begin(), radii_.end(), U.radii().begin())) {
    throw ContractViolation("radial field layout does not match operator");
  }
}

double RadialOperator::eval(const RadialField& U, std::size_t j) const {
  check_field(U);
  if (j >= cells_) throw ContractViolation("eval_radial is undefined at r = 1");
  const double p = params_.p;
  const double uj = U[j];
  const double* row = w_.data() + j * cells_;
  double acc = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) {
    if (k == j) continue;
    acc += g_power(uj - U[k], p) * row[k];
  }
  acc += g_power(uj, p) * exterior_[j];
  return acc;
}

RadialField RadialOperator::eval_all(const RadialField& U) const {
  check_field(U);
  std::vector<double> out(radii_.size(), 0.0);
  for (std::size_t j = 0; j < cells_; ++j) out[j] = eval(U, j);
  return RadialField(n_, radii_, std::move(out));
}

double eval_radial(const RadialField& U, std::size_t j, const OperatorParams& params,
                   const QuadratureSpec& quad) {
  return RadialOperator(U, params, quad).eval(U, j);
}

}  // namespace tfpl
