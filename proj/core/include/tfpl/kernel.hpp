#pragma once

#include <cmath>

#include "tfpl/params.hpp"

namespace tfpl {

/// G(t) = |t|^(p-2) t, with G(0) = 0 for every p >= 2.
inline double g_power(double t, double p) noexcept {
  if (t == 0.0) return 0.0;
  if (p == 2.0) return t;
  const double a = std::abs(t);
  if (p == 3.0) return a * t;
  if (p == 4.0) return a * a * t;
  if (p == 2.5) return std::sqrt(a) * t;
  return std::exp((p - 2.0) * std::log(a)) * t;
}

/// Derivative bound of G on [-U, U]: (p-1) U^(p-2).
double g_power_lipschitz(double U, double p) noexcept;

/// Surface area of the unit sphere in R^n (2 for n = 1).
double sphere_area(int n);

/// K(r) = c_norm exp(-lambda f(r)) r^-(n + s p).
class KernelSpec {
 public:
  explicit KernelSpec(OperatorParams params);

  const OperatorParams& params() const noexcept { return params_; }

  /// Caller guarantees r > 0.
  double operator()(double r) const noexcept {
    double k = params_.c_norm * std::pow(r, -exponent_);
    if (tempered_) k *= std::exp(-params_.lambda * params_.f(r));
    return k;
  }

  /// True when the tempering factor is identically 1.
  bool untempered() const noexcept { return !tempered_; }

  /// int_rho^inf K(r) r^(n-1) dr, i.e. the kernel mass outside radius rho per
  /// unit solid angle. Closed form when untempered, otherwise integrated to
  /// relative accuracy `rel_tol`.
  double radial_tail(double rho, double rel_tol = 1e-8) const;

 private:
  OperatorParams params_;
  double exponent_;
  bool tempered_;
};

/// Throws DomainError for r <= 0.
double kernel_weight(double r, const KernelSpec& spec);

/// Upper bound sigma_{n-1} c_norm e^(-lambda f(R)) R^(-sp) / (sp) on the kernel
/// mass outside radius R; exact when lambda = 0.
double tail_mass(double R, const KernelSpec& spec);

}  // namespace tfpl
