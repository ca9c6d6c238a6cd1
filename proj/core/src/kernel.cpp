#include "tfpl/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>

namespace tfpl {

double g_power_lipschitz(double U, double p) noexcept {
  U = std::abs(U);
  if (p == 2.0) return 1.0;
  return (p - 1.0) * std::pow(U, p - 2.0);
}

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area needs n >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

KernelSpec::KernelSpec(OperatorParams params)
    : params_(std::move(params)),
      exponent_(params_.n + params_.sp()),
      tempered_(params_.lambda != 0.0 && params_.f.kind() != TemperingFunction::Kind::zero) {
  params_.validate();
}

double KernelSpec::radial_tail(double rho, double rel_tol) const {
  if (!(rho > 0.0)) throw DomainError("radial_tail needs rho > 0");
  const double sp = params_.sp();
  const double base = params_.c_norm * std::pow(rho, -sp) / sp;
  if (!tempered_) return base;
  // r = rho e^(w / sp) turns the tail into base * int_0^inf e^(-lambda f(r(w))) e^(-w) dw.
  // e^-40 is far below any usable tolerance.
  const double lambda = params_.lambda;
  const auto& f = params_.f;
  auto integrand = [&](double w) { return std::exp(-lambda * f(rho * std::exp(w / sp)) - w); };
  const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, 40.0, 15, rel_tol);
  return base * I;
}

double kernel_weight(double r, const KernelSpec& spec) {
  if (!(r > 0.0)) throw DomainError("kernel_weight needs r > 0");
  return spec(r);
}

double tail_mass(double R, const KernelSpec& spec) {
  if (!(R > 0.0)) throw DomainError("tail_mass needs R > 0");
  const auto& p = spec.params();
  return sphere_area(p.n) * p.c_norm * std::exp(-p.lambda * p.f(R)) * std::pow(R, -p.sp()) / p.sp();
}

}  // namespace tfpl
