#pragma once

#include <cstddef>
#include <vector>

#include "tfpl/field.hpp"
#include "tfpl/kernel.hpp"
#include "tfpl/params.hpp"

namespace tfpl {

/// Polar reduction of the operator for radial profiles u(x) = U(|x|), n = 2 or 3.
///
/// The radius axis is split into cells around the samples r_k (edges at the
/// midpoints, the first cell is [0, r_1 / 2]); U is constant on each cell and
/// zero beyond a = (r_{M-1} + 1) / 2. With x = r_j e_1,
///
///   L_j = sum_{k != j} G(U_j - U_k) W_jk + G(U_j) E_j,
///
/// W_jk = int_cell_k rho^(n-1) A(r_j, rho) d rho, A the kernel averaged over the
/// sphere of radius rho, and E_j the kernel mass outside the ball of radius a.
/// The cell containing x is omitted (its contribution has G(0) = 0).
class RadialOperator {
 public:
  RadialOperator(int n, std::vector<double> radii, const OperatorParams& params,
                 const QuadratureSpec& quad = {});
  /// Uses the layout of `like`.
  RadialOperator(const RadialField& like, const OperatorParams& params,
                 const QuadratureSpec& quad = {});

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return radii_.size(); }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }

  /// j must index a sample with r_j < 1.
  double eval(const RadialField& U, std::size_t j) const;
  RadialField eval_all(const RadialField& U) const;

  /// max over rows of sum_k W_jk + E_j.
  double row_mass() const noexcept { return row_mass_; }
  double weight(std::size_t j, std::size_t k) const { return w_[j * cells_ + k]; }
  double exterior_mass(std::size_t j) const { return exterior_[j]; }

  /// int over the unit sphere of K(|r e_1 - rho w|) dw.
  double angular_kernel(double r, double rho) const;
  /// Kernel mass outside the ball of radius `a` seen from r e_1, r < a.
  double exterior_kernel_mass(double r, double a) const;

 private:
  void check_field(const RadialField& U) const;

  int n_;
  std::vector<double> radii_;
  OperatorParams params_;
  QuadratureSpec quad_;
  KernelSpec kernel_;
  std::size_t cells_;
  std::vector<double> w_;  // cells_ x cells_
  std::vector<double> exterior_;
  double row_mass_ = 0.0;
};

double eval_radial(const RadialField& U, std::size_t j, const OperatorParams& params,
                   const QuadratureSpec& quad = {});

}  // namespace tfpl
