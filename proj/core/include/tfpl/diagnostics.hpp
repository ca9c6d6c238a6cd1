#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tfpl/core_types.hpp"
#include "tfpl/function_operator.hpp"
#include "tfpl/solver.hpp"

namespace tfpl {

// ---------------------------------------------------------------------------
// Boundary behaviour of a steady profile.
// ---------------------------------------------------------------------------

/// phi(x0 - tau nu) / tau^s sampled along one outward normal nu (x0 = nu).
struct NormalEstimate {
  Point direction{0.0, 0.0, 0.0};
  std::array<double, 3> tau{};
  /// -phi(x0 - tau nu) / tau^s, so a positive profile gives negative values.
  std::array<double, 3> quotient{};
  /// Least-squares intercept at tau = 0.
  double extrapolated = 0.0;
};

struct HopfResult {
  double d_lo = 0.0;
  double d_hi = 0.0;
  /// min phi / d^s over nodes with d in [d_lo, d_hi].
  double c_hat = 0.0;
  std::size_t band_nodes = 0;
  double argmin_distance = 0.0;
  std::vector<NormalEstimate> normals;
  /// c_hat == 0: the profile does not separate from the boundary.
  bool trivial = false;
  /// (max - min) / max of c_hat over the last three stored snapshots; NaN if not computed.
  double temporal_spread = std::numeric_limits<double>::quiet_NaN();

  bool all_normals_negative() const noexcept;
  CheckRecord record() const;
};

/// min phi(x) / d(x)^s over interior samples with d(x) in [d_lo, d_hi].
/// Throws ContractViolation when the band holds no sample.
double band_min_ratio(const Field& phi, double s, double d_lo, double d_hi,
                      std::size_t* count = nullptr, double* argmin_distance = nullptr);

/// Requires a converged profile and d_lo >= 2 h. If `history` is given the
/// ratio is also evaluated on its last three snapshots.
HopfResult hopf_ratio(const SteadyProfile& phi, double s, double d_lo, double d_hi,
                      const Trajectory* history = nullptr);

enum class DichotomyVerdict { identically_zero, strictly_positive, violation };
const char* to_string(DichotomyVerdict v) noexcept;

struct DichotomyResult {
  DichotomyVerdict verdict = DichotomyVerdict::violation;
  double max_value = 0.0;
  /// Minimum over interior samples with d >= 2 h.
  double min_inner = 0.0;
  double tol = 0.0;
  /// Sample indices with d >= 2 h and value <= tol (violation only).
  std::vector<std::size_t> offending;

  CheckRecord record() const;
};

/// Requires a converged profile.
DichotomyResult dichotomy_check(const SteadyProfile& phi, double tol);

// ---------------------------------------------------------------------------
// Reflections and moving planes.
// ---------------------------------------------------------------------------

/// Samples a radial profile on the Cartesian grid of spacing h.
GridField to_grid(const RadialField& u, double h);
/// Grid fields pass through; radial fields are sampled at their own spacing.
GridField as_grid(const Field& u);

/// phi(x^alpha) at every interior node, by multilinear interpolation.
/// Reflections landing outside B_1 give 0.
GridField reflected(const GridField& phi, const ReflectionSpec& spec);

/// psi_alpha = phi(x^alpha) - phi(x) on the interior nodes with x_axis < alpha.
struct SigmaField {
  ReflectionSpec spec;
  std::vector<std::size_t> nodes;
  std::vector<double> values;

  bool empty() const noexcept { return nodes.empty(); }
  /// +inf on an empty set.
  double min() const noexcept;
  std::size_t argmin_node() const;
};

SigmaField reflect_field(const GridField& phi, const ReflectionSpec& spec);

struct MovingPlaneRow {
  double alpha = 0.0;
  std::size_t nodes = 0;
  /// NaN when no node lies in the cap.
  double min_psi = std::numeric_limits<double>::quiet_NaN();
  Point argmin{0.0, 0.0, 0.0};
  bool empty() const noexcept { return nodes == 0; }
};

struct MovingPlaneResult {
  std::vector<MovingPlaneRow> rows;
  double tol = 0.0;
  bool passed = true;
  /// Some minimum is below -1e-6 max|phi|. Informational.
  bool asymmetry_detected = false;

  CheckRecord record() const;
};

/// Works on any grid field, converged or not.
MovingPlaneResult moving_plane_scan(const GridField& phi, const std::vector<double>& alphas, double tol,
                                    int axis = 0);
/// Requires a converged profile.
MovingPlaneResult moving_plane_scan(const SteadyProfile& phi, const std::vector<double>& alphas,
                                    double tol, int axis = 0);

// ---------------------------------------------------------------------------
// Antisymmetric function w_alpha(x, t) = u(x^alpha, t) - u(x, t) along a run.
// ---------------------------------------------------------------------------

struct WSeries {
  ReflectionSpec spec;
  double tol_w = 0.0;
  std::vector<double> times;
  std::vector<double> min_w;
  double overall_min = 0.0;
  /// Minimum over the final 20% of snapshots.
  double late_min = 0.0;
  bool passed = false;

  CheckRecord record() const;
};

/// Index of the first snapshot in the final 20% (at least one snapshot).
std::size_t late_start(std::size_t count) noexcept;

/// Throws ContractViolation if the first snapshot has min w_alpha < -tol_w / 10.
WSeries antisymmetric_evolution_check(const Trajectory& traj, const ReflectionSpec& spec, double tol_w);
/// Validates the initial data, then simulates `config`.
WSeries antisymmetric_evolution_check(const SimulationConfig& config, const ReflectionSpec& spec,
                                      double tol_w);

struct NarrowRegionResult {
  ReflectionSpec spec;
  double delta_strip = 0.0;
  double tol_w = 0.0;
  std::size_t strip_nodes = 0;
  std::vector<double> strip_min;
  /// Late-time minima over the strip and over the whole cap.
  double strip_late_min = 0.0;
  double region_late_min = 0.0;
  bool passed = false;

  CheckRecord record() const;
};

/// Restricts w_alpha to {alpha - delta_strip < x_axis < alpha}. Throws
/// ContractViolation when delta_strip < h or the strip holds no node.
NarrowRegionResult narrow_region_check(const Trajectory& traj, const ReflectionSpec& spec,
                                       double delta_strip, double tol_w);
NarrowRegionResult narrow_region_check(const SimulationConfig& config, const ReflectionSpec& spec,
                                       double delta_strip, double tol_w);

// ---------------------------------------------------------------------------
// Operator applied to the barrier Phi = (1 - |x|^2)_+^s.
// ---------------------------------------------------------------------------

struct BarrierPoint {
  double radius = 0.0;
  double value = 0.0;
  /// Estimate one refinement level coarser.
  double previous = 0.0;
  double rel_change = 0.0;
  int depth = 0;
};

struct BarrierScanResult {
  std::vector<BarrierPoint> points;
  /// Values at distances d_k = d_0 2^-k from the boundary.
  std::vector<BarrierPoint> trend;
  /// |increment k+1| / |increment k| along the trend sequence.
  std::vector<double> increment_ratios;
  double max_abs = 0.0;
  /// Geometric extrapolation of the trend to d = 0.
  double bound = 0.0;
  bool stable = false;
  bool no_growth = false;
  bool reduced_accuracy = false;
  bool passed = false;

  CheckRecord record() const;
};

/// Evaluates the operator on Phi at (r, 0, ...) for each radius, plus a trend
/// sequence from d = 4 h towards the boundary. Stable when finest levels differ
/// by less than 5% everywhere; no growth when the last three increment ratios
/// are below 1. QuadratureError propagates.
BarrierScanResult barrier_boundedness_scan(const OperatorParams& params, const std::vector<double>& radii,
                                           double h, const QuadratureSpec& quad = {},
                                           int trend_levels = 8);

/// {0, 0.5, 0.9, 0.99, 1 - 4h}
std::vector<double> default_barrier_radii(double h);

// ---------------------------------------------------------------------------
// Subsolution u_(x, t) = chi_D(x) u_inf(x) + delta eta(t) Phi(x).
// ---------------------------------------------------------------------------

struct SubsolutionSpec {
  /// D = B_{r_D}(0).
  double r_d = 0.3;
  double delta = 0.0;
  /// Time window [1 - eps0, 1 + eps0].
  double eps0 = 0.5;
  Point x_bar{0.65, 0.0, 0.0};
  double eps = 0.1;
  /// Uniform time samples over the window, endpoints included.
  int time_samples = 9;
  int bisection_steps = 8;

  /// B_eps(x_bar) must miss D and lie in B_1; delta >= 0; 0 < eps0 < 1.
  void validate(int n) const;

  /// Quintic smoothstep cutoff: 1 on [1 - eps0/2, 1 + eps0/2], 0 off (1 - eps0, 1 + eps0).
  double eta(double t) const noexcept;
  double eta_prime(double t) const noexcept;
};

struct SubsolutionResult {
  /// max over samples of d_t u_ + L u_ at the configured delta and at delta = 0.
  double max_value = 0.0;
  double max_at_zero = 0.0;
  double delta_star = 0.0;
  double delta_hi = 0.0;
  /// (delta, max) for every bisection probe.
  std::vector<std::pair<double, double>> probes;
  bool passed = false;

  CheckRecord record() const;
};

/// The subsolution built on a steady profile, as a function of y for fixed t.
ScalarFieldFn subsolution_function(const Field& u_inf, const SubsolutionSpec& spec, double s, double t);

/// L u_(x) for u_ = chi_D u_inf + amplitude Phi at a point x outside D.
double subsolution_operator(const Field& u_inf, const SubsolutionSpec& spec, const OperatorParams& params,
                            const Point& x, double amplitude, const QuadratureSpec& quad = {});

/// Requires u_inf > 0 at every sample inside D.
SubsolutionResult subsolution_comparison_test(const SteadyProfile& u_inf, const SubsolutionSpec& spec,
                                              const OperatorParams& params, const QuadratureSpec& quad = {});

}  // namespace tfpl
