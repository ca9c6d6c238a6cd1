#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "tfpl/field.hpp"
#include "tfpl/kernel.hpp"
#include "tfpl/params.hpp"
#include "tfpl/quadrature.hpp"

namespace tfpl {

struct GridEvalStats {
  std::size_t interior_nodes = 0;
  /// Unordered interior pairs visited (each contributes to two nodes).
  std::size_t pair_terms = 0;
  /// Kernel evaluations spent building the weight tables.
  std::size_t kernel_evals = 0;
  double seconds = 0.0;
};

/// Punched-hole lattice discretization of the operator on a fixed grid.
///
/// L_i = sum_{j interior, j != i} G(u_i - u_j) W(x_i - x_j) + G(u_i) E_i
///
/// with W(d) = K(|d|) h^n for |d| >= hole * h and 0 otherwise. E_i is the
/// kernel mass seen by node i outside the interior lattice: the lattice row
/// mass up to the far cutoff R, plus the continuous tail beyond R, minus the
/// interior part. Terms are accumulated in exact fixed point, so results do not
/// depend on summation order or thread count.
///
/// The full E table costs O(N^2) and is built on the first batch evaluation;
/// single-node evaluation computes its own E_i in O(N).
class GridOperator {
 public:
  GridOperator(GridGeometryPtr geometry, const OperatorParams& params,
               const QuadratureSpec& quad = {});

  const GridGeometry& geometry() const noexcept { return *geometry_; }
  const GridGeometryPtr& geometry_ptr() const noexcept { return geometry_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }

  /// Operator value at one interior node.
  double eval(const GridField& u, std::size_t node) const;
  /// Operator values at all interior nodes; exterior entries are 0.
  GridField eval_all(const GridField& u, GridEvalStats* stats = nullptr) const;

  /// sum over lattice offsets 0 < |d| <= R of W(d), plus the tail beyond R.
  double row_mass() const noexcept { return row_mass_; }
  /// E_i for an interior node.
  double exterior_mass(std::size_t node) const;
  /// E for every interior node, in interior_nodes() order.
  const std::vector<double>& exterior_masses() const;
  /// W for an offset of squared length k h^2.
  double weight(long long k) const noexcept { return w_[static_cast<std::size_t>(k)]; }
  std::size_t setup_kernel_evals() const noexcept { return kernel_evals_; }

 private:
  void check_field(const GridField& u) const;
  FixedPointScale scale_for(const GridField& u) const;
  std::size_t interior_slot(std::size_t node) const;
  double compute_exterior(std::size_t slot) const;
  template <typename G>
  void accumulate_rows(const std::vector<double>& vals, double scale, G g,
                       std::vector<std::int64_t>& acc, std::size_t begin, std::size_t end) const;

  /// Maximal line of consecutive interior nodes along the last axis.
  struct Run {
    std::array<int, 2> lead{0, 0};
    int z0 = 0;
    std::size_t start = 0;
    std::size_t len = 0;
  };

  GridGeometryPtr geometry_;
  OperatorParams params_;
  KernelSpec kernel_;
  std::vector<double> w_;                       // indexed by |d|^2 / h^2
  std::vector<std::array<int, 3>> coords_;      // interior node offsets
  std::vector<long long> slot_;                 // node index -> interior slot, -1 outside
  std::vector<Run> runs_;
  std::vector<std::size_t> run_of_slot_;
  std::vector<std::size_t> line_id_;            // by squared lead offset
  std::vector<double> lines_;
  std::size_t line_length_ = 0;
  int span_ = 0;
  double row_mass_ = 0.0;
  double w_max_ = 0.0;
  std::size_t kernel_evals_ = 0;

  struct ExteriorCache {
    std::once_flag once;
    std::vector<double> values;  // by interior slot
  };
  std::unique_ptr<ExteriorCache> exterior_;
};

/// One-shot helpers; each call builds a GridOperator.
double eval_grid(const GridField& u, std::size_t node, const OperatorParams& params,
                 const QuadratureSpec& quad = {});
GridField eval_grid_all(const GridField& u, const OperatorParams& params,
                        const QuadratureSpec& quad = {}, GridEvalStats* stats = nullptr);

}  // namespace tfpl
