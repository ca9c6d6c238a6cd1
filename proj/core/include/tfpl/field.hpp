#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "tfpl/params.hpp"

namespace tfpl {

/// Points carry up to three coordinates; unused trailing entries are zero.
using Point = std::array<double, 3>;

/// Squared distance from the origin within which a node counts as exterior
/// even though |x| < 1 in exact arithmetic.
inline constexpr double kBoundaryTolerance = 1e-12;

struct NodeClass {
  bool interior = false;
  /// Distance to the unit sphere: 1 - |x| inside, |x| - 1 outside.
  double d = 0.0;
};

/// Interior iff |x| < 1 - 1e-12; the sphere itself belongs to the exterior.
NodeClass classify_node(std::span<const double> x);

/// Reflection across {x_axis = alpha}: x_axis -> 2 alpha - x_axis.
Point reflect_point(const Point& x, const ReflectionSpec& spec);

double norm(const Point& x, int n);

// ---------------------------------------------------------------------------
// Symmetric Cartesian grid {i h : |i_d| <= N} covering [-1, 1]^n plus a ghost layer.
// ---------------------------------------------------------------------------

class GridGeometry {
 public:
  /// n in {1, 2, 3}; the origin is always a node.
  GridGeometry(int n, double h);

  int dim() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  /// Nodes per half-axis N; coordinates are i h with i in [-N, N].
  int half_nodes() const noexcept { return half_; }
  int nodes_per_axis() const noexcept { return 2 * half_ + 1; }
  double extent() const noexcept { return half_ * h_; }
  std::size_t size() const noexcept { return size_; }

  /// Integer offsets (i_1, ..., i_n) of a node from the origin.
  std::array<int, 3> offsets(std::size_t index) const noexcept;
  std::size_t index(const std::array<int, 3>& offsets) const noexcept;
  Point point(std::size_t index) const noexcept;
  /// Squared norm in units of h^2, computed exactly in integers.
  long long norm2_cells(std::size_t index) const noexcept;

  bool interior(std::size_t index) const noexcept { return interior_mask_[index] != 0; }
  const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_; }

  friend bool operator==(const GridGeometry& a, const GridGeometry& b) noexcept {
    return a.n_ == b.n_ && a.h_ == b.h_ && a.half_ == b.half_;
  }

 private:
  int n_;
  double h_;
  int half_;
  std::size_t size_;
  std::vector<unsigned char> interior_mask_;
  std::vector<std::size_t> interior_;
};

using GridGeometryPtr = std::shared_ptr<const GridGeometry>;

GridGeometryPtr make_grid(int n, double h);

/// Scalar values on a GridGeometry. Exterior nodes hold exactly 0.
class GridField {
 public:
  explicit GridField(GridGeometryPtr geometry);
  /// Exterior entries of `values` are overwritten with 0; non-finite values throw.
  GridField(GridGeometryPtr geometry, std::vector<double> values);

  template <typename Fn>
  static GridField sample(GridGeometryPtr geometry, Fn&& fn) {
    std::vector<double> v(geometry->size(), 0.0);
    for (std::size_t i : geometry->interior_nodes()) v[i] = fn(geometry->point(i));
    return GridField(std::move(geometry), std::move(v));
  }

  const GridGeometry& geometry() const noexcept { return *geometry_; }
  const GridGeometryPtr& geometry_ptr() const noexcept { return geometry_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Writes an interior node; writing an exterior node is a contract violation.
  void set(std::size_t i, double v);

  /// Multilinear interpolation; 0 at and beyond the unit sphere.
  double interpolate(const Point& x) const;

  double max_abs() const noexcept;
  GridField negated() const;

  friend bool operator==(const GridField& a, const GridField& b) {
    return *a.geometry_ == *b.geometry_ && a.values_ == b.values_;
  }

 private:
  GridGeometryPtr geometry_;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Radial profile u(x) = U(|x|) sampled at 0 = r_0 < ... < r_M = 1, U(1) = 0.
// ---------------------------------------------------------------------------

class RadialField {
 public:
  RadialField(int n, std::vector<double> radii, std::vector<double> values);

  /// Uniform radii k / M, k = 0..M, all values zero.
  static RadialField uniform(int n, int M);

  template <typename Fn>
  static RadialField sample(int n, int M, Fn&& fn) {
    RadialField f = uniform(n, M);
    for (int k = 0; k < M; ++k) f.values_[k] = fn(f.radii_[k]);
    f.check_finite();
    return f;
  }

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return radii_.size(); }
  /// Index of the boundary sample r = 1.
  std::size_t boundary_index() const noexcept { return radii_.size() - 1; }
  std::span<const double> radii() const noexcept { return radii_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  /// Largest gap between consecutive radii.
  double spacing() const noexcept;

  void set(std::size_t k, double v);

  /// Piecewise-linear in r; 0 for r >= 1.
  double value_at_radius(double r) const;
  double interpolate(const Point& x) const;

  double max_abs() const noexcept;
  RadialField negated() const;
  bool same_layout(const RadialField& other) const noexcept {
    return n_ == other.n_ && radii_ == other.radii_;
  }

  friend bool operator==(const RadialField&, const RadialField&) = default;

 private:
  void check_finite() const;

  int n_;
  std::vector<double> radii_;
  std::vector<double> values_;
};

using Field = std::variant<GridField, RadialField>;

int field_dim(const Field& f);
/// Grid spacing h, or the largest radial gap.
double field_spacing(const Field& f);
double field_max_abs(const Field& f);
double field_value_at(const Field& f, const Point& x);
/// max_i |a_i - b_i|; layouts must match.
double field_max_diff(const Field& a, const Field& b);

}  // namespace tfpl
