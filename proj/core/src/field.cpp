#include "tfpl/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tfpl {

NodeClass classify_node(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  NodeClass out;
  out.interior = r < 1.0 - kBoundaryTolerance;
  out.d = out.interior ? 1.0 - r : std::max(0.0, r - 1.0);
  return out;
}

Point reflect_point(const Point& x, const ReflectionSpec& spec) {
  Point y = x;
  y[spec.axis] = 2.0 * spec.alpha - x[spec.axis];
  return y;
}

double norm(const Point& x, int n) {
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
  return std::sqrt(r2);
}

// --- GridGeometry ----------------------------------------------------------

GridGeometry::GridGeometry(int n, double h) : n_(n), h_(h) {
  if (n < 1 || n > 3) throw ValidationError("n", "grid mode supports n in {1, 2, 3}");
  if (!(h > 0.0 && h <= 0.5) || !std::isfinite(h)) {
    throw ValidationError("h", "grid spacing h must lie in (0, 0.5]");
  }
  // Cover [-1, 1] with one ghost layer.
  half_ = static_cast<int>(std::ceil(1.0 / h - 1e-9)) + 1;
  const std::size_t per_axis = static_cast<std::size_t>(2 * half_ + 1);
  size_ = 1;
  for (int d = 0; d < n_; ++d) size_ *= per_axis;
  interior_mask_.assign(size_, 0);
  const double limit = (1.0 - kBoundaryTolerance) * (1.0 - kBoundaryTolerance);
  for (std::size_t i = 0; i < size_; ++i) {
    const double r2 = static_cast<double>(norm2_cells(i)) * h_ * h_;
    if (r2 < limit) {
      interior_mask_[i] = 1;
      interior_.push_back(i);
    }
  }
}

std::array<int, 3> GridGeometry::offsets(std::size_t index) const noexcept {
  std::array<int, 3> o{0, 0, 0};
  const std::size_t per_axis = static_cast<std::size_t>(2 * half_ + 1);
  for (int d = n_ - 1; d >= 0; --d) {
    o[d] = static_cast<int>(index % per_axis) - half_;
    index /= per_axis;
  }
  return o;
}

std::size_t GridGeometry::index(const std::array<int, 3>& o) const noexcept {
  const std::size_t per_axis = static_cast<std::size_t>(2 * half_ + 1);
  std::size_t idx = 0;
  for (int d = 0; d < n_; ++d) idx = idx * per_axis + static_cast<std::size_t>(o[d] + half_);
  return idx;
}

Point GridGeometry::point(std::size_t index) const noexcept {
  const auto o = offsets(index);
  Point x{0.0, 0.0, 0.0};
  for (int d = 0; d < n_; ++d) x[d] = o[d] * h_;
  return x;
}

long long GridGeometry::norm2_cells(std::size_t index) const noexcept {
  const auto o = offsets(index);
  long long k = 0;
  for (int d = 0; d < n_; ++d) k += static_cast<long long>(o[d]) * o[d];
  return k;
}

GridGeometryPtr make_grid(int n, double h) { return std::make_shared<const GridGeometry>(n, h); }

// --- GridField -------------------------------------------------------------

GridField::GridField(GridGeometryPtr geometry)
    : geometry_(std::move(geometry)), values_(geometry_->size(), 0.0) {}

GridField::GridField(GridGeometryPtr geometry, std::vector<double> values)
    : geometry_(std::move(geometry)), values_(std::move(values)) {
  if (values_.size() != geometry_->size()) {
    throw ContractViolation("grid field size does not match its geometry");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!geometry_->interior(i)) {
      values_[i] = 0.0;
    } else if (!std::isfinite(values_[i])) {
      throw NumericalAbort("non-finite value at grid node " + std::to_string(i));
    }
  }
}

void GridField::set(std::size_t i, double v) {
  if (!geometry_->interior(i)) throw ContractViolation("cannot write an exterior grid node");
  if (!std::isfinite(v)) throw NumericalAbort("non-finite value written to grid node");
  values_[i] = v;
}

double GridField::interpolate(const Point& x) const {
  const GridGeometry& g = *geometry_;
  const int n = g.dim();
  if (norm(x, n) >= 1.0) return 0.0;
  const double h = g.spacing();
  const int N = g.half_nodes();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int d = 0; d < n; ++d) {
    const double t = x[d] / h;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, -N, N - 1);
    base[d] = i;
    frac[d] = t - i;
  }
  double acc = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> o{0, 0, 0};
    for (int d = 0; d < n; ++d) {
      const int bit = (c >> d) & 1;
      o[d] = base[d] + bit;
      w *= bit ? frac[d] : 1.0 - frac[d];
    }
    if (w != 0.0) acc += w * values_[g.index(o)];
  }
  return acc;
}

double GridField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridField GridField::negated() const {
  GridField out(*this);
  for (double& v : out.values_) v = -v;
  return out;
}

// --- RadialField -----------------------------------------------------------

RadialField::RadialField(int n, std::vector<double> radii, std::vector<double> values)
    : n_(n), radii_(std::move(radii)), values_(std::move(values)) {
  if (n_ < 1 || n_ > 3) throw ValidationError("n", "radial mode supports n in {1, 2, 3}");
  if (radii_.size() < 3 || radii_.size() != values_.size()) {
    throw ContractViolation("radial field needs >= 3 radii and one value per radius");
  }
  if (radii_.front() != 0.0 || radii_.back() != 1.0) {
    throw ContractViolation("radial samples must start at r = 0 and end at r = 1");
  }
  for (std::size_t k = 1; k < radii_.size(); ++k) {
    if (!(radii_[k] > radii_[k - 1])) throw ContractViolation("radii must be strictly increasing");
  }
  values_.back() = 0.0;
  check_finite();
}

RadialField RadialField::uniform(int n, int M) {
  if (M < 2) throw ValidationError("M", "radial mode needs at least 2 cells");
  std::vector<double> r(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) r[k] = static_cast<double>(k) / M;
  r.back() = 1.0;
  return RadialField(n, std::move(r), std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0));
}

void RadialField::check_finite() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw NumericalAbort("non-finite value at radial sample " + std::to_string(k));
    }
  }
}

double RadialField::spacing() const noexcept {
  double m = 0.0;
  for (std::size_t k = 1; k < radii_.size(); ++k) m = std::max(m, radii_[k] - radii_[k - 1]);
  return m;
}

void RadialField::set(std::size_t k, double v) {
  if (k >= boundary_index()) throw ContractViolation("cannot write the boundary sample r = 1");
  if (!std::isfinite(v)) throw NumericalAbort("non-finite value written to radial sample");
  values_[k] = v;
}

double RadialField::value_at_radius(double r) const {
  if (r >= 1.0) return 0.0;
  if (r <= 0.0) return values_.front();
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - radii_.begin());
  const double r0 = radii_[k - 1];
  const double r1 = radii_[k];
  const double w = (r - r0) / (r1 - r0);
  return (1.0 - w) * values_[k - 1] + w * values_[k];
}

double RadialField::interpolate(const Point& x) const { return value_at_radius(norm(x, n_)); }

double RadialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

RadialField RadialField::negated() const {
  RadialField out(*this);
  for (double& v : out.values_) v = -v;
  return out;
}

// --- Field helpers ---------------------------------------------------------

int field_dim(const Field& f) {
  return std::visit([](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GridField>) {
      return v.geometry().dim();
    } else {
      return v.dim();
    }
  }, f);
}

double field_spacing(const Field& f) {
  return std::visit([](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GridField>) {
      return v.geometry().spacing();
    } else {
      return v.spacing();
    }
  }, f);
}

double field_max_abs(const Field& f) {
  return std::visit([](const auto& v) { return v.max_abs(); }, f);
}

double field_value_at(const Field& f, const Point& x) {
  return std::visit([&](const auto& v) { return v.interpolate(x); }, f);
}

double field_max_diff(const Field& a, const Field& b) {
  if (a.index() != b.index()) throw ContractViolation("field layouts differ");
  std::span<const double> va, vb;
  if (const auto* ga = std::get_if<GridField>(&a)) {
    const auto& gb = std::get<GridField>(b);
    if (!(ga->geometry() == gb.geometry())) throw ContractViolation("grid geometries differ");
    va = ga->values();
    vb = gb.values();
  } else {
    const auto& ra = std::get<RadialField>(a);
    const auto& rb = std::get<RadialField>(b);
    if (!ra.same_layout(rb)) throw ContractViolation("radial layouts differ");
    va = ra.values();
    vb = rb.values();
  }
  double m = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  return m;
}

}  // namespace tfpl
