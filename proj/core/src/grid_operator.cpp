#include "tfpl/grid_operator.hpp"

#include <algorithm>
#include <chrono>
#include <bit>
#include <cmath>

namespace tfpl {

namespace {

long long dist2(const std::array<int, 3>& a, const std::array<int, 3>& b) noexcept {
  long long k = 0;
  for (int d = 0; d < 3; ++d) {
    const long long t = a[d] - b[d];
    k += t * t;
  }
  return k;
}

}  // namespace

GridOperator::GridOperator(GridGeometryPtr geometry, const OperatorParams& params,
                           const QuadratureSpec& quad)
    : geometry_(std::move(geometry)), params_(params), kernel_(params) {
  quad.validate();
  const GridGeometry& g = *geometry_;
  if (params_.n != g.dim()) throw ContractViolation("operator dimension does not match grid");
  const int n = g.dim();
  const double h = g.spacing();
  const double hn = std::pow(h, n);
  const double R = quad.effective_far_cutoff();
  const long long hole2 = static_cast<long long>(std::ceil(quad.hole_radius * quad.hole_radius - 1e-9));

  // Longest interior pair offset is below 2 / h per axis.
  const long long span = 2LL * g.half_nodes();
  const long long kmax_pairs = n * span * span;
  const long long m = static_cast<long long>(std::floor(R / h));
  const long long kmax_ball = m * m;
  const long long kmax = std::max(kmax_pairs, kmax_ball);

  w_.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (long long k = std::max(1LL, hole2); k <= kmax; ++k) {
    w_[static_cast<std::size_t>(k)] = kernel_(h * std::sqrt(static_cast<double>(k))) * hn;
  }
  kernel_evals_ = static_cast<std::size_t>(kmax);
  w_max_ = w_[static_cast<std::size_t>(std::max(1LL, hole2))];

  // Lattice row mass over {0 < |d| <= R}: count offsets per squared length.
  std::vector<long long> count(static_cast<std::size_t>(kmax_ball) + 1, 0);
  {
    std::array<long long, 3> o{0, 0, 0};
    const long long lo = -m;
    std::array<long long, 3> hi{0, 0, 0};
    for (int d = 0; d < n; ++d) hi[d] = m;
    for (o[0] = (n > 0 ? lo : 0); o[0] <= hi[0]; ++o[0]) {
      for (o[1] = (n > 1 ? lo : 0); o[1] <= hi[1]; ++o[1]) {
        for (o[2] = (n > 2 ? lo : 0); o[2] <= hi[2]; ++o[2]) {
          const long long k = o[0] * o[0] + o[1] * o[1] + o[2] * o[2];
          if (k <= kmax_ball) ++count[static_cast<std::size_t>(k)];
        }
      }
    }
  }
  NeumaierSum mass;
  for (long long k = 1; k <= kmax_ball; ++k) {
    if (count[static_cast<std::size_t>(k)] != 0) {
      mass.add(static_cast<double>(count[static_cast<std::size_t>(k)]) * w_[static_cast<std::size_t>(k)]);
    }
  }
  mass.add(sphere_area(n) * kernel_.radial_tail(R, quad.tail_tolerance));
  row_mass_ = mass.value();

  // Interior bookkeeping.
  const auto& interior = g.interior_nodes();
  slot_.assign(g.size(), -1);
  coords_.reserve(interior.size());
  for (std::size_t s = 0; s < interior.size(); ++s) {
    slot_[interior[s]] = static_cast<long long>(s);
    coords_.push_back(g.offsets(interior[s]));
  }

  // Interior nodes in index order form lines along the last axis.
  run_of_slot_.resize(coords_.size());
  for (std::size_t s = 0; s < coords_.size(); ++s) {
    const auto& c = coords_[s];
    bool extend = false;
    if (!runs_.empty()) {
      const Run& r = runs_.back();
      extend = c[n - 1] == r.z0 + static_cast<int>(r.len);
      for (int d = 0; d + 1 < n; ++d) extend = extend && r.lead[static_cast<std::size_t>(d)] == c[d];
    }
    if (extend) {
      ++runs_.back().len;
    } else {
      Run r;
      for (int d = 0; d + 1 < n; ++d) r.lead[static_cast<std::size_t>(d)] = c[d];
      r.z0 = c[n - 1];
      r.start = s;
      r.len = 1;
      runs_.push_back(r);
    }
    run_of_slot_[s] = runs_.size() - 1;
  }
  // Line tables: lines_[id(k0)][d + span] = W for squared offset k0 + d^2.
  span_ = static_cast<int>(span);
  line_length_ = static_cast<std::size_t>(2 * span_ + 1);
  const long long k0max = (n - 1) * span * span;
  line_id_.assign(static_cast<std::size_t>(k0max) + 1, 0);
  {
    std::vector<char> used(static_cast<std::size_t>(k0max) + 1, 0);
    used[0] = 1;
    for (long long dx = 0; dx <= (n > 1 ? span : 0); ++dx) {
      for (long long dy = 0; dy <= (n > 2 ? span : 0); ++dy) used[static_cast<std::size_t>(dx * dx + dy * dy)] = 1;
    }
    std::size_t next = 0;
    for (long long k0 = 0; k0 <= k0max; ++k0) {
      if (!used[static_cast<std::size_t>(k0)]) continue;
      line_id_[static_cast<std::size_t>(k0)] = next++;
      for (long long d = -span; d <= span; ++d) lines_.push_back(w_[static_cast<std::size_t>(k0 + d * d)]);
    }
  }

  exterior_ = std::make_unique<ExteriorCache>();
}

std::size_t GridOperator::interior_slot(std::size_t node) const {
  if (node >= slot_.size() || slot_[node] < 0) throw ContractViolation("node is not interior");
  return static_cast<std::size_t>(slot_[node]);
}

// E_i = row mass - sum_{j interior, j != i} W_ij. The interior sum is exact in
// fixed point, so it matches the pairwise table build bit for bit and
// lattice-symmetric nodes get identical E.
double GridOperator::compute_exterior(std::size_t a) const {
  const FixedPointScale wscale(w_max_);
  Int128 acc = 0;
  for (std::size_t b = 0; b < coords_.size(); ++b) {
    if (b != a) acc += wscale.quantize(w_[static_cast<std::size_t>(dist2(coords_[a], coords_[b]))]);
  }
  return row_mass_ - wscale.to_double(acc);
}

const std::vector<double>& GridOperator::exterior_masses() const {
  std::call_once(exterior_->once, [this] {
    const std::size_t ni = coords_.size();
    const FixedPointScale wscale(w_max_);
    std::vector<Int128> acc(ni, 0);
    for (std::size_t a = 0; a < ni; ++a) {
      Int128 own = 0;
      for (std::size_t b = a + 1; b < ni; ++b) {
        const std::int64_t q = wscale.quantize(w_[static_cast<std::size_t>(dist2(coords_[a], coords_[b]))]);
        own += q;
        acc[b] += q;
      }
      acc[a] += own;
    }
    auto& out = exterior_->values;
    out.resize(ni);
    for (std::size_t a = 0; a < ni; ++a) out[a] = row_mass_ - wscale.to_double(acc[a]);
  });
  return exterior_->values;
}

double GridOperator::exterior_mass(std::size_t node) const {
  return compute_exterior(interior_slot(node));
}

void GridOperator::check_field(const GridField& u) const {
  if (!(u.geometry() == *geometry_)) throw ContractViolation("field grid does not match operator grid");
}

FixedPointScale GridOperator::scale_for(const GridField& u) const {
  const double U = u.max_abs();
  const double p = params_.p;
  // |u_i - u_j| <= 2U and 0 <= E_i <= row mass; factor 2 covers rounding in G.
  // Each node sums at most one term per interior node.
  const double bound = 2.0 * std::max(g_power(2.0 * U, p) * w_max_, g_power(U, p) * row_mass_);
  return FixedPointScale(bound, coords_.size() + 1);
}

double GridOperator::eval(const GridField& u, std::size_t node) const {
  check_field(u);
  if (node >= slot_.size() || slot_[node] < 0) {
    throw ContractViolation("eval_grid requires an interior node");
  }
  const std::size_t a = static_cast<std::size_t>(slot_[node]);
  const double ea = compute_exterior(a);
  const FixedPointScale scale = scale_for(u);
  const double p = params_.p;
  const auto& interior = geometry_->interior_nodes();
  const double ua = u[interior[a]];
  std::int64_t acc = 0;
  for (std::size_t b = 0; b < coords_.size(); ++b) {
    if (b == a) continue;
    const double diff = ua - u[interior[b]];
    if (diff == 0.0) continue;
    acc += scale.quantize(g_power(diff, p) * w_[static_cast<std::size_t>(dist2(coords_[a], coords_[b]))]);
  }
  acc += scale.quantize(g_power(ua, p) * ea);
  return scale.to_double(acc);
}

namespace {

// Contiguous pair kernel over one grid line: returns the row's own sum and
// subtracts each term from the partner accumulators. Written without branches
// so the compiler can vectorize it.
template <typename G>
std::int64_t line_kernel(double ua, const double* v, const double* w, std::int64_t* acc,
                         std::size_t len, double scale, G g) noexcept {
  constexpr double magic = FixedPointScale::kMagic;
  const std::int64_t mbits = std::bit_cast<std::int64_t>(magic);
  std::int64_t own = 0;
  for (std::size_t j = 0; j < len; ++j) {
    const double y = g(ua - v[j]) * w[j] * scale + magic;
    const std::int64_t q = std::bit_cast<std::int64_t>(y) - mbits;
    own += q;
    acc[j] -= q;
  }
  return own;
}

}  // namespace

template <typename G>
void GridOperator::accumulate_rows(const std::vector<double>& vals, double scale, G g,
                                   std::vector<std::int64_t>& partial_acc, std::size_t begin,
                                   std::size_t end) const {
  const std::size_t ni = coords_.size();
  const int n = geometry_->dim();
  const std::size_t L = line_length_;
  auto row = [&](std::size_t a) {
    const double ua = vals[a];
    const auto& ca = coords_[a];
    const std::size_t ra = run_of_slot_[a];
    const Run& own_run = runs_[ra];
    const int za = ca[n - 1];
    std::int64_t own = 0;
    // Rest of the node's own line.
    {
      const std::size_t b0 = a + 1;
      const std::size_t stop = own_run.start + own_run.len;
      const double* w = lines_.data() + line_id_[0] * L + span_ + 1;
      own += line_kernel(ua, vals.data() + b0, w, partial_acc.data() + b0, stop - b0, scale, g);
    }
    for (std::size_t r = ra + 1; r < runs_.size(); ++r) {
      const Run& run = runs_[r];
      long long k0 = 0;
      for (int d = 0; d + 1 < n; ++d) {
        const long long t = run.lead[static_cast<std::size_t>(d)] - ca[d];
        k0 += t * t;
      }
      const double* w = lines_.data() + line_id_[static_cast<std::size_t>(k0)] * L + span_ + (run.z0 - za);
      own += line_kernel(ua, vals.data() + run.start, w, partial_acc.data() + run.start, run.len, scale, g);
    }
    partial_acc[a] += own;
  };
  for (std::size_t it = begin; it < end; ++it) {
    row(it);
    const std::size_t mirror = ni - 1 - it;
    if (mirror != it) row(mirror);
  }
}

GridField GridOperator::eval_all(const GridField& u, GridEvalStats* stats) const {
  check_field(u);
  const auto t0 = std::chrono::steady_clock::now();
  const FixedPointScale scale = scale_for(u);
  const double p = params_.p;
  const auto& interior = geometry_->interior_nodes();
  const std::size_t ni = coords_.size();
  const std::vector<double>& ext = exterior_masses();
  std::vector<double> vals(ni);
  for (std::size_t a = 0; a < ni; ++a) vals[a] = u[interior[a]];

  // Rows a and ni-1-a are handled together so every work item has ~ni pairs.
  const std::size_t items = (ni + 1) / 2;
  const int workers = std::max(1, std::min<int>(thread_count(), static_cast<int>(std::max<std::size_t>(items, 1))));
  std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(workers));
  const double sc = scale.scale();

  parallel_for(items, [&](std::size_t begin, std::size_t end, int worker) {
    auto& acc = partial[static_cast<std::size_t>(worker)];
    acc.assign(ni, 0);
    // Branch-free forms of g_power; they agree with it bit for bit, including G(0) = 0.
    if (p == 2.0) {
      accumulate_rows(vals, sc, [](double d) { return d; }, acc, begin, end);
    } else if (p == 2.5) {
      accumulate_rows(vals, sc, [](double d) { return std::sqrt(std::abs(d)) * d; }, acc, begin, end);
    } else if (p == 3.0) {
      accumulate_rows(vals, sc, [](double d) { return std::abs(d) * d; }, acc, begin, end);
    } else if (p == 4.0) {
      accumulate_rows(vals, sc, [](double d) { const double a = std::abs(d); return a * a * d; }, acc, begin, end);
    } else {
      accumulate_rows(vals, sc, [p](double d) { return g_power(d, p); }, acc, begin, end);
    }
  });

  std::vector<double> out(geometry_->size(), 0.0);
  for (std::size_t a = 0; a < ni; ++a) {
    std::int64_t total = scale.quantize(g_power(vals[a], p) * ext[a]);
    for (const auto& acc : partial) {
      if (!acc.empty()) total += acc[a];
    }
    out[interior[a]] = scale.to_double(total);
  }
  if (stats) {
    stats->interior_nodes = ni;
    stats->pair_terms = ni * (ni - 1) / 2;
    stats->kernel_evals = kernel_evals_;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return GridField(geometry_, std::move(out));
}

double eval_grid(const GridField& u, std::size_t node, const OperatorParams& params,
                 const QuadratureSpec& quad) {
  return GridOperator(u.geometry_ptr(), params, quad).eval(u, node);
}

GridField eval_grid_all(const GridField& u, const OperatorParams& params,
                        const QuadratureSpec& quad, GridEvalStats* stats) {
  return GridOperator(u.geometry_ptr(), params, quad).eval_all(u, stats);
}

}  // namespace tfpl
