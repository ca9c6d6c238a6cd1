#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tfpl/function_operator.hpp"
#include "tfpl/grid_operator.hpp"

using namespace tfpl;

namespace {

OperatorParams params(double s, double p, double lambda = 0.0) {
  OperatorParams o;
  o.n = 2;
  o.s = s;
  o.p = p;
  o.lambda = lambda;
  if (lambda > 0.0) o.f = TemperingFunction::identity();
  return o;
}

GridField random_field(const GridGeometryPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  return GridField::sample(g, [&](const Point&) { return U(rng); });
}

// Exact equality; 0 and -0 compare equal.
bool exact_equal(const GridField& a, const GridField& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("weights decrease and are punched out inside the hole") {
  const GridOperator op(make_grid(2, 1.0 / 16), params(0.5, 2.5));
  CHECK(op.weight(0) == 0.0);
  for (long long k = 1; k < 50; ++k) CHECK(op.weight(k + 1) <= op.weight(k));
  CHECK(op.row_mass() > 0.0);
  CHECK(op.exterior_mass(op.geometry().interior_nodes().front()) > 0.0);
}

TEST_CASE("zero and oddness are exact", "[structural]") {
  for (double p : {2.0, 2.5, 3.0, 4.0, 3.7}) {
    const auto g = make_grid(2, 1.0 / 16);
    const GridOperator op(g, params(0.4, p, 0.3));
    const GridField zero(g);
    const GridField Lz = op.eval_all(zero);
    for (std::size_t i = 0; i < Lz.size(); ++i) CHECK(Lz[i] == 0.0);
    const GridField u = random_field(g, 5);
    CHECK(exact_equal(op.eval_all(u.negated()), op.eval_all(u).negated()));
  }
}

TEST_CASE("single-node and batch evaluation agree") {
  const auto g = make_grid(2, 1.0 / 16);
  const GridOperator op(g, params(0.3, 3.0));
  const GridField u = random_field(g, 9);
  const GridField L = op.eval_all(u);
  for (std::size_t k = 0; k < g->interior_nodes().size(); k += 17) {
    const std::size_t i = g->interior_nodes()[k];
    CHECK(op.eval(u, i) == Catch::Approx(L[i]).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("results do not depend on the thread count", "[structural]") {
  const auto g = make_grid(2, 1.0 / 24);
  const GridOperator op(g, params(0.5, 2.5, 0.1));
  const GridField u = random_field(g, 13);
  set_thread_count(1);
  const GridField a = op.eval_all(u);
  set_thread_count(3);
  const GridField b = op.eval_all(u);
  set_thread_count(1);
  CHECK(exact_equal(a, b));
}

TEST_CASE("comparison at a touching node") {
  // u <= v with equality at node i gives (L u)_i >= (L v)_i.
  const auto g = make_grid(2, 1.0 / 16);
  const GridOperator op(g, params(0.5, 3.0));
  const GridField v = random_field(g, 21);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 0.5);
  GridField u = v;
  for (std::size_t i : g->interior_nodes()) u.set(i, v[i] - U(rng));
  for (std::size_t k = 0; k < g->interior_nodes().size(); k += 23) {
    const std::size_t i = g->interior_nodes()[k];
    GridField uu = u;
    uu.set(i, v[i]);
    CHECK(op.eval(uu, i) >= op.eval(v, i));
  }
}

TEST_CASE("p = 2 is linear up to fixed-point rounding") {
  const auto g = make_grid(2, 1.0 / 16);
  const GridOperator op(g, params(0.6, 2.0));
  const GridField u = random_field(g, 1), v = random_field(g, 2);
  std::vector<double> sum(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) sum[i] = u[i] + v[i];
  const GridField Lu = op.eval_all(u), Lv = op.eval_all(v), Ls = op.eval_all(GridField(g, sum));
  for (std::size_t i : g->interior_nodes()) CHECK(Ls[i] == Catch::Approx(Lu[i] + Lv[i]).margin(1e-9));
}

TEST_CASE("grid values approach the p = 2 barrier constant") {
  // (linear case) the operator on (1 - |x|^2)^s is constant in B_1.
  const OperatorParams p = params(0.3, 2.0);
  const double exact = eval_function(barrier_function(0.3), {0.0, 0.0, 0.0}, p);
  double prev_err = INFINITY;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const auto g = make_grid(2, h);
    const GridOperator op(g, p);
    const GridField phi = GridField::sample(g, [](const Point& x) { return barrier_phi(x, 0.3); });
    const double err = std::abs(op.eval(phi, g->index({0, 0, 0})) - exact) / exact;
    CHECK(err < 0.1);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("grid operator rejects foreign fields") {
  const GridOperator op(make_grid(2, 1.0 / 16), params(0.5, 2.5));
  const GridField other(make_grid(2, 1.0 / 8));
  CHECK_THROWS_AS(op.eval_all(other), ContractViolation);
}
