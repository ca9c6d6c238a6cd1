#include <catch_amalgamated.hpp>

#include <cmath>

#include "tfpl/field.hpp"

using namespace tfpl;

TEST_CASE("node classification") {
  const double in[2] = {0.6, 0.79};
  const double on[2] = {0.6, 0.8};
  CHECK(classify_node(in).interior);
  CHECK_FALSE(classify_node(on).interior);
  CHECK(classify_node(in).d == Catch::Approx(1.0 - std::hypot(0.6, 0.79)));
}

TEST_CASE("grid geometry indexing round-trips") {
  for (int n : {1, 2, 3}) {
    const auto g = make_grid(n, 0.125);
    CHECK(g->half_nodes() >= 8);
    CHECK(g->extent() >= 1.0);
    std::size_t interior = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      CHECK(g->index(g->offsets(i)) == i);
      const Point x = g->point(i);
      CHECK(g->interior(i) == (norm(x, n) < 1.0 - 1e-12));
      const auto o = g->offsets(i);
      long long k = 0;
      for (int d = 0; d < n; ++d) k += static_cast<long long>(o[d]) * o[d];
      CHECK(g->norm2_cells(i) == k);
      interior += g->interior(i);
    }
    CHECK(interior == g->interior_nodes().size());
  }
}

TEST_CASE("grid fields keep exterior zero") {
  const auto g = make_grid(2, 0.25);
  std::vector<double> v(g->size(), 1.0);
  const GridField f(g, v);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(f[i] == (g->interior(i) ? 1.0 : 0.0));
  GridField h(g);
  const std::size_t ext = g->index({g->half_nodes(), 0, 0});
  CHECK_THROWS_AS(h.set(ext, 1.0), ContractViolation);
  v[g->interior_nodes().front()] = NAN;
  CHECK_THROWS(GridField(g, v));
}

TEST_CASE("multilinear interpolation reproduces linear data inside") {
  const auto g = make_grid(2, 1.0 / 16);
  const auto f = GridField::sample(g, [](const Point& x) { return 1.0 + 2.0 * x[0] - x[1]; });
  CHECK(f.interpolate({0.1234, -0.321, 0.0}) == Catch::Approx(1.0 + 2.0 * 0.1234 + 0.321));
  CHECK(f.interpolate({1.0, 0.0, 0.0}) == 0.0);
  CHECK(f.interpolate({0.0, 1.5, 0.0}) == 0.0);
}

TEST_CASE("radial fields") {
  const auto r = RadialField::sample(2, 8, [](double rr) { return 1.0 - rr; });
  CHECK(r.size() == 9);
  CHECK(r[r.boundary_index()] == 0.0);
  CHECK(r.value_at_radius(0.0625) == Catch::Approx(0.9375));
  CHECK(r.interpolate({0.3, 0.4, 0.0}) == Catch::Approx(0.5));
  CHECK(r.value_at_radius(1.2) == 0.0);
  CHECK(r.spacing() == Catch::Approx(0.125));
  CHECK(r.negated().max_abs() == r.max_abs());
  CHECK_THROWS(RadialField(2, {0.0, 0.5, 0.4, 1.0}, {1.0, 1.0, 1.0, 0.0}));
}

TEST_CASE("reflection") {
  const Point x{0.2, 0.5, 0.0};
  const Point y = reflect_point(x, {-0.1, 0});
  CHECK(y[0] == Catch::Approx(-0.4));
  CHECK(y[1] == 0.5);
  const Point z = reflect_point(reflect_point(x, {0.3, 1}), {0.3, 1});
  CHECK(z[1] == Catch::Approx(x[1]));
}

TEST_CASE("field helpers dispatch on layout") {
  const Field a = GridField::sample(make_grid(2, 0.125), [](const Point& x) { return 1.0 - x[0] * x[0]; });
  const Field b = RadialField::sample(2, 8, [](double r) { return r; });
  CHECK(field_dim(a) == 2);
  CHECK(field_spacing(a) == 0.125);
  CHECK(field_spacing(b) == Catch::Approx(0.125));
  CHECK(field_max_abs(a) == 1.0);
  CHECK(field_max_diff(a, a) == 0.0);
  CHECK_THROWS(field_max_diff(a, b));
}
