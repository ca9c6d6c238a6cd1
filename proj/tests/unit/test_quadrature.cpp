#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tfpl/quadrature.hpp"

using namespace tfpl;

namespace {

double integrate(const QuadratureRule& q, double (*f)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 16, 48}) {
    const auto& q = gauss_legendre(n);
    REQUIRE(q.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == Catch::Approx(exact).margin(1e-13));
    }
  }
  const auto q = gauss_legendre(8, 1.0, 3.0);
  CHECK(integrate(q, [](double x) { return x * x; }) == Catch::Approx(26.0 / 3.0));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  const auto q = tanh_sinh(0.0, 1.0, 1.0 / 16);
  for (double x : q.nodes) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  CHECK(integrate(q, [](double x) { return 1.0 / std::sqrt(x); }) == Catch::Approx(2.0).epsilon(1e-9));
  CHECK(integrate(q, [](double x) { return std::log(x); }) == Catch::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("Neumaier sum recovers cancelled terms and is odd") {
  NeumaierSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  NeumaierSum a, b;
  for (int i = 0; i < 1000; ++i) {
    const double x = U(rng) * std::pow(10.0, 10 * U(rng));
    a.add(x);
    b.add(-x);
  }
  CHECK(a.value() == -b.value());
}

TEST_CASE("fixed point quantization is odd and order independent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> terms(5000);
  for (auto& t : terms) t = U(rng) * 3.0;
  const FixedPointScale fp(3.0, terms.size());
  std::int64_t fwd = 0, rev = 0, neg = 0;
  for (double t : terms) fwd += fp.quantize(t);
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) rev += fp.quantize(*it);
  for (double t : terms) neg += fp.quantize(-t);
  CHECK(fwd == rev);
  CHECK(neg == -fwd);
  double plain = 0.0;
  for (double t : terms) plain += t;
  CHECK(fp.to_double(fwd) == Catch::Approx(plain).margin(1e-9));
  CHECK(fp.quantize(0.0) == 0);
}

TEST_CASE("parallel_for covers the range once and rethrows") {
  for (int threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    std::vector<std::atomic<int>> hits(1003);
    parallel_for(hits.size(), [&](std::size_t b, std::size_t e, int) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t b, std::size_t, int) {
                      if (b == 0) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
  set_thread_count(1);
}
