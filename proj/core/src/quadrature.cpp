#include "tfpl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <boost/math/special_functions/legendre.hpp>
#include <mutex>
#include <numbers>
#include <thread>

#include "tfpl/params.hpp"

namespace tfpl {

namespace {

constexpr int kMaxGaussOrder = 128;

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  // Boost returns the nonnegative zeros in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<std::pair<double, double>> pts;
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    pts.emplace_back(x, w);
    if (x != 0.0) pts.emplace_back(-x, w);
  }
  std::sort(pts.begin(), pts.end());
  for (const auto& [x, w] : pts) {
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

std::atomic<int> g_threads{1};

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1 || n > kMaxGaussOrder) throw DomainError("Gauss-Legendre order out of range");
  static std::array<QuadratureRule, kMaxGaussOrder + 1> cache;
  static std::array<std::once_flag, kMaxGaussOrder + 1> flags;
  std::call_once(flags[n], [n] { cache[n] = build_gauss_legendre(n); });
  return cache[n];
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  const QuadratureRule& ref = gauss_legendre(n);
  QuadratureRule out;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  out.nodes.reserve(ref.nodes.size());
  out.weights.reserve(ref.nodes.size());
  for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
    out.nodes.push_back(mid + half * ref.nodes[i]);
    out.weights.push_back(half * ref.weights[i]);
  }
  return out;
}

QuadratureRule tanh_sinh(double a, double b, double step, double t_max) {
  QuadratureRule out;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double c = 0.5 * std::numbers::pi;
  const int K = static_cast<int>(std::floor(t_max / step));
  for (int k = -K; k <= K; ++k) {
    const double t = k * step;
    const double u = c * std::sinh(t);
    const double ch = std::cosh(u);
    // Distance from the nearer endpoint in units of `half`, computed without
    // cancellation: 1 - |tanh u| = 1 / (e^{|u|} cosh u).
    const double gap = 1.0 / (std::exp(std::abs(u)) * ch);
    const double x = k < 0 ? a + half * gap : (k > 0 ? b - half * gap : mid);
    if (!(x > a && x < b)) continue;
    out.nodes.push_back(x);
    out.weights.push_back(half * step * c * std::cosh(t) / (ch * ch));
  }
  return out;
}

FixedPointScale::FixedPointScale(double max_term, std::size_t terms) {
  if (!(max_term > 0.0) || !std::isfinite(max_term)) {
    shift_ = 0;
    scale_ = 1.0;
    return;
  }
  int e = 0;
  std::frexp(max_term, &e);  // max_term < 2^e
  int room = 51;
  int t = 0;
  std::frexp(static_cast<double>(std::max<std::size_t>(terms, 1)), &t);  // terms < 2^t
  room = std::min(room, 62 - t);
  shift_ = room - e;
  scale_ = std::ldexp(1.0, shift_);
}

void set_thread_count(int n) {
  if (n < 1) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  g_threads.store(n);
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, int)>& fn) {
  const int workers = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(std::max(1, thread_count())), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    fn(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto guarded = [&](std::size_t b, std::size_t e, int w) {
    try {
      fn(b, e, w);
    } catch (...) {
      std::lock_guard lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const std::size_t b = std::min(count, w * chunk);
    const std::size_t e = std::min(count, b + chunk);
    pool.emplace_back(guarded, b, e, w);
  }
  guarded(0, std::min(count, chunk), 0);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace tfpl
