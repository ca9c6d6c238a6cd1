#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace tfpl {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of order `n` on [-1, 1], 1 <= n <= 128. Cached.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Tanh-sinh rule on [a, b] with step `step` truncated at |t| <= t_max.
/// Nodes cluster doubly-exponentially at both endpoints and never touch them.
QuadratureRule tanh_sinh(double a, double b, double step, double t_max = 3.5);

/// Neumaier-compensated sum. Order dependent, but negating every term negates
/// the result exactly.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

__extension__ typedef __int128 Int128;

/// Exact fixed-point accumulation: each term is rounded once to a multiple of
/// 2^-shift and summed in integers, so the total does not depend on the order
/// of additions. Rounding is to nearest-even, hence quantize(-x) = -quantize(x).
class FixedPointScale {
 public:
  /// Chooses the finest power-of-two scale at which every term of magnitude
  /// <= `max_term` stays below 2^51 and `terms` such terms sum below 2^62.
  explicit FixedPointScale(double max_term, std::size_t terms = 1);

  /// Valid for |x| <= max_term.
  std::int64_t quantize(double x) const noexcept {
    // Adding 1.5 * 2^52 rounds to an integer in the low mantissa bits.
    const double y = x * scale_ + kMagic;
    return std::bit_cast<std::int64_t>(y) - std::bit_cast<std::int64_t>(kMagic);
  }
  double to_double(std::int64_t acc) const noexcept { return static_cast<double>(acc) / scale_; }
  double to_double(Int128 acc) const noexcept { return static_cast<double>(acc) / scale_; }
  int shift() const noexcept { return shift_; }
  double scale() const noexcept { return scale_; }

  static constexpr double kMagic = 0x1.8p52;

 private:
  int shift_;
  double scale_;
};

/// Worker count used by parallel_for; values < 1 mean "hardware concurrency".
void set_thread_count(int n);
int thread_count();

/// Splits [0, count) into contiguous chunks, one per worker, and calls
/// fn(begin, end, worker) on each. Runs inline when one worker suffices.
/// The first exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, int)>& fn);

}  // namespace tfpl
