#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tfpl {

// ---------------------------------------------------------------------------
// Error types. Everything thrown by the library derives from tfpl::Error.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. r <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (exterior node, empty band, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A parameter or configuration value failed validation.
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& message)
      : Error(message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Non-finite values produced during time stepping or evaluation.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance before the depth limit.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, double previous, double last, int depth)
      : Error(message), previous_(previous), last_(last), depth_(depth) {}
  double previous_estimate() const noexcept { return previous_; }
  double last_estimate() const noexcept { return last_; }
  int depth() const noexcept { return depth_; }

 private:
  double previous_;
  double last_;
  int depth_;
};

/// Malformed text input, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column = 0)
      : Error(message + " (line " + std::to_string(line) +
              (column > 0 ? ", column " + std::to_string(column) : std::string()) + ")"),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// ---------------------------------------------------------------------------
// Tempering function f(r) in the factor exp(-lambda f(r)).
// ---------------------------------------------------------------------------

class TemperingFunction {
 public:
  enum class Kind { zero, identity, power, tabulated };

  TemperingFunction() = default;  // zero

  static TemperingFunction zero();
  static TemperingFunction identity();
  static TemperingFunction power(double beta);
  /// Knots (r, f(r)) must have strictly increasing r and nondecreasing f.
  /// Values are interpolated linearly and held constant outside the knot range.
  static TemperingFunction tabulated(std::vector<std::pair<double, double>> knots);

  double operator()(double r) const;

  Kind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

  /// zero/identity/power give a strictly decreasing kernel; tabulated may plateau.
  bool strictly_monotone() const noexcept { return kind_ != Kind::tabulated; }

  /// "zero", "identity", "power:<beta>", "tabulated:r0:f0;r1:f1;..."
  std::string to_string() const;
  static TemperingFunction parse(std::string_view text);

  friend bool operator==(const TemperingFunction&, const TemperingFunction&) = default;

 private:
  Kind kind_ = Kind::zero;
  double beta_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

// ---------------------------------------------------------------------------
// Operator parameterization: K(r) = c_norm * exp(-lambda f(r)) / r^(n + s p).
// ---------------------------------------------------------------------------

struct OperatorParams {
  int n = 2;
  double s = 0.5;
  double p = 2.0;
  double lambda = 0.0;
  double c_norm = 1.0;
  TemperingFunction f;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  /// The theorems are stated for p > 2 and n >= 2.
  bool in_theory_regime() const noexcept { return p > 2.0 && n >= 2; }

  /// Regime s >= 1 - 1/p, where the punched-hole error of the grid sum no
  /// longer vanishes with h.
  bool reduced_accuracy_regime() const noexcept { return s >= 1.0 - 1.0 / p; }

  double sp() const noexcept { return s * p; }

  /// Human-readable flags: outside regime, large lambda, reduced accuracy.
  std::vector<std::string> warnings() const;

  /// Canonical one-line description, also used for hashing.
  std::string describe() const;

  friend bool operator==(const OperatorParams&, const OperatorParams&) = default;
};

// ---------------------------------------------------------------------------
// Reaction term g(t, u) with g(t, 0) = 0.
// ---------------------------------------------------------------------------

class ReactionTerm {
 public:
  enum class Kind { zero, linear, logistic, polynomial };

  ReactionTerm() = default;  // zero

  static ReactionTerm zero();
  /// g = -kappa u
  static ReactionTerm linear(double kappa);
  /// g = u (1 - u)
  static ReactionTerm logistic();
  /// g = sum_k c[k] u^k; c[0] must be exactly zero.
  static ReactionTerm polynomial(std::vector<double> coefficients);

  double operator()(double t, double u) const;

  /// Lipschitz bound of g(t, .) on [-U, U].
  double lipschitz_bound(double U) const;

  Kind kind() const noexcept { return kind_; }
  double kappa() const noexcept { return kappa_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  std::string to_string() const;

  friend bool operator==(const ReactionTerm&, const ReactionTerm&) = default;

 private:
  Kind kind_ = Kind::zero;
  double kappa_ = 0.0;
  std::vector<double> coeffs_;
};

// ---------------------------------------------------------------------------
// Quadrature controls for the three operator evaluators.
// ---------------------------------------------------------------------------

struct QuadratureSpec {
  /// Offsets with |delta| < hole_radius * h are omitted from grid sums.
  double hole_radius = 1.0;
  /// Radius of the explicit lattice sum; 0 selects the automatic value 3.
  double far_cutoff = 0.0;
  /// Relative tolerance of every numerically integrated kernel tail.
  double tail_tolerance = 1e-8;
  /// Base angular cells on the full circle for the radial evaluator.
  int angular_points = 256;
  /// Deepest refinement level of the function evaluator.
  int max_depth = 9;
  /// Shallowest level at which the function evaluator may stop.
  int min_depth = 2;
  /// Relative stopping tolerance between successive levels.
  double eps_quad = 1e-6;

  double effective_far_cutoff() const noexcept { return far_cutoff > 0.0 ? far_cutoff : 3.0; }

  void validate() const;
};

// ---------------------------------------------------------------------------
// Reflection across the hyperplane {x_axis = alpha}.
// ---------------------------------------------------------------------------

struct ReflectionSpec {
  double alpha = 0.0;
  /// Zero-based coordinate index; 0 is x_1.
  int axis = 0;

  void validate(int n) const;
};

}  // namespace tfpl
