#include "tfpl/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tfpl {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text, const char* what) {
  std::string owned(text);
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v)) {
    throw ValidationError("f", std::string("invalid number for ") + what + ": '" + owned + "'");
  }
  return v;
}

}  // namespace

// --- TemperingFunction -----------------------------------------------------

TemperingFunction TemperingFunction::zero() { return {}; }

TemperingFunction TemperingFunction::identity() {
  TemperingFunction f;
  f.kind_ = Kind::identity;
  return f;
}

TemperingFunction TemperingFunction::power(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ValidationError("beta", "power tempering exponent beta must be positive");
  }
  TemperingFunction f;
  f.kind_ = Kind::power;
  f.beta_ = beta;
  return f;
}

TemperingFunction TemperingFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.empty()) {
    throw ValidationError("knots", "tabulated tempering needs at least one knot");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [r, v] = knots[i];
    if (!std::isfinite(r) || !std::isfinite(v) || r < 0.0) {
      throw ValidationError("knots", "tabulated knots must be finite with r >= 0");
    }
    if (i > 0) {
      if (!(r > knots[i - 1].first)) {
        throw ValidationError("knots", "tabulated knot radii must be strictly increasing");
      }
      if (v < knots[i - 1].second) {
        throw ValidationError("knots", "tempering function must be nondecreasing");
      }
    }
  }
  TemperingFunction f;
  f.kind_ = Kind::tabulated;
  f.knots_ = std::move(knots);
  return f;
}

double TemperingFunction::operator()(double r) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::identity:
      return r;
    case Kind::power:
      return std::pow(r, beta_);
    case Kind::tabulated: {
      if (r <= knots_.front().first) return knots_.front().second;
      if (r >= knots_.back().first) return knots_.back().second;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                                       [](double x, const auto& k) { return x < k.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (r - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return 0.0;
}

std::string TemperingFunction::to_string() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::identity:
      return "identity";
    case Kind::power:
      return "power:" + fmt17(beta_);
    case Kind::tabulated: {
      std::string out = "tabulated:";
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (i) out += ';';
        out += fmt17(knots_[i].first) + ":" + fmt17(knots_[i].second);
      }
      return out;
    }
  }
  return "zero";
}

TemperingFunction TemperingFunction::parse(std::string_view text) {
  if (text == "zero") return zero();
  if (text == "identity" || text == "id") return identity();
  if (text.starts_with("power:")) return power(parse_double(text.substr(6), "beta"));
  if (text.starts_with("tabulated:")) {
    std::vector<std::pair<double, double>> knots;
    std::string_view rest = text.substr(10);
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const std::string_view item = rest.substr(0, semi);
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) {
        throw ValidationError("f", "tabulated knot must be r:f, got '" + std::string(item) + "'");
      }
      knots.emplace_back(parse_double(item.substr(0, colon), "knot radius"),
                         parse_double(item.substr(colon + 1), "knot value"));
      if (semi == std::string_view::npos) break;
      rest = rest.substr(semi + 1);
    }
    return tabulated(std::move(knots));
  }
  throw ValidationError("f", "unknown tempering function '" + std::string(text) + "'");
}

// --- OperatorParams --------------------------------------------------------

void OperatorParams::validate() const {
  if (n < 1) throw ValidationError("n", "n must be a positive integer");
  if (!(s > 0.0 && s < 1.0)) throw ValidationError("s", "s must lie in (0,1)");
  if (!(p >= 2.0) || !std::isfinite(p)) throw ValidationError("p", "p must be >= 2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda", "lambda must be >= 0");
  }
  if (!(c_norm > 0.0) || !std::isfinite(c_norm)) {
    throw ValidationError("c_norm", "c_norm must be positive");
  }
  if (!std::isfinite(f(0.0))) throw ValidationError("f", "f(0) must be finite");
}

std::vector<std::string> OperatorParams::warnings() const {
  std::vector<std::string> out;
  if (!in_theory_regime()) out.emplace_back("outside the theory regime (requires p > 2 and n >= 2)");
  if (lambda > 1.0) out.emplace_back("lambda > 1: tempering is not small");
  if (reduced_accuracy_regime()) {
    out.emplace_back("s >= 1 - 1/p: reduced quadrature accuracy near the singularity");
  }
  return out;
}

std::string OperatorParams::describe() const {
  std::ostringstream os;
  os << "n=" << n << " s=" << fmt17(s) << " p=" << fmt17(p) << " lambda=" << fmt17(lambda)
     << " c_norm=" << fmt17(c_norm) << " f=" << f.to_string();
  return os.str();
}

// --- ReactionTerm ----------------------------------------------------------

ReactionTerm ReactionTerm::zero() { return {}; }

ReactionTerm ReactionTerm::linear(double kappa) {
  if (!std::isfinite(kappa)) throw ValidationError("kappa", "kappa must be finite");
  ReactionTerm g;
  g.kind_ = Kind::linear;
  g.kappa_ = kappa;
  return g;
}

ReactionTerm ReactionTerm::logistic() {
  ReactionTerm g;
  g.kind_ = Kind::logistic;
  return g;
}

ReactionTerm ReactionTerm::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) {
    throw ValidationError("coefficients", "polynomial reaction needs coefficients");
  }
  if (coefficients.front() != 0.0) {
    throw ValidationError("coefficients", "polynomial reaction must have zero constant term");
  }
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ValidationError("coefficients", "coefficients must be finite");
  }
  ReactionTerm g;
  g.kind_ = Kind::polynomial;
  g.coeffs_ = std::move(coefficients);
  return g;
}

double ReactionTerm::operator()(double /*t*/, double u) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return -kappa_ * u;
    case Kind::logistic:
      return u * (1.0 - u);
    case Kind::polynomial: {
      // Horner without the constant term, so g(0) is exactly 0.
      double acc = 0.0;
      for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) acc = acc * u + coeffs_[k];
      return acc * u;
    }
  }
  return 0.0;
}

double ReactionTerm::lipschitz_bound(double U) const {
  U = std::abs(U);
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return std::abs(kappa_);
    case Kind::logistic:
      return 1.0 + 2.0 * U;
    case Kind::polynomial: {
      double L = 0.0;
      for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        L += static_cast<double>(k) * std::abs(coeffs_[k]) * std::pow(U, static_cast<double>(k - 1));
      }
      return L;
    }
  }
  return 0.0;
}

std::string ReactionTerm::to_string() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::linear:
      return "linear:" + fmt17(kappa_);
    case Kind::logistic:
      return "logistic";
    case Kind::polynomial: {
      std::string out = "polynomial:";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += fmt17(coeffs_[i]);
      }
      return out;
    }
  }
  return "zero";
}

// --- QuadratureSpec / ReflectionSpec ---------------------------------------

void QuadratureSpec::validate() const {
  if (!(hole_radius >= 1.0)) throw ValidationError("hole_radius", "hole_radius must be >= 1 cell");
  if (far_cutoff != 0.0 && !(far_cutoff > 2.0)) {
    throw ValidationError("far_cutoff", "far_cutoff must exceed 2");
  }
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw ValidationError("tail_tolerance", "tail_tolerance must lie in (0,1)");
  }
  if (angular_points < 16 || angular_points % 2 != 0) {
    throw ValidationError("angular_points", "angular_points must be even and >= 16");
  }
  if (min_depth < 1 || max_depth < min_depth || max_depth > 14) {
    throw ValidationError("max_depth", "need 1 <= min_depth <= max_depth <= 14");
  }
  if (!(eps_quad > 0.0)) throw ValidationError("eps_quad", "eps_quad must be positive");
}

void ReflectionSpec::validate(int n) const {
  if (!(std::abs(alpha) < 1.0)) throw ValidationError("alpha", "|alpha| must be < 1");
  if (axis < 0 || axis >= n) throw ValidationError("axis", "reflection axis out of range");
}

}  // namespace tfpl
