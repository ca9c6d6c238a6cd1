#include "cli/run_config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace tfpl::cli {

const char* to_string(Mode m) noexcept {
  switch (m) {
    case Mode::eval: return "eval";
    case Mode::simulate: return "simulate";
    case Mode::diagnose: return "diagnose";
    case Mode::oracle: return "oracle";
    case Mode::report: return "report";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::eval, Mode::simulate, Mode::diagnose, Mode::oracle, Mode::report}) {
    if (text == to_string(m)) return m;
  }
  throw ValidationError("mode", "unknown mode '" + std::string(text) +
                                    "' (expected eval, simulate, diagnose, oracle or report)");
}

RunConfig::RunConfig() {
  sim.layout = Layout::radial;
  sim.reaction = ReactionTerm::logistic();
}

void RunConfig::validate() const {
  sim.validate();
  if (threads < 1) throw ValidationError("run.threads", "threads must be >= 1");
  if (diag.band_lo < 0.0 || !(diag.band_hi > diag.band_lo)) {
    throw ValidationError("diagnostics.band_hi", "Hopf band needs 0 <= band_lo < band_hi");
  }
  if (!(diag.dichotomy_tol >= 0.0)) throw ValidationError("diagnostics.dichotomy_tol", "dichotomy_tol must be >= 0");
  if (diag.tol_mp < 0.0) throw ValidationError("diagnostics.tol_mp", "tol_mp must be >= 0");
  if (diag.tol_w < 0.0) throw ValidationError("diagnostics.tol_w", "tol_w must be >= 0");
  for (double a : diag.plane_alphas) {
    if (!(a > -1.0 && a <= 0.0)) throw ValidationError("diagnostics.plane_alphas", "plane alphas must lie in (-1, 0]");
  }
  for (double a : diag.reflection_alphas) {
    if (!(std::abs(a) < 1.0)) throw ValidationError("diagnostics.reflection_alphas", "|alpha| must be < 1");
  }
  if (diag.narrow_region && diag.delta_strip < sim.h) {
    throw ValidationError("diagnostics.delta_strip", "strip unresolved: delta_strip < h");
  }
  for (double r : diag.barrier_radii) {
    if (!(r >= 0.0 && r < 1.0)) throw ValidationError("diagnostics.barrier_radii", "barrier radii must lie in [0, 1)");
  }
  if (diag.subsolution) {
    try {
      diag.subsolution_spec.validate(sim.params.n);
    } catch (const ValidationError& e) {
      throw ValidationError("subsolution." + e.key(), e.what());
    }
  }
  for (const Point& x : eval_points) {
    if (!(norm(x, sim.params.n) < 1.0)) throw ValidationError("eval.points", "eval points must lie in B_1");
  }
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, const Entry& e) {
  const std::string& t = e.value;
  // Accept a plain fraction such as 1/64.
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    Entry a{trim(t.substr(0, slash)), e.line, e.column};
    Entry b{trim(t.substr(slash + 1)), e.line, e.column + static_cast<int>(slash) + 1};
    const double den = to_number(key, b);
    if (den == 0.0) throw ParseError("zero denominator in '" + key + "'", e.line, b.column);
    return to_number(key, a) / den;
  }
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ParseError("invalid number '" + t + "' for '" + key + "'", e.line, e.column);
  }
  return v;
}

long long to_integer(const std::string& key, const Entry& e) {
  const double v = to_number(key, e);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ParseError("'" + key + "' must be an integer", e.line, e.column);
  }
  return static_cast<long long>(v);
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "on" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "off" || e.value == "no" || e.value == "0") return false;
  throw ParseError("'" + key + "' must be true or false", e.line, e.column);
}

std::vector<double> to_list(const std::string& key, const Entry& e, char sep = ',') {
  std::vector<double> out;
  if (trim(e.value).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto next = e.value.find(sep, pos);
    const std::string item = e.value.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    const auto lead = item.find_first_not_of(" \t");
    out.push_back(to_number(key, Entry{trim(item), e.line, e.column + static_cast<int>(pos + (lead == std::string::npos ? 0 : lead))}));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

Point to_point(const std::string& key, const Entry& e) {
  const std::vector<double> v = to_list(key, e);
  if (v.empty() || v.size() > 3) throw ParseError("'" + key + "' needs 1 to 3 coordinates", e.line, e.column);
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

using Handler = std::function<void(RunConfig&, const std::string& key, const Entry&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = [] {
    std::map<std::string, Handler> t;
    // [operator]
    t["operator.n"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.params.n = static_cast<int>(to_integer(k, e)); };
    t["operator.s"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.params.s = to_number(k, e); };
    t["operator.p"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.params.p = to_number(k, e); };
    t["operator.lambda"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.params.lambda = to_number(k, e); };
    t["operator.c_norm"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.params.c_norm = to_number(k, e); };
    t["operator.f"] = [](RunConfig& c, const std::string&, const Entry& e) {
      try {
        c.sim.params.f = TemperingFunction::parse(e.value);
      } catch (const ValidationError& err) {
        throw ValidationError("operator.f", err.what());
      }
    };
    // [reaction]
    t["reaction.kind"] = [](RunConfig& c, const std::string&, const Entry& e) {
      if (e.value == "zero") {
        c.sim.reaction = ReactionTerm::zero();
      } else if (e.value == "logistic") {
        c.sim.reaction = ReactionTerm::logistic();
      } else if (e.value == "linear") {
        c.sim.reaction = ReactionTerm::linear(c.sim.reaction.kappa());
      } else if (e.value == "polynomial") {
        c.sim.reaction = ReactionTerm::polynomial({0.0, 0.0});
      } else {
        throw ValidationError("reaction.kind", "unknown reaction '" + e.value + "' (zero, linear, logistic, polynomial)");
      }
    };
    t["reaction.kappa"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (c.sim.reaction.kind() != ReactionTerm::Kind::linear) {
        throw ValidationError(k, "kappa requires kind = linear (set kind first)");
      }
      c.sim.reaction = ReactionTerm::linear(to_number(k, e));
    };
    t["reaction.coefficients"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (c.sim.reaction.kind() != ReactionTerm::Kind::polynomial) {
        throw ValidationError(k, "coefficients require kind = polynomial (set kind first)");
      }
      try {
        c.sim.reaction = ReactionTerm::polynomial(to_list(k, e));
      } catch (const ValidationError& err) {
        throw ValidationError(k, err.what());
      }
    };
    // [grid]
    t["grid.layout"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value == "grid") {
        c.sim.layout = Layout::grid;
      } else if (e.value == "radial") {
        c.sim.layout = Layout::radial;
      } else {
        throw ValidationError(k, "layout must be grid or radial");
      }
    };
    t["grid.h"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.h = to_number(k, e); };
    // [initial]
    t["initial.kind"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      using K = InitialDataSpec::Kind;
      static const std::map<std::string, K> kinds{{"zero", K::zero}, {"barrier", K::barrier}, {"bump", K::bump}, {"random", K::random}};
      const auto it = kinds.find(e.value);
      if (it == kinds.end()) throw ValidationError(k, "initial kind must be zero, barrier, bump or random");
      c.sim.initial.kind = it->second;
    };
    t["initial.amplitude"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.initial.amplitude = to_number(k, e); };
    t["initial.center"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.initial.center = to_point(k, e); };
    t["initial.radius"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.initial.radius = to_number(k, e); };
    t["initial.seed"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      const long long v = to_integer(k, e);
      if (v < 0) throw ValidationError(k, "seed must be >= 0");
      c.sim.initial.seed = static_cast<std::uint64_t>(v);
    };
    // [time]
    t["time.t_end"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.t_end = to_number(k, e); };
    t["time.dt_policy"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value == "auto") {
        c.sim.dt_policy = SimulationConfig::DtPolicy::automatic;
      } else if (e.value == "fixed") {
        c.sim.dt_policy = SimulationConfig::DtPolicy::fixed;
      } else {
        throw ValidationError(k, "dt_policy must be auto or fixed");
      }
    };
    t["time.dt"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.dt = to_number(k, e); };
    t["time.tol_steady"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.tol_steady = to_number(k, e); };
    t["time.steady_window"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.steady_window = to_number(k, e); };
    t["time.snapshot_every"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.snapshot_every = to_number(k, e); };
    t["time.max_steps"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      const long long v = to_integer(k, e);
      if (v < 1) throw ValidationError(k, "max_steps must be >= 1");
      c.sim.max_steps = static_cast<std::size_t>(v);
    };
    // [quadrature]
    t["quadrature.hole_radius"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.hole_radius = to_number(k, e); };
    t["quadrature.far_cutoff"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.far_cutoff = to_number(k, e); };
    t["quadrature.tail_tolerance"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.tail_tolerance = to_number(k, e); };
    t["quadrature.angular_points"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.angular_points = static_cast<int>(to_integer(k, e)); };
    t["quadrature.max_depth"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.max_depth = static_cast<int>(to_integer(k, e)); };
    t["quadrature.min_depth"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.min_depth = static_cast<int>(to_integer(k, e)); };
    t["quadrature.eps_quad"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.sim.quad.eps_quad = to_number(k, e); };
    // [diagnostics]
    t["diagnostics.hopf"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.hopf = to_bool(k, e); };
    t["diagnostics.band_lo"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.band_lo = to_number(k, e); };
    t["diagnostics.band_hi"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.band_hi = to_number(k, e); };
    t["diagnostics.dichotomy"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.dichotomy = to_bool(k, e); };
    t["diagnostics.dichotomy_tol"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.dichotomy_tol = to_number(k, e); };
    t["diagnostics.moving_plane"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.moving_plane = to_bool(k, e); };
    t["diagnostics.plane_alphas"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.plane_alphas = to_list(k, e); };
    t["diagnostics.tol_mp"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.tol_mp = to_number(k, e); };
    t["diagnostics.antisymmetric"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.antisymmetric = to_bool(k, e); };
    t["diagnostics.reflection_alphas"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.reflection_alphas = to_list(k, e); };
    t["diagnostics.tol_w"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.tol_w = to_number(k, e); };
    t["diagnostics.narrow_region"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.narrow_region = to_bool(k, e); };
    t["diagnostics.delta_strip"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.delta_strip = to_number(k, e); };
    t["diagnostics.barrier"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.barrier = to_bool(k, e); };
    t["diagnostics.barrier_radii"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.barrier_radii = to_list(k, e); };
    t["diagnostics.subsolution"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution = to_bool(k, e); };
    // [subsolution]
    t["subsolution.r_d"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution_spec.r_d = to_number(k, e); };
    t["subsolution.delta"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution_spec.delta = to_number(k, e); };
    t["subsolution.eps0"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution_spec.eps0 = to_number(k, e); };
    t["subsolution.x_bar"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution_spec.x_bar = to_point(k, e); };
    t["subsolution.eps"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.diag.subsolution_spec.eps = to_number(k, e); };
    // [run]
    t["run.mode"] = [](RunConfig& c, const std::string&, const Entry& e) { c.mode = parse_mode(e.value); };
    t["run.out"] = [](RunConfig& c, const std::string&, const Entry& e) { c.out_dir = e.value; };
    t["run.threads"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.threads = static_cast<int>(to_integer(k, e)); };
    t["run.snapshot"] = [](RunConfig& c, const std::string&, const Entry& e) { c.snapshot = e.value; };
    t["run.save_all_snapshots"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.save_all_snapshots = to_bool(k, e); };
    // [eval]
    t["eval.points"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      c.eval_points.clear();
      std::size_t pos = 0;
      while (true) {
        const auto next = e.value.find(';', pos);
        const std::string item = e.value.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!trim(item).empty()) c.eval_points.push_back(to_point(k, Entry{trim(item), e.line, e.column + static_cast<int>(pos)}));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
    };
    return t;
  }();
  return table;
}

const std::set<std::string>& sections() {
  static const std::set<std::string> s{"operator", "reaction", "grid", "initial", "time", "quadrature",
                                       "diagnostics", "subsolution", "run", "eval"};
  return s;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  // Keys are applied in file order so `kind` can precede its parameters.
  std::vector<std::pair<std::string, Entry>> entries;
  std::set<std::string> seen;
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    // '#' comments run to the end of the line; ';' only as the first character.
    const auto hash = raw.find('#');
    const std::string_view body = hash == std::string_view::npos ? raw : raw.substr(0, hash);
    const auto first = body.find_first_not_of(" \t");
    if (first == std::string_view::npos || body[first] == ';') continue;
    const int col = static_cast<int>(first) + 1;
    if (body[first] == '[') {
      const auto close = body.find(']', first);
      if (close == std::string_view::npos) throw ParseError("missing ']' in section header", lineno, col);
      if (!trim(body.substr(close + 1)).empty()) {
        throw ParseError("unexpected text after section header", lineno, static_cast<int>(close) + 2);
      }
      section = trim(body.substr(first + 1, close - first - 1));
      if (!sections().count(section)) {
        throw ParseError("unknown section [" + section + "]", lineno, col + 1);
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno, col);
    if (section.empty()) throw ParseError("key outside any [section]", lineno, col);
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno, col);
    const auto vfirst = body.find_first_not_of(" \t", eq + 1);
    Entry e;
    e.value = trim(body.substr(eq + 1));
    e.line = lineno;
    e.column = vfirst == std::string_view::npos ? static_cast<int>(eq) + 2 : static_cast<int>(vfirst) + 1;
    const std::string full = section + "." + key;
    if (!handlers().count(full)) {
      throw ValidationError(full, "unknown key '" + key + "' in [" + section + "] (line " + std::to_string(lineno) + ")");
    }
    if (!seen.insert(full).second) throw ParseError("duplicate key '" + full + "'", lineno, col);
    entries.emplace_back(full, std::move(e));
  }

  RunConfig cfg;
  for (const auto& [key, e] : entries) {
    try {
      handlers().at(key)(cfg, key, e);
    } catch (const ValidationError& err) {
      throw ValidationError(err.key().find('.') == std::string::npos ? key : err.key(), err.what());
    }
  }
  try {
    cfg.sim.params.validate();
    cfg.sim.quad.validate();
    cfg.sim.initial.validate(cfg.sim.params.n);
  } catch (const ValidationError& err) {
    static const std::map<std::string, std::string> owner{
        {"n", "operator"}, {"s", "operator"}, {"p", "operator"}, {"lambda", "operator"}, {"c_norm", "operator"},
        {"f", "operator"}, {"amplitude", "initial"}, {"center", "initial"}, {"radius", "initial"}};
    const auto it = owner.find(err.key());
    throw ValidationError(it != owner.end() ? it->second + "." + err.key() : "quadrature." + err.key(), err.what());
  }
  try {
    cfg.sim.validate();
  } catch (const ValidationError& err) {
    const std::string& k = err.key();
    const std::string sec = k == "h" || k == "n" ? "grid" : "time";
    throw ValidationError(sec + "." + k, err.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("config", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tfpl::cli
