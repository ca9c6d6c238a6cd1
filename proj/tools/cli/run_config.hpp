#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tfpl/core_types.hpp"
#include "tfpl/diagnostics.hpp"

namespace tfpl::cli {

enum class Mode { eval, simulate, diagnose, oracle, report };

const char* to_string(Mode m) noexcept;
/// Throws ValidationError("mode", ...) for unknown names.
Mode parse_mode(std::string_view text);

struct DiagnosticsOptions {
  bool hopf = true;
  /// 0 selects 2h.
  double band_lo = 0.0;
  double band_hi = 0.2;

  bool dichotomy = true;
  double dichotomy_tol = 1e-8;

  bool moving_plane = true;
  std::vector<double> plane_alphas{-0.9, -0.7, -0.5, -0.3, -0.1, 0.0};
  /// 0 selects 10h.
  double tol_mp = 0.0;

  bool antisymmetric = true;
  std::vector<double> reflection_alphas{-0.5, -0.25, 0.0};
  /// 0 selects 10h.
  double tol_w = 0.0;

  bool narrow_region = true;
  double delta_strip = 0.1;

  bool barrier = true;
  /// Empty selects {0, 0.5, 0.9, 0.99, 1 - 4h}.
  std::vector<double> barrier_radii;

  bool subsolution = true;
  SubsolutionSpec subsolution_spec;
};

struct RunConfig {
  Mode mode = Mode::simulate;
  SimulationConfig sim;
  DiagnosticsOptions diag;
  /// Empty: fall back to $TFPL_OUT, then the working directory.
  std::string out_dir;
  int threads = 1;
  /// diagnose/report: take the profile from this snapshot instead of simulating.
  std::string snapshot;
  bool save_all_snapshots = false;
  /// eval: points for the function-mode evaluator.
  std::vector<Point> eval_points;

  RunConfig();
  /// Cross-field checks; throws ValidationError naming the key.
  void validate() const;
};

/// Strict INI-style text: `[section]` headers and `key = value` lines. `#`
/// starts a comment anywhere, `;` only at the start of a line (it separates
/// points in `[eval] points`). Unknown sections and keys are errors. Syntax errors throw
/// ParseError with line and column; bad values throw ValidationError whose key
/// is `section.key`. The schema is documented in README.md.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace tfpl::cli
