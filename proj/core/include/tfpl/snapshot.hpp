#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfpl/field.hpp"
#include "tfpl/params.hpp"

namespace tfpl {

/// Parsed snapshot file.
struct Snapshot {
  Field field;
  double t = 0.0;
  /// n, s, p, lambda and f from the header; c_norm is not stored and stays 1.
  OperatorParams params;
};

/// Snapshot CSV:
///
///   # n=2
///   # s=0.5
///   # p=2.5
///   # lambda=0.1
///   # f=identity
///   # h=0.015625
///   # t=3.25
///   # layout=grid
///   x1,x2,value        (one row per grid node, index order)
///
/// Radial snapshots use `# layout=radial` and rows `r,value`; h is then the
/// largest radial gap. Numbers are written with 17 significant digits.
std::string format_snapshot(const Field& field, double t, const OperatorParams& params);
void save_snapshot(const Field& field, double t, const OperatorParams& params, const std::string& path);

/// Throws ParseError (with line number) on malformed input. If `expected_n`
/// is given, a header with a different n is rejected.
Snapshot parse_snapshot(const std::string& text, std::optional<int> expected_n = std::nullopt);
Snapshot load_snapshot(const std::string& path, std::optional<int> expected_n = std::nullopt);

/// Residual series CSV with header `t,residual`.
void save_residuals(const std::vector<std::pair<double, double>>& residuals, const std::string& path);

}  // namespace tfpl
