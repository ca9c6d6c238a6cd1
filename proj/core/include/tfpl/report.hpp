#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tfpl/core_types.hpp"
#include "tfpl/diagnostics.hpp"

namespace tfpl {

std::uint64_t fnv1a64(std::string_view text) noexcept;

/// 16 hex digits of FNV-1a over OperatorParams::describe().
std::string param_hash(const OperatorParams& params);

/// Header `check,param_hash,value,threshold,verdict`, one row per record.
/// Numbers use 17 significant digits so identical runs give identical bytes.
std::string format_diagnostics_csv(const DiagnosticsReport& report, const std::string& hash);

/// Writes text to a file, throwing Error on failure.
void write_text_file(const std::string& path, const std::string& text);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers = false;
};

/// Standalone SVG line chart with linear axes.
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series);

/// Profile along r = |x| (positive x_1 axis for grids) with the c_hat d^s envelope.
std::string svg_profile(const Field& phi, double s, double c_hat);
/// Minimum of psi_alpha against alpha.
std::string svg_moving_plane(const MovingPlaneResult& scan);
/// Minimum of w_alpha against t, one series per plane.
std::string svg_w_series(const std::vector<WSeries>& series);

}  // namespace tfpl
