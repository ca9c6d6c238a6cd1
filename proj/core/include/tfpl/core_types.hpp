#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tfpl/field.hpp"
#include "tfpl/params.hpp"

namespace tfpl {

enum class Layout { grid, radial };

const char* to_string(Layout layout) noexcept;

struct InitialDataSpec {
  enum class Kind {
    zero,
    /// amplitude * (1 - |x|^2)_+^s
    barrier,
    /// amplitude * (1 - |x - center|^2 / radius^2)_+^2, clipped to B_1
    bump,
    /// amplitude * U[0, 1) at every interior node, reproducible from `seed`
    random,
  };

  Kind kind = Kind::barrier;
  double amplitude = 0.5;
  Point center{0.0, 0.0, 0.0};
  double radius = 0.5;
  std::uint64_t seed = 1;

  void validate(int n) const;
  std::string to_string() const;
};

struct SimulationConfig {
  OperatorParams params;
  ReactionTerm reaction;
  QuadratureSpec quad;
  Layout layout = Layout::grid;
  /// Grid spacing; radial mode uses M = round(1 / h) uniform cells.
  double h = 1.0 / 64.0;
  InitialDataSpec initial;

  enum class DtPolicy { automatic, fixed };
  DtPolicy dt_policy = DtPolicy::automatic;
  /// Fixed step, or the cap passed to stable_dt in automatic mode.
  double dt = 0.01;
  double t_end = 50.0;
  /// Steady when max|u(t+dt) - u(t)| / dt stays below this over a whole window.
  double tol_steady = 1e-6;
  double steady_window = 1.0;
  /// Time between stored snapshots; the initial and final fields are always kept.
  double snapshot_every = 0.5;
  std::size_t max_steps = 2'000'000;

  void validate() const;
  int radial_cells() const;
};

/// Approximate omega-limit element: the last field of a run plus convergence data.
struct SteadyProfile {
  Field field;
  double t_reached = 0.0;
  /// Largest per-unit-time residual over the final detection window.
  double residual = 0.0;
  bool converged = false;
  std::string label = "approximate omega-limit element";
};

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  /// Short verdict word written to CSV ("pass", "fail", "strictly-positive", ...).
  std::string verdict;
  std::string detail;
};

struct DiagnosticsReport {
  std::vector<CheckRecord> records;
  std::map<std::string, std::string> metadata;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  bool all_passed() const;
};

}  // namespace tfpl
