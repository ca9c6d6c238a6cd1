#include "tfpl/core_types.hpp"

#include <cmath>
#include <cstdio>

namespace tfpl {

const char* to_string(Layout layout) noexcept {
  return layout == Layout::grid ? "grid" : "radial";
}

void InitialDataSpec::validate(int n) const {
  if (!std::isfinite(amplitude)) throw ValidationError("amplitude", "amplitude must be finite");
  if (kind == Kind::bump) {
    if (!(radius > 0.0)) throw ValidationError("radius", "bump radius must be positive");
    for (int d = n; d < 3; ++d) {
      if (center[d] != 0.0) throw ValidationError("center", "center has more coordinates than n");
    }
  }
  if (kind == Kind::random && amplitude < 0.0) {
    throw ValidationError("amplitude", "random initial data must be nonnegative");
  }
}

std::string InitialDataSpec::to_string() const {
  char buf[160];
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::barrier:
      std::snprintf(buf, sizeof buf, "barrier:%.17g", amplitude);
      return buf;
    case Kind::bump:
      std::snprintf(buf, sizeof buf, "bump:%.17g@(%.17g,%.17g,%.17g)r%.17g", amplitude, center[0],
                    center[1], center[2], radius);
      return buf;
    case Kind::random:
      std::snprintf(buf, sizeof buf, "random:%.17g#%llu", amplitude,
                    static_cast<unsigned long long>(seed));
      return buf;
  }
  return "zero";
}

void SimulationConfig::validate() const {
  params.validate();
  quad.validate();
  initial.validate(params.n);
  if (!(h > 0.0 && h <= 0.25)) throw ValidationError("h", "h must lie in (0, 0.25]");
  if (layout == Layout::radial && params.n != 2 && params.n != 3) {
    throw ValidationError("n", "radial mode supports n = 2 or n = 3");
  }
  if (layout == Layout::grid && params.n > 3) {
    throw ValidationError("n", "grid mode supports n <= 3");
  }
  if (!(t_end > 0.0)) throw ValidationError("t_end", "t_end must be positive");
  if (!(tol_steady > 0.0)) throw ValidationError("tol_steady", "tol_steady must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "dt must be positive");
  if (!(steady_window > 0.0)) throw ValidationError("steady_window", "steady_window must be positive");
  if (!(snapshot_every > 0.0)) {
    throw ValidationError("snapshot_every", "snapshot_every must be positive");
  }
}

int SimulationConfig::radial_cells() const { return static_cast<int>(std::lround(1.0 / h)); }

bool DiagnosticsReport::all_passed() const {
  for (const auto& r : records) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace tfpl
