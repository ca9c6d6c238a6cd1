#include "cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cli/oracle.hpp"
#include "tfpl/diagnostics.hpp"
#include "tfpl/function_operator.hpp"
#include "tfpl/quadrature.hpp"
#include "tfpl/report.hpp"
#include "tfpl/snapshot.hpp"
#include "tfpl/solver.hpp"

namespace tfpl::cli {

namespace {

namespace fs = std::filesystem;

std::string path_in(const CommandContext& ctx, const std::string& name) {
  return (fs::path(ctx.out_dir) / name).string();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CheckRecord skipped(std::string name, std::string why) {
  CheckRecord r;
  r.name = std::move(name);
  r.passed = true;
  r.verdict = "skipped";
  r.detail = std::move(why);
  return r;
}

void add_metadata(DiagnosticsReport& report, const RunConfig& cfg) {
  const OperatorParams& p = cfg.sim.params;
  report.metadata["params"] = p.describe();
  report.metadata["reaction"] = cfg.sim.reaction.to_string();
  report.metadata["layout"] = to_string(cfg.sim.layout);
  report.metadata["h"] = num(cfg.sim.h);
  report.metadata["initial"] = cfg.sim.initial.to_string();
  report.metadata["threads"] = std::to_string(cfg.threads);
  std::string warn;
  for (const auto& w : p.warnings()) warn += (warn.empty() ? "" : "; ") + w;
  if (!warn.empty()) report.metadata["warnings"] = warn;
}

RunResult simulate_and_save(const CommandContext& ctx, DiagnosticsReport& report) {
  const RunConfig& cfg = ctx.config;
  Solver solver(cfg.sim);
  RunResult res = solver.run();
  const OperatorParams& p = cfg.sim.params;
  const Trajectory& tr = res.trajectory;
  save_snapshot(tr.snapshots.front(), tr.times.front(), p, path_in(ctx, "snapshot_initial.csv"));
  save_snapshot(res.steady.field, res.steady.t_reached, p, path_in(ctx, "snapshot_final.csv"));
  if (cfg.save_all_snapshots) {
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
      save_snapshot(tr.snapshots[k], tr.times[k], p, path_in(ctx, name));
    }
  }
  save_residuals(tr.residuals, path_in(ctx, "residuals.csv"));
  report.metadata["steps"] = std::to_string(res.steps);
  report.metadata["t_reached"] = num(res.steady.t_reached);
  report.metadata["run_seconds"] = num(res.seconds);
  report.metadata["snapshots"] = std::to_string(tr.snapshots.size());

  CheckRecord r;
  r.name = "steady_state";
  r.value = res.steady.residual;
  r.threshold = cfg.sim.tol_steady;
  r.passed = res.steady.converged;
  r.verdict = res.steady.converged ? "converged" : "not-converged";
  r.detail = "t = " + num(res.steady.t_reached) + ", " + std::to_string(res.steps) + " steps";
  report.add(r);
  return res;
}

SteadyProfile load_profile(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const std::string path = cfg.snapshot.empty() ? path_in(ctx, "snapshot_final.csv") : cfg.snapshot;
  if (!fs::exists(path)) throw Error("snapshot file '" + path + "' not found");
  Snapshot snap = load_snapshot(path, cfg.sim.params.n);
  return SteadyProfile{std::move(snap.field), snap.t, 0.0, true, "loaded snapshot " + path};
}

// Dichotomy, Hopf and the steady moving-plane scan, shared by diagnose and report.
void profile_checks(const CommandContext& ctx, const SteadyProfile& prof, const Trajectory* history,
                    DiagnosticsReport& report, MovingPlaneResult* scan_out, double* c_hat_out) {
  const RunConfig& cfg = ctx.config;
  const DiagnosticsOptions& d = cfg.diag;
  const double h = field_spacing(prof.field);
  std::optional<DichotomyResult> dich;
  if (d.dichotomy) {
    dich = dichotomy_check(prof, d.dichotomy_tol);
    report.add(dich->record());
  }
  if (d.hopf) {
    const double lo = d.band_lo > 0.0 ? d.band_lo : 2.0 * h;
    const HopfResult hopf = hopf_ratio(prof, cfg.sim.params.s, lo, d.band_hi, history);
    report.add(hopf.record());
    *c_hat_out = hopf.c_hat;
  }
  if (d.moving_plane) {
    const double tol = d.tol_mp > 0.0 ? d.tol_mp : 10.0 * h;
    *scan_out = moving_plane_scan(prof, d.plane_alphas, tol);
    report.add(scan_out->record());
  }
}

void write_outputs(const CommandContext& ctx, const DiagnosticsReport& report, const std::string& csv_name) {
  const std::string hash = param_hash(ctx.config.sim.params);
  write_text_file(path_in(ctx, csv_name), format_diagnostics_csv(report, hash));
  if (ctx.json) {
    write_text_file(path_in(ctx, std::string(to_string(ctx.config.mode)) + ".json"),
                    report_json(report, ctx.config.mode, hash));
  }
}

}  // namespace

DiagnosticsReport cmd_eval(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  DiagnosticsReport report;
  add_metadata(report, cfg);
  const Solver solver(cfg.sim);
  const Field u0 = solver.initial_field();
  const Field Lu = solver.apply(u0);
  save_snapshot(Lu, 0.0, cfg.sim.params, path_in(ctx, "operator.csv"));

  if (!cfg.eval_points.empty()) {
    const ScalarFieldFn u = initial_function(cfg.sim.initial, cfg.sim.params.s);
    std::string csv = "x1,x2,x3,value,previous,depth,discrete\n";
    for (const Point& x : cfg.eval_points) {
      const FunctionEvalResult r = eval_function_detailed(u, x, cfg.sim.params, cfg.sim.quad);
      char line[200];
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", x[0], x[1], x[2], r.value,
                    r.previous, r.depth, field_value_at(Lu, x));
      csv += line;
      CheckRecord rec;
      rec.name = "eval(" + num(x[0]) + "," + num(x[1]) + "," + num(x[2]) + ")";
      rec.value = r.value;
      rec.threshold = cfg.sim.quad.eps_quad;
      rec.passed = true;
      rec.verdict = "value";
      rec.detail = "depth " + std::to_string(r.depth);
      report.add(rec);
    }
    write_text_file(path_in(ctx, "eval_points.csv"), csv);
  }
  write_outputs(ctx, report, "eval.csv");
  return report;
}

DiagnosticsReport cmd_simulate(const CommandContext& ctx) {
  DiagnosticsReport report;
  add_metadata(report, ctx.config);
  simulate_and_save(ctx, report);
  write_outputs(ctx, report, "simulate.csv");
  return report;
}

DiagnosticsReport cmd_diagnose(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const DiagnosticsOptions& d = cfg.diag;
  DiagnosticsReport report;
  add_metadata(report, cfg);

  std::optional<RunResult> run;
  if (cfg.snapshot.empty()) run = simulate_and_save(ctx, report);
  const SteadyProfile prof = run ? run->steady : load_profile(ctx);
  const double h = field_spacing(prof.field);
  const Trajectory* traj = run ? &run->trajectory : nullptr;

  MovingPlaneResult scan;
  double c_hat = 0.0;
  if (prof.converged) {
    profile_checks(ctx, prof, traj, report, &scan, &c_hat);
  } else {
    for (const char* name : {"dichotomy", "hopf_ratio", "moving_plane"}) {
      report.add(skipped(name, "profile not converged"));
    }
  }

  if (d.moving_plane && traj) {
    // The initial snapshot need not be symmetric; reported, never failed.
    const double tol = d.tol_mp > 0.0 ? d.tol_mp : 10.0 * h;
    const MovingPlaneResult init = moving_plane_scan(as_grid(traj->snapshots.front()), d.plane_alphas, tol);
    CheckRecord r = init.record();
    r.name = "moving_plane_initial";
    r.verdict = init.asymmetry_detected ? "asymmetry-detected" : "symmetric";
    r.passed = true;
    report.add(r);
  }

  std::vector<WSeries> wseries;
  const double tol_w = d.tol_w > 0.0 ? d.tol_w : 10.0 * h;
  if (d.antisymmetric || d.narrow_region) {
    for (double alpha : d.reflection_alphas) {
      const ReflectionSpec spec{alpha, 0};
      const std::string tag = "(alpha=" + num(alpha) + ")";
      if (!traj) {
        if (d.antisymmetric) report.add(skipped("antisymmetric" + tag, "no trajectory for a loaded snapshot"));
        if (d.narrow_region) report.add(skipped("narrow_region" + tag, "no trajectory for a loaded snapshot"));
        continue;
      }
      if (d.antisymmetric) {
        try {
          wseries.push_back(antisymmetric_evolution_check(*traj, spec, tol_w));
          report.add(wseries.back().record());
        } catch (const ContractViolation& e) {
          report.add(skipped("antisymmetric" + tag, e.what()));
        }
      }
      if (d.narrow_region) {
        try {
          report.add(narrow_region_check(*traj, spec, d.delta_strip, tol_w).record());
        } catch (const ContractViolation& e) {
          report.add(skipped("narrow_region" + tag, e.what()));
        }
      }
    }
  }

  if (d.barrier) {
    const std::vector<double> radii = d.barrier_radii.empty() ? default_barrier_radii(h) : d.barrier_radii;
    report.add(barrier_boundedness_scan(cfg.sim.params, radii, h, cfg.sim.quad).record());
  }

  if (d.subsolution) {
    if (!prof.converged) {
      report.add(skipped("subsolution", "profile not converged"));
    } else {
      try {
        report.add(subsolution_comparison_test(prof, d.subsolution_spec, cfg.sim.params, cfg.sim.quad).record());
      } catch (const ContractViolation& e) {
        report.add(skipped("subsolution", e.what()));
      }
    }
  }

  write_text_file(path_in(ctx, "profile.svg"), svg_profile(prof.field, cfg.sim.params.s, c_hat));
  if (!scan.rows.empty()) write_text_file(path_in(ctx, "moving_plane.svg"), svg_moving_plane(scan));
  if (!wseries.empty()) write_text_file(path_in(ctx, "w_series.svg"), svg_w_series(wseries));
  write_outputs(ctx, report, "diagnostics.csv");
  return report;
}

DiagnosticsReport cmd_oracle(const CommandContext& ctx) {
  OracleOptions opts;
  opts.quad = ctx.config.sim.quad;
  opts.seed = ctx.config.sim.initial.seed;
  opts.force_failure = ctx.force_failure;
  DiagnosticsReport report = run_oracle_suite(opts);
  report.metadata["threads"] = std::to_string(ctx.config.threads);
  write_text_file(path_in(ctx, "oracle.csv"), format_diagnostics_csv(report, "oracle"));
  if (ctx.json) write_text_file(path_in(ctx, "oracle.json"), report_json(report, Mode::oracle, "oracle"));
  return report;
}

DiagnosticsReport cmd_report(const CommandContext& ctx) {
  DiagnosticsReport report;
  add_metadata(report, ctx.config);
  const SteadyProfile prof = load_profile(ctx);
  MovingPlaneResult scan;
  double c_hat = 0.0;
  profile_checks(ctx, prof, nullptr, report, &scan, &c_hat);
  write_text_file(path_in(ctx, "profile.svg"), svg_profile(prof.field, ctx.config.sim.params.s, c_hat));
  if (!scan.rows.empty()) write_text_file(path_in(ctx, "moving_plane.svg"), svg_moving_plane(scan));
  write_outputs(ctx, report, "report.csv");
  return report;
}

DiagnosticsReport run_command(const CommandContext& ctx) {
  switch (ctx.config.mode) {
    case Mode::eval: return cmd_eval(ctx);
    case Mode::simulate: return cmd_simulate(ctx);
    case Mode::diagnose: return cmd_diagnose(ctx);
    case Mode::oracle: return cmd_oracle(ctx);
    case Mode::report: return cmd_report(ctx);
  }
  throw ContractViolation("unknown mode");
}

void print_summary(std::ostream& os, const DiagnosticsReport& report) {
  for (const auto& [k, v] : report.metadata) os << "# " << k << ": " << v << '\n';
  for (const auto& r : report.records) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-28s value=%-13.6g threshold=%-11.4g %s", r.passed ? "ok" : "FAIL",
                  r.name.c_str(), r.value, r.threshold, r.verdict.c_str());
    os << line;
    if (!r.detail.empty()) os << "  (" << r.detail << ')';
    os << '\n';
  }
}

std::string report_json(const DiagnosticsReport& report, Mode mode, const std::string& hash) {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["param_hash"] = hash;
  j["metadata"] = report.metadata;
  j["passed"] = report.all_passed();
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"check", r.name},
                    {"value", r.value},
                    {"threshold", r.threshold},
                    {"passed", r.passed},
                    {"verdict", r.verdict},
                    {"detail", r.detail}});
  }
  return j.dump(2) + "\n";
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Generalized tempered fractional p-Laplacian: evaluation, simulation and diagnostics"};
  std::string config_path, mode_name, out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  bool json = false, force_failure = false;
  app.add_option("-c,--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("-m,--mode", mode_name, "eval | simulate | diagnose | oracle | report (overrides [run] mode)");
  app.add_option("-o,--out", out_dir, "Output directory (default: [run] out, then $TFPL_OUT, then .)");
  app.add_option("-t,--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for random initial data");
  app.add_flag("--json", json, "Print the report as JSON and write <mode>.json");
  app.add_flag("--force-failure", force_failure, "Perturb c_norm inside the oracle suite")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CommandContext ctx;
    if (!config_path.empty()) {
      ctx.config = load_config(config_path);
    } else if (mode_name != "oracle") {
      std::cerr << "error: --config is required except for --mode oracle\n";
      return kExitUsage;
    }
    if (!mode_name.empty()) ctx.config.mode = parse_mode(mode_name);
    if (threads) ctx.config.threads = *threads;
    if (seed) ctx.config.sim.initial.seed = *seed;
    ctx.json = json;
    ctx.force_failure = force_failure;
    ctx.out_dir = !out_dir.empty() ? out_dir : ctx.config.out_dir;
    if (ctx.out_dir.empty()) {
      const char* env = std::getenv("TFPL_OUT");
      ctx.out_dir = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw Error("cannot create output directory '" + ctx.out_dir + "': " + ec.message());
    set_thread_count(ctx.config.threads);

    const auto t0 = std::chrono::steady_clock::now();
    DiagnosticsReport report = run_command(ctx);
    report.metadata["wall_seconds"] =
        num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (json) {
      std::cout << report_json(report, ctx.config.mode,
                               ctx.config.mode == Mode::oracle ? "oracle" : param_hash(ctx.config.sim.params));
    } else {
      print_summary(std::cout, report);
    }
    return report.all_passed() ? kExitOk : kExitCheckFailed;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid " << e.key() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const QuadratureError& e) {
    std::cerr << "quadrature error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace tfpl::cli
