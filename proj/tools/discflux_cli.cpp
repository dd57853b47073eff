// Command-line driver: solve, check-crossing, build-transform, riemann,
// verify, sweep. Exit status 0 on pass, 1 on a failed check, 2 on usage
// errors.
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "discflux/csv_io.hpp"
#include "discflux/errors.hpp"
#include "discflux/run_config.hpp"

using namespace discflux;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

// Flags that overwrite fields of a RunConfig loaded from --config.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> flux, transform, ic, out;
  std::optional<std::size_t> flux_samples, cells, snapshots;
  std::optional<double> epsilon, half_width, t_end, cfl_hyp, cfl_par;
  std::optional<std::uint64_t> seed;
  std::optional<bool> entropy_checks;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run config");
    app->add_option("--flux", flux, "registry name or file:<path>");
    app->add_option("--flux-samples,--flux_samples", flux_samples);
    app->add_option("--transform", transform,
                    "identity | translation | connection:A,B[,flavor] | file:<path>");
    app->add_option("--ic", ic,
                    "constant:k | riemann:ul,ur | connection:A,B | random-bv:seed,jumps | file:<path>");
    app->add_option("--epsilon", epsilon, "viscosity (0 = 8 dx)");
    app->add_option("--cells", cells);
    app->add_option("--half-width,--half_width", half_width);
    app->add_option("--t-end,--t_end", t_end);
    app->add_option("--cfl-hyp,--cfl_hyp", cfl_hyp);
    app->add_option("--cfl-par,--cfl_par", cfl_par);
    app->add_option("--snapshots", snapshots);
    app->add_option("--seed", seed);
    app->add_option("--entropy-checks,--entropy_checks", entropy_checks);
    app->add_option("--out", out, "output root (default $DISCFLUX_OUT or ./runs)");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) {
      try {
        c = RunConfig::from_json(Json::parse(read_text_file(config_path)));
      } catch (const Json::exception& e) {
        throw ConfigError("cannot parse " + config_path + ": " + e.what());
      }
    }
    if (flux) c.flux = *flux;
    if (flux_samples) c.flux_samples = *flux_samples;
    if (transform) c.transform = *transform;
    if (ic) c.ic = *ic;
    if (out) c.out = *out;
    if (epsilon) c.solver.epsilon = *epsilon;
    if (cells) c.solver.cells = *cells;
    if (half_width) c.solver.half_width = *half_width;
    if (t_end) c.solver.t_end = *t_end;
    if (cfl_hyp) c.solver.cfl_hyp = *cfl_hyp;
    if (cfl_par) c.solver.cfl_par = *cfl_par;
    if (snapshots) c.solver.snapshots = *snapshots;
    if (seed) c.solver.seed = *seed;
    if (entropy_checks) c.entropy_checks = *entropy_checks;
    return c;
  }
};

int cmd_solve(const ConfigFlags& flags) {
  const RunConfig cfg = flags.resolve();
  const RunArtifacts art = execute_run(cfg);
  Json summary = {{"dir", art.dir.string()},
                  {"hash", cfg.hash()},
                  {"steps", art.field.steps},
                  {"bounds", to_json(art.field.bounds)}};
  std::cout << summary.dump(2) << "\n";
  return kPass;
}

int cmd_check_crossing(const std::string& flux_spec, std::size_t samples,
                       const std::string& transform_spec) {
  const FluxPair flux = resolve_flux(flux_spec, samples);
  const TransformPair t = resolve_transform(transform_spec, flux);
  const ComposedFluxes c = compose(flux, t);
  const CrossingReport r = check_crossing(c.fa, c.gb);
  std::cout << to_json(r).dump(2) << "\n";
  return r.holds ? kPass : kFail;
}

int cmd_build_transform(const std::string& flux_spec, std::size_t samples,
                        const std::string& mode, std::optional<double> A,
                        std::optional<double> B, const std::string& flavor,
                        const std::string& output) {
  const FluxPair flux = resolve_flux(flux_spec, samples);
  TransformPair t = identity_transform(flux);
  if (mode == "translation") {
    t = build_translation_transform(flux);
  } else {
    if (!A || !B) throw ConfigError("connection mode needs --A and --B");
    t = build_connection_transform(
        flux, Connection{*A, *B, connection_flavor_from_string(flavor)});
  }
  const std::string csv = transform_to_csv(t);
  if (output.empty()) {
    std::cout << csv;
  } else {
    write_text_file(output, csv);
  }
  std::fprintf(stderr, "kind=%s k_left=%.17g k_right=%.17g\n",
               to_string(t.kind).c_str(), t.k_left, t.k_right);
  return kPass;
}

int cmd_riemann(const std::string& flux_spec, std::size_t samples,
                const std::string& branch, double ul, double ur, double t,
                std::size_t cells, double half_width) {
  const FluxPair flux = resolve_flux(flux_spec, samples);
  const SampledFunction& f = branch == "g" ? flux.g() : flux.f();
  const RiemannSolution sol = classical_riemann(f, ul, ur);
  SolverConfig grid;
  grid.cells = cells;
  grid.half_width = half_width;
  std::cout << riemann_to_csv(sol, grid.cell_centers(), t);
  return check_shocks(f, sol).pass ? kPass : kFail;
}

int cmd_verify(const std::string& run_dir) {
  const VerifyOutcome v = verify_run(run_dir);
  Json summary = {{"pass", v.report.at("pass")}, {"range", v.report.at("range")}};
  if (v.report.contains("entropy_ab")) {
    summary["entropy_ab"] = v.report["entropy_ab"]["pass"];
  }
  if (v.report.contains("entropy_AB")) {
    summary["entropy_AB"] = v.report["entropy_AB"]["pass"];
  }
  std::cout << summary.dump(2) << "\n";
  return v.pass ? kPass : kFail;
}

int cmd_sweep(const ConfigFlags& flags, std::size_t levels) {
  const SweepOutcome s = run_sweep(flags.resolve(), levels);
  std::cout << Json{{"dir", s.dir.string()},
                    {"distances", s.report["distances"]},
                    {"ratios", s.report["ratios"]},
                    {"pass", s.pass}}
                   .dump(2)
            << "\n";
  return s.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous solver and admissibility checks for conservation laws "
               "with a flux discontinuous at x = 0"};
  app.require_subcommand(1);

  ConfigFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "run the solver, write snapshots");
  solve_flags.attach(solve_cmd);

  std::string flux_spec = "burgers-like", transform_spec = "identity";
  std::size_t samples = kDefaultSamples;
  auto* cross_cmd = app.add_subcommand("check-crossing", "test the crossing condition");
  cross_cmd->add_option("--flux", flux_spec);
  cross_cmd->add_option("--flux-samples,--flux_samples", samples);
  cross_cmd->add_option("--transform", transform_spec);

  std::string mode = "connection", flavor = "generalized", output;
  std::optional<double> A, B;
  auto* build_cmd = app.add_subcommand("build-transform", "emit a transform CSV");
  build_cmd->add_option("--flux", flux_spec);
  build_cmd->add_option("--flux-samples,--flux_samples", samples);
  build_cmd->add_option("--mode", mode)
      ->check(CLI::IsMember({"translation", "connection"}));
  build_cmd->add_option("--A", A);
  build_cmd->add_option("--B", B);
  build_cmd->add_option("--flavor", flavor)
      ->check(CLI::IsMember({"weak", "classic", "generalized"}));
  build_cmd->add_option("--output", output, "CSV path (default stdout)");

  std::string branch = "f";
  double ul = 0.0, ur = 0.0, t = 0.5, half_width = 2.0;
  std::size_t cells = 1024;
  auto* riemann_cmd = app.add_subcommand("riemann", "sample an exact Riemann solution");
  riemann_cmd->add_option("--flux", flux_spec);
  riemann_cmd->add_option("--flux-samples,--flux_samples", samples);
  riemann_cmd->add_option("--branch", branch)->check(CLI::IsMember({"f", "g"}));
  riemann_cmd->add_option("--ul", ul)->required();
  riemann_cmd->add_option("--ur", ur)->required();
  riemann_cmd->add_option("--t", t);
  riemann_cmd->add_option("--cells", cells);
  riemann_cmd->add_option("--half-width,--half_width", half_width);

  std::string run_dir;
  auto* verify_cmd = app.add_subcommand("verify", "diagnostics on a run directory");
  verify_cmd->add_option("--run", run_dir)->required();

  ConfigFlags sweep_flags;
  std::size_t levels = 3;
  auto* sweep_cmd = app.add_subcommand("sweep", "vanishing-viscosity ladder");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--levels", levels);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_flags);
    if (*cross_cmd) return cmd_check_crossing(flux_spec, samples, transform_spec);
    if (*build_cmd) {
      return cmd_build_transform(flux_spec, samples, mode, A, B, flavor, output);
    }
    if (*riemann_cmd) {
      return cmd_riemann(flux_spec, samples, branch, ul, ur, t, cells, half_width);
    }
    if (*verify_cmd) return cmd_verify(run_dir);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, levels);
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kFail;
  } catch (const StabilityError& e) {
    std::cerr << "unstable: " << e.what() << "\n";
    return kFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
