#include "discflux/run_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "discflux/csv_io.hpp"
#include "discflux/errors.hpp"

namespace discflux {
namespace {

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double to_number(const std::string& s, const std::string& spec) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw ConfigError("bad number '" + s + "' in spec '" + spec + "'");
  }
  return v;
}

// "name:x,y,..." -> numbers after the colon, with an optional trailing word.
std::vector<double> spec_numbers(const std::string& spec, std::size_t lo,
                                 std::size_t hi, std::string* word = nullptr) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("spec '" + spec + "' needs arguments after ':'");
  }
  auto parts = split_args(spec.substr(colon + 1));
  if (word && parts.size() == hi + 1) {
    *word = parts.back();
    parts.pop_back();
  }
  if (parts.size() < lo || parts.size() > hi) {
    throw ConfigError("spec '" + spec + "' has the wrong number of arguments");
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_number(p, spec));
  return out;
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%03zu.csv", k);
  return buf;
}

Connection parse_connection(const std::string& spec) {
  std::string flavor = "generalized";
  const auto n = spec_numbers(spec, 2, 2, &flavor);
  return Connection{n[0], n[1], connection_flavor_from_string(flavor)};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SolverConfig RunConfig::effective_solver() const {
  SolverConfig s = solver;
  if (s.epsilon <= 0.0) s.epsilon = 8.0 * s.dx();
  return s;
}

Json RunConfig::to_json(bool with_out) const {
  Json j = {
      {"flux", flux},
      {"flux_samples", flux_samples},
      {"transform", transform},
      {"ic", ic},
      {"epsilon", solver.epsilon},
      {"cells", solver.cells},
      {"half_width", solver.half_width},
      {"t_end", solver.t_end},
      {"cfl_hyp", solver.cfl_hyp},
      {"cfl_par", solver.cfl_par},
      {"snapshots", solver.snapshots},
      {"seed", solver.seed},
      {"entropy_checks", entropy_checks},
  };
  if (with_out) j["out"] = out;
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "flux") c.flux = value.get<std::string>();
      else if (key == "flux_samples") c.flux_samples = value.get<std::size_t>();
      else if (key == "transform") c.transform = value.get<std::string>();
      else if (key == "ic") c.ic = value.get<std::string>();
      else if (key == "epsilon") c.solver.epsilon = value.get<double>();
      else if (key == "cells") c.solver.cells = value.get<std::size_t>();
      else if (key == "half_width") c.solver.half_width = value.get<double>();
      else if (key == "t_end") c.solver.t_end = value.get<double>();
      else if (key == "cfl_hyp") c.solver.cfl_hyp = value.get<double>();
      else if (key == "cfl_par") c.solver.cfl_par = value.get<double>();
      else if (key == "snapshots") c.solver.snapshots = value.get<std::size_t>();
      else if (key == "seed") c.solver.seed = value.get<std::uint64_t>();
      else if (key == "entropy_checks") c.entropy_checks = value.get<bool>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

std::string RunConfig::hash() const { return hex16(fnv1a64(to_json().dump())); }

FluxPair resolve_flux(const std::string& spec, std::size_t samples) {
  if (starts_with(spec, "file:")) {
    return flux_from_csv(read_text_file(spec.substr(5)));
  }
  if (!is_registry_flux(spec)) throw ConfigError("unknown flux '" + spec + "'");
  return registry_flux(spec, samples);
}

TransformPair resolve_transform(const std::string& spec, const FluxPair& flux) {
  if (spec == "identity") return identity_transform(flux);
  if (spec == "translation") return build_translation_transform(flux);
  if (starts_with(spec, "connection:")) {
    return build_connection_transform(flux, parse_connection(spec));
  }
  if (starts_with(spec, "file:")) {
    return transform_from_csv(read_text_file(spec.substr(5)));
  }
  throw ConfigError("unknown transform '" + spec + "'");
}

InitialData resolve_initial_data(const std::string& spec, const FluxPair& flux,
                                 double half_width) {
  if (starts_with(spec, "constant:")) {
    return InitialData::constant(spec_numbers(spec, 1, 1)[0]);
  }
  if (starts_with(spec, "riemann:")) {
    const auto n = spec_numbers(spec, 2, 2);
    return InitialData::riemann(n[0], n[1]);
  }
  if (starts_with(spec, "connection:")) {
    return steady_connection_state(flux, parse_connection(spec));
  }
  if (starts_with(spec, "random-bv:")) {
    const auto n = spec_numbers(spec, 2, 2);
    if (n[0] < 0 || n[1] < 0) throw ConfigError("random-bv needs seed, jumps >= 0");
    return InitialData::random_bv(static_cast<std::uint64_t>(n[0]),
                                  static_cast<int>(n[1]), flux.a(), flux.b(),
                                  half_width);
  }
  if (starts_with(spec, "file:")) {
    const CsvTable t = parse_csv(read_text_file(spec.substr(5)));
    return InitialData::table(t.column("x"), t.column("u"));
  }
  throw ConfigError("unknown initial data '" + spec + "'");
}

std::filesystem::path default_output_root() {
  const char* env = std::getenv("DISCFLUX_OUT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("runs");
}

Json to_json(const CrossingReport& r) {
  Json j = {{"holds", r.holds}, {"crossings", r.crossings}};
  if (r.witness) {
    j["witness"] = {r.witness->first, r.witness->second};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const BoundConstants& b) {
  return {{"c0", b.c0}, {"c1", b.c1}, {"c2", b.c2}, {"u_excess", b.u_excess}};
}

Json to_json(const EntropyReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"xi", e.xi},
                       {"phi", e.phi},
                       {"residual", e.residual},
                       {"tolerance", e.tolerance}});
  }
  return {{"inequality", r.inequality},
          {"pass", r.pass},
          {"worst_residual", r.worst_residual},
          {"worst_ratio", r.worst_ratio},
          {"interface_mismatch", r.interface_mismatch},
          {"interface_ok", r.interface_ok},
          {"left_trace", r.left_trace},
          {"right_trace", r.right_trace},
          {"bounds", to_json(r.bounds)},
          {"entries", entries}};
}

RunArtifacts execute_run(const RunConfig& cfg) {
  const SolverConfig solver = cfg.effective_solver();
  const FluxPair flux = resolve_flux(cfg.flux, cfg.flux_samples);
  const TransformPair t = resolve_transform(cfg.transform, flux);
  const InitialData u0 = resolve_initial_data(cfg.ic, flux, solver.half_width);

  RunArtifacts art;
  art.field = solve(flux, u0, t, solver);
  const auto root = cfg.out.empty() ? default_output_root()
                                    : std::filesystem::path(cfg.out);
  art.dir = root / cfg.hash();
  const auto& f = art.field;
  for (std::size_t k = 0; k < f.snapshots(); ++k) {
    write_text_file(art.dir / "snapshots" / snapshot_name(k),
                    snapshot_to_csv(f.x, f.u[k], f.v[k]));
  }
  write_text_file(art.dir / "transform.csv", transform_to_csv(t));
  Json manifest = {{"config", cfg.to_json()},
                   {"hash", cfg.hash()},
                   {"epsilon", solver.epsilon},
                   {"transform_kind", to_string(t.kind)},
                   {"dt", f.dt},
                   {"steps", f.steps},
                   {"times", f.times},
                   {"bounds", to_json(f.bounds)}};
  if (t.c) manifest["c"] = *t.c;
  write_text_file(art.dir / "manifest.json", manifest.dump(2) + "\n");
  return art;
}

LoadedRun load_run(const std::filesystem::path& dir) {
  Json manifest;
  try {
    manifest = Json::parse(read_text_file(dir / "manifest.json"));
  } catch (const Json::exception& e) {
    throw ConfigError("malformed manifest in " + dir.string() + ": " + e.what());
  }
  LoadedRun run;
  try {
    run.config = RunConfig::from_json(manifest.at("config"));
    run.field.times = manifest.at("times").get<std::vector<double>>();
    const Json& b = manifest.at("bounds");
    run.field.bounds = {b.at("c0").get<double>(), b.at("c1").get<double>(),
                        b.at("c2").get<double>(), b.at("u_excess").get<double>()};
    run.field.dt = manifest.at("dt").get<double>();
    run.field.steps = manifest.at("steps").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw ConfigError("manifest in " + dir.string() + " incomplete: " + e.what());
  }
  run.field.config = run.config.effective_solver();
  for (std::size_t k = 0; k < run.field.times.size(); ++k) {
    const CsvTable t =
        parse_csv(read_text_file(dir / "snapshots" / snapshot_name(k)));
    if (k == 0) run.field.x = t.column("x");
    if (t.column("x") != run.field.x) {
      throw ConfigError("snapshot " + std::to_string(k) + " grid differs");
    }
    run.field.u.push_back(t.column("u"));
    run.field.v.push_back(t.column("v"));
  }
  const FluxPair flux = resolve_flux(run.config.flux, run.config.flux_samples);
  const InitialData u0 = resolve_initial_data(run.config.ic, flux,
                                              run.field.config.half_width);
  run.field.u0 = u0.cell_values(run.field.x);
  return run;
}

VerifyOutcome verify_run(const std::filesystem::path& dir) {
  const LoadedRun run = load_run(dir);
  const FluxPair flux = resolve_flux(run.config.flux, run.config.flux_samples);
  const TransformPair t = resolve_transform(run.config.transform, flux);
  const SolutionField& field = run.field;

  VerifyOutcome out;
  Json& rep = out.report;
  rep["hash"] = run.config.hash();

  const bool in_range =
      field.bounds.c0 <= 1e-10 && (t.clipped || field.bounds.u_excess <= 1e-10);
  rep["range"] = {{"pass", in_range}, {"bounds", to_json(field.bounds)}};
  out.pass = out.pass && in_range;

  const Traces tr = extract_traces(field);
  const auto mismatch = interface_flux_mismatch(field, flux);
  rep["traces"] = {{"left", tr.left},
                   {"right", tr.right},
                   {"cauchy_indicator", tr.cauchy_indicator},
                   {"interface_mismatch", mismatch}};

  if (run.config.entropy_checks) {
    const EntropyTestConfig ecfg =
        default_entropy_config(field, t, field.config.seed);
    const EntropyReport ab = entropy_residual_ab(field, flux, t, ecfg);
    rep["entropy_ab"] = to_json(ab);
    out.pass = out.pass && ab.pass;
    if (t.connection) {
      EntropyTestConfig acfg = ecfg;
      acfg.xi_values.clear();
      const TypeABReport AB = entropy_residual_AB(field, flux, *t.connection, acfg);
      rep["entropy_AB"] = {{"left", to_json(AB.left)},
                           {"right", to_json(AB.right)},
                           {"adapted", to_json(AB.adapted)},
                           {"pass", AB.pass()}};
      rep["agreement"] = ab.pass == AB.pass();
      out.pass = out.pass && AB.pass();
    }
  }
  rep["pass"] = out.pass;
  write_text_file(dir / "report.json", rep.dump(2) + "\n");
  return out;
}

SweepOutcome run_sweep(const RunConfig& cfg, std::size_t levels) {
  const SolverConfig base = cfg.effective_solver();
  const FluxPair flux = resolve_flux(cfg.flux, cfg.flux_samples);
  const TransformPair t = resolve_transform(cfg.transform, flux);
  const InitialData u0 = resolve_initial_data(cfg.ic, flux, base.half_width);
  const LadderResult lad = ladder(flux, u0, t, base, levels);
  const BoundsReport bounds = bounds_report(lad.levels);

  SweepOutcome out;
  Json lv = Json::array();
  for (const auto& f : lad.levels) {
    lv.push_back({{"cells", f.config.cells},
                  {"epsilon", f.config.epsilon},
                  {"steps", f.steps},
                  {"bounds", to_json(f.bounds)}});
  }
  out.pass = lad.converged && bounds.pass();
  out.report = {{"hash", cfg.hash()},
                {"levels", lv},
                {"distances", lad.distances},
                {"ratios", lad.ratios},
                {"converged", lad.converged},
                {"bound_failures", bounds.failures},
                {"pass", out.pass}};
  const auto root = cfg.out.empty() ? default_output_root()
                                    : std::filesystem::path(cfg.out);
  out.dir = root / cfg.hash();
  write_text_file(out.dir / "sweep.json", out.report.dump(2) + "\n");
  return out;
}

}  // namespace discflux
