#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "discflux/diagnostics.hpp"
#include "discflux/flux_model.hpp"
#include "discflux/initial_data.hpp"
#include "discflux/riemann_oracle.hpp"
#include "discflux/transform_builder.hpp"
#include "discflux/viscous_solver.hpp"

namespace discflux {

using Json = nlohmann::json;

/// Everything needed to reproduce a run. Specs:
///   flux       registry name, or file:<path> with columns u,f,g
///   transform  identity | translation | connection:A,B[,flavor] | file:<path>
///   ic         constant:k | riemann:ul,ur | connection:A,B[,flavor]
///              | random-bv:seed,jumps | file:<path> with columns x,u
/// solver.epsilon = 0 means 8 dx.
struct RunConfig {
  std::string flux = "burgers-like";
  std::size_t flux_samples = kDefaultSamples;
  std::string transform = "identity";
  std::string ic = "constant:0";
  SolverConfig solver;
  bool entropy_checks = true;
  std::string out;  // output root; not part of the hash

  /// Solver config with epsilon filled in.
  SolverConfig effective_solver() const;

  Json to_json(bool with_out = false) const;
  /// Missing keys keep their defaults; unknown keys throw ConfigError.
  static RunConfig from_json(const Json& j);

  /// 16 hex digits of FNV-1a over the canonical (key-sorted) JSON.
  std::string hash() const;
};

std::uint64_t fnv1a64(const std::string& bytes);

FluxPair resolve_flux(const std::string& spec,
                      std::size_t samples = kDefaultSamples);
TransformPair resolve_transform(const std::string& spec, const FluxPair& flux);
InitialData resolve_initial_data(const std::string& spec, const FluxPair& flux,
                                 double half_width);

/// DISCFLUX_OUT if set, else "runs".
std::filesystem::path default_output_root();

struct RunArtifacts {
  std::filesystem::path dir;  // <out>/<hash>
  SolutionField field;
};

/// Solves and writes <out>/<hash>/{snapshots/snap_NNN.csv, manifest.json,
/// transform.csv}.
RunArtifacts execute_run(const RunConfig& cfg);

struct LoadedRun {
  RunConfig config;
  SolutionField field;
};

/// Reads a run directory back. Throws ConfigError on a missing or malformed
/// manifest or snapshot.
LoadedRun load_run(const std::filesystem::path& dir);

struct VerifyOutcome {
  bool pass = true;
  Json report;
};

/// Diagnostics battery on a run directory; writes report.json there.
VerifyOutcome verify_run(const std::filesystem::path& dir);

struct SweepOutcome {
  bool pass = true;
  Json report;
  std::filesystem::path dir;
};

/// Vanishing-viscosity ladder from cfg's grid; writes sweep.json.
SweepOutcome run_sweep(const RunConfig& cfg, std::size_t levels);

Json to_json(const CrossingReport& r);
Json to_json(const EntropyReport& r);
Json to_json(const BoundConstants& b);

}  // namespace discflux
