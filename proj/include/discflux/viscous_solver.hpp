#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "discflux/flux_model.hpp"
#include "discflux/initial_data.hpp"
#include "discflux/transform_builder.hpp"

namespace discflux {

struct SolverConfig {
  double epsilon = 0.0;     // viscosity and Heaviside smoothing scale
  std::size_t cells = 1024;  // even, so x = 0 is a cell face
  double half_width = 2.0;  // x in [-L, L]
  double t_end = 0.5;
  double cfl_hyp = 0.5;
  double cfl_par = 0.5;
  std::size_t snapshots = 33;  // uniformly spaced, including t = 0, t_end
  std::uint64_t seed = 0;

  double dx() const { return 2.0 * half_width / static_cast<double>(cells); }
  std::vector<double> cell_centers() const;

  /// Throws ConfigError. Requires 2/epsilon > L so the initial-data cutoff
  /// is identically one on the grid.
  void validate() const;

  /// Config with epsilon = factor * dx.
  static SolverConfig coupled(std::size_t cells, double half_width = 2.0,
                              double t_end = 0.5, double factor = 8.0);
};

/// Even bump c exp(-1/(1-z^2)) on (-1, 1) with unit mass.
double mollifier_density(double z);

/// H_eps(x) = integral of the mollifier up to x/eps; throws ArgumentError
/// for eps <= 0.
double smooth_heaviside(double x, double eps);

/// d/dx H_eps(x).
double smooth_delta(double x, double eps);

/// Empirical a-priori bound constants of one run.
struct BoundConstants {
  double c0 = 0.0;  // excess of v beyond the transform domain
  double c1 = 0.0;  // max_n sum |v^{n+1} - v^n| dx / dt
  double c2 = 0.0;  // max_n eps sum (D_x v)^2 dx
  double u_excess = 0.0;  // excess of u beyond [a, b]
};

struct SolutionField {
  std::vector<double> x;
  std::vector<double> times;
  std::vector<std::vector<double>> u;  // [snapshot][cell]
  std::vector<std::vector<double>> v;
  std::vector<double> u0;  // initial data sampled at cell centres
  SolverConfig config;
  double dt = 0.0;
  std::size_t steps = 0;
  BoundConstants bounds;

  std::size_t cells() const noexcept { return x.size(); }
  std::size_t snapshots() const noexcept { return times.size(); }
  double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
};

/// v at t = 0: the transformed data convolved with the scaled mollifier at
/// every cell centre. Throws DomainError if u0 leaves [a, b].
std::vector<double> mollify_initial(const FluxPair& flux, const InitialData& u0,
                                    const TransformPair& t,
                                    const SolverConfig& cfg);

/// Explicit conservative update of m(x, v) = H_eps(x) alpha(v) +
/// H_eps(-x) beta(v) with Lax-Friedrichs flux in v and central viscosity.
class ViscousScheme {
 public:
  ViscousScheme(const FluxPair& flux, const TransformPair& t,
                const SolverConfig& cfg);

  /// Largest stable step: min(cfl_hyp dx mu / Lip, cfl_par dx^2 mu / 2eps)
  /// with mu the smallest slope of alpha, beta.
  double max_dt() const noexcept { return max_dt_; }
  double lax_friedrichs_speed() const noexcept { return lambda_; }

  /// One step of size dt. Throws StabilityError if a cell leaves the
  /// attainable range of v -> m(x_i, v).
  void step(std::span<const double> v, std::span<double> out, double dt) const;

  double conserved(std::size_t cell, double v) const;
  double recover(std::size_t cell, double m) const;
  double flux_at(std::size_t cell, double v) const;

  std::span<const double> x() const noexcept { return x_; }
  const ComposedFluxes& fluxes() const noexcept { return fluxes_; }

 private:
  double blend(double h, double v) const;
  double unblend(double h, double m) const;
  double flux_with(double h, double v) const;

  TransformPair transform_;
  ComposedFluxes fluxes_;
  SolverConfig cfg_;
  std::vector<double> x_;
  std::vector<double> h_;  // H_eps at cells, ghosts at both ends
  double lambda_ = 0.0;
  double max_dt_ = 0.0;
  bool identity_ = false;
};

/// Integrates to t_end storing cfg.snapshots snapshots. Throws
/// PreconditionError unless verify_transform passes.
SolutionField solve(const FluxPair& flux, const InitialData& u0,
                    const TransformPair& t, const SolverConfig& cfg);

/// u = alpha(v) for x > 0 and beta(v) for x <= 0 (sharp Heaviside).
std::vector<double> reconstruct_u(std::span<const double> x,
                                  std::span<const double> v,
                                  const TransformPair& t);

struct LadderResult {
  std::vector<SolutionField> levels;
  /// L1 distance on the window between consecutive levels at t_end.
  std::vector<double> distances;
  std::vector<double> ratios;
  bool converged = true;  // every distance shrank by <= 0.8 (or is ~0)
};

inline constexpr double kLadderRatio = 0.8;
inline constexpr double kLadderFloor = 1e-10;

/// Runs (eps_0 2^-k, N_0 2^k), k < levels, with eps_0 = 8 dx_0.
LadderResult ladder(const FluxPair& flux, const InitialData& u0,
                    const TransformPair& t, const SolverConfig& base,
                    std::size_t levels, double window = 1.0);

/// L1 distance on |x| <= window between a field on N cells and one on
/// 2^j N cells (the finer one is averaged onto the coarse cells).
double restricted_l1_distance(std::span<const double> coarse_x,
                              std::span<const double> coarse,
                              std::span<const double> fine, double window);

}  // namespace discflux
