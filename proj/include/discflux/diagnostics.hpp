#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "discflux/flux_model.hpp"
#include "discflux/initial_data.hpp"
#include "discflux/transform_builder.hpp"
#include "discflux/viscous_solver.hpp"

namespace discflux {

/// phi(t, x) = amplitude * hat((t - t_center)/t_half) * hat((x - x_center)/x_half)
/// with hat(z) = max(0, 1 - |z|).
struct HatFunction {
  double t_center = 0.0;
  double t_half = 0.0;
  double x_center = 0.0;
  double x_half = 0.0;
  double amplitude = 1.0;

  double operator()(double t, double x) const;
  double sup() const noexcept { return amplitude; }
  double support_area() const noexcept { return 4.0 * t_half * x_half; }
};

inline constexpr double kInterfaceTol = 1e-3;

struct EntropyTestConfig {
  std::vector<double> xi_values;
  std::vector<HatFunction> test_functions;
  /// Relative tolerance; the absolute per-phi tolerance is
  /// rel_tol * sup(phi) * area(phi) * flux_scale plus the viscous allowance.
  double rel_tol = 1e-3;
  double tau = 1e-12;  // sgn(z) = 0 for |z| <= tau
};

/// 16 xi values across the transform domain and 10 hats: four centred on
/// the interface, the rest drawn from `seed`. All supports lie inside
/// [0, t_end] x [-L, L].
EntropyTestConfig default_entropy_config(const SolutionField& field,
                                         const TransformPair& t,
                                         std::uint64_t seed = 0);

/// Hats supported in x > 0 (right = true) or x < 0, for the one-sided
/// inequalities.
std::vector<HatFunction> one_sided_hats(const SolutionField& field, bool right,
                                        std::size_t count = 6,
                                        std::uint64_t seed = 0);

struct ResidualEntry {
  double xi = 0.0;
  std::size_t phi = 0;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct EntropyReport {
  std::string inequality;
  std::vector<ResidualEntry> entries;
  double worst_residual = 0.0;  // max residual / tolerance excess
  double worst_ratio = 0.0;     // max residual / tolerance
  std::vector<double> left_trace;
  std::vector<double> right_trace;
  /// max over t > 0 of |f(u+) - g(u-)|, compared against kInterfaceTol +
  /// Lip * (trace Cauchy indicator) + nu * (|D_x v| at both trace cells)
  /// + |d/dt| of the mass between the trace cells. The last two vanish for
  /// frozen fields; for viscous ones they are the viscous flux and layer
  /// storage that make up the balance at finite epsilon.
  double interface_mismatch = 0.0;
  bool interface_ok = true;
  BoundConstants bounds;
  bool pass = true;
};

/// Discrete pairing of the transformed entropy inequality with every
/// (xi, phi), by summation by parts over the stored snapshots. Throws
/// CoverageError when a test function reaches outside the stored window
/// or covers fewer than two snapshot intervals.
EntropyReport entropy_residual_ab(const SolutionField& field,
                                  const FluxPair& flux, const TransformPair& t,
                                  const EntropyTestConfig& cfg);

/// Same pairing for the conservation law itself (no entropy, no interface
/// term): sum_n sum_i (m^{n+1} - m^n) phi dx + fluxes.
double conservation_residual(const SolutionField& field, const FluxPair& flux,
                             const TransformPair& t, const HatFunction& phi);

struct TypeABReport {
  EntropyReport left;     // Kruzhkov with g, test functions in x < 0
  EntropyReport right;    // Kruzhkov with f, test functions in x > 0
  EntropyReport adapted;  // |u - c^{AB}(x)| across the interface
  bool pass() const { return left.pass && right.pass && adapted.pass; }
};

/// Entropy conditions of type (A, B) on the u field. Empty xi_values or
/// test_functions fall back to 16 states over [a, b] and the default
/// interface hats.
TypeABReport entropy_residual_AB(const SolutionField& field, const FluxPair& flux,
                                 const Connection& conn,
                                 const EntropyTestConfig& cfg);

struct Traces {
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> indicators;  // per stored time
  double cauchy_indicator = 0.0;   // max over time
  std::size_t left_cell = 0;       // innermost cells of the finest windows
  std::size_t right_cell = 0;
};

/// One-sided window averages over (s, s + d_j) and (-s - d_j, -s) with
/// d_j = 2^{-j} 16 dx, j = 1..window_count, where s is the smoothing width
/// epsilon rounded up to whole cells (0 for frozen fields). Throws
/// ResolutionError with fewer than s + 8 cells per side or a window
/// narrower than one cell.
Traces extract_traces(const SolutionField& field, std::size_t window_count = 4);

/// |f(right trace) - g(left trace)| per stored time.
std::vector<double> interface_flux_mismatch(const SolutionField& field,
                                            const FluxPair& flux,
                                            std::size_t window_count = 4);

struct L1Stability {
  std::vector<double> times;
  std::vector<double> distance;  // int_{-R}^{R} |u - v| dx per time
  double integrated = 0.0;       // trapezoid in time of `distance`
  double initial = 0.0;          // int |u0 - v0| dx over the whole grid
  double constant = 0.0;         // max_t distance / initial (0 if initial = 0)
};

/// Throws ArgumentError when the grids or stored times differ.
L1Stability l1_stability(const SolutionField& u, const SolutionField& v,
                         double R);

struct ComparisonResult {
  bool pass = true;
  double max_violation = 0.0;  // max (u - v)
};

/// u <= v + tol at every stored cell and time. Throws ArgumentError unless
/// u0 <= v0 cellwise.
ComparisonResult max_principle_check(const SolutionField& u,
                                     const SolutionField& v, double tol = 1e-8);

struct BoundsReport {
  std::vector<BoundConstants> levels;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

BoundsReport bounds_report(std::span<const SolutionField> ladder);

struct ConstantStateCheck {
  bool pass = true;
  double worst = 0.0;        // max over xi of the interface expression
  double worst_xi = 0.0;
};

/// Whether u = state is admissible for transform t: substitutes
/// v = alpha^{-1}(state) H(x) + beta^{-1}(state) H(-x) into the transformed
/// inequality (only the interface term survives) over a xi grid covering
/// the transform domain plus one state width on each side.
ConstantStateCheck constant_state_admissibility(const FluxPair& flux,
                                                const TransformPair& t,
                                                double state,
                                                std::size_t xi_count = 2001);

/// Time-independent field u(x) on cfg's grid with v = to_v(u); epsilon is
/// stored as 0 so residuals carry no viscous allowance.
SolutionField frozen_field(const InitialData& u, const TransformPair& t,
                           SolverConfig cfg);

}  // namespace discflux
