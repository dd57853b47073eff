#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "discflux/monotone_bijection.hpp"
#include "discflux/sampled_function.hpp"

namespace discflux {

inline constexpr double kTolEndpoint = 1e-12;
inline constexpr double kTolFlat = 1e-10;
inline constexpr std::size_t kDefaultSamples = 4096;

enum class Branch { kF, kG };

/// Flux H(x) f(u) + H(-x) g(u) on the state interval [a, b]; f acts for
/// x > 0, g for x <= 0. Both branches share one uniform sample lattice.
class FluxPair {
 public:
  /// Throws ArgumentError if a >= b, the lattices differ, or an endpoint
  /// value exceeds kTolEndpoint in magnitude.
  FluxPair(SampledFunction f, SampledFunction g);

  template <typename F, typename G>
  static FluxPair sample(double a, double b, std::size_t intervals, F&& f,
                         G&& g) {
    return FluxPair(SampledFunction::sample(a, b, intervals, f),
                    SampledFunction::sample(a, b, intervals, g));
  }

  const SampledFunction& f() const noexcept { return f_; }
  const SampledFunction& g() const noexcept { return g_; }
  const SampledFunction& branch(Branch which) const noexcept {
    return which == Branch::kF ? f_ : g_;
  }
  double a() const noexcept { return f_.lo(); }
  double b() const noexcept { return f_.hi(); }
  std::size_t intervals() const noexcept { return f_.intervals(); }

  /// Largest |f|, |g| (1 if both vanish identically).
  double flux_scale() const;

  FluxPair swapped() const { return FluxPair(g_, f_); }

 private:
  SampledFunction f_;
  SampledFunction g_;
};

/// max{l, min{k, u}}; throws ArgumentError unless l < k.
double truncate(double u, double l, double k);

/// flux o m resampled on m's domain. `intervals` = 0 picks the flux's
/// resolution scaled by the domain width. Throws CompositionError if m's
/// range leaves the flux domain.
SampledFunction compose_flux(const SampledFunction& flux,
                             const MonotoneBijection& m,
                             std::size_t intervals = 0);

/// Same composition with the clipped branch; no range restriction.
SampledFunction compose_flux(const ClippedFunction& flux,
                             const MonotoneBijection& m,
                             std::size_t intervals = 0);

ClippedFunction clip_flux(const SampledFunction& flux);

struct LocalMaximum {
  double location;
  double value;
};

/// Interior sample-level local maxima sorted by location. A plateau
/// maximum reports its midpoint. Requires at least 8 intervals.
std::vector<LocalMaximum> find_local_maxima(const SampledFunction& flux,
                                            double tol_flat = kTolFlat);

struct ConstantInterval {
  double left;
  double right;
};

struct ConstantIntervalSet {
  Branch branch = Branch::kF;
  std::vector<ConstantInterval> intervals;

  bool empty() const noexcept { return intervals.empty(); }
};

/// Maximal runs of at least two samples over which the branch varies by no
/// more than tol_flat. An empty result certifies nonconstancy.
ConstantIntervalSet detect_constant_intervals(const SampledFunction& flux,
                                              Branch branch = Branch::kF,
                                              double tol_flat = kTolFlat);

/// Built-in fluxes:
///   burgers-like   f = g = u(1-u)            on [0,1]
///   demo-cross     f = u(1-u), g = 2u(1-u)^2 on [0,1]
///   demo-swapped   f = 2u(1-u)^2, g = u(1-u) on [0,1]
///   plateau        f = g = min(4u, 1, 4(1-u)) on [0,1]
///   poly:c0,c1,..|d0,d1,..   f = sum c_i u^i, g = sum d_i u^i on [0,1]
FluxPair registry_flux(const std::string& name,
                       std::size_t intervals = kDefaultSamples);

bool is_registry_flux(const std::string& name);

}  // namespace discflux
