#pragma once

#include <span>
#include <string>
#include <vector>

#include "discflux/flux_model.hpp"
#include "discflux/initial_data.hpp"
#include "discflux/sampled_function.hpp"
#include "discflux/transform_builder.hpp"

namespace discflux {

enum class WaveKind { kShock, kRarefaction };

/// One wave of a Riemann fan. A shock has left_speed == right_speed; a
/// rarefaction carries its nodal (speed, state) table, speeds nondecreasing.
struct RiemannWave {
  WaveKind kind = WaveKind::kShock;
  double left_speed = 0.0;
  double right_speed = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  std::vector<double> speeds;
  std::vector<double> states;
};

class RiemannSolution {
 public:
  RiemannSolution(double u_left, double u_right, std::vector<RiemannWave> waves)
      : u_left_(u_left), u_right_(u_right), waves_(std::move(waves)) {}

  /// State on the ray x/t = xi.
  double at(double xi) const;
  /// u(t, x); t = 0 gives the Riemann data.
  double operator()(double t, double x) const;
  std::vector<double> sample(std::span<const double> x, double t) const;

  double u_left() const noexcept { return u_left_; }
  double u_right() const noexcept { return u_right_; }
  const std::vector<RiemannWave>& waves() const noexcept { return waves_; }

 private:
  double u_left_;
  double u_right_;
  std::vector<RiemannWave> waves_;
};

/// Entropy solution for one flux branch: convex hull over [u_l, u_r] when
/// u_l < u_r, concave hull over [u_r, u_l] otherwise. Hull edges spanning a
/// single sample interval form rarefactions, longer edges are shocks.
/// Throws DomainError if a state lies outside the flux interval.
RiemannSolution classical_riemann(const SampledFunction& flux, double u_l,
                                  double u_r);

struct ShockCheck {
  bool pass = true;
  double rankine_hugoniot = 0.0;  // max |s [u] - [f]|
  double oleinik = 0.0;  // worst chord excursion to the wrong side
};

/// Rankine-Hugoniot and Oleinik chord tests (64 samples per shock).
ShockCheck check_shocks(const SampledFunction& flux, const RiemannSolution& sol,
                        double tol = 1e-10);

/// c^{AB}: A for x <= 0, B for x > 0. Throws PreconditionError unless
/// is_connection holds for the connection's flavor.
InitialData steady_connection_state(const FluxPair& flux, const Connection& conn);

/// Rows "x,u" at %.17g.
std::string riemann_to_csv(const RiemannSolution& sol, std::span<const double> x,
                           double t);

}  // namespace discflux
