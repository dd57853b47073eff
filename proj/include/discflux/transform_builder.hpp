#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "discflux/flux_model.hpp"
#include "discflux/monotone_bijection.hpp"
#include "discflux/sampled_function.hpp"

namespace discflux {

inline constexpr double kTolCross = 1e-10;
inline constexpr double kTolConn = 1e-8;

/// Outcome of the crossing test f(u)-g(u) < 0 < f(v)-g(v) => u < v.
struct CrossingReport {
  bool holds = true;
  /// Sign-change locations of fa - gb, sorted.
  std::vector<double> crossings;
  /// (u, v) with fa(u)-gb(u) < 0 < fa(v)-gb(v) and u >= v; present iff
  /// holds is false.
  std::optional<std::pair<double, double>> witness;
};

/// Decides the crossing condition on the shared sample lattice; differences
/// within tol_cross of zero carry no sign. Throws ArgumentError if the two
/// functions are not sampled on the same lattice.
CrossingReport check_crossing(const SampledFunction& fa,
                              const SampledFunction& gb,
                              double tol_cross = kTolCross);

enum class ConnectionFlavor {
  kWeak,         // f(B) = g(A) only
  kClassic,      // u*_g <= A <= b, a <= B <= u*_f, unique maxima
  kGeneralized,  // A in (u*_g, b), B in (a, u*_f), rear maxima
};

struct Connection {
  double A = 0.0;  // state for x <= 0
  double B = 0.0;  // state for x > 0
  ConnectionFlavor flavor = ConnectionFlavor::kWeak;
};

struct ConnectionCheck {
  bool valid = false;
  double mismatch = 0.0;  // |f(B) - g(A)|
  std::optional<double> u_star_f;  // maximum of f used by the flavor
  std::optional<double> u_star_g;
  std::string reason;  // empty when valid
};

ConnectionCheck is_connection(const FluxPair& flux, double A, double B,
                              ConnectionFlavor flavor,
                              double tol_conn = kTolConn);

enum class TransformKind { kIdentity, kTranslation, kConnection, kTable };

/// The admissibility transforms: u = alpha(v) for x > 0, u = beta(v) for
/// x <= 0. Both maps share one breakpoint column (the v lattice).
struct TransformPair {
  MonotoneBijection alpha;
  MonotoneBijection beta;
  TransformKind kind = TransformKind::kIdentity;
  /// Common preimage with alpha(c) = B, beta(c) = A.
  std::optional<double> c;
  std::optional<Connection> connection;
  /// Shifts of the translation transforms alpha = u + k_R, beta = u + k_L.
  double k_left = 0.0;
  double k_right = 0.0;
  /// Fluxes are composed as (f chi_[a,b]) o alpha (translation transforms).
  bool clipped = false;

  double v_lo() const { return alpha.domain_lo(); }
  double v_hi() const { return alpha.domain_hi(); }

  /// v = alpha^{-1}(u) for x > 0, beta^{-1}(u) for x <= 0.
  double to_v(double u, bool right_side) const {
    return right_side ? alpha.inverse(u) : beta.inverse(u);
  }
  double to_u(double v, bool right_side) const {
    return right_side ? alpha(v) : beta(v);
  }
};

TransformPair identity_transform(const FluxPair& flux);

/// f_alpha and g_beta sampled on the transform's v lattice.
struct ComposedFluxes {
  SampledFunction fa;
  SampledFunction gb;
};

ComposedFluxes compose(const FluxPair& flux, const TransformPair& t);

struct TranslationSearch {
  std::size_t grid = 101;  // candidates per shift over [-(b-a), b-a]
};

/// Grid search for shifts k_L >= k_R whose clipped, shifted fluxes satisfy
/// the crossing condition; minimizes |k_L| + |k_R|, ties to smaller k_L.
/// Throws ConstructionError (location = k_L - k_R of the best near-miss).
TransformPair build_translation_transform(const FluxPair& flux,
                                          TranslationSearch search = {});

/// Connection transforms with alpha(c) = B, beta(c) = A whose composed fluxes
/// satisfy the crossing condition. Throws PreconditionError for an invalid
/// connection and ConstructionError when an envelope or inverse branch fails.
TransformPair build_connection_transform(const FluxPair& flux,
                                         const Connection& conn);

struct TransformAudit {
  CrossingReport crossing;
  std::optional<std::size_t> monotonicity_violation;  // segment index
  std::optional<double> violation_location;
  double roundtrip_error = 0.0;  // max |m^{-1}(m(u)) - u| / width
  bool domains_consistent = true;
  bool connection_preserved = true;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }
};

TransformAudit verify_transform(const FluxPair& flux, const TransformPair& t);

/// Breakpoint table with columns u, alpha, beta.
std::string transform_to_csv(const TransformPair& t);
TransformPair transform_from_csv(const std::string& text);

std::string to_string(ConnectionFlavor flavor);
ConnectionFlavor connection_flavor_from_string(const std::string& name);
std::string to_string(TransformKind kind);

}  // namespace discflux
