#include "discflux/transform_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "discflux/envelope.hpp"
#include "discflux/errors.hpp"

namespace discflux {
namespace {

struct SignRun {
  int sign;
  std::vector<std::size_t> nodes;
};

std::vector<SignRun> sign_runs(std::span<const double> diff, double tol) {
  std::vector<SignRun> runs;
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const int s = diff[k] > tol ? 1 : (diff[k] < -tol ? -1 : 0);
    if (s == 0) continue;
    if (runs.empty() || runs.back().sign != s) runs.push_back({s, {}});
    runs.back().nodes.push_back(k);
  }
  return runs;
}

// Size of the worst violation: the smaller of the two offending amplitudes.
double violation_amplitude(std::span<const double> diff,
                           const std::vector<SignRun>& runs) {
  double best = 0.0;
  double max_pos = 0.0;
  for (const SignRun& run : runs) {
    double amp = 0.0;
    for (std::size_t k : run.nodes) amp = std::max(amp, std::abs(diff[k]));
    if (run.sign > 0) {
      max_pos = std::max(max_pos, amp);
    } else {
      best = std::max(best, std::min(max_pos, amp));
    }
  }
  return best;
}

std::vector<double> difference(const SampledFunction& fa,
                               const SampledFunction& gb) {
  std::vector<double> d(fa.intervals() + 1);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = fa.value(k) - gb.value(k);
  return d;
}

}  // namespace

CrossingReport check_crossing(const SampledFunction& fa,
                              const SampledFunction& gb, double tol_cross) {
  if (!fa.same_lattice(gb)) {
    throw ArgumentError("crossing check needs functions on one lattice");
  }
  const auto diff = difference(fa, gb);
  const auto runs = sign_runs(diff, tol_cross);

  CrossingReport report;
  for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
    const std::size_t p = runs[r].nodes.back();
    const std::size_t q = runs[r + 1].nodes.front();
    const double xp = fa.node(p);
    const double xq = fa.node(q);
    report.crossings.push_back(xp + (xq - xp) * diff[p] / (diff[p] - diff[q]));
  }

  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].sign < 0) continue;
    for (std::size_t s = r + 1; s < runs.size(); ++s) {
      if (runs[s].sign > 0) continue;
      const auto& neg = runs[s].nodes;
      const auto& pos = runs[r].nodes;
      report.holds = false;
      report.witness = std::make_pair(fa.node(neg[neg.size() / 2]),
                                      fa.node(pos[pos.size() / 2]));
      return report;
    }
  }
  return report;
}

std::string to_string(ConnectionFlavor flavor) {
  switch (flavor) {
    case ConnectionFlavor::kWeak: return "weak";
    case ConnectionFlavor::kClassic: return "classic";
    case ConnectionFlavor::kGeneralized: return "generalized";
  }
  return "weak";
}

ConnectionFlavor connection_flavor_from_string(const std::string& name) {
  if (name == "weak") return ConnectionFlavor::kWeak;
  if (name == "classic") return ConnectionFlavor::kClassic;
  if (name == "generalized") return ConnectionFlavor::kGeneralized;
  throw ConfigError("unknown connection flavor '" + name + "'");
}

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kIdentity: return "identity";
    case TransformKind::kTranslation: return "translation";
    case TransformKind::kConnection: return "connection";
    case TransformKind::kTable: return "table";
  }
  return "table";
}

ConnectionCheck is_connection(const FluxPair& flux, double A, double B,
                              ConnectionFlavor flavor, double tol_conn) {
  ConnectionCheck check;
  const double a = flux.a();
  const double b = flux.b();
  if (A < a || A > b || B < a || B > b) {
    check.reason = "connection states outside [a, b]";
    return check;
  }
  check.mismatch = std::abs(flux.f()(B) - flux.g()(A));

  const auto fmax = find_local_maxima(flux.f());
  const auto gmax = find_local_maxima(flux.g());
  if (flavor == ConnectionFlavor::kClassic) {
    if (fmax.size() == 1) check.u_star_f = fmax.front().location;
    if (gmax.size() == 1) check.u_star_g = gmax.front().location;
  } else {
    if (!fmax.empty()) check.u_star_f = fmax.front().location;
    if (!gmax.empty()) check.u_star_g = gmax.back().location;
  }

  if (check.mismatch > tol_conn) {
    std::ostringstream msg;
    msg << "f(B) != g(A): mismatch " << check.mismatch;
    check.reason = msg.str();
    return check;
  }
  switch (flavor) {
    case ConnectionFlavor::kWeak:
      break;
    case ConnectionFlavor::kClassic:
      if (!check.u_star_f || !check.u_star_g) {
        check.reason = "classic connection needs unique maxima of f and g";
        return check;
      }
      if (!(*check.u_star_g <= A && A <= b && a <= B && B <= *check.u_star_f)) {
        check.reason = "classic ordering u*_g <= A <= b, a <= B <= u*_f fails";
        return check;
      }
      break;
    case ConnectionFlavor::kGeneralized:
      if (!check.u_star_f || !check.u_star_g) {
        check.reason = "generalized connection needs local maxima of f and g";
        return check;
      }
      if (!(*check.u_star_g < A && A < b && a < B && B < *check.u_star_f)) {
        check.reason =
            "generalized ordering A in (u*_g, b), B in (a, u*_f) fails";
        return check;
      }
      break;
  }
  check.valid = true;
  return check;
}

TransformPair identity_transform(const FluxPair& flux) {
  return TransformPair{MonotoneBijection::identity(flux.a(), flux.b()),
                       MonotoneBijection::identity(flux.a(), flux.b()),
                       TransformKind::kIdentity, {}, {}};
}

ComposedFluxes compose(const FluxPair& flux, const TransformPair& t) {
  const double width = t.v_hi() - t.v_lo();
  std::size_t n = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::round(
             static_cast<double>(flux.intervals()) * width /
             (flux.b() - flux.a()))));
  // Shifted clip kinks sit at lo + (k_L - k_R) and hi - (k_L - k_R); pick a
  // resolution that puts them on nodes so the clipped zeros stay exact.
  if (t.kind == TransformKind::kTranslation) {
    const double frac = std::abs(t.k_left - t.k_right) / width;
    for (std::size_t m = n; m < n + 4096; ++m) {
      const double pos = frac * static_cast<double>(m);
      if (std::abs(pos - std::round(pos)) < 1e-9) {
        n = m;
        break;
      }
    }
  }
  if (t.clipped) {
    return {compose_flux(clip_flux(flux.f()), t.alpha, n),
            compose_flux(clip_flux(flux.g()), t.beta, n)};
  }
  return {compose_flux(flux.f(), t.alpha, n),
          compose_flux(flux.g(), t.beta, n)};
}

TransformPair build_translation_transform(const FluxPair& flux,
                                          TranslationSearch search) {
  if (search.grid < 3 || search.grid % 2 == 0) {
    throw ArgumentError("translation grid must be odd and >= 3");
  }
  const double a = flux.a();
  const double b = flux.b();
  const double width = b - a;
  const double half = static_cast<double>(search.grid - 1) / 2.0;

  struct Candidate {
    double k_left;
    double k_right;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < search.grid; ++i) {
    const double kl = width * (static_cast<double>(i) - half) / half;
    for (std::size_t j = 0; j < search.grid; ++j) {
      const double kr = width * (static_cast<double>(j) - half) / half;
      if (kl >= kr) candidates.push_back({kl, kr});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) {
                     const double ox = std::abs(x.k_left) + std::abs(x.k_right);
                     const double oy = std::abs(y.k_left) + std::abs(y.k_right);
                     if (ox != oy) return ox < oy;
                     return x.k_left < y.k_left;
                   });

  double best_amp = std::numeric_limits<double>::infinity();
  Candidate best{0.0, 0.0};
  for (const Candidate& cand : candidates) {
    const double lo = a - cand.k_left;
    const double hi = b - cand.k_right;
    TransformPair t{MonotoneBijection::translation(lo, hi, cand.k_right),
                    MonotoneBijection::translation(lo, hi, cand.k_left),
                    TransformKind::kTranslation, {}, {}};
    t.k_left = cand.k_left;
    t.k_right = cand.k_right;
    t.clipped = true;
    const ComposedFluxes composed = compose(flux, t);
    const auto diff = difference(composed.fa, composed.gb);
    const auto runs = sign_runs(diff, kTolCross);
    const double amp = violation_amplitude(diff, runs);
    if (amp == 0.0) return t;
    if (amp < best_amp) {
      best_amp = amp;
      best = cand;
    }
  }
  std::ostringstream msg;
  msg << "no translation pair on the grid satisfies the crossing condition; "
         "best near-miss k_L="
      << best.k_left << ", k_R=" << best.k_right << " (violation "
      << best_amp << ")";
  throw ConstructionError(msg.str(), best.k_left - best.k_right);
}

namespace {

// Inverse of a monotone sampled branch on [lo, hi] by bisection.
double invert_branch(const SampledFunction& fn, double lo, double hi,
                     double target, bool increasing) {
  double flo = fn(lo);
  double fhi = fn(hi);
  const double ymin = std::min(flo, fhi);
  const double ymax = std::max(flo, fhi);
  target = std::clamp(target, ymin, ymax);
  const double tol = 1e-13 * (fn.hi() - fn.lo());
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if ((fm < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_strict(const SampledFunction& fn, double lo, double hi,
                    bool increasing, const char* what) {
  for (std::size_t k = 0; k < fn.intervals(); ++k) {
    const double x0 = fn.node(k);
    const double x1 = fn.node(k + 1);
    if (x1 <= lo || x0 >= hi) continue;
    const double d = fn(std::min(x1, hi)) - fn(std::max(x0, lo));
    if (increasing ? !(d > 0.0) : !(d < 0.0)) {
      throw ConstructionError(std::string(what) + " not invertible on its branch",
                              x0);
    }
  }
}

// Lower convex envelope of ys over the given lattice slice, required to be
// strictly monotone in the stated direction and to stay below ys.
std::vector<double> monotone_envelope(std::span<const double> xs,
                                      std::span<const double> ys,
                                      bool increasing, const char* what) {
  const auto hull = lower_convex_hull(xs, ys);
  auto env = evaluate_hull(xs, ys, hull);
  for (std::size_t k = 0; k < env.size(); ++k) {
    if (env[k] > ys[k] + kTolCross) {
      throw ConstructionError(std::string(what) + " envelope exceeds target",
                              xs[k]);
    }
    if (k > 0) {
      const bool ok = increasing ? env[k] > env[k - 1] : env[k] < env[k - 1];
      if (!ok) {
        throw ConstructionError(
            std::string(what) + " envelope not strictly monotone", xs[k]);
      }
    }
  }
  return env;
}

}  // namespace

TransformPair build_connection_transform(const FluxPair& flux,
                                         const Connection& conn) {
  const ConnectionCheck check =
      is_connection(flux, conn.A, conn.B, conn.flavor);
  if (!check.valid) {
    throw PreconditionError("invalid connection (A=" + std::to_string(conn.A) +
                            ", B=" + std::to_string(conn.B) +
                            "): " + check.reason);
  }
  const double a = flux.a();
  const double b = flux.b();
  const std::size_t m = flux.intervals();
  const SampledFunction& f = flux.f();
  const SampledFunction& g = flux.g();

  double fg_gap = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    fg_gap = std::max(fg_gap, std::abs(f.value(k) - g.value(k)));
  }
  if (std::abs(conn.A - conn.B) <= kTolConn && fg_gap <= 1e-14) {
    TransformPair t = identity_transform(flux);
    t.kind = TransformKind::kConnection;
    t.c = conn.A;
    t.connection = conn;
    return t;
  }

  const auto fmax = find_local_maxima(f);
  const auto gmax = find_local_maxima(g);
  if (fmax.empty() || gmax.empty()) {
    throw ConstructionError("connection transform needs local maxima of f, g",
                            a);
  }
  const double u_star_f = fmax.front().location;  // rear-left maximum of f
  const double u_star_g = gmax.back().location;   // rear-right maximum of g
  if (!(a < conn.B && conn.B < u_star_f)) {
    throw ConstructionError("need a < B < u*_f for the envelope construction",
                            conn.B);
  }
  if (!(u_star_g < conn.A && conn.A < b)) {
    throw ConstructionError("need u*_g < A < b for the envelope construction",
                            conn.A);
  }
  if (m < 8) throw ArgumentError("connection transform needs >= 8 samples");

  std::vector<double> v(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    v[k] = SampledFunction::node_position(a, b, m, k);
  }
  const std::size_t kb = m / 4;
  const std::size_t ka = (3 * m) / 4;
  const std::size_t kc = (kb + ka) / 2;
  const double p_beta = v[kb];
  const double c = v[kc];
  const double p_alpha = v[ka];

  std::vector<double> alpha(m + 1);
  std::vector<double> beta(m + 1);
  // Linear pieces: beta on [a, c] through (p_beta, u*_g), alpha on [c, b]
  // through (p_alpha, u*_f).
  for (std::size_t k = 0; k <= kc; ++k) {
    beta[k] = k <= kb ? a + (u_star_g - a) * (v[k] - a) / (p_beta - a)
                      : u_star_g + (conn.A - u_star_g) * (v[k] - p_beta) /
                                       (c - p_beta);
  }
  for (std::size_t k = kc; k <= m; ++k) {
    alpha[k] = k <= ka ? conn.B + (u_star_f - conn.B) * (v[k] - c) /
                                      (p_alpha - c)
                       : u_star_f + (b - u_star_f) * (v[k] - p_alpha) /
                                        (b - p_alpha);
  }
  beta[0] = a;
  beta[kb] = u_star_g;
  beta[kc] = conn.A;
  alpha[kc] = conn.B;
  alpha[ka] = u_star_f;
  alpha[m] = b;

  // alpha on [a, c]: f^{-1} of the convex envelope of g_beta.
  const std::span<const double> left_v(v.data(), kc + 1);
  std::vector<double> gb_left(kc + 1);
  for (std::size_t k = 0; k <= kc; ++k) gb_left[k] = g(beta[k]);
  const auto alpha_hat = monotone_envelope(left_v, gb_left, true, "alpha");
  require_strict(f, a, conn.B, true, "f");
  const double f_of_b = f(conn.B);
  for (std::size_t k = 1; k < kc; ++k) {
    alpha[k] = invert_branch(f, a, conn.B, std::min(alpha_hat[k], f_of_b), true);
  }
  alpha[0] = a;

  // beta on [c, b]: g^{-1} of the convex envelope of f_alpha.
  const std::span<const double> right_v(v.data() + kc, m - kc + 1);
  std::vector<double> fa_right(m - kc + 1);
  for (std::size_t k = kc; k <= m; ++k) fa_right[k - kc] = f(alpha[k]);
  const auto beta_hat = monotone_envelope(right_v, fa_right, false, "beta");
  require_strict(g, conn.A, b, false, "g");
  const double g_of_a = g(conn.A);
  for (std::size_t k = kc + 1; k < m; ++k) {
    beta[k] = invert_branch(g, conn.A, b, std::min(beta_hat[k - kc], g_of_a),
                            false);
  }
  beta[m] = b;

  TransformPair t{MonotoneBijection::unchecked(v, alpha),
                  MonotoneBijection::unchecked(v, beta),
                  TransformKind::kConnection, {}, {}};
  if (auto bad = t.alpha.first_violation()) {
    throw ConstructionError("alpha not strictly increasing", v[*bad]);
  }
  if (auto bad = t.beta.first_violation()) {
    throw ConstructionError("beta not strictly increasing", v[*bad]);
  }
  t.c = c;
  t.connection = conn;

  const ComposedFluxes composed = compose(flux, t);
  const CrossingReport crossing = check_crossing(composed.fa, composed.gb);
  if (!crossing.holds) {
    throw ConstructionError("composed fluxes violate the crossing condition",
                            crossing.witness->first);
  }
  return t;
}

TransformAudit verify_transform(const FluxPair& flux, const TransformPair& t) {
  TransformAudit audit;
  for (const auto* m : {&t.alpha, &t.beta}) {
    if (auto bad = m->first_violation()) {
      audit.monotonicity_violation = *bad;
      audit.violation_location = m->breakpoints()[*bad];
      audit.failures.push_back(
          std::string(m == &t.alpha ? "alpha" : "beta") +
          " not strictly increasing at segment " + std::to_string(*bad));
    }
  }

  const auto ab = t.alpha.breakpoints();
  const auto bb = t.beta.breakpoints();
  if (ab.size() != bb.size()) {
    audit.domains_consistent = false;
  } else {
    const double scale = std::max(1.0, t.v_hi() - t.v_lo());
    for (std::size_t k = 0; k < ab.size(); ++k) {
      if (std::abs(ab[k] - bb[k]) > 1e-12 * scale) {
        audit.domains_consistent = false;
      }
    }
  }
  if (!t.clipped) {
    const double slack = SampledFunction::kClampSlack;
    for (const auto* m : {&t.alpha, &t.beta}) {
      if (m->range_lo() < flux.a() - slack || m->range_hi() > flux.b() + slack) {
        audit.domains_consistent = false;
      }
    }
  }
  if (!audit.domains_consistent) {
    audit.failures.push_back("alpha/beta domains or ranges inconsistent");
  }

  if (audit.monotonicity_violation) return audit;

  const double width = t.v_hi() - t.v_lo();
  for (const auto* m : {&t.alpha, &t.beta}) {
    for (int i = 0; i < 1000; ++i) {
      const double u = m->domain_lo() + width * (i + 0.5) / 1000.0;
      audit.roundtrip_error =
          std::max(audit.roundtrip_error, std::abs(m->inverse((*m)(u)) - u) /
                                              width);
    }
  }
  if (audit.roundtrip_error > 1e-12) {
    audit.failures.push_back("round-trip inversion error exceeds 1e-12");
  }

  if (!audit.domains_consistent) return audit;
  const ComposedFluxes composed = compose(flux, t);
  audit.crossing = check_crossing(composed.fa, composed.gb);
  if (!audit.crossing.holds) {
    audit.failures.push_back("composed fluxes violate the crossing condition");
  }
  if (t.c) {
    const double fb = flux.f()(t.alpha(*t.c));
    const double ga = flux.g()(t.beta(*t.c));
    if (std::abs(fb - ga) > kTolConn) {
      audit.connection_preserved = false;
      audit.failures.push_back("f(alpha(c)) != g(beta(c))");
    }
  }
  return audit;
}

std::string transform_to_csv(const TransformPair& t) {
  std::string out = "u,alpha,beta\n";
  char line[128];
  const auto bp = t.alpha.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", bp[k],
                  t.alpha.values()[k], t.beta.values()[k]);
    out += line;
  }
  return out;
}

TransformPair transform_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("u,alpha,beta", 0) != 0) {
    throw ConfigError("transform CSV must start with header 'u,alpha,beta'");
  }
  std::vector<double> u, alpha, beta;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    double x = 0, y = 0, z = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &z) != 3) {
      throw ConfigError("bad transform CSV row '" + line + "'");
    }
    u.push_back(x);
    alpha.push_back(y);
    beta.push_back(z);
  }
  return TransformPair{MonotoneBijection::unchecked(u, std::move(alpha)),
                       MonotoneBijection::unchecked(u, std::move(beta)),
                       TransformKind::kTable, {}, {}};
}

}  // namespace discflux
