#include "discflux/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {
namespace {

double hat(double z) { return std::max(0.0, 1.0 - std::abs(z)); }

double sgn(double z, double tau) {
  if (z > tau) return 1.0;
  if (z < -tau) return -1.0;
  return 0.0;
}

using Grid = std::vector<std::vector<double>>;  // [snapshot][cell]

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double h = 0.5 * (times[n + 1] - times[n]);
    w[n] += h;
    w[n + 1] += h;
  }
  return w;
}

void check_coverage(const SolutionField& field, const HatFunction& phi) {
  const double t0 = phi.t_center - phi.t_half;
  const double t1 = phi.t_center + phi.t_half;
  const double dx = field.dx();
  const double x0 = phi.x_center - phi.x_half;
  const double x1 = phi.x_center + phi.x_half;
  const double slack = 1e-12;
  std::ostringstream msg;
  if (field.times.empty() || t0 < field.times.front() - slack ||
      t1 > field.times.back() + slack) {
    msg << "test function time support [" << t0 << ", " << t1
        << "] leaves the stored window";
    throw CoverageError(msg.str());
  }
  if (x0 < field.x.front() - 0.5 * dx - slack ||
      x1 > field.x.back() + 0.5 * dx + slack) {
    msg << "test function space support [" << x0 << ", " << x1
        << "] leaves the grid";
    throw CoverageError(msg.str());
  }
  std::size_t inside = 0;
  for (double t : field.times) {
    if (t > t0 && t < t1) ++inside;
  }
  if (inside < 2) {
    msg << "test function support [" << t0 << ", " << t1
        << "] covers fewer than two snapshot intervals";
    throw CoverageError(msg.str());
  }
}

// sum_n sum_i (eta^{n+1} - eta^n) phi(t_{n+1/2}, x_i) dx
//   + sum_n w_n sum_faces (q_{i+1} - q_i) phi(t_n, x_{i+1/2})
//   - interface * sum_n w_n phi(t_n, 0)
double pairing(const SolutionField& field, const Grid& eta, const Grid& q,
               double interface, const HatFunction& phi) {
  const auto& x = field.x;
  const auto& times = field.times;
  const double dx = field.dx();
  const auto w = trapezoid_weights(times);
  double time_term = 0.0;
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double tm = 0.5 * (times[n] + times[n + 1]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = phi(tm, x[i]);
      if (p != 0.0) time_term += (eta[n + 1][i] - eta[n][i]) * p;
    }
  }
  time_term *= dx;
  double space_term = 0.0;
  double interface_term = 0.0;
  for (std::size_t n = 0; n < times.size(); ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double p = phi(times[n], 0.5 * (x[i] + x[i + 1]));
      if (p != 0.0) s += (q[n][i + 1] - q[n][i]) * p;
    }
    space_term += w[n] * s;
    interface_term += w[n] * phi(times[n], 0.0);
  }
  return time_term + space_term - interface * interface_term;
}

double viscosity_of(const SolutionField& field, const ComposedFluxes& c) {
  if (field.config.epsilon <= 0.0) return 0.0;
  const double lambda = std::max(c.fa.lipschitz(), c.gb.lipschitz());
  return field.config.epsilon + 0.5 * lambda * field.dx();
}

double tolerance_for(const HatFunction& phi, double rel_tol, double scale,
                     double nu, double v_width) {
  const double quad = rel_tol * phi.sup() * phi.support_area() * scale;
  const double viscous =
      nu * v_width * phi.amplitude * (4.0 / phi.x_half) * phi.t_half;
  return quad + viscous;
}

void add_entry(EntropyReport& rep, ResidualEntry e) {
  rep.worst_residual = std::max(rep.worst_residual, e.residual);
  if (e.tolerance > 0.0) {
    rep.worst_ratio = std::max(rep.worst_ratio, e.residual / e.tolerance);
  } else if (e.residual > 0.0) {
    rep.worst_ratio = std::numeric_limits<double>::infinity();
  }
  if (e.residual > e.tolerance) rep.pass = false;
  rep.entries.push_back(e);
}

void attach_interface(EntropyReport& rep, const SolutionField& field,
                      const FluxPair& flux) {
  rep.bounds = field.bounds;
  const std::size_t half = field.cells() / 2;
  if (half < 8) return;
  const Traces tr = extract_traces(field);
  rep.left_trace = tr.left;
  rep.right_trace = tr.right;
  const auto mismatch = interface_flux_mismatch(field, flux);
  const double lip = std::max(flux.f().lipschitz(), flux.g().lipschitz());
  const double nu = field.config.epsilon > 0.0
                        ? field.config.epsilon + 0.5 * lip * field.dx()
                        : 0.0;
  const std::size_t iL = tr.left_cell, iR = tr.right_cell;
  const std::size_t S = mismatch.size();
  for (std::size_t n = 1; n < S; ++n) {
    const auto& v = field.v[n];
    const double grad = (std::abs(v[iL] - v[iL - 1]) +
                         std::abs(v[iR + 1] - v[iR])) / field.dx();
    // Mass stored between the trace cells, d/dt int u dx.
    double storage = 0.0;
    if (nu > 0.0) {
      const std::size_t n0 = n - 1, n1 = std::min(n + 1, S - 1);
      for (std::size_t i = iL; i <= iR; ++i) {
        storage += std::abs(field.u[n1][i] - field.u[n0][i]);
      }
      storage *= field.dx() / (field.times[n1] - field.times[n0]);
    }
    rep.interface_mismatch = std::max(rep.interface_mismatch, mismatch[n]);
    if (mismatch[n] >
        kInterfaceTol + lip * tr.indicators[n] + nu * grad + storage) {
      rep.interface_ok = false;
    }
  }
  if (!rep.interface_ok) rep.pass = false;
}

HatFunction random_hat(std::mt19937_64& rng, double t_end, double L,
                       double x_lo, double x_hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  HatFunction h;
  h.t_half = t_end * (0.1 + 0.35 * unit(rng));
  h.t_center = h.t_half + (t_end - 2.0 * h.t_half) * unit(rng);
  const double width = x_hi - x_lo;
  h.x_half = std::min(0.5 * width, L * (0.05 + 0.45 * unit(rng)));
  h.x_center = x_lo + h.x_half + (width - 2.0 * h.x_half) * unit(rng);
  return h;
}

}  // namespace

double HatFunction::operator()(double t, double x) const {
  return amplitude * hat((t - t_center) / t_half) * hat((x - x_center) / x_half);
}

namespace {

std::vector<HatFunction> interface_hats(const SolutionField& field,
                                        std::uint64_t seed) {
  const double T = field.times.back();
  const double L = field.config.half_width;
  std::vector<HatFunction> hats = {
      {0.5 * T, 0.45 * T, 0.0, 0.5 * L, 1.0},
      {0.5 * T, 0.45 * T, 0.0, 0.25 * L, 1.0},
      {0.25 * T, 0.2 * T, 0.0, 0.125 * L, 1.0},
      {0.75 * T, 0.2 * T, 0.0, 0.25 * L, 1.0},
  };
  std::mt19937_64 rng(seed);
  while (hats.size() < 10) hats.push_back(random_hat(rng, T, L, -L, L));
  return hats;
}

}  // namespace

EntropyTestConfig default_entropy_config(const SolutionField& field,
                                         const TransformPair& t,
                                         std::uint64_t seed) {
  EntropyTestConfig cfg;
  const double lo = t.v_lo(), hi = t.v_hi();
  for (int k = 0; k < 16; ++k) cfg.xi_values.push_back(lo + (hi - lo) * k / 15.0);
  cfg.test_functions = interface_hats(field, seed);
  return cfg;
}

std::vector<HatFunction> one_sided_hats(const SolutionField& field, bool right,
                                        std::size_t count, std::uint64_t seed) {
  const double T = field.times.back();
  const double L = field.config.half_width;
  const double s = right ? 1.0 : -1.0;
  std::vector<HatFunction> hats = {
      {0.5 * T, 0.45 * T, s * 0.25 * L, 0.2 * L, 1.0},
      {0.5 * T, 0.45 * T, s * 0.5 * L, 0.4 * L, 1.0},
      {0.5 * T, 0.45 * T, s * 0.125 * L, 0.1 * L, 1.0},
  };
  std::mt19937_64 rng(seed);
  while (hats.size() < count) {
    hats.push_back(right ? random_hat(rng, T, L, 0.0, L)
                         : random_hat(rng, T, L, -L, 0.0));
  }
  hats.resize(count);
  return hats;
}

EntropyReport entropy_residual_ab(const SolutionField& field,
                                  const FluxPair& flux, const TransformPair& t,
                                  const EntropyTestConfig& cfg) {
  for (const auto& phi : cfg.test_functions) check_coverage(field, phi);
  const ComposedFluxes composed = compose(flux, t);
  const ClippedFunction fa(composed.fa), gb(composed.gb);
  const double nu = viscosity_of(field, composed);
  const double v_width = t.v_hi() - t.v_lo();
  const double scale = flux.flux_scale();

  EntropyReport rep;
  rep.inequality = "transformed";
  const std::size_t S = field.snapshots(), N = field.cells();
  Grid eta(S, std::vector<double>(N)), q(S, std::vector<double>(N));
  for (double xi : cfg.xi_values) {
    const double a_xi = t.alpha(xi), b_xi = t.beta(xi);
    const double fa_xi = fa(xi), gb_xi = gb(xi);
    for (std::size_t n = 0; n < S; ++n) {
      for (std::size_t i = 0; i < N; ++i) {
        const double v = field.v[n][i];
        const double s = sgn(v - xi, cfg.tau);
        if (field.x[i] > 0.0) {
          eta[n][i] = s * (t.alpha(v) - a_xi);
          q[n][i] = s * (fa(v) - fa_xi);
        } else {
          eta[n][i] = s * (t.beta(v) - b_xi);
          q[n][i] = s * (gb(v) - gb_xi);
        }
      }
    }
    const double interface = std::abs(fa_xi - gb_xi);
    for (std::size_t p = 0; p < cfg.test_functions.size(); ++p) {
      const auto& phi = cfg.test_functions[p];
      add_entry(rep, {xi, p, pairing(field, eta, q, interface, phi),
                      tolerance_for(phi, cfg.rel_tol, scale, nu, v_width)});
    }
  }
  attach_interface(rep, field, flux);
  return rep;
}

double conservation_residual(const SolutionField& field, const FluxPair& flux,
                             const TransformPair& t, const HatFunction& phi) {
  check_coverage(field, phi);
  const ComposedFluxes composed = compose(flux, t);
  const ClippedFunction fa(composed.fa), gb(composed.gb);
  const std::size_t S = field.snapshots(), N = field.cells();
  Grid m(S, std::vector<double>(N)), F(S, std::vector<double>(N));
  for (std::size_t n = 0; n < S; ++n) {
    for (std::size_t i = 0; i < N; ++i) {
      const double v = field.v[n][i];
      const bool right = field.x[i] > 0.0;
      m[n][i] = right ? t.alpha(v) : t.beta(v);
      F[n][i] = right ? fa(v) : gb(v);
    }
  }
  return pairing(field, m, F, 0.0, phi);
}

TypeABReport entropy_residual_AB(const SolutionField& field, const FluxPair& flux,
                                 const Connection& conn,
                                 const EntropyTestConfig& cfg) {
  const std::vector<HatFunction> adapted_hats =
      cfg.test_functions.empty() ? interface_hats(field, 0) : cfg.test_functions;
  for (const auto& phi : adapted_hats) check_coverage(field, phi);
  const ClippedFunction f = clip_flux(flux.f());
  const ClippedFunction g = clip_flux(flux.g());
  const double scale = flux.flux_scale();
  // The u field carries the same viscous allowance as v, measured in u.
  const double lambda = std::max(flux.f().lipschitz(), flux.g().lipschitz());
  const double nu = field.config.epsilon > 0.0
                        ? field.config.epsilon + 0.5 * lambda * field.dx()
                        : 0.0;
  const double width = flux.b() - flux.a();
  const std::size_t S = field.snapshots(), N = field.cells();

  std::vector<double> xis = cfg.xi_values;
  if (xis.empty()) {
    for (int k = 0; k < 16; ++k) xis.push_back(flux.a() + width * k / 15.0);
  }

  TypeABReport rep;
  rep.left.inequality = "kruzhkov-left";
  rep.right.inequality = "kruzhkov-right";
  rep.adapted.inequality = "adapted";
  Grid eta(S, std::vector<double>(N)), q(S, std::vector<double>(N));

  for (bool right : {false, true}) {
    EntropyReport& side = right ? rep.right : rep.left;
    const auto hats = one_sided_hats(field, right);
    for (const auto& phi : hats) check_coverage(field, phi);
    const ClippedFunction& F = right ? f : g;
    for (double xi : xis) {
      const double F_xi = F(xi);
      for (std::size_t n = 0; n < S; ++n) {
        for (std::size_t i = 0; i < N; ++i) {
          const double u = field.u[n][i];
          const double s = sgn(u - xi, cfg.tau);
          eta[n][i] = s * (u - xi);
          q[n][i] = s * (F(u) - F_xi);
        }
      }
      for (std::size_t p = 0; p < hats.size(); ++p) {
        add_entry(side, {xi, p, pairing(field, eta, q, 0.0, hats[p]),
                         tolerance_for(hats[p], cfg.rel_tol, scale, nu, width)});
      }
    }
  }

  const double fB = f(conn.B), gA = g(conn.A);
  for (std::size_t n = 0; n < S; ++n) {
    for (std::size_t i = 0; i < N; ++i) {
      const double u = field.u[n][i];
      const bool right = field.x[i] > 0.0;
      const double c = right ? conn.B : conn.A;
      const double s = sgn(u - c, cfg.tau);
      eta[n][i] = s * (u - c);
      q[n][i] = right ? s * (f(u) - fB) : s * (g(u) - gA);
    }
  }
  for (std::size_t p = 0; p < adapted_hats.size(); ++p) {
    const auto& phi = adapted_hats[p];
    add_entry(rep.adapted, {0.0, p, pairing(field, eta, q, 0.0, phi),
                            tolerance_for(phi, cfg.rel_tol, scale, nu, width)});
  }
  attach_interface(rep.adapted, field, flux);
  return rep;
}

Traces extract_traces(const SolutionField& field, std::size_t window_count) {
  const std::size_t N = field.cells();
  const std::size_t first_right = static_cast<std::size_t>(
      std::upper_bound(field.x.begin(), field.x.end(), 0.0) - field.x.begin());
  // Viscous fields: windows start at the edge of the smoothing layer.
  const double dx = field.dx();
  const std::size_t skip =
      field.config.epsilon > 0.0
          ? static_cast<std::size_t>(std::ceil(field.config.epsilon / dx - 1e-9))
          : 0;
  const std::size_t left_cells = first_right, right_cells = N - first_right;
  if (left_cells < skip + 8 || right_cells < skip + 8) {
    throw ResolutionError("trace extraction needs at least 8 cells per side");
  }
  if (window_count < 1 || window_count > 4) {
    throw ResolutionError("trace windows must span between 1 and 4 halvings");
  }
  // Exact for constant runs: offset from the innermost value.
  auto mean = [](const std::vector<double>& u, std::size_t lo, std::size_t n,
                 double ref) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += u[lo + k] - ref;
    return ref + s / static_cast<double>(n);
  };
  Traces tr;
  tr.left_cell = first_right - skip - 1;
  tr.right_cell = first_right + skip;
  for (std::size_t n = 0; n < field.snapshots(); ++n) {
    const auto& u = field.u[n];
    const std::size_t inner_left = first_right - skip;
    const std::size_t inner_right = first_right + skip;
    const double refL = u[inner_left - 1], refR = u[inner_right];
    double prevL = 0.0, prevR = 0.0, indicator = 0.0;
    for (std::size_t j = 1; j <= window_count; ++j) {
      const std::size_t cells = std::size_t{16} >> j;
      const double L = mean(u, inner_left - cells, cells, refL);
      const double R = mean(u, inner_right, cells, refR);
      if (j > 1) {
        indicator = std::max({indicator, std::abs(L - prevL), std::abs(R - prevR)});
      }
      prevL = L;
      prevR = R;
    }
    tr.left.push_back(prevL);
    tr.right.push_back(prevR);
    tr.indicators.push_back(indicator);
    tr.cauchy_indicator = std::max(tr.cauchy_indicator, indicator);
  }
  return tr;
}

std::vector<double> interface_flux_mismatch(const SolutionField& field,
                                            const FluxPair& flux,
                                            std::size_t window_count) {
  const Traces tr = extract_traces(field, window_count);
  const ClippedFunction f = clip_flux(flux.f());
  const ClippedFunction g = clip_flux(flux.g());
  std::vector<double> out(tr.left.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::abs(f(tr.right[n]) - g(tr.left[n]));
  }
  return out;
}

namespace {

void require_same_grid(const SolutionField& u, const SolutionField& v) {
  if (u.x != v.x || u.times != v.times) {
    throw ArgumentError("fields must share grid and stored times");
  }
}

}  // namespace

L1Stability l1_stability(const SolutionField& u, const SolutionField& v,
                         double R) {
  require_same_grid(u, v);
  L1Stability out;
  out.times = u.times;
  const double dx = u.dx();
  for (std::size_t n = 0; n < u.snapshots(); ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.cells(); ++i) {
      if (std::abs(u.x[i]) <= R) s += std::abs(u.u[n][i] - v.u[n][i]);
    }
    out.distance.push_back(s * dx);
  }
  for (std::size_t n = 0; n + 1 < out.times.size(); ++n) {
    out.integrated += 0.5 * (out.times[n + 1] - out.times[n]) *
                      (out.distance[n] + out.distance[n + 1]);
  }
  for (std::size_t i = 0; i < u.cells(); ++i) {
    out.initial += std::abs(u.u0[i] - v.u0[i]) * dx;
  }
  if (out.initial > 0.0) {
    for (double d : out.distance) out.constant = std::max(out.constant, d / out.initial);
  }
  return out;
}

ComparisonResult max_principle_check(const SolutionField& u,
                                     const SolutionField& v, double tol) {
  require_same_grid(u, v);
  for (std::size_t i = 0; i < u.cells(); ++i) {
    if (u.u0[i] > v.u0[i]) {
      std::ostringstream msg;
      msg << "initial data not ordered at x = " << u.x[i];
      throw ArgumentError(msg.str());
    }
  }
  ComparisonResult out;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < u.snapshots(); ++n) {
    for (std::size_t i = 0; i < u.cells(); ++i) {
      out.max_violation = std::max(out.max_violation, u.u[n][i] - v.u[n][i]);
    }
  }
  out.pass = out.max_violation <= tol;
  return out;
}

BoundsReport bounds_report(std::span<const SolutionField> ladder) {
  BoundsReport rep;
  constexpr double kZero = 1e-12;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    rep.levels.push_back(ladder[k].bounds);
    if (ladder[k].bounds.c0 > 1e-10) {
      rep.failures.push_back("level " + std::to_string(k) +
                             ": c0 exceeds 1e-10");
    }
  }
  auto spread = [&](double BoundConstants::*member, const char* name) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& b : rep.levels) {
      lo = std::min(lo, b.*member);
      hi = std::max(hi, b.*member);
    }
    if (hi <= kZero) return;
    if (lo <= kZero || hi / lo >= 2.0) {
      rep.failures.push_back(std::string(name) +
                             " varies by a factor 2 or more across levels");
    }
  };
  if (!rep.levels.empty()) {
    spread(&BoundConstants::c1, "c1");
    spread(&BoundConstants::c2, "c2");
  }
  return rep;
}

ConstantStateCheck constant_state_admissibility(const FluxPair& flux,
                                                const TransformPair& t,
                                                double state,
                                                std::size_t xi_count) {
  const ComposedFluxes composed = compose(flux, t);
  const ClippedFunction fa(composed.fa), gb(composed.gb);
  const double vR = t.alpha.inverse(state);
  const double vL = t.beta.inverse(state);
  const double w = flux.b() - flux.a();
  const double lo = t.v_lo() - w, hi = t.v_hi() + w;
  std::vector<double> xis{vR, vL};
  for (std::size_t k = 0; k < xi_count; ++k) {
    xis.push_back(lo + (hi - lo) * static_cast<double>(k) /
                           static_cast<double>(xi_count - 1));
  }
  ConstantStateCheck out;
  out.worst = -std::numeric_limits<double>::infinity();
  for (double xi : xis) {
    const double qR = sgn(vR - xi, 0.0) * (fa(vR) - fa(xi));
    const double qL = sgn(vL - xi, 0.0) * (gb(vL) - gb(xi));
    const double e = qR - qL - std::abs(fa(xi) - gb(xi));
    if (e > out.worst) {
      out.worst = e;
      out.worst_xi = xi;
    }
  }
  out.pass = out.worst <= 1e-12 * flux.flux_scale();
  return out;
}

SolutionField frozen_field(const InitialData& u, const TransformPair& t,
                           SolverConfig cfg) {
  SolutionField field;
  field.x = cfg.cell_centers();
  field.u0 = u.cell_values(field.x);
  std::vector<double> v(field.x.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = t.to_v(field.u0[i], field.x[i] > 0.0);
  }
  const std::vector<double> us = reconstruct_u(field.x, v, t);
  for (std::size_t s = 0; s < cfg.snapshots; ++s) {
    field.times.push_back(cfg.t_end * static_cast<double>(s) /
                          static_cast<double>(cfg.snapshots - 1));
    field.v.push_back(v);
    field.u.push_back(us);
  }
  cfg.epsilon = 0.0;
  field.config = cfg;
  return field;
}

}  // namespace discflux
