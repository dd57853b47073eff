#include "discflux/viscous_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {
namespace {

constexpr std::size_t kQuadIntervals = 256;  // even, composite Simpson

double bump(double z) {
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - z * z));
}

double simpson_bump(double lo, double hi) {
  const double h = (hi - lo) / kQuadIntervals;
  double sum = bump(lo) + bump(hi);
  for (std::size_t k = 1; k < kQuadIntervals; ++k) {
    sum += (k % 2 ? 4.0 : 2.0) * bump(lo + h * static_cast<double>(k));
  }
  return sum * h / 3.0;
}

double half_mass() {
  static const double m = simpson_bump(0.0, 1.0);
  return m;
}

// Integral of the normalized density over [0, z], z in [0, 1].
double half_cdf(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 0.5;
  return std::min(0.5, 0.5 * simpson_bump(0.0, z) / half_mass());
}

}  // namespace

std::vector<double> SolverConfig::cell_centers() const {
  std::vector<double> x(cells);
  const double h = dx();
  for (std::size_t i = 0; i < cells; ++i) {
    x[i] = -half_width + (static_cast<double>(i) + 0.5) * h;
  }
  return x;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (cells < 16 || cells % 2 != 0) fail("cells must be even and >= 16");
  if (!(half_width > 0.0)) fail("half_width must be positive");
  if (!(2.0 / epsilon > half_width)) {
    fail("domain half-width must satisfy L < 2/epsilon");
  }
  if (!(t_end > 0.0)) fail("t_end must be positive");
  if (!(cfl_hyp > 0.0 && cfl_hyp <= 1.0)) fail("cfl_hyp must be in (0, 1]");
  if (!(cfl_par > 0.0 && cfl_par <= 1.0)) fail("cfl_par must be in (0, 1]");
  if (cfl_hyp + cfl_par > 1.0) fail("cfl_hyp + cfl_par must not exceed 1");
  if (snapshots < 2) fail("snapshots must be >= 2");
}

SolverConfig SolverConfig::coupled(std::size_t cells, double half_width,
                                   double t_end, double factor) {
  SolverConfig cfg;
  cfg.cells = cells;
  cfg.half_width = half_width;
  cfg.t_end = t_end;
  cfg.epsilon = factor * cfg.dx();
  return cfg;
}

double mollifier_density(double z) { return 0.5 * bump(z) / half_mass(); }

double smooth_heaviside(double x, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("smoothing scale must be positive");
  const double z = x / eps;
  if (z >= 0.0) return 0.5 + half_cdf(z);
  return 0.5 - half_cdf(-z);
}

double smooth_delta(double x, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("smoothing scale must be positive");
  return mollifier_density(x / eps) / eps;
}

std::vector<double> mollify_initial(const FluxPair& flux, const InitialData& u0,
                                    const TransformPair& t,
                                    const SolverConfig& cfg) {
  const double eps = cfg.epsilon;
  const double dx = cfg.dx();
  const std::size_t per_side = std::max<std::size_t>(
      64, 4 * static_cast<std::size_t>(std::ceil(eps / dx)));
  const std::size_t nq = 2 * per_side;
  std::vector<double> z(nq), w(nq);
  double total = 0.0;
  for (std::size_t k = 0; k < nq; ++k) {
    z[k] = -1.0 + (static_cast<double>(k) + 0.5) * 2.0 / static_cast<double>(nq);
    w[k] = bump(z[k]);
    total += w[k];
  }
  for (double& wk : w) wk /= total;

  const double slack = 1e-12 * (flux.b() - flux.a());
  auto transformed = [&](double y) {
    const double u = u0(y);
    if (u < flux.a() - slack || u > flux.b() + slack) {
      std::ostringstream msg;
      msg << "initial data " << u << " at x = " << y << " leaves ["
          << flux.a() << ", " << flux.b() << "]";
      throw DomainError(msg.str());
    }
    return t.to_v(u, y > 0.0);
  };

  const auto x = cfg.cell_centers();
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 0; k < nq; ++k) {
      const double vk = transformed(x[i] - eps * z[k]);
      sum += w[k] * vk;
      lo = std::min(lo, vk);
      hi = std::max(hi, vk);
    }
    v[i] = std::clamp(sum, lo, hi);
  }
  return v;
}

ViscousScheme::ViscousScheme(const FluxPair& flux, const TransformPair& t,
                             const SolverConfig& cfg)
    : transform_(t), fluxes_(compose(flux, t)), cfg_(cfg) {
  cfg_.validate();
  x_ = cfg_.cell_centers();
  const double dx = cfg_.dx();
  h_.resize(x_.size() + 2);
  h_.front() = smooth_heaviside(x_.front() - dx, cfg_.epsilon);
  h_.back() = smooth_heaviside(x_.back() + dx, cfg_.epsilon);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    h_[i + 1] = smooth_heaviside(x_[i], cfg_.epsilon);
  }

  lambda_ = std::max(fluxes_.fa.lipschitz(), fluxes_.gb.lipschitz());
  const double mu = std::min(t.alpha.min_slope(), t.beta.min_slope());
  const double hyp = lambda_ > 0.0 ? cfg_.cfl_hyp * dx * mu / lambda_
                                   : std::numeric_limits<double>::infinity();
  const double par = cfg_.cfl_par * dx * dx * mu / (2.0 * cfg_.epsilon);
  max_dt_ = std::min(hyp, par);

  identity_ = true;
  const auto bp = t.alpha.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (t.alpha.values()[k] != bp[k] || t.beta.values()[k] != bp[k]) {
      identity_ = false;
    }
  }
}

double ViscousScheme::blend(double h, double v) const {
  if (identity_) return v;
  if (h == 1.0) return transform_.alpha(v);
  if (h == 0.0) return transform_.beta(v);
  const auto bp = transform_.alpha.breakpoints();
  const auto av = transform_.alpha.values();
  const auto bv = transform_.beta.values();
  const std::size_t n = bp.size();
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(bp.begin(), bp.end(), v) - bp.begin());
  k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
  const double s = (v - bp[k]) / (bp[k + 1] - bp[k]);
  const double a = av[k] + s * (av[k + 1] - av[k]);
  const double b = bv[k] + s * (bv[k + 1] - bv[k]);
  return b + h * (a - b);
}

double ViscousScheme::unblend(double h, double m) const {
  if (identity_) return m;
  if (h == 1.0) return transform_.alpha.inverse(m);
  if (h == 0.0) return transform_.beta.inverse(m);
  const auto bp = transform_.alpha.breakpoints();
  const auto av = transform_.alpha.values();
  const auto bv = transform_.beta.values();
  const std::size_t n = bp.size();
  auto M = [&](std::size_t k) { return bv[k] + h * (av[k] - bv[k]); };
  std::size_t k;
  if (m <= M(0)) {
    k = 0;
  } else if (m >= M(n - 1)) {
    k = n - 2;
  } else {
    std::size_t lo = 0, hi = n - 1;  // M(lo) <= m < M(hi)
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (M(mid) <= m ? lo : hi) = mid;
    }
    k = lo;
  }
  const double m0 = M(k), m1 = M(k + 1);
  return bp[k] + (m - m0) / (m1 - m0) * (bp[k + 1] - bp[k]);
}

double ViscousScheme::flux_with(double h, double v) const {
  const double fa = fluxes_.fa(v);
  const double gb = fluxes_.gb(v);
  return gb + h * (fa - gb);
}

double ViscousScheme::conserved(std::size_t cell, double v) const {
  return blend(h_[cell + 1], v);
}

double ViscousScheme::recover(std::size_t cell, double m) const {
  const double v = unblend(h_[cell + 1], m);
  const double lo = transform_.v_lo();
  const double hi = transform_.v_hi();
  const double slack = 1e-9 * (hi - lo);
  if (!(v >= lo - slack && v <= hi + slack)) {
    std::ostringstream msg;
    msg << "cell " << cell << " at x = " << x_[cell] << " left the v range: "
        << v << " not in [" << lo << ", " << hi << "]";
    throw StabilityError(msg.str());
  }
  return std::clamp(v, lo, hi);
}

double ViscousScheme::flux_at(std::size_t cell, double v) const {
  return flux_with(h_[cell + 1], v);
}

void ViscousScheme::step(std::span<const double> v, std::span<double> out,
                         double dt) const {
  const std::size_t n = v.size();
  const double dx = cfg_.dx();
  // Cell values including zero-gradient ghosts at indices 0 and n + 1.
  auto vg = [&](std::size_t j) {
    return v[std::clamp<std::size_t>(j, 1, n) - 1];
  };
  std::vector<double> F(n + 2);
  for (std::size_t j = 0; j < n + 2; ++j) F[j] = flux_with(h_[j], vg(j));
  // face[j] sits between extended cells j and j + 1.
  std::vector<double> face(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    face[j] = 0.5 * (F[j] + F[j + 1]) - 0.5 * lambda_ * (vg(j + 1) - vg(j));
  }
  const double r = dt / dx;
  const double d = cfg_.epsilon * dt / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    const double m = blend(h_[j], v[i]) - r * (face[j] - face[j - 1]) +
                     d * (vg(j + 1) - 2.0 * v[i] + vg(j - 1));
    out[i] = recover(i, m);
  }
}

std::vector<double> reconstruct_u(std::span<const double> x,
                                  std::span<const double> v,
                                  const TransformPair& t) {
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = t.to_u(v[i], x[i] > 0.0);
  return u;
}

SolutionField solve(const FluxPair& flux, const InitialData& u0,
                    const TransformPair& t, const SolverConfig& cfg) {
  cfg.validate();
  const TransformAudit audit = verify_transform(flux, t);
  if (!audit.pass()) {
    throw PreconditionError("transform rejected: " + audit.failures.front());
  }
  const ViscousScheme scheme(flux, t, cfg);

  SolutionField field;
  field.config = cfg;
  field.x = cfg.cell_centers();
  field.u0 = u0.cell_values(field.x);
  std::vector<double> v = mollify_initial(flux, u0, t, cfg);
  std::vector<double> next(v.size());
  const double dx = cfg.dx();

  auto dissipation = [&](const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const double g = (w[i + 1] - w[i]) / dx;
      s += g * g * dx;
    }
    return cfg.epsilon * s;
  };
  auto record = [&](double time) {
    field.times.push_back(time);
    field.v.push_back(v);
    field.u.push_back(reconstruct_u(field.x, v, t));
    for (double vi : v) {
      field.bounds.c0 = std::max({field.bounds.c0, t.v_lo() - vi, vi - t.v_hi()});
    }
    for (double ui : field.u.back()) {
      field.bounds.u_excess =
          std::max({field.bounds.u_excess, flux.a() - ui, ui - flux.b()});
    }
  };

  record(0.0);
  field.bounds.c2 = dissipation(v);
  const std::size_t S = cfg.snapshots;
  double time = 0.0;
  for (std::size_t s = 1; s < S; ++s) {
    const double target = cfg.t_end * static_cast<double>(s) /
                          static_cast<double>(S - 1);
    const double span = target - time;
    const auto sub = static_cast<std::size_t>(
        std::max(1.0, std::ceil(span / scheme.max_dt() - 1e-9)));
    const double dt = span / static_cast<double>(sub);
    field.dt = dt;
    for (std::size_t k = 0; k < sub; ++k) {
      scheme.step(v, next, dt);
      double tv = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) tv += std::abs(next[i] - v[i]);
      field.bounds.c1 = std::max(field.bounds.c1, tv * dx / dt);
      v.swap(next);
      field.bounds.c2 = std::max(field.bounds.c2, dissipation(v));
      ++field.steps;
    }
    time = target;
    record(time);
  }
  return field;
}

double restricted_l1_distance(std::span<const double> coarse_x,
                              std::span<const double> coarse,
                              std::span<const double> fine, double window) {
  if (coarse.empty() || fine.size() % coarse.size() != 0) {
    throw ArgumentError("fine grid must refine the coarse grid");
  }
  const std::size_t r = fine.size() / coarse.size();
  const double dx = coarse_x.size() > 1 ? coarse_x[1] - coarse_x[0] : 1.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (std::abs(coarse_x[j]) > window) continue;
    double avg = 0.0;
    for (std::size_t q = 0; q < r; ++q) avg += fine[j * r + q];
    avg /= static_cast<double>(r);
    sum += std::abs(avg - coarse[j]);
  }
  return sum * dx;
}

LadderResult ladder(const FluxPair& flux, const InitialData& u0,
                    const TransformPair& t, const SolverConfig& base,
                    std::size_t levels, double window) {
  if (levels < 2) throw ArgumentError("ladder needs at least two levels");
  LadderResult result;
  const double eps0 = 8.0 * base.dx();
  for (std::size_t k = 0; k < levels; ++k) {
    SolverConfig cfg = base;
    cfg.cells = base.cells << k;
    cfg.epsilon = eps0 / static_cast<double>(1u << k);
    result.levels.push_back(solve(flux, u0, t, cfg));
  }
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const auto& c = result.levels[k];
    const auto& f = result.levels[k + 1];
    result.distances.push_back(
        restricted_l1_distance(c.x, c.u.back(), f.u.back(), window));
  }
  for (std::size_t k = 0; k + 1 < result.distances.size(); ++k) {
    const double d0 = result.distances[k];
    const double d1 = result.distances[k + 1];
    result.ratios.push_back(d0 > 0.0 ? d1 / d0 : 0.0);
    if (d1 > std::max(kLadderRatio * d0, kLadderFloor)) {
      result.converged = false;
    }
  }
  return result;
}

}  // namespace discflux
