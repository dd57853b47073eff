#include "discflux/riemann_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "discflux/envelope.hpp"
#include "discflux/errors.hpp"

namespace discflux {

double RiemannSolution::at(double xi) const {
  double state = u_left_;
  for (const auto& w : waves_) {
    if (xi < w.left_speed) return state;
    if (w.kind == WaveKind::kShock) {
      state = w.u_right;
      continue;
    }
    if (xi <= w.right_speed) {
      const auto& s = w.speeds;
      const std::size_t k = static_cast<std::size_t>(
          std::upper_bound(s.begin(), s.end(), xi) - s.begin());
      if (k == 0) return w.states.front();
      if (k == s.size()) return w.states.back();
      const double span = s[k] - s[k - 1];
      if (span <= 0.0) return w.states[k];
      const double r = (xi - s[k - 1]) / span;
      return w.states[k - 1] + r * (w.states[k] - w.states[k - 1]);
    }
    state = w.u_right;
  }
  return state;
}

double RiemannSolution::operator()(double t, double x) const {
  if (t <= 0.0) return x <= 0.0 ? u_left_ : u_right_;
  return at(x / t);
}

std::vector<double> RiemannSolution::sample(std::span<const double> x,
                                            double t) const {
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (*this)(t, x[i]);
  return u;
}

RiemannSolution classical_riemann(const SampledFunction& flux, double u_l,
                                  double u_r) {
  const double slack = SampledFunction::kClampSlack;
  for (double u : {u_l, u_r}) {
    if (u < flux.lo() - slack || u > flux.hi() + slack) {
      std::ostringstream msg;
      msg << "Riemann state " << u << " outside [" << flux.lo() << ", "
          << flux.hi() << "]";
      throw DomainError(msg.str());
    }
  }
  u_l = std::clamp(u_l, flux.lo(), flux.hi());
  u_r = std::clamp(u_r, flux.lo(), flux.hi());
  if (u_l == u_r) return RiemannSolution(u_l, u_r, {});

  // Ascending state list: the two data plus every lattice node between.
  const double lo = std::min(u_l, u_r);
  const double hi = std::max(u_l, u_r);
  std::vector<double> us{lo};
  for (std::size_t k = 0; k <= flux.intervals(); ++k) {
    const double node = flux.node(k);
    if (node > lo && node < hi) us.push_back(node);
  }
  us.push_back(hi);
  std::vector<double> fs(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) fs[i] = flux(us[i]);

  const bool increasing = u_l < u_r;
  std::vector<std::size_t> hull =
      increasing ? lower_convex_hull(us, fs) : upper_concave_hull(us, fs);
  if (!increasing) std::reverse(hull.begin(), hull.end());  // walk u_l -> u_r

  std::vector<RiemannWave> waves;
  auto slope = [&](std::size_t p, std::size_t q) {
    return (fs[q] - fs[p]) / (us[q] - us[p]);
  };
  auto adjacent = [](std::size_t p, std::size_t q) {
    return (p > q ? p - q : q - p) == 1;
  };
  std::size_t e = 0;
  const std::size_t edges = hull.size() - 1;
  while (e < edges) {
    const std::size_t p = hull[e], q = hull[e + 1];
    if (!adjacent(p, q)) {
      const double s = slope(p, q);
      waves.push_back({WaveKind::kShock, s, s, us[p], us[q], {}, {}});
      ++e;
      continue;
    }
    std::size_t end = e;
    while (end < edges && adjacent(hull[end], hull[end + 1])) ++end;
    RiemannWave w;
    w.kind = WaveKind::kRarefaction;
    std::vector<double> s;
    for (std::size_t j = e; j < end; ++j) s.push_back(slope(hull[j], hull[j + 1]));
    const std::size_t m = s.size();
    w.speeds.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) w.states.push_back(us[hull[e + j]]);
    for (std::size_t j = 1; j < m; ++j) w.speeds[j] = 0.5 * (s[j - 1] + s[j]);
    w.speeds[0] = m >= 2 ? 1.5 * s[0] - 0.5 * s[1] : s[0];
    w.speeds[m] = m >= 2 ? 1.5 * s[m - 1] - 0.5 * s[m - 2] : s[0];
    if (m >= 2) {
      w.speeds[0] = std::min(w.speeds[0], w.speeds[1]);
      w.speeds[m] = std::max(w.speeds[m], w.speeds[m - 1]);
    }
    if (!waves.empty()) {
      w.speeds[0] = std::max(w.speeds[0], waves.back().right_speed);
    }
    if (end < edges) {
      const double next = slope(hull[end], hull[end + 1]);
      w.speeds[m] = std::min(w.speeds[m], next);
    }
    for (std::size_t j = 1; j <= m; ++j) {
      w.speeds[j] = std::max(w.speeds[j], w.speeds[j - 1]);
    }
    w.left_speed = w.speeds.front();
    w.right_speed = w.speeds.back();
    w.u_left = w.states.front();
    w.u_right = w.states.back();
    waves.push_back(std::move(w));
    e = end;
  }
  return RiemannSolution(u_l, u_r, std::move(waves));
}

ShockCheck check_shocks(const SampledFunction& flux, const RiemannSolution& sol,
                        double tol) {
  ShockCheck out;
  for (const auto& w : sol.waves()) {
    if (w.kind != WaveKind::kShock) continue;
    const double s = w.left_speed;
    const double fm = flux(w.u_left), fp = flux(w.u_right);
    out.rankine_hugoniot = std::max(
        out.rankine_hugoniot, std::abs(s * (w.u_right - w.u_left) - (fp - fm)));
    // Convex hull (u- < u+): chord below the graph; concave: above.
    const double side = w.u_left < w.u_right ? 1.0 : -1.0;
    for (int k = 1; k <= 64; ++k) {
      const double u = w.u_left + (w.u_right - w.u_left) * k / 65.0;
      const double chord = fm + s * (u - w.u_left);
      out.oleinik = std::max(out.oleinik, side * (chord - flux(u)));
    }
  }
  out.pass = out.rankine_hugoniot <= tol && out.oleinik <= tol;
  return out;
}

InitialData steady_connection_state(const FluxPair& flux, const Connection& conn) {
  const ConnectionCheck check =
      is_connection(flux, conn.A, conn.B, conn.flavor);
  if (!check.valid) {
    throw PreconditionError("not a connection: " + check.reason);
  }
  std::ostringstream desc;
  desc << "connection:" << conn.A << "," << conn.B;
  const double A = conn.A, B = conn.B;
  return InitialData([A, B](double x) { return x <= 0.0 ? A : B; }, desc.str());
}

std::string riemann_to_csv(const RiemannSolution& sol, std::span<const double> x,
                           double t) {
  std::string out = "x,u\n";
  char line[96];
  for (double xi : x) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", xi, sol(t, xi));
    out += line;
  }
  return out;
}

}  // namespace discflux
