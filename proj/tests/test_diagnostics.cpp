#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "discflux/diagnostics.hpp"
#include "discflux/errors.hpp"
#include "discflux/riemann_oracle.hpp"

using namespace discflux;

namespace {

SolverConfig small_config(std::size_t cells = 256) {
  SolverConfig cfg = SolverConfig::coupled(cells);
  cfg.t_end = 0.5;
  return cfg;
}

EntropyTestConfig single_xi(const SolutionField& field, const TransformPair& t,
                            double xi) {
  EntropyTestConfig cfg = default_entropy_config(field, t, 3);
  cfg.xi_values = {xi};
  return cfg;
}

double max_positive(const EntropyReport& rep, double lo, double hi) {
  double m = -1.0;
  for (const auto& e : rep.entries) {
    if (e.xi > lo && e.xi < hi) m = std::max(m, e.residual);
  }
  return m;
}

}  // namespace

TEST_CASE("hat function") {
  const HatFunction h{0.25, 0.1, 0.5, 0.2, 2.0};
  CHECK(h(0.25, 0.5) == 2.0);
  CHECK(h(0.3, 0.5) == doctest::Approx(1.0));
  CHECK(h(0.25, 0.6) == doctest::Approx(1.0));
  CHECK(h(0.36, 0.5) == 0.0);
  CHECK(h.support_area() == doctest::Approx(0.08));
}

TEST_CASE("default entropy config stays inside the window") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);
  const SolutionField f = frozen_field(InitialData::constant(0.5), id, small_config());
  const EntropyTestConfig cfg = default_entropy_config(f, id, 9);
  CHECK(cfg.xi_values.size() == 16);
  CHECK(cfg.test_functions.size() == 10);
  for (const auto& phi : cfg.test_functions) {
    CHECK(phi.t_center - phi.t_half >= 0.0);
    CHECK(phi.t_center + phi.t_half <= f.times.back());
    CHECK(std::abs(phi.x_center) + phi.x_half <= 2.0);
  }
  for (bool right : {false, true}) {
    for (const auto& phi : one_sided_hats(f, right, 6, 4)) {
      if (right) CHECK(phi.x_center - phi.x_half >= 0.0);
      else CHECK(phi.x_center + phi.x_half <= 0.0);
    }
  }
}

TEST_CASE("entropy residual: admissible fields pass") {
  SUBCASE("constant endpoint states") {
    const FluxPair flux = registry_flux("demo-cross");
    const TransformPair id = identity_transform(flux);
    for (double k : {flux.a(), flux.b()}) {
      const SolutionField f = frozen_field(InitialData::constant(k), id, small_config());
      const EntropyReport rep = entropy_residual_ab(f, flux, id, default_entropy_config(f, id));
      CHECK(rep.pass);
      for (const auto& e : rep.entries) CHECK(e.residual <= 1e-12);
      CHECK(rep.interface_mismatch == 0.0);
    }
  }
  SUBCASE("steady connection with its transform") {
    const FluxPair flux = registry_flux("burgers-like");
    const Connection conn{0.75, 0.25, ConnectionFlavor::kClassic};
    const TransformPair t = build_connection_transform(flux, conn);
    const SolutionField f =
        frozen_field(steady_connection_state(flux, conn), t, small_config());
    const EntropyTestConfig cfg = default_entropy_config(f, t);
    const EntropyReport ab = entropy_residual_ab(f, flux, t, cfg);
    CHECK(ab.pass);
    CHECK(ab.interface_mismatch <= 1e-10);
    const TypeABReport AB = entropy_residual_AB(f, flux, conn, {});
    CHECK(AB.pass());
    CHECK(AB.pass() == ab.pass);
  }
}

TEST_CASE("entropy residual: reversed classical shock") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);
  const SolutionField f =
      frozen_field(InitialData::riemann(0.75, 0.25), id, small_config());
  const EntropyReport rep = entropy_residual_ab(f, flux, id, default_entropy_config(f, id));
  CHECK_FALSE(rep.pass);
  CHECK(max_positive(rep, 0.25, 0.75) > 0.0);
  // xi outside (0.25, 0.75) gives sgn constant on the field: no production.
  for (const auto& e : rep.entries) {
    if (e.xi < 0.25 || e.xi > 0.75) CHECK(std::abs(e.residual) <= 1e-12);
  }
}

TEST_CASE("type (A, B) conditions") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);

  SUBCASE("constant state") {
    const SolutionField f = frozen_field(InitialData::constant(0.0), id, small_config());
    CHECK(entropy_residual_AB(f, flux, {0.0, 0.0, ConnectionFlavor::kWeak}, {}).pass());
  }
  SUBCASE("reversed shock left of the interface fails the left Kruzhkov test") {
    const InitialData u = InitialData::piecewise_constant({-0.5}, {0.75, 0.25});
    const SolutionField f = frozen_field(u, id, small_config());
    const TypeABReport rep =
        entropy_residual_AB(f, flux, {0.75, 0.25, ConnectionFlavor::kClassic}, {});
    CHECK_FALSE(rep.left.pass);
    CHECK(rep.right.pass);
  }
  SUBCASE("reversed shock at the interface fails the adapted test") {
    const SolutionField f =
        frozen_field(InitialData::riemann(0.75, 0.25), id, small_config());
    const TypeABReport rep =
        entropy_residual_AB(f, flux, {0.5, 0.5, ConnectionFlavor::kWeak}, {});
    CHECK_FALSE(rep.adapted.pass);
    CHECK_FALSE(rep.pass());
  }
}

TEST_CASE("xi outside the range reduces to the conservation law") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair t =
      build_connection_transform(flux, {0.75, 0.25, ConnectionFlavor::kClassic});
  SolverConfig cfg = small_config(256);
  const SolutionField f = solve(flux, InitialData::random_bv(5, 6, 0, 1, 2.0), t, cfg);
  const double lo = t.v_lo(), hi = t.v_hi();
  const EntropyReport below = entropy_residual_ab(f, flux, t, single_xi(f, t, lo - 1e-10));
  const EntropyReport above = entropy_residual_ab(f, flux, t, single_xi(f, t, hi + 1e-10));
  const EntropyTestConfig ref = single_xi(f, t, lo);
  for (std::size_t p = 0; p < ref.test_functions.size(); ++p) {
    const double c = conservation_residual(f, flux, t, ref.test_functions[p]);
    CHECK(std::abs(below.entries[p].residual - c) <= 1e-12);
    CHECK(std::abs(above.entries[p].residual + c) <= 1e-12);
  }
}

TEST_CASE("linearity in the test function") {
  const FluxPair flux = registry_flux("demo-cross");
  const TransformPair id = identity_transform(flux);
  const SolutionField f =
      solve(flux, InitialData::random_bv(2, 5, 0, 1, 2.0), id, small_config(256));
  EntropyTestConfig cfg = default_entropy_config(f, id, 1);
  EntropyTestConfig doubled = cfg;
  for (auto& phi : doubled.test_functions) phi.amplitude *= 2.0;
  const EntropyReport r1 = entropy_residual_ab(f, flux, id, cfg);
  const EntropyReport r2 = entropy_residual_ab(f, flux, id, doubled);
  REQUIRE(r1.entries.size() == r2.entries.size());
  for (std::size_t k = 0; k < r1.entries.size(); ++k) {
    CHECK(r2.entries[k].residual ==
          doctest::Approx(2.0 * r1.entries[k].residual).epsilon(1e-12).scale(1e-14));
  }
}

TEST_CASE("coverage errors") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);
  const SolutionField f = frozen_field(InitialData::constant(0.5), id, small_config());
  EntropyTestConfig cfg = default_entropy_config(f, id);
  cfg.test_functions = {HatFunction{0.45, 0.1, 0.0, 0.5, 1.0}};
  CHECK_THROWS_AS(entropy_residual_ab(f, flux, id, cfg), CoverageError);
  cfg.test_functions = {HatFunction{0.25, 0.1, 1.8, 0.5, 1.0}};
  CHECK_THROWS_AS(entropy_residual_ab(f, flux, id, cfg), CoverageError);
  cfg.test_functions = {HatFunction{0.25, 0.001, 0.0, 0.5, 1.0}};
  CHECK_THROWS_AS(entropy_residual_ab(f, flux, id, cfg), CoverageError);
}

TEST_CASE("traces and interface mismatch") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);

  SUBCASE("constant field") {
    const SolutionField f = frozen_field(InitialData::constant(0.3), id, small_config());
    const Traces tr = extract_traces(f);
    for (double l : tr.left) CHECK(l == 0.3);
    for (double r : tr.right) CHECK(r == 0.3);
    CHECK(tr.cauchy_indicator == 0.0);
    for (double m : interface_flux_mismatch(f, flux)) CHECK(m == 0.0);
  }
  SUBCASE("steady connection") {
    const Connection conn{0.75, 0.25, ConnectionFlavor::kClassic};
    const TransformPair t = build_connection_transform(flux, conn);
    const SolutionField f =
        frozen_field(steady_connection_state(flux, conn), t, small_config());
    const Traces tr = extract_traces(f);
    for (double l : tr.left) CHECK(l == doctest::Approx(0.75).epsilon(1e-12));
    for (double r : tr.right) CHECK(r == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(tr.cauchy_indicator <= f.dx() * flux.f().lipschitz());
    CHECK(f.x[tr.left_cell] < 0.0);
    CHECK(f.x[tr.right_cell] > 0.0);
    for (double m : interface_flux_mismatch(f, flux)) CHECK(m <= 1e-10);
  }
  SUBCASE("mismatched frozen field") {
    const SolutionField f =
        frozen_field(InitialData::riemann(0.6, 0.25), id, small_config());
    // 0.6 is off the sampling lattice: allow the linear interpolation error.
    const double h = flux.f().spacing();
    for (double m : interface_flux_mismatch(f, flux)) {
      CHECK(std::abs(m - 0.0525) <= h * h * 2.0 / 8.0);
    }
    const EntropyReport rep =
        entropy_residual_ab(f, flux, id, default_entropy_config(f, id));
    CHECK_FALSE(rep.interface_ok);
  }
  SUBCASE("smeared solver connection") {
    const Connection conn{0.75, 0.25, ConnectionFlavor::kClassic};
    const TransformPair t = build_connection_transform(flux, conn);
    SolverConfig cfg = small_config(512);
    const SolutionField f = solve(flux, steady_connection_state(flux, conn), t, cfg);
    const Traces tr = extract_traces(f);
    CHECK(std::abs(tr.left.back() - 0.75) <= cfg.epsilon);
    CHECK(std::abs(tr.right.back() - 0.25) <= cfg.epsilon);
  }
  SUBCASE("resolution errors") {
    SolverConfig cfg = small_config(16);
    const SolutionField f = frozen_field(InitialData::constant(0.3), id, cfg);
    CHECK_NOTHROW(extract_traces(f, 1));
    CHECK_THROWS_AS(extract_traces(f, 0), ResolutionError);
    CHECK_THROWS_AS(extract_traces(f, 5), ResolutionError);
    // Viscous fields skip the smoothing layer and need more cells.
    SolutionField viscous = f;
    viscous.config.epsilon = 4 * f.dx();
    CHECK_THROWS_AS(extract_traces(viscous, 1), ResolutionError);
  }
}

TEST_CASE("L1 stability") {
  const FluxPair flux = registry_flux("demo-cross");
  const TransformPair id = identity_transform(flux);
  const SolverConfig cfg = small_config(512);
  const SolutionField u = solve(flux, InitialData::random_bv(11, 8, 0, 1, 2.0), id, cfg);
  const SolutionField w = solve(flux, InitialData::random_bv(12, 8, 0, 1, 2.0), id, cfg);

  const L1Stability self = l1_stability(u, u, 1.0);
  for (double d : self.distance) CHECK(d == 0.0);
  CHECK(self.constant == 0.0);

  const L1Stability uw = l1_stability(u, w, 1.0);
  const L1Stability wu = l1_stability(w, u, 1.0);
  CHECK(uw.distance == wu.distance);
  CHECK(uw.distance.front() > 0.0);

  // Whole-line contraction: distance never exceeds an earlier value by more
  // than 5% plus 10 dx.
  const L1Stability full = l1_stability(u, w, 2.0);
  for (std::size_t n = 1; n < full.distance.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      CHECK(full.distance[n] <= 1.05 * full.distance[m] + 10.0 * cfg.dx());
    }
  }

  // Data differing only on x > 1.8: outside R + Lip t_end the window sees
  // just the diffusive tail, bounded by jump * sqrt(4 nu T) * exp(-d^2 / 4 nu T).
  const InitialData base = InitialData::piecewise_constant({-0.2}, {0.2, 0.6});
  const InitialData far = InitialData::piecewise_constant({-0.2, 1.8}, {0.2, 0.6, 0.9});
  const SolutionField a = solve(flux, base, id, cfg);
  const SolutionField b = solve(flux, far, id, cfg);
  const double R = 0.25, lip = 1.0, T = cfg.t_end;
  const double nu = cfg.epsilon + 0.5 * lip * cfg.dx();
  const double d = 1.8 - R - lip * T;
  const double leak = 0.3 * std::sqrt(4 * nu * T) * std::exp(-d * d / (4 * nu * T));
  CHECK(leak < 1e-4);
  for (double dist : l1_stability(a, b, R).distance) CHECK(dist <= leak);

  const SolutionField coarse = solve(flux, base, id, small_config(256));
  CHECK_THROWS_AS(l1_stability(a, coarse, 0.5), ArgumentError);
}

TEST_CASE("comparison principle") {
  const FluxPair flux = registry_flux("demo-cross");
  const TransformPair id = identity_transform(flux);
  const SolverConfig cfg = small_config(256);
  const SolutionField lo = solve(flux, InitialData::constant(0.0), id, cfg);
  const SolutionField hi = solve(flux, InitialData::constant(1.0), id, cfg);
  CHECK(max_principle_check(lo, hi).pass);

  const InitialData u0 = InitialData::random_bv(21, 6, 0, 1, 2.0);
  const InitialData w0 = pointwise_max(u0, InitialData::random_bv(22, 6, 0, 1, 2.0));
  const SolutionField u = solve(flux, u0, id, cfg);
  const SolutionField w = solve(flux, w0, id, cfg);
  const ComparisonResult same = max_principle_check(u, u);
  CHECK(same.pass);
  CHECK(same.max_violation == 0.0);
  CHECK(max_principle_check(u, w).pass);
  CHECK_THROWS_AS(max_principle_check(hi, lo), ArgumentError);
}

TEST_CASE("bounds report") {
  const FluxPair flux = registry_flux("burgers-like");
  const TransformPair id = identity_transform(flux);
  const SolverConfig base = SolverConfig::coupled(256);

  const LadderResult constant = ladder(flux, InitialData::constant(0.4), id, base, 3);
  const BoundsReport cr = bounds_report(constant.levels);
  CHECK(cr.pass());
  for (const auto& b : cr.levels) {
    CHECK(b.c0 <= 1e-10);
    CHECK(b.c2 <= 1e-12);
  }

  const LadderResult riemann = ladder(flux, InitialData::riemann(0.25, 0.75), id, base, 3);
  const BoundsReport rr = bounds_report(riemann.levels);
  CHECK(rr.pass());
  for (std::size_t k = 1; k < rr.levels.size(); ++k) {
    const double ratio = rr.levels[k].c1 / rr.levels[k - 1].c1;
    CHECK(ratio < 2.0);
    CHECK(ratio > 0.5);
  }

  std::vector<SolutionField> tampered = riemann.levels;
  tampered[1].bounds.c0 = 1e-3;
  tampered[2].bounds.c2 *= 5.0;
  CHECK(bounds_report(tampered).failures.size() >= 2);
}

TEST_CASE("constant state admissibility") {
  const FluxPair flux = registry_flux("burgers-like");
  const ConstantStateCheck id = constant_state_admissibility(flux, identity_transform(flux), 0.3);
  CHECK(id.pass);
  CHECK(id.worst <= 1e-12);

  const FluxPair swapped = registry_flux("demo-swapped");
  const TransformPair tr = build_translation_transform(swapped);
  for (double k : {swapped.a(), swapped.b()}) {
    CHECK(constant_state_admissibility(swapped, tr, k).pass);
  }
}
