#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "discflux/errors.hpp"
#include "discflux/riemann_oracle.hpp"

using namespace discflux;

namespace {

// Closed-form rarefaction state for u(1-u): f'(u) = 1 - 2u.
double logistic_fan(double xi) { return std::clamp((1.0 - xi) / 2.0, 0.25, 0.75); }

// For g(u) = 2u(1-u)^2 and u_l = 1, u_r = 0: shock 1 -> 1/2 at speed -1/2,
// then a fan solving g'(u) = 6u^2 - 8u + 2 = xi on [0, 1/2].
double cubic_fan(double xi) {
  if (xi < -0.5) return 1.0;
  if (xi >= 2.0) return 0.0;
  return (8.0 - std::sqrt(64.0 - 24.0 * (2.0 - xi))) / 12.0;
}

}  // namespace

TEST_CASE("constant data") {
  const FluxPair flux = registry_flux("burgers-like");
  for (double c : {0.0, 0.3, 1.0}) {
    const RiemannSolution s = classical_riemann(flux.f(), c, c);
    CHECK(s.waves().empty());
    for (double xi : {-5.0, 0.0, 5.0}) CHECK(s.at(xi) == c);
  }
}

TEST_CASE("stationary shock for the concave logistic flux") {
  const FluxPair flux = registry_flux("burgers-like");
  const RiemannSolution s = classical_riemann(flux.f(), 0.25, 0.75);
  REQUIRE(s.waves().size() == 1);
  const RiemannWave& w = s.waves()[0];
  CHECK(w.kind == WaveKind::kShock);
  CHECK(std::abs(w.left_speed) <= 1e-12);
  CHECK(s(1.0, -1e-3) == 0.25);
  CHECK(s(1.0, 1e-3) == 0.75);
  CHECK(check_shocks(flux.f(), s).pass);
}

TEST_CASE("rarefaction for the logistic flux") {
  const FluxPair flux = registry_flux("burgers-like");
  const RiemannSolution s = classical_riemann(flux.f(), 0.75, 0.25);
  REQUIRE(s.waves().size() == 1);
  const RiemannWave& w = s.waves()[0];
  CHECK(w.kind == WaveKind::kRarefaction);
  const double h = flux.f().spacing();
  CHECK(w.left_speed == doctest::Approx(-0.5).epsilon(2 * h));
  CHECK(w.right_speed == doctest::Approx(0.5).epsilon(2 * h));
  double prev = 1.0;
  for (int k = -100; k <= 100; ++k) {
    const double xi = 0.01 * k;
    const double u = s.at(xi);
    CHECK(std::abs(u - logistic_fan(xi)) <= 2 * h);
    CHECK(u <= prev);
    prev = u;
  }
  CHECK(s.at(-0.6) == 0.75);
  CHECK(s.at(0.6) == 0.25);
}

TEST_CASE("nonconvex flux: shock attached to a fan") {
  const FluxPair flux = registry_flux("demo-cross");
  const RiemannSolution s = classical_riemann(flux.g(), 1.0, 0.0);
  REQUIRE(s.waves().size() == 2);
  CHECK(s.waves()[0].kind == WaveKind::kShock);
  CHECK(s.waves()[0].left_speed == doctest::Approx(-0.5).epsilon(1e-3));
  CHECK(s.waves()[1].kind == WaveKind::kRarefaction);
  const double h = flux.g().spacing();
  for (int k = -30; k <= 30; ++k) {
    const double xi = 0.1 * k;
    if (std::abs(xi + 0.5) < 0.01) continue;
    CHECK(std::abs(s.at(xi) - cubic_fan(xi)) <= 4 * h);
  }
  CHECK(check_shocks(flux.g(), s).pass);

  // Increasing data: the lower hull of g >= 0 on [0, 1] is the zero chord.
  const RiemannSolution up = classical_riemann(flux.g(), 0.0, 1.0);
  REQUIRE(up.waves().size() == 1);
  CHECK(up.waves()[0].kind == WaveKind::kShock);
  CHECK(std::abs(up.waves()[0].left_speed) <= 1e-12);
}

TEST_CASE("random data: fan invariants") {
  const FluxPair flux = registry_flux("demo-cross");
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const SampledFunction& branch = trial % 2 ? flux.f() : flux.g();
    const double ul = U(rng), ur = U(rng);
    const RiemannSolution s = classical_riemann(branch, ul, ur);
    const ShockCheck sc = check_shocks(branch, s);
    CHECK(sc.pass);
    CHECK(sc.rankine_hugoniot <= 1e-10);
    const auto& waves = s.waves();
    if (!waves.empty()) {
      CHECK(waves.front().u_left == ul);
      CHECK(waves.back().u_right == ur);
    }
    for (std::size_t k = 0; k + 1 < waves.size(); ++k) {
      CHECK(waves[k].u_right == waves[k + 1].u_left);
      CHECK(waves[k].right_speed <= waves[k + 1].left_speed + 1e-12);
    }
    // Self-similar, bounded, and monotone between the end states.
    double prev = ul;
    for (int k = -40; k <= 40; ++k) {
      const double xi = 0.1 * k;
      const double u = s.at(xi);
      CHECK(s(2.0, 2.0 * xi) == u);
      CHECK(u >= std::min(ul, ur));
      CHECK(u <= std::max(ul, ur));
      if (ul < ur) CHECK(u >= prev);
      if (ul > ur) CHECK(u <= prev);
      prev = u;
    }
  }
}

TEST_CASE("check_shocks rejects an expansion shock") {
  const FluxPair flux = registry_flux("burgers-like");
  RiemannWave bad;
  bad.kind = WaveKind::kShock;
  bad.u_left = 0.75;
  bad.u_right = 0.25;
  const RiemannSolution s(0.75, 0.25, {bad});
  const ShockCheck sc = check_shocks(flux.f(), s);
  CHECK_FALSE(sc.pass);
  CHECK(sc.rankine_hugoniot <= 1e-12);
  CHECK(sc.oleinik > 0.0);

  RiemannWave wrong_speed;
  wrong_speed.u_left = 0.25;
  wrong_speed.u_right = 0.75;
  wrong_speed.left_speed = wrong_speed.right_speed = 0.1;
  const ShockCheck rh = check_shocks(flux.f(), RiemannSolution(0.25, 0.75, {wrong_speed}));
  CHECK_FALSE(rh.pass);
  CHECK(rh.rankine_hugoniot == doctest::Approx(0.05));
}

TEST_CASE("states outside the flux interval") {
  const FluxPair flux = registry_flux("burgers-like");
  CHECK_THROWS_AS(classical_riemann(flux.f(), -0.1, 0.5), DomainError);
  CHECK_THROWS_AS(classical_riemann(flux.f(), 0.5, 1.2), DomainError);
}

TEST_CASE("steady connection states") {
  const FluxPair flux = registry_flux("burgers-like");
  const InitialData c =
      steady_connection_state(flux, {0.75, 0.25, ConnectionFlavor::kClassic});
  CHECK(c(-1.0) == 0.75);
  CHECK(c(0.0) == 0.75);
  CHECK(c(1e-9) == 0.25);
  CHECK(flux.g()(c(-1.0)) == doctest::Approx(0.1875));
  CHECK(flux.f()(c(1.0)) == doctest::Approx(0.1875));

  const InitialData aa = steady_connection_state(flux, {0.0, 0.0, ConnectionFlavor::kWeak});
  CHECK(aa(-1.0) == 0.0);
  CHECK(aa(1.0) == 0.0);

  CHECK_THROWS_AS(steady_connection_state(flux, {0.6, 0.25, ConnectionFlavor::kWeak}),
                  PreconditionError);
}

TEST_CASE("CSV sampling") {
  const FluxPair flux = registry_flux("burgers-like");
  const RiemannSolution s = classical_riemann(flux.f(), 0.25, 0.75);
  const std::vector<double> x{-0.5, 0.5};
  const std::string csv = riemann_to_csv(s, x, 1.0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,u");
  std::getline(in, line);
  CHECK(line == "-0.5,0.25");
  std::getline(in, line);
  CHECK(line == "0.5,0.75");
}
