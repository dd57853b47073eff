#include <cmath>
#include <random>

#include "doctest.h"

#include "discflux/errors.hpp"
#include "discflux/flux_model.hpp"
#include "discflux/monotone_bijection.hpp"

using namespace discflux;

namespace {

double parabola(double u) { return u * (1.0 - u); }
double cubic(double u) { return 2.0 * u * (1.0 - u) * (1.0 - u); }

}  // namespace

TEST_CASE("branch evaluation reproduces samples and clamps") {
  const FluxPair flux = registry_flux("burgers-like");
  CHECK(flux.f()(0.5) == 0.25);
  CHECK(flux.f()(0.25) == 0.1875);
  CHECK(flux.f()(0.0) == 0.0);
  for (std::size_t k = 0; k <= flux.intervals(); k += 97) {
    CHECK(flux.f()(flux.f().node(k)) == flux.f().value(k));
  }
  CHECK(flux.f()(1.0 + 5e-10) == 0.0);
  CHECK_THROWS_AS(flux.f()(1.1), DomainError);
  CHECK_THROWS_AS(flux.f()(-0.01), DomainError);
}

TEST_CASE("flux pair rejects bad endpoints and lattices") {
  CHECK_THROWS_AS(FluxPair::sample(0, 1, 64, [](double u) { return u; }, parabola),
                  ArgumentError);
  CHECK_THROWS_AS(FluxPair(SampledFunction::sample(0, 1, 64, parabola),
                           SampledFunction::sample(0, 1, 32, parabola)),
                  ArgumentError);
  CHECK_THROWS_AS(SampledFunction(1.0, 0.0, {0.0, 0.0}), ArgumentError);
}

TEST_CASE("truncate") {
  CHECK(truncate(2.0, 0.0, 1.0) == 1.0);
  CHECK(truncate(-1.0, 0.0, 1.0) == 0.0);
  CHECK(truncate(0.5, 0.0, 1.0) == 0.5);
  CHECK_THROWS_AS(truncate(0.5, 1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(truncate(0.5, 2.0, 1.0), ArgumentError);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double u = d(rng), w = d(rng);
    const double s = truncate(u, -1.0, 1.5);
    CHECK(truncate(s, -1.0, 1.5) == s);
    if (u <= w) CHECK(truncate(u, -1.0, 1.5) <= truncate(w, -1.0, 1.5));
  }
}

TEST_CASE("compose_flux") {
  const FluxPair flux = registry_flux("burgers-like");
  const SampledFunction same =
      compose_flux(flux.f(), MonotoneBijection::identity(0.0, 1.0));
  REQUIRE(same.intervals() == flux.intervals());
  for (std::size_t k = 0; k <= same.intervals(); ++k) {
    CHECK(same.value(k) == flux.f().value(k));
  }
  CHECK_THROWS_AS(
      compose_flux(flux.f(), MonotoneBijection::translation(0.0, 1.0, 0.5)),
      CompositionError);
  const SampledFunction shifted = compose_flux(
      clip_flux(flux.f()), MonotoneBijection::translation(0.0, 1.0, 0.5));
  CHECK(shifted(0.0) == doctest::Approx(0.25));
  CHECK(shifted(0.75) == 0.0);
}

TEST_CASE("clip_flux") {
  const FluxPair flux = registry_flux("burgers-like");
  const ClippedFunction c = clip_flux(flux.f());
  CHECK(c(1.5) == 0.0);
  CHECK(c(-0.5) == 0.0);
  CHECK(c(0.5) == 0.25);
  CHECK(c(1.0) == 0.0);
  const SampledFunction wide = c.resample(-1.0, 2.0, 3000);
  const double lip = flux.f().lipschitz();
  for (std::size_t k = 0; k < wide.intervals(); ++k) {
    CHECK(std::abs(wide.value(k + 1) - wide.value(k)) <=
          lip * wide.spacing() + kTolEndpoint);
  }
}

TEST_CASE("find_local_maxima") {
  const FluxPair demo = registry_flux("demo-cross");
  const auto fm = find_local_maxima(demo.f());
  REQUIRE(fm.size() == 1);
  CHECK(fm[0].location == 0.5);
  CHECK(fm[0].value == 0.25);
  const auto gm = find_local_maxima(demo.g());
  REQUIRE(gm.size() == 1);
  CHECK(gm[0].location == doctest::Approx(1.0 / 3.0).epsilon(1.0 / 4096));
  CHECK(gm[0].value == doctest::Approx(8.0 / 27.0).epsilon(1e-6));

  const auto zero = SampledFunction::sample(0, 1, 64, [](double) { return 0.0; });
  CHECK(find_local_maxima(zero).empty());
  CHECK_THROWS_AS(find_local_maxima(SampledFunction::sample(0, 1, 4, parabola)),
                  ArgumentError);

  // Strictly concave samples give exactly one maximum at any resolution.
  for (std::size_t m : {8, 9, 64, 1001}) {
    CHECK(find_local_maxima(SampledFunction::sample(0, 1, m, parabola)).size() == 1);
  }
}

TEST_CASE("detect_constant_intervals") {
  CHECK(detect_constant_intervals(registry_flux("burgers-like").f()).empty());
  const auto plateau = detect_constant_intervals(registry_flux("plateau").f());
  REQUIRE(plateau.intervals.size() == 1);
  CHECK(plateau.intervals[0].left == 0.25);
  CHECK(plateau.intervals[0].right == 0.75);
  const auto flat = SampledFunction::sample(0, 1, 64, [](double) { return 0.0; });
  const auto whole = detect_constant_intervals(flat, Branch::kG);
  REQUIRE(whole.intervals.size() == 1);
  CHECK(whole.branch == Branch::kG);
  CHECK(whole.intervals[0].left == 0.0);
  CHECK(whole.intervals[0].right == 1.0);
}

TEST_CASE("monotone bijection round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> step(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x{0.0}, y{-1.0};
    for (int k = 0; k < 50; ++k) {
      x.push_back(x.back() + step(rng));
      y.push_back(y.back() + step(rng));
    }
    const MonotoneBijection m(x, y);
    CHECK(m(x.front()) == y.front());
    CHECK(m(x.back()) == y.back());
    const double width = x.back() - x.front();
    for (int i = 0; i < 1000; ++i) {
      const double u = x.front() + width * (i + 0.5) / 1000.0;
      CHECK(std::abs(m.inverse(m(u)) - u) <= 1e-12 * width);
    }
  }
  CHECK_THROWS_AS(MonotoneBijection({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}),
                  ArgumentError);
  const auto bad = MonotoneBijection::unchecked({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0});
  REQUIRE(bad.first_violation());
  CHECK(*bad.first_violation() == 1);
}

TEST_CASE("registry") {
  for (const char* name : {"burgers-like", "demo-cross", "demo-swapped", "plateau"}) {
    CHECK(is_registry_flux(name));
    const FluxPair p = registry_flux(name, 256);
    CHECK(p.a() == 0.0);
    CHECK(p.b() == 1.0);
  }
  const FluxPair poly = registry_flux("poly:0,1,-1|0,2,-4,2", 128);
  CHECK(poly.f()(0.25) == doctest::Approx(parabola(0.25)));
  CHECK(poly.g()(0.25) == doctest::Approx(cubic(0.25)));
  CHECK_FALSE(is_registry_flux("nonsense"));
  CHECK_THROWS_AS(registry_flux("nonsense"), ConfigError);
  const FluxPair swapped = registry_flux("demo-cross").swapped();
  CHECK(swapped.f()(0.3) == registry_flux("demo-swapped").f()(0.3));
}
