#include <cstdlib>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "discflux/csv_io.hpp"
#include "discflux/errors.hpp"
#include "discflux/run_config.hpp"

using namespace discflux;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("discflux_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.flux = "burgers-like";
  c.transform = "connection:0.75,0.25,classic";
  c.ic = "connection:0.75,0.25,classic";
  c.solver.cells = 128;
  c.solver.t_end = 0.25;
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config JSON and hash") {
  const Json a = Json::parse(R"({"flux":"demo-cross","cells":256,"ic":"riemann:0.2,0.8"})");
  const Json b = Json::parse(R"({"ic":"riemann:0.2,0.8","cells":256,"flux":"demo-cross"})");
  const RunConfig ca = RunConfig::from_json(a), cb = RunConfig::from_json(b);
  CHECK(ca.hash() == cb.hash());
  CHECK(ca.hash().size() == 16);
  CHECK(ca.solver.cells == 256);
  CHECK(ca.transform == "identity");

  RunConfig moved = ca;
  moved.out = "/somewhere/else";
  CHECK(moved.hash() == ca.hash());
  RunConfig changed = ca;
  changed.solver.t_end = 0.4;
  CHECK(changed.hash() != ca.hash());

  CHECK(RunConfig::from_json(ca.to_json(true)).to_json(true) == ca.to_json(true));
  CHECK(ca.effective_solver().epsilon == doctest::Approx(8.0 * 4.0 / 256));

  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"cels":12})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse(R"({"cells":"many"})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(Json::parse("[1,2]")), ConfigError);
}

TEST_CASE("spec resolution") {
  const FluxPair flux = resolve_flux("burgers-like");
  CHECK(resolve_initial_data("constant:0.3", flux, 2.0)(1.0) == 0.3);
  const InitialData r = resolve_initial_data("riemann:0.2,0.9", flux, 2.0);
  CHECK(r(-0.1) == 0.2);
  CHECK(r(0.1) == 0.9);
  const InitialData c = resolve_initial_data("connection:0.75,0.25", flux, 2.0);
  CHECK(c(-1.0) == 0.75);
  CHECK(c(1.0) == 0.25);
  const InitialData bv1 = resolve_initial_data("random-bv:4,6", flux, 2.0);
  const InitialData bv2 = resolve_initial_data("random-bv:4,6", flux, 2.0);
  for (double x : {-1.9, -0.3, 0.7, 1.5}) {
    CHECK(bv1(x) == bv2(x));
    CHECK(bv1(x) >= 0.0);
    CHECK(bv1(x) <= 1.0);
  }

  CHECK(resolve_transform("identity", flux).kind == TransformKind::kIdentity);
  const TransformPair conn = resolve_transform("connection:0.75,0.25,classic", flux);
  REQUIRE(conn.connection);
  CHECK(conn.connection->A == 0.75);
  CHECK(resolve_transform("translation", resolve_flux("demo-swapped")).kind ==
        TransformKind::kTranslation);

  CHECK_THROWS_AS(resolve_flux("no-such-flux"), ConfigError);
  CHECK_THROWS_AS(resolve_initial_data("constant:", flux, 2.0), ConfigError);
  CHECK_THROWS_AS(resolve_initial_data("riemann:0.1", flux, 2.0), ConfigError);
  CHECK_THROWS_AS(resolve_initial_data("wave:1", flux, 2.0), ConfigError);
  CHECK_THROWS_AS(resolve_transform("connection:0.75", flux), ConfigError);
  CHECK_THROWS_AS(resolve_transform("connection:0.75,0.25,odd", flux), ConfigError);
  CHECK_THROWS_AS(resolve_transform("file:/nonexistent/t.csv", flux), ConfigError);
}

TEST_CASE("file-backed specs") {
  const fs::path dir = scratch("files");
  // Flux table written from closed forms, read back and compared.
  std::string csv = "u,f,g\n";
  for (int k = 0; k <= 64; ++k) {
    const double u = k / 64.0;
    csv += std::to_string(u) + "," + std::to_string(u * (1 - u)) + "," +
           std::to_string(2 * u * (1 - u) * (1 - u)) + "\n";
  }
  write_text_file(dir / "flux.csv", csv);
  const FluxPair flux = resolve_flux("file:" + (dir / "flux.csv").string());
  CHECK(flux.f()(0.5) == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(flux.g()(1.0 / 3.0) == doctest::Approx(8.0 / 27.0).epsilon(1e-3));

  write_text_file(dir / "ic.csv", "# profile\nx,u\n-1,0.2\n1,0.8\n");
  const InitialData u0 = resolve_initial_data("file:" + (dir / "ic.csv").string(), flux, 2.0);
  CHECK(u0(-2.0) == 0.2);
  CHECK(u0(0.0) == doctest::Approx(0.5));
  CHECK(u0(2.0) == 0.8);

  const TransformPair t = resolve_transform("connection:0.75,0.25,classic", resolve_flux("burgers-like"));
  write_text_file(dir / "t.csv", transform_to_csv(t));
  const TransformPair back =
      resolve_transform("file:" + (dir / "t.csv").string(), resolve_flux("burgers-like"));
  CHECK(back.alpha(0.3) == doctest::Approx(t.alpha(0.3)).epsilon(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("run round trip") {
  const fs::path out = scratch("runs");
  const RunConfig cfg = small_run(out);
  const RunArtifacts art = execute_run(cfg);
  CHECK(art.dir == out / cfg.hash());
  CHECK(fs::exists(art.dir / "manifest.json"));
  CHECK(fs::exists(art.dir / "transform.csv"));
  CHECK(fs::exists(art.dir / "snapshots" / "snap_000.csv"));
  CHECK(fs::exists(art.dir / "snapshots" / "snap_032.csv"));

  const LoadedRun run = load_run(art.dir);
  CHECK(run.config.hash() == cfg.hash());
  CHECK(run.field.u == art.field.u);
  CHECK(run.field.v == art.field.v);
  CHECK(run.field.u0 == art.field.u0);
  CHECK(run.field.times == art.field.times);

  const VerifyOutcome v = verify_run(art.dir);
  CHECK(v.pass);
  CHECK(v.report["agreement"].get<bool>());
  CHECK(fs::exists(art.dir / "report.json"));

  // Same config, fresh directory: identical bytes.
  const std::string first = read_text_file(art.dir / "snapshots" / "snap_032.csv");
  const std::string manifest = read_text_file(art.dir / "manifest.json");
  fs::remove_all(art.dir);
  execute_run(cfg);
  CHECK(read_text_file(art.dir / "snapshots" / "snap_032.csv") == first);
  CHECK(read_text_file(art.dir / "manifest.json") == manifest);

  fs::remove(art.dir / "snapshots" / "snap_010.csv");
  CHECK_THROWS_AS(load_run(art.dir), ConfigError);
  CHECK_THROWS_AS(load_run(out / "missing"), ConfigError);
  fs::remove_all(out);
}

TEST_CASE("sweep") {
  const fs::path out = scratch("sweep");
  RunConfig cfg;
  cfg.ic = "riemann:0.75,0.25";
  cfg.solver.cells = 256;
  cfg.out = out.string();
  const SweepOutcome s = run_sweep(cfg, 3);
  CHECK(s.pass);
  CHECK(s.report["levels"].size() == 3);
  CHECK(fs::exists(s.dir / "sweep.json"));
  fs::remove_all(out);
}
