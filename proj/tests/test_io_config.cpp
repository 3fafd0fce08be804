#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "nlhelm/commands.hpp"
#include "nlhelm/io.hpp"

using namespace nlhelm;
namespace fs = std::filesystem;

namespace {

Field random_field_raw(RadialGridPtr g, AngularBasisPtr b, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  MatXcd m(g->count(), b->modes());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = Complex(gauss(rng), gauss(rng));
  return Field::from_modes(g, b, std::move(m));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("field container round trip is bit exact") {
  auto g = make_grid(1.0, 25.0, 128, Grading::kGeometric);
  auto b = make_angular_basis(3, 3);
  Field f = random_field_raw(g, b, 5);
  const std::string path = "/tmp/nlhelm_test_field.nlhf";
  save_field(f, 1.25, path);
  const LoadedField lf = load_field(path);
  CHECK(lf.lambda == 1.25);
  CHECK(lf.field.n() == 3);
  CHECK(lf.field.grid().grading == Grading::kGeometric);
  REQUIRE(lf.field.modes().rows() == f.modes().rows());
  // bit-exact: every coefficient identical
  CHECK((lf.field.modes().array() == f.modes().array()).all());
  CHECK((lf.field.grid().nodes == g->nodes).all());
  CHECK(fs::exists(path + ".manifest.txt"));

  // corruption is detected
  {
    std::fstream io(path,
                    std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(200);
    char byte = 0x5a;
    io.write(&byte, 1);
  }
  CHECK_THROWS_AS(load_field(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("fnv1a is stable") {
  const char data[] = "nonlinear helmholtz";
  CHECK(fnv1a(data, sizeof(data) - 1) ==
        fnv1a(data, sizeof(data) - 1));
  CHECK(fnv1a(data, sizeof(data) - 1) != fnv1a(data, sizeof(data) - 2));
}

TEST_CASE("config round trip: parse(emit(parse)) is the identity") {
  const std::string text = R"({
    "problem": {"n": 3, "lambda": 1.0,
                "potential": {"kind": "inv_quadratic", "c": 0.1, "w": 1.0}},
    "incoming_data": {"preset": "random", "seed": 7, "norm": 0.01, "L_data": 2},
    "nonlinearity": {"preset": "custom", "declared_p": 5, "monomials": [
      {"coefficient_re": 1.0, "profile": {"kind": "pow_bracket", "c": 0.5, "q": 2},
       "factors": [{"conjugated": false, "word": ["r"]},
                    {"conjugated": true, "word": ["r"]},
                    {"conjugated": false, "word": []},
                    {"conjugated": true, "word": ["a1", "a2"]},
                    {"conjugated": false, "word": []}]}]},
    "discretization": {"r_min": 1.0, "r_max": 60.0, "radial_count": 1280,
                        "grading": "uniform", "L": 3, "R0": 2.0},
    "solver": {"tol_residual": 1e-4, "k": 2},
    "outputs": {"directory": "/tmp/nlhelm_cfg_out"}
  })";
  const RunConfig cfg = config_from_json_text(text);
  CHECK(cfg.n == 3);
  CHECK(cfg.potential.kind == RadialProfile::Kind::kInvQuad);
  CHECK(cfg.random_data);
  CHECK(cfg.L == 3);
  const NonlinearitySpec spec = nonlinearity_from_config(cfg);
  REQUIRE(spec.monomials.size() == 1);
  CHECK(spec.monomials[0].degree() == 5);
  CHECK(spec.monomials[0].profile.kind == RadialProfile::Kind::kPowBracket);
  CHECK(spec.monomials[0].factors[3].word == std::vector<int>{1, 2});
  const std::string emitted = config_to_json_text(cfg);
  const RunConfig cfg2 = config_from_json_text(emitted);
  CHECK(config_to_json_text(cfg2) == emitted);
}

TEST_CASE("dot-path overrides") {
  const std::string path = "/tmp/nlhelm_test_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"problem": {"n": 3, "lambda": 1.0},
               "incoming_data": {"preset": "random"},
               "nonlinearity": {"p": 5},
               "discretization": {"r_min": 1.0, "r_max": 60.0,
                                   "radial_count": 1280, "L": 2, "R0": 2.0}})";
  }
  const RunConfig cfg =
      load_config(path, {"problem.lambda=2.0", "discretization.L=4"});
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.L == 4);
  CHECK_THROWS_AS(load_config(path, {"no_equals_sign"}), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("config cross-constraints") {
  RunConfig cfg;
  cfg.radial_count = 64;  // lambda * spacing far above 0.3
  cfg.r_max = 200.0;
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);

  RunConfig cfg2;
  cfg2.R0 = 80.0;  // 2 R0 > r_max
  cfg2.r_max = 120.0;
  cfg2.radial_count = 2560;
  CHECK_THROWS_AS(validate_config(cfg2), ConfigError);

  // inadmissible p passes config validation (cmd_check reports it and
  // solve refuses), but malformed monomials are rejected up front
  RunConfig cfg3;
  cfg3.p = 3;
  cfg3.radial_count = 2560;
  CHECK_NOTHROW(validate_config(cfg3));
  RunConfig cfg4;
  cfg4.radial_count = 2560;
  cfg4.use_power_law = false;
  Monomial bad;
  bad.factors = {MonomialFactor{false, {}}};  // degree 1
  cfg4.monomials.push_back(bad);
  CHECK_THROWS_AS(validate_config(cfg4), ConfigError);
}

TEST_CASE("serial runs reproduce outputs bit-exactly") {
  RunConfig cfg;
  cfg.n = 3;
  cfg.lambda = 1.0;
  cfg.random_data = true;
  cfg.seed = 3;
  cfg.f_norm = 0.01;
  cfg.r_min = 1.0;
  cfg.r_max = 60.0;
  cfg.radial_count = 1280;
  cfg.L = 2;
  cfg.R0 = 2.0;
  cfg.solver.tol_residual = 1e-3;
  cfg.serial = true;
  cfg.p = 5;

  std::ostringstream sink;
  cfg.out_dir = "/tmp/nlhelm_det_a";
  REQUIRE(run_command("solve", cfg, "", sink) == kExitOk);
  cfg.out_dir = "/tmp/nlhelm_det_b";
  REQUIRE(run_command("solve", cfg, "", sink) == kExitOk);

  for (const char* name : {"u.nlhf", "w.nlhf", "g.csv"}) {
    const std::string a = std::string("/tmp/nlhelm_det_a/") + name;
    const std::string b = std::string("/tmp/nlhelm_det_b/") + name;
    CHECK(fnv1a_file(a) == fnv1a_file(b));
  }
  // manifests agree after dropping timings and echoed directory
  auto canon = [](const std::string& dir) {
    nlohmann::json j =
        nlohmann::json::parse(slurp(dir + "/manifest_solve.json"));
    j.erase("timings");
    j["config"]["outputs"].erase("directory");
    return j.dump();
  };
  CHECK(canon("/tmp/nlhelm_det_a") == canon("/tmp/nlhelm_det_b"));
  fs::remove_all("/tmp/nlhelm_det_a");
  fs::remove_all("/tmp/nlhelm_det_b");
}

TEST_CASE("farfield command reuses a saved field") {
  RunConfig cfg;
  cfg.random_data = true;
  cfg.seed = 9;
  cfg.f_norm = 0.01;
  cfg.r_max = 60.0;
  cfg.radial_count = 1280;
  cfg.L = 2;
  cfg.solver.tol_residual = 1e-3;
  cfg.out_dir = "/tmp/nlhelm_ff";
  std::ostringstream sink;
  REQUIRE(run_command("solve", cfg, "", sink) == kExitOk);
  CHECK(run_command("farfield", cfg, "/tmp/nlhelm_ff/u.nlhf", sink) ==
        kExitOk);
  CHECK(fs::exists("/tmp/nlhelm_ff/manifest_farfield.json"));
  fs::remove_all("/tmp/nlhelm_ff");
}
