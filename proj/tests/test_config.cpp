#include <doctest.h>

#include <json.hpp>

#include "specmeasure/config.hpp"

using namespace specmeasure;
using nlohmann::json;

namespace {

json valid_config() {
  return json::parse(R"json({
    "problem": {
      "mode": "operator",
      "backend": "realline",
      "terms": [
        {"kind": "multiplication", "a": "2/(1+x^2)^2"},
        {"kind": "cauchy_lowrank", "factors": ["exp(-x^2)"]}
      ]
    },
    "f": {"expr": "sqrt(2/pi)/(1+x^2)"},
    "kernel": {"order": 4},
    "epsilon": 0.1,
    "grid": {"min": -3, "max": 3, "n": 7},
    "solver": {"tol": 1e-6, "init_dofs": 64, "max_dofs": 4096},
    "output": {"path": "out.csv", "format": "csv"}
  })json");
}

json valid_pencil_config() {
  return json::parse(R"json({
    "problem": {
      "mode": "pencil",
      "backend": "fourier2d",
      "terms": [{"kind": "derivative", "order": 1, "axis": "y", "coeff": "1+cos(x)/2"}],
      "B_terms": [{"kind": "fourier_symbol", "b": "sqrt(1+y^2)"}]
    },
    "f": {"expr": "exp(sin(x+y))/(2+cos(y))"},
    "kernel": {"order": 2},
    "epsilon": 0.01,
    "grid": {"min": 0, "max": 0, "n": 1},
    "solver": {"init_dofs": 16, "max_dofs": 128}
  })json");
}

}  // namespace

TEST_CASE("valid configs parse and build") {
  const auto cfg = config::RunConfig::from_json(valid_config());
  CHECK(cfg.backend == Basis::realline);
  CHECK(cfg.kernel.order == 4);
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.grid.n == 7);
  const auto problem = config::build_problem(cfg);
  CHECK(problem->basis() == Basis::realline);
  CHECK(problem->normalization_constant() == doctest::Approx(1.0).epsilon(1e-10));

  const auto pencil = config::RunConfig::from_json(valid_pencil_config());
  CHECK(pencil.backend == Basis::fourier2d);
  const auto pencil_problem = config::build_problem(pencil);
  CHECK(pencil_problem->basis() == Basis::fourier2d);
}

TEST_CASE("schema rejection is total") {
  // every single-field corruption of a valid config fails with a path
  const json base = valid_config();

  SUBCASE("unknown keys anywhere") {
    json bad = base;
    bad["extra"] = 1;
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("extra"),
                         ConfigError);
    bad = base;
    bad["problem"]["surprise"] = true;
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("problem.surprise"),
                         ConfigError);
    bad = base;
    bad["problem"]["terms"][0]["order"] = 2;  // not valid for multiplication
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad),
                         doctest::Contains("problem.terms[0].order"), ConfigError);
    bad = base;
    bad["grid"]["step"] = 0.5;
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("grid.step"),
                         ConfigError);
  }

  SUBCASE("type errors carry the field path") {
    json bad = base;
    bad["epsilon"] = "0.1";
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("epsilon"),
                         ConfigError);
    bad = base;
    bad["grid"]["n"] = 2.5;
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("grid.n"),
                         ConfigError);
    bad = base;
    bad["problem"]["terms"][1]["factors"] = "exp(-x^2)";
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad),
                         doctest::Contains("problem.terms[1].factors"), ConfigError);
  }

  SUBCASE("value constraints") {
    json bad = base;
    bad["epsilon"] = -0.5;
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = base;
    bad["kernel"]["order"] = 0;
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = base;
    bad["grid"]["n"] = 0;
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = base;
    bad["solver"]["init_dofs"] = 48;  // not a power of two
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = base;
    bad["solver"]["tol"] = 2.0;
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
  }

  SUBCASE("missing required keys") {
    for (const char* key : {"problem", "f", "kernel", "epsilon", "grid"}) {
      json bad = base;
      bad.erase(key);
      CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    }
  }

  SUBCASE("cross-field constraints") {
    json bad = base;
    bad["f"] = {{"expr", "x"}, {"coeffs", {1.0}}};  // both forms at once
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = base;
    bad["problem"]["B_terms"] = json::array({{{"kind", "fourier_symbol"}, {"b", "1"}}});
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);  // operator mode
    bad = base;
    bad["f"]["expr"] = "x+y";  // y needs fourier2d
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
    bad = valid_pencil_config();
    bad["problem"]["backend"] = "realline";  // pencils need Fourier
    CHECK_THROWS_AS(config::RunConfig::from_json(bad), ConfigError);
  }

  SUBCASE("expression errors are config errors") {
    json bad = base;
    bad["f"]["expr"] = "sqrt(2/pi)/(1+x^2";
    CHECK_THROWS_WITH_AS(config::RunConfig::from_json(bad), doctest::Contains("f.expr"),
                         ConfigError);
  }
}

TEST_CASE("csv formatting round-trips at 17 significant digits") {
  MeasureResult r;
  r.points = {-1.0, 1.0 / 3.0, 2.718281828459045};
  r.values = {0.13803728918735422, -4.2e-17, 1e300};
  r.err_est = {1e-7, 0.0, 0.25};
  r.dofs = {128, 64, 65536};
  const std::string text = config::csv_to_string(r);
  CHECK(text.substr(0, 25) == "x,mu,err_est,dofs_max\n-1,");
  CHECK(text.find("\r") == std::string::npos);

  // parse back and compare bit-exactly
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    REQUIRE(std::getline(in, line));
    double x, mu, err;
    int dofs;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%d", &x, &mu, &err, &dofs) == 4);
    CHECK(x == r.points[i]);
    CHECK(mu == r.values[i]);
    CHECK(err == r.err_est[i]);
    CHECK(dofs == r.dofs[i]);
  }
}

TEST_CASE("convergence study requires at least three epsilons") {
  const auto cfg = config::RunConfig::from_json(json::parse(R"json({
    "problem": {"mode": "operator", "backend": "realline",
                "terms": [{"kind": "derivative", "order": 2}]},
    "f": {"coeffs": [0.70710678118654752, 0.70710678118654752], "first_index": -1},
    "kernel": {"order": 2},
    "epsilon": 0.1,
    "grid": {"min": 1, "max": 1, "n": 1}
  })json"));
  const Engine engine;
  CHECK_THROWS_AS(config::convergence_study(cfg, {0.1, 0.01}, 1.0, "laplacian", engine),
                  ConfigError);
  CHECK_THROWS_AS(config::convergence_study(cfg, {0.1, 0.05, 0.01}, 1.0, "nonsense", engine),
                  ConfigError);
}

TEST_CASE("convergence study slope for m = 2") {
  auto doc = json::parse(R"json({
    "problem": {"mode": "operator", "backend": "realline",
                "terms": [{"kind": "derivative", "order": 2}]},
    "f": {"coeffs": [0.70710678118654752, 0.70710678118654752], "first_index": -1},
    "kernel": {"order": 2},
    "epsilon": 0.1,
    "grid": {"min": 1, "max": 1, "n": 1},
    "solver": {"tol": 1e-8, "init_dofs": 256, "max_dofs": 524288}
  })json");
  const auto cfg = config::RunConfig::from_json(doc);
  const Engine engine;
  const auto sweep = config::convergence_study(
      cfg, {1e-1, std::pow(10.0, -1.25), std::pow(10.0, -1.5)}, 1.0, "laplacian", engine);
  CHECK(sweep.slope > 1.5);
  CHECK(sweep.slope < 2.5);
  for (const auto& row : sweep.rows) CHECK(row.reference == doctest::Approx(0.13533528323661271));
}
