#include "doctest.h"

#include <cstdlib>
#include <string>

#include "json.hpp"
#include "support.hpp"

using nlohmann::json;
namespace ts = testsupport;

#ifndef STENCILCERT_CLI_PATH
#define STENCILCERT_CLI_PATH "stencilcert"
#endif

namespace {

const std::string kCli = STENCILCERT_CLI_PATH;

struct Fixture {
  std::string dir;

  explicit Fixture(const std::string& name) {
    dir = "/tmp/sc_cli_" + name;
    std::string cmd = "rm -rf " + dir + " && mkdir -p " + dir;
    REQUIRE(std::system(cmd.c_str()) == 0);
  }

  std::string path(const std::string& leaf) const { return dir + "/" + leaf; }

  std::string write(const std::string& leaf, const std::string& content) const {
    ts::write_file(path(leaf), content);
    return path(leaf);
  }
};

const char* kMidpointConfig = R"({
  "kernel": {"family": "phs", "nu": 3.0, "s": 2},
  "operator": [{"alpha": [0], "coeff": 1.0}],
  "center": [0.5]
})";

const char* kMidpointPoints = "0\n1\n";

json run_json(const std::string& args, int expect_code = 0) {
  auto out = ts::run_command(kCli + " " + args);
  REQUIRE(out.code == expect_code);
  return json::parse(out.text);
}

}  // namespace

TEST_CASE("cli weights on the midpoint stencil") {
  Fixture fx("weights_mid");
  std::string cfg = fx.write("run.json", kMidpointConfig);
  std::string pts = fx.write("pts.csv", kMidpointPoints);

  json rep = run_json("weights --config " + cfg + " --points " + pts +
                      " --out " + fx.path("w"));
  CHECK(rep["schema"] == "stencilcert/1");
  CHECK(rep["command"] == "weights");
  REQUIRE(rep["weights"].size() == 2);
  CHECK(rep["weights"][0].get<double>() == doctest::Approx(0.5));
  CHECK(rep["weights"][1].get<double>() == doctest::Approx(0.5));
  CHECK(rep["diagnostics"]["vandermonde_rank"] == 2);
  CHECK(rep["diagnostics"]["duplicate_nodes"] == false);

  // weights land in a csv next to the report
  std::string csv = ts::read_file(fx.path("w.csv"));
  CHECK(csv == "0.5\n0.5\n");
  CHECK(ts::read_file(fx.path("w.json")).size() > 0);
}

TEST_CASE("cli weights on the collinear pair") {
  Fixture fx("weights_line");
  std::string cfg = fx.write("run.json", R"({
    "kernel": {"family": "phs", "nu": 3.0, "s": 2},
    "operator": [{"alpha": [1, 0], "coeff": 1.0}],
    "center": [1.0, 0.0]
  })");
  std::string pts = fx.write("pts.csv", "0,0\n2,0\n");

  json rep = run_json("weights --config " + cfg + " --points " + pts +
                      " --out " + fx.path("w"));
  CHECK(rep["weights"][0].get<double>() == doctest::Approx(-0.5));
  CHECK(rep["weights"][1].get<double>() == doctest::Approx(0.5));
  std::string csv = ts::read_file(fx.path("w.csv"));
  size_t nl = csv.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(std::stod(csv.substr(0, nl)) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(std::stod(csv.substr(nl + 1)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cli reports the violated moment on inconsistent input") {
  Fixture fx("weights_bad");
  std::string cfg = fx.write("run.json", R"({
    "kernel": {"family": "phs", "nu": 3.0, "s": 2},
    "operator": [{"alpha": [0, 1], "coeff": 1.0}],
    "center": [1.0, 0.0]
  })");
  std::string pts = fx.write("pts.csv", "0,0\n2,0\n");

  auto out = ts::run_command(kCli + " weights --config " + cfg + " --points " +
                             pts);
  CHECK(out.code == 2);
  CHECK(out.text.find("violated moment (0,1)") != std::string::npos);
}

TEST_CASE("cli certify on the midpoint stencil") {
  Fixture fx("certify_mid");
  std::string cfg = fx.write("run.json", kMidpointConfig);
  std::string pts = fx.write("pts.csv", kMidpointPoints);

  json rep = run_json("certify --config " + cfg + " --points " + pts);
  CHECK(rep["command"] == "certify");
  CHECK(rep["p"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep["rho"].get<double>() ==
        doctest::Approx(0.35355339059327379).epsilon(1e-9));
  CHECK(rep["rhs"].get<double>() ==
        doctest::Approx(0.81649658092772603).epsilon(1e-9));
  CHECK(rep["certified"] == true);
  CHECK(rep["power"]["q_wstar"].get<double>() == doctest::Approx(0.25));
  CHECK(rep["power"]["shortcut"].get<double>() == doctest::Approx(0.25));
  CHECK(rep["power"]["shortcut_literal"].get<double>() ==
        doctest::Approx(-0.125));
  CHECK(rep["bound"]["c_dr"].get<double>() == doctest::Approx(8.0 / 9.0));
  CHECK(rep["bound"]["phi_seminorm"]["value"].get<double>() ==
        doctest::Approx(6.0));
  CHECK(rep["bound"]["phi_seminorm"]["mode"] == "exact");
  CHECK(rep["bound"]["q"] == 2);
  CHECK(rep["bound"]["mu"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("cli certify when the center is a node") {
  Fixture fx("certify_node");
  std::string cfg = fx.write("run.json", kMidpointConfig);
  std::string pts = fx.write("pts.csv", "0\n0.5\n1\n");

  json rep = run_json("certify --config " + cfg + " --points " + pts);
  CHECK(rep["p"].get<double>() <= 1e-7);
  CHECK(rep["rho"].get<double>() == 0.0);
  CHECK(rep["rhs"].get<double>() == 0.0);
}

TEST_CASE("cli certify picks the wendland defaults") {
  Fixture fx("certify_wend");
  std::string cfg = fx.write("run.json", R"({
    "kernel": {"family": "wendland", "d": 1, "n": 1, "s": 0},
    "operator": [{"alpha": [0], "coeff": 1.0}],
    "center": [0.1]
  })");
  std::string pts = fx.write("pts.csv", "-0.3\n0.05\n0.4\n");

  json rep = run_json("certify --config " + cfg + " --points " + pts);
  // growth order max(s, floor(r/2)+1) = n+1, exponent (r+gamma)/2 = n+1/2
  CHECK(rep["bound"]["q"] == 2);
  CHECK(rep["bound"]["mu"].get<double>() == doctest::Approx(1.5));
  CHECK(rep["bound"]["phi_seminorm"]["mode"] == "exact");
}

TEST_CASE("cli growth reports value and certificates") {
  Fixture fx("growth_ok");
  std::string cfg = fx.write("run.json", R"({
    "operator": [{"alpha": [1], "coeff": 1.0}],
    "center": [0.0],
    "q": 2,
    "mu": 2.0
  })");
  std::string pts = fx.write("pts.csv", "-0.25\n0.25\n");

  json rep = run_json("growth --config " + cfg + " --points " + pts +
                      " --out " + fx.path("g"));
  CHECK(rep["command"] == "growth");
  CHECK(rep["status"] == "finite");
  CHECK(rep["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(rep["primal_status"] == "finite");
  CHECK(rep["primal_value"].get<double>() ==
        doctest::Approx(0.25).epsilon(1e-10));
  CHECK(!ts::read_file(fx.path("g.dual.csv")).empty());
  CHECK(!ts::read_file(fx.path("g.primal.csv")).empty());
}

TEST_CASE("cli growth reports infinity as a string") {
  Fixture fx("growth_inf");
  std::string cfg = fx.write("run.json", R"({
    "operator": [{"alpha": [0, 1], "coeff": 1.0}],
    "center": [1.0, 0.0],
    "q": 2,
    "mu": 1.5
  })");
  std::string pts = fx.write("pts.csv", "0,0\n2,0\n");

  json rep = run_json("growth --config " + cfg + " --points " + pts);
  CHECK(rep["value"] == "inf");
  CHECK(rep["status"] == "infeasible_dual");
  CHECK(rep["primal_value"] == "inf");
  CHECK(rep["primal_status"] == "unbounded_primal");
}

TEST_CASE("cli converge recovers the predicted half order") {
  Fixture fx("converge_phs");
  std::string cfg = fx.write("run.json", R"({
    "kernel": {"family": "phs", "nu": 3.0, "s": 2},
    "operator": [{"alpha": [1], "coeff": 1.0}],
    "center": [0.0],
    "function": "sinusoid"
  })");
  std::string pts = fx.write("pts.csv", "-1\n1\n");

  json rep = run_json("converge --config " + cfg + " --points " + pts +
                      " --levels 1,0.5,0.25,0.125,0.0625,0.03125");
  CHECK(rep["command"] == "converge");
  CHECK(rep["status"] == "ok");
  REQUIRE(rep["rows"].size() == 6);
  // P^2 = 2h exactly for the central difference, so the P slope is 1/2
  CHECK(rep["series"]["p"]["slope"].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep["predicted_slope"].get<double>() == doctest::Approx(0.5));
  // the sinusoid is generic: the observed error keeps the predicted order
  CHECK(rep["below_predicted"] == false);

  // identical invocation, identical bytes
  auto once = ts::run_command(kCli + " converge --config " + cfg +
                              " --points " + pts +
                              " --levels 1,0.5,0.25,0.125,0.0625,0.03125");
  auto twice = ts::run_command(kCli + " converge --config " + cfg +
                               " --points " + pts +
                               " --levels 1,0.5,0.25,0.125,0.0625,0.03125");
  CHECK(once.code == 0);
  CHECK(once.text == twice.text);
}

TEST_CASE("cli converge flags a degenerate run") {
  Fixture fx("converge_degen");
  std::string cfg = fx.write("run.json", kMidpointConfig);
  std::string pts = fx.write("pts.csv", "0\n0.5\n1\n");

  json rep = run_json("converge --config " + cfg + " --points " + pts +
                      " --levels 1,0.5,0.25,0.125");
  CHECK(rep["status"] == "degenerate");
  CHECK(rep["series"]["error"]["slope"].is_null());
}

TEST_CASE("cli rejects malformed configuration") {
  Fixture fx("bad_config");
  std::string pts = fx.write("pts.csv", kMidpointPoints);

  // unknown top-level field
  std::string cfg1 = fx.write("unknown.json", R"({
    "kernel": {"family": "phs", "nu": 3.0},
    "operator": [{"alpha": [0], "coeff": 1.0}],
    "center": [0.5],
    "kernell": {}
  })");
  auto out1 = ts::run_command(kCli + " weights --config " + cfg1 +
                              " --points " + pts);
  CHECK(out1.code == 1);
  CHECK(out1.text.find("kernell") != std::string::npos);

  // unknown kernel field
  std::string cfg2 = fx.write("badkernel.json", R"({
    "kernel": {"family": "phs", "nu": 3.0, "shape": 2.0},
    "operator": [{"alpha": [0], "coeff": 1.0}],
    "center": [0.5]
  })");
  CHECK(ts::run_command(kCli + " weights --config " + cfg2 + " --points " +
                        pts).code == 1);

  // broken json
  std::string cfg3 = fx.write("broken.json", "{\"kernel\": ");
  CHECK(ts::run_command(kCli + " weights --config " + cfg3 + " --points " +
                        pts).code == 1);

  // missing points file
  std::string cfg4 = fx.write("ok.json", kMidpointConfig);
  CHECK(ts::run_command(kCli + " weights --config " + cfg4 + " --points " +
                        fx.path("nope.csv")).code == 1);

  // malformed points
  std::string badpts = fx.write("bad.csv", "0,0\n1\n");
  std::string cfg5 = fx.write("ok2.json", R"({
    "kernel": {"family": "phs", "nu": 3.0},
    "operator": [{"alpha": [1, 0], "coeff": 1.0}],
    "center": [0.5, 0.5]
  })");
  CHECK(ts::run_command(kCli + " weights --config " + cfg5 + " --points " +
                        badpts).code == 1);

  // missing required config entirely
  CHECK(ts::run_command(kCli + " weights").code == 1);
}

TEST_CASE("cli duplicate nodes exit with the singular code") {
  Fixture fx("dup");
  std::string cfg = fx.write("run.json", kMidpointConfig);
  std::string pts = fx.write("pts.csv", "0\n0\n1\n");
  auto out = ts::run_command(kCli + " weights --config " + cfg + " --points " +
                             pts);
  CHECK(out.code == 3);
}

TEST_CASE("cli sampled reports are reproducible") {
  Fixture fx("tps_repro");
  std::string cfg = fx.write("run.json", R"({
    "kernel": {"family": "tps", "n": 2, "s": 3},
    "operator": [{"alpha": [1, 0], "coeff": 1.0}],
    "center": [0.1, 0.2],
    "seminorm_samples": 512
  })");
  std::string pts = fx.write("pts.csv",
                             "0,0\n1,0\n0,1\n1,1\n-0.5,0.3\n0.4,-0.6\n"
                             "-0.3,-0.4\n0.8,0.5\n");

  auto a = ts::run_command(kCli + " certify --config " + cfg + " --points " +
                           pts + " --seed 7");
  auto b = ts::run_command(kCli + " certify --config " + cfg + " --points " +
                           pts + " --seed 7");
  REQUIRE(a.code == 0);
  CHECK(a.text == b.text);

  json rep = json::parse(a.text);
  CHECK(rep["bound"]["phi_seminorm"]["mode"] == "sampled");
  CHECK(rep["bound"]["phi_seminorm"]["seed"] == 7);
  CHECK(rep["certified"] == false);  // sampled seminorms never certify
}
