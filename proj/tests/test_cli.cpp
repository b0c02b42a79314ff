#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spectralfield/cli.hpp"
#include "spectralfield/errors.hpp"

using namespace spectralfield;
using nlohmann::json;

namespace {

int runCli(const std::vector<std::string>& args, std::string* stdout_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (stdout_text) *stdout_text = out.str();
  return code;
}

json runJson(const std::vector<std::string>& args, int expected_code) {
  std::string text;
  const int code = runCli(args, &text);
  REQUIRE(code == expected_code);
  return json::parse(text);
}

}  // namespace

TEST_CASE("parseFieldSpec accepts entries and potential forms") {
  const json entries_doc = {
      {"n", 2},
      {"m", 2},
      {"entries",
       {{json::array({{{"c", 1.0}, {"e", {1, 0}}}}), json::array({{{"c", -1.0}, {"e", {0, 1}}}})},
        {json::array({{{"c", -1.0}, {"e", {0, 1}}}}),
         json::array({{{"c", -1.0}, {"e", {1, 0}}}})}}}};
  const PolyMatrixField f = cli::parseFieldSpec(entries_doc);
  CHECK((f.eval(Eigen::Vector2d(1, 0)) - cubicField().eval(Eigen::Vector2d(1, 0))).norm() <
        1e-15);

  const json pot_doc = {{"n", 2},
                        {"potential",
                         {{{"c", 1.0 / 6.0}, {"e", {3, 0}}}, {{"c", -0.5}, {"e", {1, 2}}}}}};
  const PolyMatrixField g = cli::parseFieldSpec(pot_doc);
  CHECK((g.eval(Eigen::Vector2d(0.3, 0.7)) - cubicField().eval(Eigen::Vector2d(0.3, 0.7)))
            .norm() < 1e-15);
}

TEST_CASE("parseFieldSpec rejects asymmetric grids") {
  const json bad = {
      {"n", 2},
      {"m", 2},
      {"entries",
       {{json::array({{{"c", 1.0}, {"e", {1, 0}}}}), json::array({{{"c", 2.0}, {"e", {0, 1}}}})},
        {json::array({{{"c", 3.0}, {"e", {0, 1}}}}),
         json::array({{{"c", -1.0}, {"e", {1, 0}}}})}}}};
  CHECK_THROWS_AS(cli::parseFieldSpec(bad), DimensionError);
}

TEST_CASE("dumpReport is deterministic with sorted keys") {
  json a;
  a["zeta"] = 1.5;
  a["alpha"] = json::array({1.0, 2.25, -0.125});
  a["nested"] = {{"b", 2}, {"a", 1}};
  const std::string s1 = cli::dumpReport(a);
  CHECK(s1 == cli::dumpReport(a));
  CHECK(s1.find("\"alpha\"") < s1.find("\"nested\""));
  CHECK(s1.find("\"nested\"") < s1.find("\"zeta\""));
  CHECK(s1.find("\"a\":1") < s1.find("\"b\":2"));

  json inf;
  inf["x"] = std::numeric_limits<double>::infinity();
  CHECK(cli::dumpReport(inf) == "{\"x\":null}");
}

TEST_CASE("eval subcommand") {
  const json rep = runJson({"eval", "--builtin", "cubic", "--point", "1,0"}, cli::kExitOk);
  CHECK(rep["decomposition"]["eigenvalues"][0].get<double>() == doctest::Approx(-1.0));
  CHECK(rep["decomposition"]["eigenvalues"][1].get<double>() == doctest::Approx(1.0));
  CHECK(rep["decomposition"]["groups"][0]["projection"][1][1].get<double>() ==
        doctest::Approx(1.0));

  const json origin =
      runJson({"eval", "--builtin", "quartic", "--point", "0,0"}, cli::kExitOk);
  CHECK(origin["decomposition"]["group_count"].get<int>() == 1);
  CHECK(origin["decomposition"]["groups"][0]["multiplicity"].get<int>() == 2);
  CHECK(origin["decomposition"]["groups"][0]["projection"][0][0].get<double>() ==
        doctest::Approx(1.0));
}

TEST_CASE("eval reports parse errors on malformed JSON") {
  const std::string path = "malformed_spec_test.json";
  {
    std::ofstream f(path);
    f << "{\"n\": 2, \"m\": ";
  }
  std::ostringstream out, err;
  const int code = cli::run({"eval", "--spec", path, "--point", "0,0"}, out, err);
  CHECK(code == cli::kExitInputError);
  CHECK(err.str().find("parse") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("derive subcommand with validation") {
  const json rep = runJson({"derive", "--builtin", "quartic", "--point", "1,0", "--j", "2",
                            "--grad", "--hess", "--validate"},
                           cli::kExitOk);
  CHECK(rep["grad"][0].get<double>() == doctest::Approx(2.0));
  CHECK(rep["grad"][1].get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep["hess"][0][0].get<double>() == doctest::Approx(2.0));
  CHECK(rep["grad_discrepancy"].get<double>() < 1e-6);
  CHECK(rep["hess_discrepancy"].get<double>() < 1e-4);
  CHECK(rep["validated"].get<bool>());
}

TEST_CASE("derive exits 2 at a crossing") {
  std::string text;
  const int code =
      runCli({"derive", "--builtin", "cubic", "--point", "0,0", "--j", "1", "--grad"}, &text);
  CHECK(code == cli::kExitHypothesisViolation);
  const json rep = json::parse(text);
  CHECK(rep.contains("crossing"));
  CHECK(rep["crossing"]["witness"][0].get<double>() == 0.0);
}

TEST_CASE("derive dproj") {
  const json rep = runJson({"derive", "--builtin", "cubic", "--point", "1,0", "--j", "2",
                            "--dproj", "--e", "0,1"},
                           cli::kExitOk);
  CHECK(rep.contains("dproj_e"));
}

TEST_CASE("expand subcommand") {
  const json rep = runJson(
      {"expand", "--builtin", "quartic", "--point", "1,0", "--j", "2", "--y", "0.1,0.1"},
      cli::kExitOk);
  CHECK(rep["predicted"].get<double>() == doctest::Approx(1.22).epsilon(1e-12));
  CHECK(rep["actual"].get<double>() == doctest::Approx(1.22).epsilon(1e-12));
  CHECK(rep["residual"].get<double>() < 1e-12);

  const json fit = runJson({"expand", "--builtin", "cubic", "--point", "1,0", "--j", "2",
                            "--e", "0,1", "--steps", "0.1,0.03,0.01,0.003"},
                           cli::kExitOk);
  CHECK(fit["fit"]["fitted_order"].get<double>() == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("scan subcommand exit codes") {
  std::string text;
  CHECK(runCli({"scan", "--builtin", "cubic", "--box", "-1,1,-1,1", "--grid", "21,21", "--j",
                "1"},
               &text) == cli::kExitHypothesisViolation);
  CHECK(json::parse(text)["verdict"] == "refuted");

  CHECK(runCli({"scan", "--builtin", "quartic", "--box", "0.5,1.5,-0.5,0.5", "--grid",
                "11,11", "--j", "2"},
               &text) == cli::kExitOk);

  CHECK(runCli({"scan", "--builtin", "quartic", "--box", "1,1,0,0", "--grid", "1,1", "--j",
                "1"},
               &text) == cli::kExitInconclusive);
}

TEST_CASE("kyfan subcommand") {
  const json rep =
      runJson({"kyfan", "--matrix", "3,0,0,0,1,0,0,0,2", "--k", "2"}, cli::kExitOk);
  CHECK(rep["value"].get<double>() == doctest::Approx(3.0));
  REQUIRE(rep.contains("minimizer"));
  CHECK(rep["minimizer"][1][1].get<double>() == doctest::Approx(1.0));
  CHECK(rep["minimizer"][0][0].get<double>() == doctest::Approx(0.0));

  const json field_rep =
      runJson({"kyfan", "--builtin", "cubic", "--point", "1,0", "--k", "1"}, cli::kExitOk);
  CHECK(field_rep["value"].get<double>() == doctest::Approx(-1.0));
  CHECK(field_rep["minimizer"][1][1].get<double>() == doctest::Approx(1.0));

  const json zero = runJson({"kyfan", "--matrix", "1,0,0,2", "--k", "0"}, cli::kExitOk);
  CHECK(zero["value"].get<double>() == 0.0);

  const json bf = runJson({"kyfan", "--matrix", "3,0,0,0,1,0,0,0,2", "--k", "2", "--samples",
                           "2000", "--seed", "0"},
                          cli::kExitOk);
  CHECK(bf["bruteforce"].get<double>() >= 3.0 - 1e-12);
}

TEST_CASE("report serialization is byte-identical across runs") {
  std::string a, b;
  runCli({"kyfan", "--matrix", "3,0,0,0,1,0,0,0,2", "--k", "2", "--samples", "500", "--seed",
          "7"},
         &a);
  runCli({"kyfan", "--matrix", "3,0,0,0,1,0,0,0,2", "--k", "2", "--samples", "500", "--seed",
          "7"},
         &b);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
}

TEST_CASE("input errors exit 1") {
  std::ostringstream out, err;
  CHECK(cli::run({"derive", "--builtin", "nosuch", "--point", "0,0", "--j", "1", "--grad"},
                 out, err) == cli::kExitInputError);
  CHECK(cli::run({"eval", "--builtin", "cubic", "--point", "1,0,0"}, out, err) ==
        cli::kExitInputError);
  CHECK(cli::run({"eval", "--builtin", "cubic"}, out, err) == cli::kExitInputError);
}
