#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noether/cli.hpp"
#include "noether/errors.hpp"
#include "noether/json_io.hpp"

using namespace noether;
using noether::cli::RunConfig;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "noether");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  RunConfig config;
  std::ostringstream out, err;
  Result r;
  if (auto code = cli::parse_command_line(static_cast<int>(argv.size()), argv.data(), config, out,
                                          err)) {
    r.code = *code;
  } else {
    r.code = cli::run(config, out, err);
  }
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("noether_test_" + name);
}

}  // namespace

TEST_CASE("catalog --list") {
  const Result r = invoke({"catalog", "--list"});
  CHECK(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["results"]["systems"].size() == 6);
}

TEST_CASE("derive at x*") {
  const Result r = invoke({"derive", "--system", "kepler", "--integral", "A1", "--point", "0,1,0,0,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"tau\": -1.3333333333333333,") != std::string::npos);
  const Json doc = Json::parse(r.out);
  const std::vector<std::string> keys = {"schema_version", "command", "system", "params", "results",
                                         "diagnostics"};
  std::vector<std::string> got;
  for (auto it = doc.begin(); it != doc.end(); ++it) got.push_back(it.key());
  CHECK(got == keys);
  CHECK(doc["results"]["Z_of_F_warning"] == false);
}

TEST_CASE("derive warns for a non-integral") {
  const Result r = invoke({"derive", "--system", "kepler", "--integral", "q2", "--point", "0,1,0,0,1"});
  CHECK(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["results"]["Z_of_F_warning"] == true);
  CHECK(doc["diagnostics"]["warnings"].size() == 1);
}

TEST_CASE("verify") {
  const Result r = invoke({"verify", "--system", "kepler", "--integral", "L", "--samples", "50", "--seed", "7"});
  CHECK(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["results"]["max_rel"].get<double>() <= 1e-9);

  const Result bad = invoke({"verify", "--system", "kepler", "--integral", "q1*p1", "--samples", "10"});
  CHECK(bad.code == 2);
}

TEST_CASE("errors are structured and exit 1") {
  const Result point = invoke({"derive", "--system", "kepler", "--integral", "A1", "--point", "0,1,0,0"});
  CHECK(point.code == 1);
  const Json e = Json::parse(point.err);
  CHECK(e["error"]["kind"] == "PointSyntaxError");
  CHECK(e["error"]["message"].get<std::string>().find("expected 5") != std::string::npos);

  const Result unknown = invoke({"verify", "--system", "pendulum"});
  CHECK(unknown.code == 1);
  CHECK(Json::parse(unknown.err)["error"]["kind"] == "UnknownSystem");

  const Result degenerate =
      invoke({"derive", "--system", "harmonic", "--integral", "H", "--point", "0,1,1"});
  CHECK(degenerate.code == 1);
  CHECK(Json::parse(degenerate.err)["error"]["kind"] == "ContactDegenerate");

  const Result syntax = invoke({"derive", "--system", "kepler", "--integral", "q1+", "--point", "0,1,0,0,1"});
  CHECK(syntax.code == 1);
  CHECK(Json::parse(syntax.err)["error"]["kind"] == "SyntaxError");

  const Result none = invoke({"verify"});
  CHECK(none.code == 1);
  const Result flag = invoke({"verify", "--system", "kepler", "--bogus"});
  CHECK(flag.code == 1);
  CHECK(Json::parse(flag.err)["error"]["kind"] == "UsageError");
}

TEST_CASE("seed handling and reproducibility") {
  const std::vector<std::string> args = {"integrability", "--system", "kepler", "--integral",
                                         "H,L", "--samples", "8", "--seed", "11"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  setenv("NOETHER_SEED", "12", 1);
  const Result c = invoke(args);
  unsetenv("NOETHER_SEED");
  CHECK(c.out != a.out);
  CHECK(Json::parse(c.out)["diagnostics"]["seed"] == 12);
  std::vector<std::string> args12 = args;
  args12.back() = "12";
  CHECK(invoke(args12).out == c.out);
}

TEST_CASE("integrability exit codes") {
  CHECK(invoke({"integrability", "--system", "kepler", "--integral", "H,L", "--samples", "10"}).code == 0);
  CHECK(invoke({"integrability", "--system", "kepler", "--samples", "10"}).code == 2);
}

TEST_CASE("flow and action") {
  const Result f = invoke({"flow", "--system", "kepler", "--point", "0,1,0,0,1", "--duration", "1"});
  CHECK(f.code == 0);
  const Json fd = Json::parse(f.out);
  CHECK(fd["results"]["drift"]["L"].get<double>() <= 1e-11);
  CHECK(fd["results"]["samples"] == 1001);

  const Result csv = invoke({"flow", "--system", "free1d", "--point", "0,0,2", "--duration", "0.002",
                             "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("t,q1,p1\n", 0) == 0);

  const Result sym = invoke({"flow", "--system", "kepler", "--point", "0,1,0,0,1", "--integral", "A1",
                             "--s", "0.01", "--step", "1e-4"});
  CHECK(sym.code == 0);
  CHECK(Json::parse(sym.out)["results"]["drift"]["A1"].get<double>() <= 1e-10);

  const Result act = invoke({"action", "--system", "kepler", "--point", "0,1,0,0,1"});
  CHECK(act.code == 0);
  CHECK(std::abs(Json::parse(act.out)["results"]["slope"].get<double>()) <= 1e-6);
}

TEST_CASE("catalog export round-trips through --system-file") {
  const auto path = temp_path("kepler.json");
  const Result ex = invoke({"catalog", "--export", "kepler", "--output", path.string()});
  CHECK(ex.code == 0);
  const Result a = invoke({"derive", "--system-file", path.string(), "--integral", "A1", "--point",
                           "0,1,0,0,1"});
  const Result b = invoke({"derive", "--system", "kepler", "--integral", "A1", "--point", "0,1,0,0,1"});
  CHECK(a.code == 0);
  CHECK(Json::parse(a.out)["results"] == Json::parse(b.out)["results"]);
  std::filesystem::remove(path);
}

TEST_CASE("system file with beta") {
  const auto path = temp_path("beta.json");
  {
    std::ofstream f(path);
    f << R"({"n":1, "hamiltonian":"(p1^2+q1^2)/2", "integrals":{"H":"(p1^2+q1^2)/2"},
             "params":{}, "beta":{"dt":1.0,"dq":[0],"dp":[0],"exact":"0"}})";
  }
  const SystemSpec sys = load_system_file(path.string());
  REQUIRE(sys.beta.has_value());
  CHECK(perturbed_elementary_action(sys, PhasePoint(0, {1}, {1})) == 1.0);
  const Json back = system_to_json(sys);
  CHECK(back["beta"]["dt"] == 1.0);
  CHECK(back["beta"]["exact"] == "0");
  std::filesystem::remove(path);

  {
    std::ofstream f(path);
    f << R"({"n":2, "hamiltonian":"p1", "beta":{"dq":[0]}})";
  }
  CHECK_THROWS_AS(load_system_file(path.string()), DimensionMismatch);
  std::filesystem::remove(path);
}

TEST_CASE("json writer") {
  Json doc;
  doc["x"] = 0.1;
  doc["list"] = {1, 2.5, -1.0 / 3};
  doc["nan"] = std::nan("");
  doc["nested"]["k"] = "v";
  CHECK(dump_json(doc) ==
        "{\n  \"x\": 0.10000000000000001,\n  \"list\": [1, 2.5, -0.33333333333333331],\n"
        "  \"nan\": null,\n  \"nested\": {\n    \"k\": \"v\"\n  }\n}\n");
}
