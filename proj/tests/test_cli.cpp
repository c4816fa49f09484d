#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinmeas/cli.hpp"
#include "spinmeas/protective.hpp"

using namespace spinmeas;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("protect emits a schema-tagged document matching the library") {
  const RunResult r = run_cli({"protect", "--alpha-sq", "0.3", "--T", "1000"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schema_version").get<std::string>() == "1");
  CHECK(doc.at("command").get<std::string>() == "protect");
  CHECK(doc.at("config").at("alpha_sq").get<double>() == 0.3);
  CHECK(doc.at("config").at("T").get<double>() == 1000.0);
  CHECK(doc.at("config").at("axis").get<std::string>() == "z");
  CHECK(doc.at("timing_seconds").get<double>() >= 0.0);

  CouplingProfile prof;
  prof.total_time = 1000.0;
  const ProtectiveResult direct =
      run_protective(make_config(std::sqrt(0.3), std::sqrt(0.7), 1.0, 0.5, Axis::z, prof));
  CHECK(std::abs(doc.at("output").at("theta").get<double>() - direct.theta) < 1e-12);
  CHECK(std::abs(doc.at("output").at("system_fidelity").get<double>() - direct.system_fidelity) <
        1e-12);
}

TEST_CASE("csv and json forms of the same run carry identical numbers") {
  const std::vector<std::string> base{"protect", "--alpha-sq", "0.3", "--T", "500"};
  const RunResult as_json = run_cli(base);
  std::vector<std::string> csv_args = base;
  csv_args.insert(csv_args.end(), {"--out", "csv"});
  const RunResult as_csv = run_cli(csv_args);
  REQUIRE(as_json.code == 0);
  REQUIRE(as_csv.code == 0);

  const json doc = json::parse(as_json.out);
  const auto rows = lines_of(as_csv.out);
  REQUIRE(rows.size() == 2);
  const auto header = split(rows[0], ',');
  const auto values = split(rows[1], ',');
  REQUIRE(header.size() == values.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "theta")
      CHECK(std::stod(values[i]) == doc.at("output").at("theta").get<double>());
    if (header[i] == "system_fidelity")
      CHECK(std::stod(values[i]) == doc.at("output").at("system_fidelity").get<double>());
    if (header[i] == "flip_probability")
      CHECK(std::stod(values[i]) == doc.at("output").at("flip_probability").get<double>());
  }
}

TEST_CASE("time sweep keeps its fixed header and orderly rows") {
  const RunResult r = run_cli({"sweep-t", "--alpha-sq", "0.3", "--t-min", "200", "--t-max",
                               "1600", "--points", "4", "--log", "--out", "csv"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "T,theta_error,infidelity,flip_prob_T2");
  double prev_t = 0;
  double prev_err = 1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto vals = split(rows[i], ',');
    REQUIRE(vals.size() == 4);
    const double t = std::stod(vals[0]);
    const double err = std::stod(vals[1]);
    CHECK(t > prev_t);
    CHECK(err < prev_err);
    prev_t = t;
    prev_err = err;
  }

  const RunResult j = run_cli({"sweep-t", "--alpha-sq", "0.3", "--t-min", "200", "--t-max",
                               "1600", "--points", "4", "--log"});
  REQUIRE(j.code == 0);
  CHECK(json::parse(j.out).at("output").at("rows").size() == 4);
}

TEST_CASE("bad invocations exit with the validation code and name the problem") {
  const RunResult missing = run_cli({"protect"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--alpha-sq") != std::string::npos);

  CHECK(run_cli({"protect", "--alpha-sq", "1.5"}).code == 2);
  CHECK(run_cli({"nonsense", "--alpha-sq", "0.3"}).code == 2);
  CHECK(run_cli({"sweep-t", "--alpha-sq", "0.3", "--t-min", "500", "--t-max", "100"}).code == 2);
  CHECK(run_cli({"perturb", "--alpha-sq", "0.3", "--a-i", "2"}).code == 2);
  CHECK(run_cli({"ensemble", "--alpha-sq", "0.3", "--n-list", "12", "--brute"}).code == 2);
  CHECK(run_cli({"ensemble", "--alpha-sq", "0.3", "--n-list", "2", "--brute", "--profile",
                 "cosine-ramp"})
            .code == 2);

  const RunResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("protect") != std::string::npos);
}

TEST_CASE("finite-shot sampling is seed-stable and labels its generator") {
  const std::vector<std::string> args{"impulsive", "--alpha-sq", "0.3", "--shots", "50000",
                                      "--seed", "11"};
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  REQUIRE(a.code == 0);
  // timing differs run to run; the physics payload must not
  CHECK(json::parse(a.out).at("output") == json::parse(b.out).at("output"));

  const json doc = json::parse(a.out);
  CHECK(doc.at("output").at("p_up").get<double>() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(doc.at("output").at("generator").at("algorithm").get<std::string>() == "splitmix64");
  CHECK(doc.at("output").at("generator").at("version").get<std::string>() == "1.0");
  CHECK(doc.at("output").at("generator").at("seed").get<std::uint64_t>() == 11);
  const long n_up = doc.at("output").at("counts").at("n_up").get<long>();
  const long n_down = doc.at("output").at("counts").at("n_down").get<long>();
  CHECK(n_up + n_down == 50000);

  const RunResult other = run_cli({"impulsive", "--alpha-sq", "0.3", "--shots", "50000",
                                   "--seed", "12"});
  CHECK(json::parse(other.out).at("output") != json::parse(a.out).at("output"));
}

TEST_CASE("ensemble runs list one row per requested size") {
  const RunResult r = run_cli({"ensemble", "--alpha-sq", "0.3", "--n-list", "4,16,64,256"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  const json rows = doc.at("output").at("rows");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].at("n").get<long>() == 4);
  CHECK(rows[3].at("n").get<long>() == 256);
  CHECK(doc.at("output").at("scaling").at("slope").get<double>() ==
        doctest::Approx(-0.5).epsilon(1e-6));

  const RunResult brute = run_cli({"ensemble", "--alpha-sq", "0.3", "--T", "10000", "--n-list",
                                   "2", "--brute"});
  REQUIRE(brute.code == 0);
  const json brow = json::parse(brute.out).at("output").at("rows")[0];
  CHECK(std::abs(brow.at("mean_spin")[1].get<double>() - std::sin(pi * 0.3)) < 1e-3);
}

TEST_CASE("perturb reports the frozen first-order levels") {
  const RunResult r = run_cli({"perturb", "--alpha-sq", "0.3", "--T", "100", "--a-i", "1"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("output").at("order1")[0].get<double>() ==
        doctest::Approx(-0.50942477796076935).epsilon(1e-12));
  CHECK(doc.at("output").at("order1")[1].get<double>() ==
        doctest::Approx(1.4780088514248715).epsilon(1e-12));
}
