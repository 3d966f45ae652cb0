#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"

using betagap::cli::RunRecord;
using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = betagap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json result_of(std::vector<std::string> args) {
  const auto r = call(std::move(args));
  REQUIRE(r.code == 0);
  return json::parse(r.out).at("result");
}

}  // namespace

TEST_CASE("exact subcommands") {
  CHECK(result_of({"exact", "gap-deriv", "--beta", "1", "--n", "2"})["mean"].get<double>() ==
        doctest::Approx(-2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(result_of({"exact", "euler", "--k", "2", "--n", "7"})["value"].get<double>() == doctest::Approx(2.0));
  const auto v = result_of({"exact", "volume", "--beta", "1", "--n", "2"});
  CHECK(v["absolute"]["value"].get<double>() == doctest::Approx(2 * std::numbers::sqrt2 * std::numbers::pi));
  const auto c = result_of({"exact", "constants", "--beta", "4", "--n", "3"});
  CHECK(c["N_beta"] == 15);
  // (3 / (2 pi)) Gamma(3/2)^2 = 3/8.
  CHECK(result_of({"exact", "mellin", "--beta", "2", "--n", "2"})["value"].get<double>() ==
        doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("mc gap matches the erfc closed form") {
  const auto r = result_of({"mc", "gap", "--beta", "1", "--n", "1", "--eps", "0.5", "--trials", "200000", "--seed", "7"});
  CHECK(std::abs(r["mean"].get<double>() - std::erfc(0.5 / std::numbers::sqrt2)) <= 3 * r["std_err"].get<double>());
  CHECK(r["seed"] == 7);
}

TEST_CASE("worked example subcommand") {
  const auto r = result_of({"quadrics", "worked-example"});
  CHECK(r["mu"] == 3);
  CHECK(r["card"] == 6);
  CHECK(r["b_E"] == 0);
}

TEST_CASE("same argv gives the same payload") {
  const std::vector<std::string> base{"mc", "absdet", "--beta", "2", "--n", "3", "--trials", "5000", "--seed", "4"};
  auto with_threads = [&](const char* t) {
    auto a = base;
    a.insert(a.end(), {"--threads", t});
    return result_of(a);
  };
  const auto one = with_threads("1");
  CHECK(one.dump() == with_threads("1").dump());
  CHECK(one.dump() == with_threads("4").dump());
  CHECK(result_of({"quadrics", "table", "--n", "6", "--seed", "3"}).dump() ==
        result_of({"quadrics", "table", "--n", "6", "--seed", "3"}).dump());
}

TEST_CASE("run records round-trip") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"quadrics", "arcs", "--n", "5", "--seed", "2"},
           {"exact", "constants", "--beta", "1", "--n", "4"},
           {"detcurve", "roots", "--n", "3", "--k", "2", "--seed", "9"}}) {
    const auto r = call(args);
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    const auto rec = j.get<RunRecord>();
    CHECK(json(rec) == j);
    CHECK(json::parse(json(rec).dump()).get<RunRecord>() == rec);
  }
  const auto stochastic = json::parse(call({"quadrics", "arcs", "--n", "5", "--seed", "2"}).out);
  CHECK(stochastic["seed"] == 2);
}

TEST_CASE("exit codes") {
  CHECK(call({"exact", "gap-deriv", "--beta", "1", "--n", "2", "--bogus"}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"exact", "gap-deriv", "--beta", "3", "--n", "2"}).code == 1);
  CHECK(call({"mc", "gap", "--n", "0", "--trials", "10"}).code == 1);
  CHECK(call({"--out", "/nonexistent-dir/x.json", "exact", "euler", "--k", "2", "--n", "7"}).code == 2);
  CHECK(call({"--format", "csv", "quadrics", "arcs", "--n", "3"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "betagap_cli_test.json";
  REQUIRE(call({"--out", path.string(), "exact", "euler", "--k", "2", "--n", "7"}).code == 0);
  std::ifstream in(path);
  const auto j = json::parse(in);
  CHECK(j["command"] == "exact euler");
  std::filesystem::remove(path);
}

TEST_CASE("sweep csv") {
  const auto r = call({"sweep", "--beta", "1", "--n-min", "10", "--n-max", "400", "--n-step", "130"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,exact,asymptotic,ratio");
  double prev_gap = 1.0;
  int rows = 0;
  while (std::getline(in, line)) {
    double n, ex, as, ratio;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &n, &ex, &as, &ratio) == 4);
    CHECK(ratio == doctest::Approx(ex / as).epsilon(1e-15));
    CHECK(std::abs(1.0 - ratio) < prev_gap);
    prev_gap = std::abs(1.0 - ratio);
    ++rows;
  }
  CHECK(rows == 4);
  const auto vol = call({"sweep", "--quantity", "volume", "--n-max", "3"});
  CHECK(vol.out == "n,exact,asymptotic,ratio\n" + vol.out.substr(25));
  const auto js = call({"--format", "json", "sweep", "--n-max", "3"});
  CHECK(json::parse(js.out).size() == 2);
}
