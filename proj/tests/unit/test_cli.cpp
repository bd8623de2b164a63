#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "tensornorm/tensor_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using doctest::Approx;
using tensornorm::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("tensornorm_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string tensor(const std::string& name, const tensornorm::SparseTensor& f) const {
    std::ofstream out(path_ / name);
    tensornorm::write_tensor(f, out);
    return (path_ / name).string();
  }
  std::string text(const std::string& name, const std::string& body) const {
    std::ofstream(path_ / name) << body;
    return (path_ / name).string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string vector_json(double lambda, const std::vector<std::vector<double>>& parts, int omitted = 0) {
  json j;
  j["lambda"] = lambda;
  j["parts"] = parts;
  if (omitted > 0) j["omitted_mode"] = omitted;
  return j.dump();
}

}  // namespace

TEST_CASE("check command") {
  TempDir dir;
  const auto experiment = dir.tensor("f.tns", fixtures::experiment_tensor());

  const Run ok = run({"check", experiment, "--p", "3,3,3"});
  CHECK(ok.code == 0);
  const json report = json::parse(ok.out);
  CHECK(report["weakly_irreducible"] == true);
  CHECK(report["admissible_indices"] == json::array({1, 2, 3}));
  CHECK(report["chosen_index"] == 1);

  const Run diag = run({"check", dir.tensor("d.tns", fixtures::diagonal_pair()), "--p", "3"});
  CHECK(diag.code == 3);
  CHECK(json::parse(diag.out)["weakly_irreducible"] == false);

  CHECK(run({"check", experiment, "--p", "2,2,2"}).code == 2);
  CHECK(run({"check", experiment, "--p", "2"}).code == 2);
  CHECK(run({"check", experiment, "--p", "3,3"}).code == 1);
  CHECK(run({"check", dir.path("missing.tns"), "--p", "3"}).code == 1);
  CHECK(run({"check", dir.text("bad.tns", "tensor v1\ndims 2 2\n1 3 1.0\n"), "--p", "3"}).code == 1);
  CHECK(run({"check", dir.text("bad2.tns", "not a tensor\n"), "--p", "3"}).code == 1);
}

TEST_CASE("norm command") {
  TempDir dir;
  const auto experiment = dir.tensor("f.tns", fixtures::experiment_tensor());

  const Run hgpm = run({"norm", experiment, "--p", "3,3,3", "--method", "hgpm", "--json"});
  REQUIRE(hgpm.code == 0);
  const json h = json::parse(hgpm.out);
  CHECK(h["status"] == "converged");
  CHECK(h["method"] == "hgpm");
  const double lambda = h["lambda"];
  CHECK(fixtures::rel_diff(lambda, 1398.4993536148638) < 1e-6);
  CHECK(h["bracket"][1].get<double>() - h["bracket"][0].get<double>() < 1e-10);
  CHECK(h["parts"].size() == 3);
  CHECK(h["residuals"].size() == 3);

  const Run pm = run({"norm", experiment, "--p", "3", "--method", "pm", "--json"});
  REQUIRE(pm.code == 0);
  const json pj = json::parse(pm.out);
  CHECK(pj["bracket"].is_null());
  CHECK(fixtures::rel_diff(pj["lambda"].get<double>(), lambda) < 1e-6);

  const Run oracle = run({"norm", experiment, "--p", "3", "--method", "oracle", "--json", "--seed", "4"});
  REQUIRE(oracle.code == 0);
  CHECK(fixtures::rel_diff(json::parse(oracle.out)["lambda"].get<double>(), lambda) < 1e-6);

  const Run text = run({"norm", experiment, "--p", "3"});
  CHECK(text.code == 0);
  CHECK(text.out.find("lambda") != std::string::npos);

  SUBCASE("determinism") {
    CHECK(run({"norm", experiment, "--p", "3", "--json"}).out == hgpm.out);
    CHECK(run({"norm", experiment, "--p", "3", "--method", "oracle", "--json", "--seed", "4"}).out == oracle.out);
    setenv("TENSORNORM_SEED", "4", 1);
    CHECK(run({"norm", experiment, "--p", "3", "--method", "oracle", "--json"}).out == oracle.out);
    unsetenv("TENSORNORM_SEED");
  }

  SUBCASE("trace file") {
    const auto trace = dir.path("trace.csv");
    REQUIRE(run({"norm", experiment, "--p", "4", "--trace", trace}).code == 0);
    std::ifstream in(trace);
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,lambda_minus,lambda_plus,err_vs_final");
    int rows = 0;
    double last_lo = 0.0;
    while (std::getline(in, line)) {
      ++rows;
      std::stringstream ss(line);
      std::string cell;
      std::getline(ss, cell, ',');
      CHECK(std::stoi(cell) == rows - 1);
      std::getline(ss, cell, ',');
      const double lo = std::stod(cell);
      CHECK(lo >= last_lo * (1.0 - 1e-12));
      last_lo = lo;
    }
    CHECK(rows > 5);
  }

  SUBCASE("flag conflicts and failures") {
    CHECK(run({"norm", experiment, "--p", "3,4,5", "--method", "pm"}).code == 1);
    CHECK(run({"norm", experiment, "--p", "3", "--method", "pm", "--index", "1"}).code == 1);
    CHECK(run({"norm", experiment, "--p", "3", "--method", "oracle", "--index", "1"}).code == 1);
    CHECK(run({"norm", experiment, "--p", "3", "--method", "newton"}).code == 1);
    CHECK(run({"norm", experiment, "--p", "2"}).code == 2);
    CHECK(run({"norm", experiment, "--p", "3,3,2", "--index", "3"}).code == 2);
    CHECK(run({"norm", experiment, "--p", "3", "--index", "2", "--json"}).code == 0);
    CHECK(run({"norm", dir.tensor("d.tns", fixtures::diagonal_pair()), "--p", "3"}).code == 3);
    CHECK(run({"norm", experiment, "--p", "3", "--max-iter", "2"}).code == 6);
  }
}

TEST_CASE("eigen command") {
  TempDir dir;
  const auto ones = dir.tensor("ones.tns", fixtures::all_ones({2, 2, 2}));
  const Run r = run({"eigen", ones, "--blocks", "3", "--p", "3", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["lambda"].get<double>() == Approx(4.0).epsilon(1e-12));
  CHECK(j["blocks"].size() == 1);
  CHECK(j["blocks"][0][0].get<double>() == Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-12));

  const auto counter = dir.tensor("c.tns", fixtures::asymmetric_block_tensor());
  CHECK(run({"eigen", counter, "--blocks", "1,2", "--p", "3"}).code == 5);

  const auto experiment = dir.tensor("f.tns", fixtures::experiment_tensor());
  const json e = json::parse(run({"eigen", experiment, "--blocks", "1,1,1", "--p", "3", "--json"}).out);
  const json n = json::parse(run({"norm", experiment, "--p", "3", "--json"}).out);
  CHECK(e["lambda"] == n["lambda"]);
  CHECK(run({"eigen", ones, "--blocks", "2", "--p", "3"}).code == 1);
  CHECK(run({"eigen", ones, "--blocks", "3", "--p", "2"}).code == 2);
}

TEST_CASE("verify command") {
  TempDir dir;
  const auto skew = dir.tensor("skew.tns", fixtures::skew_matrix());
  const double a = std::pow(2.0, -0.5);
  const auto good = dir.text("good.json", vector_json(1.0, {{a, -a}, {a, a}}));
  const Run ok = run({"verify", skew, good, "--p", "2,2"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["pass"] == true);

  const auto bad = dir.text("bad.json", vector_json(1.0, {{a + 0.01, -a}, {a, a}}));
  CHECK(run({"verify", skew, bad, "--p", "2,2"}).code == 7);

  const auto three = dir.tensor("three.tns", fixtures::three_entry_tensor());
  const auto boundary = dir.text("y.json", vector_json(1.0, {{0, 1}, {0, 1}, {0, 1}}));
  CHECK(run({"verify", three, boundary, "--p", "3"}).code == 0);

  // Reduced vector for the all ones tensor with mode 1 eliminated.
  const double c = std::pow(2.0, -1.0 / 3.0);
  const auto ones = dir.tensor("ones.tns", fixtures::all_ones({2, 2, 2}));
  const auto reduced = dir.text("r.json", vector_json(4.0, {{c, c}, {c, c}}, 1));
  CHECK(run({"verify", ones, reduced, "--p", "3"}).code == 0);
  const auto off = dir.text("off.json", vector_json(4.0, {{c, 0.5}, {c, c}}, 1));
  CHECK(run({"verify", ones, off, "--p", "3"}).code == 7);

  CHECK(run({"verify", skew, dir.text("junk.json", "{\"lambda\": }"), "--p", "2"}).code == 1);
  CHECK(run({"verify", skew, dir.text("short.json", vector_json(1.0, {{a, -a}})), "--p", "2"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"norm"}).code == 1);
}
