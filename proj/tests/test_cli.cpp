#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "lindblad/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using lindblad::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("lindblad_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string prefix(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::size_t count() const {
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(path), fs::directory_iterator()));
  }
};

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& p) {
  std::vector<std::string> out;
  std::istringstream is(slurp(p));
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<double> row(const std::string& line) {
  std::vector<double> out;
  std::istringstream is(line);
  for (std::string cell; std::getline(is, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("cli: simulate hopf onto the cycle") {
  TempDir d;
  const auto cfg = d.write("hopf.json", R"({"model": {"kind": "Hopf", "params": {"delta": 0.9, "epsilon": 0.25, "b": 0.2}},
    "initial_state": [0.01, 0.3, 0.01], "integrator": {"t_end": 400}})");
  REQUIRE(invoke({"simulate", "--config", cfg, "--out-prefix", d.prefix("h")}) == 0);
  const auto ls = lines(d.prefix("h") + ".trajectory.csv");
  REQUIRE(ls.size() > 100);
  CHECK(ls[0] == "t,x,y,z");
  CHECK(row(ls[1]) == std::vector<double>{0.0, 0.01, 0.3, 0.01});
  for (std::size_t i = ls.size() - 5; i < ls.size(); ++i) {
    const auto r = row(ls[i]);
    CHECK(r[1] * r[1] + r[3] * r[3] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(std::abs(r[2]) < 1e-10);
  }
  CHECK(row(ls.back())[0] == 400.0);
  // 17 significant digits in scientific notation
  const std::string first = ls[1].substr(0, ls[1].find(','));
  CHECK(first == "0.0000000000000000e+00");

  const json meta = json::parse(slurp(d.prefix("h") + ".simulate.meta.json"));
  CHECK(meta["command"] == "simulate");
  CHECK(meta["config"]["model"]["kind"] == "Hopf");
  CHECK(meta["config"]["model"]["params"]["epsilon"] == 0.25);
  CHECK(meta["terminal_state"]["t"] == 400.0);
  CHECK(meta["outputs"][0] == "h.trajectory.csv");
  CHECK(meta.contains("version"));
}

TEST_CASE("cli: constant rates settle at one third") {
  TempDir d;
  REQUIRE(invoke({"simulate", "--set", "model.kind=ConstantH", "--set", "model.params.h11=2", "--set",
                  "model.params.h22=1", "--set", "integrator.t_end=40", "--out-prefix", d.prefix("c")}) == 0);
  const auto ls = lines(d.prefix("c") + ".trajectory.csv");
  CHECK(row(ls.back())[3] == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("cli: malformed input exits 2 and writes nothing") {
  TempDir d;
  const auto bad = d.write("bad.json", "{\"model\": ");
  std::string err;
  CHECK(invoke({"simulate", "--config", bad, "--out-prefix", d.prefix("x")}, &err) == 2);
  CHECK(d.count() == 1);
  CHECK_FALSE(err.empty());

  const auto unknown = d.write("unknown.json", R"({"model": {"kind": "Hopf"}, "integrater": {}})");
  CHECK(invoke({"simulate", "--config", unknown, "--out-prefix", d.prefix("x")}) == 2);
  const auto badparam = d.write("badparam.json", R"({"model": {"kind": "Hopf", "params": {"alpha": 1}}})");
  CHECK(invoke({"simulate", "--config", badparam, "--out-prefix", d.prefix("x")}) == 2);
  CHECK(invoke({"simulate", "--out-prefix", d.prefix("x")}) == 2);
  CHECK(invoke({"simulate", "--set", "model.kind=Lorenz", "--out-prefix", d.prefix("x")}) == 2);
  CHECK(invoke({"simulate", "--set", "model.kind=Hopf", "--set", "integrator.dt=-1", "--out-prefix", d.prefix("x")}) == 2);
  CHECK(invoke({"simulate", "--set", "model.kind=Hopf", "--set", "model.params.epsilon=0.5", "--out-prefix",
                d.prefix("x")}) == 2);
  CHECK(invoke({"frobnicate"}) == 2);
  CHECK(invoke({}) == 2);
  CHECK(d.count() == 3);
}

TEST_CASE("cli: help exits 0") { CHECK(invoke({"--help"}) == 0); }

TEST_CASE("cli: runtime failures exit 3") {
  TempDir d;
  CHECK(invoke({"simulate", "--set", "model.kind=Hopf", "--set", "initial_state=[0.1,0,0]", "--set",
                "integrator.max_steps=3", "--set", "integrator.t_end=100", "--out-prefix", d.prefix("x")}) == 3);
  CHECK(invoke({"simulate", "--set", "model.kind=Hopf", "--set", "initial_state=[0,0,1.5]", "--out-prefix",
                d.prefix("x")}) == 3);
  CHECK(d.count() == 0);
}

TEST_CASE("cli: fixed points") {
  TempDir d;
  REQUIRE(invoke({"fixed-points", "--set", "model.kind=Pitchfork", "--set", "model.params.t=-0.25", "--out-prefix",
                  d.prefix("a")}) == 0);
  const json three = json::parse(slurp(d.prefix("a") + ".fixed_points.json"));
  REQUIRE(three.size() == 3);
  CHECK(three[1]["class"] == "Saddle");
  CHECK(three[0]["eigenvalues"].size() == 3);
  CHECK(three[0]["eigenvalues"][0].size() == 2);
  CHECK(three[2]["location"][2].get<double>() == doctest::Approx(0.5));
  CHECK(fs::exists(d.prefix("a") + ".fixed_points.meta.json"));

  REQUIRE(invoke({"fixed-points", "--set", "model.kind=Pitchfork", "--set", "model.params.t=0.25", "--out-prefix",
                  d.prefix("b")}) == 0);
  CHECK(json::parse(slurp(d.prefix("b") + ".fixed_points.json")).size() == 1);

  REQUIRE(invoke({"fixed-points", "--set", "model.kind=Transcritical", "--set", "model.params.c=0", "--out-prefix",
                  d.prefix("c")}) == 0);
  const json one = json::parse(slurp(d.prefix("c") + ".fixed_points.json"));
  REQUIRE(one.size() == 1);
  CHECK(one[0]["class"] == "Marginal");
  CHECK(one[0]["location"][2].get<double>() == doctest::Approx(-1.0));
}

TEST_CASE("cli: sweeps") {
  TempDir d;
  REQUIRE(invoke({"sweep", "--set", "model.kind=SaddleNode", "--set", "model.params.t=-0.75", "--set", "sweep.param=b",
                  "--set", "sweep.from=0", "--set", "sweep.to=0.5", "--set", "sweep.n_steps=501", "--out-prefix",
                  d.prefix("sn")}) == 0);
  const json ev = json::parse(slurp(d.prefix("sn") + ".events.json"));
  REQUIRE(ev["events"].size() == 1);
  CHECK(ev["events"][0]["kind"] == "SaddleNode");
  const double lo = ev["events"][0]["bracket"][0];
  const double hi = ev["events"][0]["bracket"][1];
  CHECK(lo <= 0.25);
  CHECK(hi >= 0.25);
  CHECK(hi - lo <= 0.001);
  const auto ls = lines(d.prefix("sn") + ".branches.csv");
  CHECK(ls[0] == "param,branch_id,x,y,z,re_lambda1,im_lambda1,re_lambda2,im_lambda2,re_lambda3,im_lambda3,class");
  CHECK(ls[1].substr(ls[1].rfind(',') + 1) == "StableNode");

  REQUIRE(invoke({"sweep", "--set", "model.kind=Pitchfork", "--set", "sweep.param=t", "--set", "sweep.from=0.5",
                  "--set", "sweep.to=-0.5", "--set", "sweep.n_steps=201", "--out-prefix", d.prefix("pf")}) == 0);
  const json pf = json::parse(slurp(d.prefix("pf") + ".events.json"));
  REQUIRE(pf["events"].size() == 1);
  CHECK(pf["events"][0]["kind"] == "Pitchfork");

  REQUIRE(invoke({"sweep", "--set", "model.kind=Hopf", "--set", "sweep.param=epsilon", "--set", "sweep.from=-0.25",
                  "--set", "sweep.to=0.25", "--out-prefix", d.prefix("hf")}) == 0);
  const json hf = json::parse(slurp(d.prefix("hf") + ".events.json"));
  REQUIRE(hf["events"].size() == 1);
  CHECK(hf["events"][0]["kind"] == "Hopf");

  CHECK(invoke({"sweep", "--set", "model.kind=Hopf", "--out-prefix", d.prefix("np")}) == 2);
  CHECK(invoke({"sweep", "--set", "model.kind=Hopf", "--set", "sweep.param=alpha", "--out-prefix", d.prefix("np")}) == 2);
}

TEST_CASE("cli: lyapunov of a linear contraction") {
  TempDir d;
  REQUIRE(invoke({"lyapunov", "--set", "model.kind=ConstantH", "--set", "model.params.h11=1", "--set",
                  "model.params.h22=1", "--set", "lyapunov.total_time=20", "--set", "lyapunov.transient=1", "--set",
                  "initial_state=[0.1,0.1,0.1]", "--out-prefix", d.prefix("l")}) == 0);
  const json l = json::parse(slurp(d.prefix("l") + ".lyapunov.json"));
  CHECK(l["exponents"][0].get<double>() == doctest::Approx(-1).epsilon(1e-3));
  CHECK(l["exponents"][1].get<double>() == doctest::Approx(-1).epsilon(1e-3));
  CHECK(l["exponents"][2].get<double>() == doctest::Approx(-2).epsilon(1e-3));
  CHECK(l["config"]["lyapunov"]["total_time"] == 20.0);
}

TEST_CASE("cli: validate") {
  TempDir d;
  CHECK(invoke({"validate", "--set", "model.kind=Hopf", "--set", "initial_state=[0.1,0.2,0.3]", "--seed", "4",
                "--out-prefix", d.prefix("ok")}) == 0);
  const json ok = json::parse(slurp(d.prefix("ok") + ".validate.json"));
  CHECK(ok["ok"] == true);
  CHECK(ok["param_region_ok"] == true);
  CHECK(ok["boundary_max_outward"].get<double>() < 0.0);
  CHECK(ok["consistency_max_dev"].get<double>() < 1e-12);
  CHECK(ok["psd_min_minor_over_trajectory"].get<double>() >= 0.0);
  CHECK(ok["nonneg_scan_min"].is_null());

  CHECK(invoke({"validate", "--set", "model.kind=Hopf", "--set", "model.params.epsilon=0.5", "--seed", "4",
                "--out-prefix", d.prefix("bad")}) == 2);
  const json bad = json::parse(slurp(d.prefix("bad") + ".validate.json"));
  CHECK(bad["param_region_ok"] == false);
  CHECK(bad["ok"] == false);

  CHECK(invoke({"validate", "--set", "model.kind=Roessler", "--set", "initial_state=[0.37,0.02,0]", "--set",
                "integrator.t_end=20", "--seed", "4", "--out-prefix", d.prefix("r")}) == 0);
  const json r = json::parse(slurp(d.prefix("r") + ".validate.json"));
  CHECK(r["psd_min_minor_over_trajectory"].get<double>() >= -1e-9);
  CHECK(r["consistency_max_dev"].get<double>() < 1e-9);

  CHECK(invoke({"validate", "--set", "model.kind=Pitchfork", "--seed", "4", "--out-prefix", d.prefix("p")}) == 0);
  CHECK(json::parse(slurp(d.prefix("p") + ".validate.json"))["nonneg_scan_min"].get<double>() >= 0.0);

  // sampling without a seed is a config error
  CHECK(invoke({"validate", "--set", "model.kind=Hopf", "--out-prefix", d.prefix("s")}) == 2);
  CHECK_FALSE(fs::exists(d.prefix("s") + ".validate.json"));
}

TEST_CASE("cli: portrait") {
  TempDir d;
  REQUIRE(invoke({"portrait", "--set", "model.kind=Hopf", "--set", "portrait.n=21", "--out-prefix", d.prefix("p")}) == 0);
  const auto ls = lines(d.prefix("p") + ".portrait.csv");
  CHECK(ls.size() == 442);
  CHECK(ls[0] == "c1,c2,dc1,dc2");
  CHECK(invoke({"portrait", "--set", "model.kind=Hopf", "--set", "portrait.plane=w=0", "--out-prefix", d.prefix("q")}) == 2);
}

TEST_CASE("cli: outputs are byte-identical across runs") {
  TempDir d;
  const auto cfg = d.write("r.json", R"({"model": {"kind": "Roessler"}, "initial_state": [0.37, 0.02, 0.0],
    "integrator": {"t_end": 5}, "seed": 42, "validate": {"n_samples": 2000},
    "lyapunov": {"total_time": 2, "transient": 0.5}})");
  const auto sn = d.write("s.json", R"({"model": {"kind": "SaddleNode"}, "seed": 1,
    "sweep": {"param": "b", "from": 0.0, "to": 0.5, "n_steps": 51}})");
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"simulate", cfg}, {"validate", cfg}, {"portrait", cfg}, {"lyapunov", cfg}, {"sweep", sn}, {"fixed-points", sn}};

  auto snapshot = [&] {
    std::map<std::string, std::string> files;
    for (const auto& [cmd, config] : runs) REQUIRE(invoke({cmd, "--config", config, "--out-prefix", d.prefix("o")}) == 0);
    for (const auto& entry : fs::directory_iterator(d.path)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("o.", 0) == 0) files[name] = slurp(entry.path().string());
    }
    return files;
  };
  const auto first = snapshot();
  for (const auto& [name, text] : first) fs::remove(d.path / name);
  const auto second = snapshot();
  CHECK(first.size() == 13);
  CHECK(first == second);
}

TEST_CASE("cli: override parsing") {
  json doc = json::object();
  lindblad::cli::apply_override(doc, "model.params.t=-0.5");
  lindblad::cli::apply_override(doc, "model.kind=Pitchfork");
  lindblad::cli::apply_override(doc, "initial_state=[0,0,0.5]");
  CHECK(doc["model"]["params"]["t"] == -0.5);
  CHECK(doc["model"]["kind"] == "Pitchfork");
  CHECK(doc["initial_state"][2] == 0.5);
  CHECK_THROWS_AS(lindblad::cli::apply_override(doc, "novalue"), lindblad::cli::ConfigError);
  CHECK_THROWS_AS(lindblad::cli::apply_override(doc, "model.kind.x=1"), lindblad::cli::ConfigError);
  CHECK_THROWS_AS(lindblad::cli::apply_override(doc, "a..b=1"), lindblad::cli::ConfigError);

  const auto cfg = lindblad::cli::parse_config(doc);
  CHECK(cfg.model.get("t") == -0.5);
  CHECK(cfg.initial_state.z == 0.5);
  // canonical JSON parses back to the same config
  const auto again = lindblad::cli::parse_config(lindblad::cli::to_json(cfg));
  CHECK(lindblad::cli::to_json(again) == lindblad::cli::to_json(cfg));
}

TEST_CASE("cli: number formatting keeps 17 digits") {
  using lindblad::cli::format_number;
  CHECK(format_number(0.1) == "1.0000000000000001e-01");
  CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
  CHECK(format_number(-2.5) == "-2.5000000000000000e+00");
}
