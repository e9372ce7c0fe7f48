#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "lindblad/cli.hpp"
#include "lindblad/dynamics.hpp"
#include "lindblad/kernels.hpp"

#ifndef LINDBLAD_VERSION
#define LINDBLAD_VERSION "0.0.0"
#endif

namespace lindblad::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = LINDBLAD_VERSION;

void write_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << contents;
    os.flush();
    if (!os) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename onto " + path.string());
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json point_json(const BlochVector& v) { return json::array({v.x, v.y, v.z}); }

json eigen_json(const Eigenvalues& eigs) {
  json out = json::array();
  for (const auto& e : eigs) out.push_back(json::array({e.real(), e.imag()}));
  return out;
}

json fixed_point_json(const FixedPoint& fp) {
  return {{"location", point_json(fp.location)},
          {"eigenvalues", eigen_json(fp.eigenvalues)},
          {"class", std::string(to_string(fp.stability))},
          {"residual", fp.residual}};
}

/// Output bookkeeping for one command: data files plus the meta JSON.
class Outputs {
public:
  Outputs(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {}

  std::string path(const std::string& suffix) const { return cfg_.output_prefix + "." + suffix; }

  void add(const std::string& suffix, std::string contents) {
    files_.emplace_back(path(suffix), std::move(contents));
  }

  /// Data files first, then the meta JSON naming them.
  void commit(json extra, std::ostream& out) {
    json meta;
    meta["command"] = command_;
    meta["version"] = kVersion;
    meta["config"] = to_json(cfg_);
    json names = json::array();
    for (const auto& f : files_) names.push_back(fs::path(f.first).filename().string());
    meta["outputs"] = names;
    for (auto& [k, v] : extra.items()) meta[k] = v;
    files_.emplace_back(path(command_ + ".meta.json"), dump(meta));
    for (const auto& [p, contents] : files_) {
      write_atomic(p, contents);
      out << "wrote " << p << "\n";
    }
  }

private:
  const RunConfig& cfg_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::uint64_t require_seed(const RunConfig& cfg, const char* command) {
  if (!cfg.seed) throw ConfigError(std::string(command) + " samples random states and needs a seed");
  return *cfg.seed;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_valid(cfg.model);
  std::string csv = "t,x,y,z\n";
  BlochVector last = cfg.initial_state;
  double last_t = 0.0;
  std::size_t rows = 0;
  integrate_observed(cfg.model, cfg.initial_state, cfg.integrator,
                     [&](double t, const BlochVector& v, const Velocity&) {
                       csv += format_number(t) + "," + format_number(v.x) + "," + format_number(v.y) + "," +
                              format_number(v.z) + "\n";
                       last = v;
                       last_t = t;
                       ++rows;
                     });
  Outputs files(cfg, "simulate");
  files.add("trajectory.csv", std::move(csv));
  files.commit({{"terminal_state", {{"t", last_t}, {"x", last.x}, {"y", last.y}, {"z", last.z}}},
                {"rows", rows}},
               out);
  return kExitOk;
}

int cmd_fixed_points(const RunConfig& cfg, std::ostream& out) {
  const auto points = find_fixed_points(cfg.model, cfg.fixed_points);
  json report = json::array();
  for (const auto& fp : points) report.push_back(fixed_point_json(fp));
  Outputs files(cfg, "fixed_points");
  files.add("fixed_points.json", dump(report));
  files.commit({{"count", points.size()}}, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep.param.empty()) throw ConfigError("sweep.param is required");
  (void)cfg.model.get(cfg.sweep.param);
  SweepSpec spec = cfg.sweep;
  spec.base = cfg.model;
  const SweepResult result = sweep(spec);

  std::string csv = "param,branch_id,x,y,z,re_lambda1,im_lambda1,re_lambda2,im_lambda2,re_lambda3,im_lambda3,class\n";
  for (std::size_t k = 0; k < result.param_values.size(); ++k) {
    for (const auto& bp : result.branches[k]) {
      const auto& fp = bp.point;
      csv += format_number(result.param_values[k]) + "," + std::to_string(bp.branch_id) + "," +
             format_number(fp.location.x) + "," + format_number(fp.location.y) + "," +
             format_number(fp.location.z);
      for (const auto& e : fp.eigenvalues) csv += "," + format_number(e.real()) + "," + format_number(e.imag());
      csv += "," + std::string(to_string(fp.stability)) + "\n";
    }
  }
  json events = json::array();
  for (const auto& e : result.events) {
    events.push_back({{"kind", std::string(to_string(e.kind))},
                      {"bracket", json::array({e.param_bracket.first, e.param_bracket.second})},
                      {"details", e.details}});
  }
  Outputs files(cfg, "sweep");
  files.add("branches.csv", std::move(csv));
  files.add("events.json", dump({{"param", result.param_name}, {"events", events}}));
  files.commit({{"n_events", result.events.size()}}, out);
  return kExitOk;
}

int cmd_lyapunov(const RunConfig& cfg, std::ostream& out) {
  const LyapunovSpectrum s = lyapunov_spectrum(cfg.model, cfg.initial_state, cfg.lyapunov);
  json report = {{"exponents", json::array({s.exponents[0], s.exponents[1], s.exponents[2]})},
                 {"mean_divergence", s.mean_divergence},
                 {"transient_discard", s.transient_discard},
                 {"total_time", s.total_time},
                 {"renorm_interval", s.renorm_interval},
                 {"config", to_json(cfg)}};
  Outputs files(cfg, "lyapunov");
  files.add("lyapunov.json", dump(report));
  files.commit(json::object(), out);
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const std::uint64_t seed = require_seed(cfg, "validate");
  const ModelSpec& model = cfg.model;
  const ModelKind kind = model.kind();
  const ValidationReport region = validate_params(model);

  json report;
  report["param_region_ok"] = region.ok();
  report["param_violations"] = region.violations;
  report["nonneg_scan_min"] = nullptr;
  report["psd_min_minor_over_trajectory"] = nullptr;
  report["trajectory_max_norm"] = nullptr;
  report["boundary_max_outward"] = nullptr;
  report["consistency_max_dev"] = nullptr;
  bool ok = region.ok();

  if (region.ok()) {
    if (model.is_one_dimensional()) {
      const double m = nonneg_scan(model, cfg.validate.grid_n);
      report["nonneg_scan_min"] = m;
      ok = ok && m >= -kPsdTolerance;
    } else {
      std::vector<BlochVector> states;
      double max_norm = 0.0;
      bool contained = true;
      try {
        integrate_observed(model, cfg.initial_state, cfg.integrator,
                           [&](double, const BlochVector& v, const Velocity&) {
                             states.push_back(v);
                             max_norm = std::max(max_norm, v.norm());
                           });
      } catch (const AdmissibilityViolation&) {
        contained = false;
      }
      const double minor = kernels::min_psd_minor(model, states);
      report["psd_min_minor_over_trajectory"] = minor;
      report["trajectory_max_norm"] = max_norm;
      ok = ok && contained && minor >= -1e-9;
    }

    const double flux = sample_boundary_flux(model, cfg.validate.boundary_samples, seed);
    report["boundary_max_outward"] = flux;
    // The embedded Roessler flow is not trapping on the whole sphere;
    // containment is certified along the trajectory instead.
    if (kind != ModelKind::Roessler) ok = ok && flux < 0.0;

    if (kind != ModelKind::ConstantH) {
      const double dev = consistency_check(model, cfg.validate.n_samples, seed);
      report["consistency_max_dev"] = dev;
      ok = ok && dev < (kind == ModelKind::Roessler ? 1e-9 : 1e-12);
    }
  }
  report["ok"] = ok;

  Outputs files(cfg, "validate");
  files.add("validate.json", dump(report));
  files.commit({{"ok", ok}}, out);
  return ok ? kExitOk : kExitConfig;
}

int cmd_portrait(const RunConfig& cfg, std::ostream& out) {
  require_valid(cfg.model);
  const auto grid = vector_field_grid(cfg.model, cfg.portrait.plane, cfg.portrait.n);
  std::string csv = "c1,c2,dc1,dc2\n";
  for (const auto& s : grid) {
    csv += format_number(s.c1) + "," + format_number(s.c2) + "," + format_number(s.dc1) + "," +
           format_number(s.dc2) + "\n";
  }
  Outputs files(cfg, "portrait");
  files.add("portrait.csv", std::move(csv));
  files.commit({{"plane", std::string(to_string(cfg.portrait.plane))}}, out);
  return kExitOk;
}

json load_document(const std::string& path) {
  json doc = json::object();
  if (path.empty()) return doc;
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  doc = json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ConfigError("config file " + path + " is not valid JSON");
  return doc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear Lindblad dynamics of a qubit on the Bloch ball", "lindblad"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out_prefix;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override a config value, key.path=value")->take_all();
  app.add_option("--out-prefix", out_prefix, "prefix for output files");
  app.add_option("--seed", seed, "seed for sampled states");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"simulate", "integrate a trajectory", cmd_simulate},
      {"fixed-points", "find and classify fixed points", cmd_fixed_points},
      {"sweep", "track fixed points over a parameter range", cmd_sweep},
      {"lyapunov", "Lyapunov spectrum along a trajectory", cmd_lyapunov},
      {"validate", "certify a model against its constraints", cmd_validate},
      {"portrait", "vector field on a coordinate plane", cmd_portrait},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Command selected = nullptr;
  for (const auto& [name, help, fn] : commands) {
    if (app.got_subcommand(name)) selected = fn;
  }

  RunConfig cfg;
  try {
    json doc = load_document(config_path);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& o : overrides) apply_override(doc, o);
    if (out_prefix) doc["output_prefix"] = *out_prefix;
    if (seed) doc["seed"] = *seed;
    cfg = parse_config(doc);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    return selected(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParams& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedKind& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace lindblad::cli
