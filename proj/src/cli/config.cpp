#include <charconv>
#include <cmath>
#include <set>
#include <system_error>

#include "lindblad/cli.hpp"

namespace lindblad::cli {

using nlohmann::json;

namespace {

/// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + " must be a JSON object");
  }

  ~ObjectReader() = default;
  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, key);
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer() && !v->is_number_unsigned()) throw ConfigError(where(key) + " must be an integer");
      const auto value = v->get<long long>();
      if (value < 0) throw ConfigError(where(key) + " must be non-negative");
      out = static_cast<Int>(value);
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  /// Call once all fields were read.
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key " + where(key));
    }
  }

  [[nodiscard]] std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + " must be finite");
    return d;
  }

private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ModelSpec parse_model(const json& doc) {
  ObjectReader reader(doc, "model");
  std::string kind_name;
  reader.string("kind", kind_name);
  const auto kind = parse_model_kind(kind_name);
  if (!kind) throw ConfigError("model.kind must be one of ConstantH, Pitchfork, SaddleNode, Transcritical, Hopf, Roessler");
  ModelSpec model = default_model(*kind);
  if (const json* params = reader.find("params")) {
    ObjectReader p(*params, "model.params");
    for (const auto& name : model.param_names()) {
      double value = model.get(name);
      p.number(name, value);
      model = model.with(name, value);
    }
    p.finish();
  }
  reader.finish();
  return model;
}

BlochVector parse_state(const json& v) {
  if (!v.is_array() || v.size() != 3) throw ConfigError("initial_state must be an array [x, y, z]");
  BlochVector out;
  double* slots[] = {&out.x, &out.y, &out.z};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
      throw ConfigError("initial_state entries must be finite numbers");
    }
    *slots[i] = v[i].get<double>();
  }
  return out;
}

void parse_integrator(const json& doc, IntegratorConfig& cfg) {
  ObjectReader r(doc, "integrator");
  std::string method = cfg.method == Method::RK4 ? "RK4" : "RK45";
  r.string("method", method);
  if (method == "RK4") {
    cfg.method = Method::RK4;
  } else if (method == "RK45") {
    cfg.method = Method::RK45;
  } else {
    throw ConfigError("integrator.method must be RK4 or RK45");
  }
  r.number("dt", cfg.dt);
  r.number("abs_tol", cfg.abs_tol);
  r.number("rel_tol", cfg.rel_tol);
  r.integer("max_steps", cfg.max_steps);
  r.number("t_end", cfg.t_end);
  r.finish();
  try {
    validate_config(cfg);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  ObjectReader root(doc, "");
  const json* model = root.find("model");
  if (model == nullptr) throw ConfigError("config needs a \"model\" object");
  cfg.model = parse_model(*model);
  if (const json* v = root.find("initial_state")) cfg.initial_state = parse_state(*v);
  if (const json* v = root.find("integrator")) parse_integrator(*v, cfg.integrator);

  if (const json* v = root.find("fixed_points")) {
    ObjectReader r(*v, "fixed_points");
    r.integer("grid_n", cfg.fixed_points.grid_n);
    r.finish();
  }
  require(cfg.fixed_points.grid_n >= 1, "fixed_points.grid_n must be >= 1");

  cfg.sweep.base = cfg.model;
  cfg.sweep.fixed_points = cfg.fixed_points;
  if (const json* v = root.find("sweep")) {
    ObjectReader r(*v, "sweep");
    r.string("param", cfg.sweep.param);
    r.number("from", cfg.sweep.from);
    r.number("to", cfg.sweep.to);
    r.integer("n_steps", cfg.sweep.n_steps);
    r.integer("grid_n", cfg.sweep.fixed_points.grid_n);
    r.number("link_radius", cfg.sweep.link_radius);
    r.finish();
    require(cfg.sweep.n_steps >= 1, "sweep.n_steps must be >= 1");
    require(cfg.sweep.fixed_points.grid_n >= 1, "sweep.grid_n must be >= 1");
    require(cfg.sweep.link_radius > 0.0, "sweep.link_radius must be > 0");
  }

  if (const json* v = root.find("lyapunov")) {
    ObjectReader r(*v, "lyapunov");
    r.number("total_time", cfg.lyapunov.total_time);
    r.number("transient", cfg.lyapunov.transient);
    r.number("renorm_interval", cfg.lyapunov.renorm_interval);
    r.number("dt", cfg.lyapunov.dt);
    r.finish();
  }
  require(cfg.lyapunov.total_time > 0 && cfg.lyapunov.transient >= 0 && cfg.lyapunov.renorm_interval > 0 &&
              cfg.lyapunov.dt > 0,
          "lyapunov: total_time, renorm_interval, dt must be > 0 and transient >= 0");

  if (const json* v = root.find("validate")) {
    ObjectReader r(*v, "validate");
    r.integer("n_samples", cfg.validate.n_samples);
    r.integer("grid_n", cfg.validate.grid_n);
    r.integer("boundary_samples", cfg.validate.boundary_samples);
    r.finish();
  }
  require(cfg.validate.grid_n >= 1, "validate.grid_n must be >= 1");

  if (const json* v = root.find("portrait")) {
    ObjectReader r(*v, "portrait");
    std::string plane{to_string(cfg.portrait.plane)};
    r.string("plane", plane);
    const auto parsed = parse_plane(plane);
    require(parsed.has_value(), "portrait.plane must be one of y=0, z=0, x=0");
    cfg.portrait.plane = *parsed;
    r.integer("n", cfg.portrait.n);
    r.finish();
  }
  require(cfg.portrait.n >= 1, "portrait.n must be >= 1");

  if (const json* v = root.find("seed"); v && !v->is_null()) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw ConfigError("seed must be a non-negative integer");
    }
    cfg.seed = v->get<std::uint64_t>();
  }
  root.string("output_prefix", cfg.output_prefix);
  require(!cfg.output_prefix.empty(), "output_prefix must not be empty");
  root.finish();
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json params = json::object();
  for (const auto& name : cfg.model.param_names()) params[name] = cfg.model.get(name);
  json doc;
  doc["model"] = {{"kind", std::string(to_string(cfg.model.kind()))}, {"params", params}};
  doc["initial_state"] = {cfg.initial_state.x, cfg.initial_state.y, cfg.initial_state.z};
  doc["integrator"] = {{"method", cfg.integrator.method == Method::RK4 ? "RK4" : "RK45"},
                       {"dt", cfg.integrator.dt},
                       {"abs_tol", cfg.integrator.abs_tol},
                       {"rel_tol", cfg.integrator.rel_tol},
                       {"max_steps", cfg.integrator.max_steps},
                       {"t_end", cfg.integrator.t_end}};
  doc["fixed_points"] = {{"grid_n", cfg.fixed_points.grid_n}};
  doc["sweep"] = {{"param", cfg.sweep.param},
                  {"from", cfg.sweep.from},
                  {"to", cfg.sweep.to},
                  {"n_steps", cfg.sweep.n_steps},
                  {"grid_n", cfg.sweep.fixed_points.grid_n},
                  {"link_radius", cfg.sweep.link_radius}};
  doc["lyapunov"] = {{"total_time", cfg.lyapunov.total_time},
                     {"transient", cfg.lyapunov.transient},
                     {"renorm_interval", cfg.lyapunov.renorm_interval},
                     {"dt", cfg.lyapunov.dt}};
  doc["validate"] = {{"n_samples", cfg.validate.n_samples},
                     {"grid_n", cfg.validate.grid_n},
                     {"boundary_samples", cfg.validate.boundary_samples}};
  doc["portrait"] = {{"plane", std::string(to_string(cfg.portrait.plane))}, {"n", cfg.portrait.n}};
  doc["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  doc["output_prefix"] = cfg.output_prefix;
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  for (std::size_t start = 0;;) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (parts.back().empty()) throw ConfigError("--set key '" + key + "' has an empty component");
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  // Check the whole path before touching the document.
  const json* probe = &doc;
  for (const auto& part : parts) {
    if (probe->is_null()) break;
    if (!probe->is_object()) throw ConfigError("--set key '" + key + "' descends into a non-object");
    const auto it = probe->find(part);
    if (it == probe->end()) break;
    probe = &*it;
  }

  json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (node->is_null()) *node = json::object();
    node = &(*node)[parts[i]];
  }
  if (node->is_null()) *node = json::object();
  (*node)[parts.back()] = value;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace lindblad::cli
