#include "lindblad/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lindblad/errors.hpp"

namespace lindblad {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 6> kKindNames{{
    {ModelKind::ConstantH, "ConstantH"},
    {ModelKind::Pitchfork, "Pitchfork"},
    {ModelKind::SaddleNode, "SaddleNode"},
    {ModelKind::Transcritical, "Transcritical"},
    {ModelKind::Hopf, "Hopf"},
    {ModelKind::Roessler, "Roessler"},
}};

template <class P>
double* find_field(P& p, std::string_view name) {
  for (const auto& [field_name, member] : P::fields) {
    if (name == field_name) return &(p.*member);
  }
  return nullptr;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

CoeffMatrix diagonal(double h11, double h22) {
  CoeffMatrix h;
  h.h11 = h11;
  h.h22 = h22;
  return h;
}

// Symmetric quadratic ansatz shared by the pitchfork and saddle-node models.
CoeffMatrix cubic_ansatz(double alpha, double t, double b, double z) {
  const double linear = (alpha - 0.5 * t) * z;
  const double even = alpha + 0.5 * z * z;
  return diagonal(even + 0.5 * b + linear, even - 0.5 * b - linear);
}

ModelTerms evaluate_impl(const ConstantHParams& p, const BlochVector&) {
  CoeffMatrix h = diagonal(p.h11, p.h22);
  h.h33 = p.h33;
  return {h, {}};
}

ModelTerms evaluate_impl(const PitchforkParams& p, const BlochVector& v) {
  return {cubic_ansatz(p.alpha, p.t, 0.0, v.z), {}};
}

ModelTerms evaluate_impl(const SaddleNodeParams& p, const BlochVector& v) {
  return {cubic_ansatz(p.alpha, p.t, p.b, v.z), {}};
}

ModelTerms evaluate_impl(const TranscriticalParams& p, const BlochVector& v) {
  const double q = 0.5 * (v.z + 1.0);
  return {diagonal((p.c + p.alpha) * q, p.alpha + (1.0 - p.c - p.alpha) * q), {}};
}

ModelTerms evaluate_impl(const HopfParams& p, const BlochVector& v) {
  const double r2 = v.x * v.x + v.z * v.z;
  CoeffMatrix h;
  h.h11 = 0.5 * (p.delta - p.epsilon) + 0.5 * p.delta * v.z + 0.5 * r2;
  h.h22 = 0.5 * (p.delta - p.epsilon) - 0.5 * p.delta * v.z + 0.5 * r2;
  h.h33 = 0.25 * r2;
  h.h12 = 0.5 * p.epsilon;
  h.h23 = 0.125 * p.delta * v.x;
  h.h13 = -0.125 * p.delta * v.x;
  // Field along y. The sign of Im H10 makes zdot carry -b x and xdot +b z.
  Hamiltonian2 H;
  H.H10 = cplx{0.0, 0.5 * p.b};
  return {h, H};
}

ModelTerms evaluate_impl(const RoesslerParams& p, const BlochVector& v) {
  const double base = p.M * (p.c + p.M * p.epsilon);
  const double product = p.b + p.M * p.M * v.x * v.z;
  CoeffMatrix h;
  h.h11 = 0.5 * (base + product);
  h.h22 = 0.5 * (base - product);
  h.h33 = p.h33_scale * 0.375 * base;
  const double gamma = h.gamma();
  const double real_part = p.M * v.y + p.M * v.z - gamma * v.x;
  const double imag_part = p.M * (v.x - p.epsilon) + (p.a * p.M + gamma) * v.y;
  h.h23 = 0.25 * cplx{-real_part, imag_part};
  h.h13 = 0.25 * cplx{real_part, imag_part};
  return {h, {}};
}

void check_finite(const ModelSpec& model, ValidationReport& report) {
  for (const auto& name : model.param_names()) {
    if (!std::isfinite(model.get(name))) report.violations.push_back(name + " is not finite");
  }
}

void validate_impl(const ConstantHParams& p, ValidationReport& r) {
  if (p.h11 < 0.0) r.violations.push_back("h11 must be >= 0");
  if (p.h22 < 0.0) r.violations.push_back("h22 must be >= 0");
  if (p.h33 < 0.0) r.violations.push_back("h33 must be >= 0");
}

void validate_cubic(double alpha, double t, ValidationReport& r) {
  if (!(alpha > 0.0 && alpha < 2.0)) r.violations.push_back("alpha must lie in (0, 2)");
  if (alpha > 0.0 && std::abs(t - 2.0 * alpha) > std::sqrt(8.0 * alpha)) {
    r.violations.push_back("|t - 2 alpha| must be <= sqrt(8 alpha)");
  }
}

void validate_impl(const PitchforkParams& p, ValidationReport& r) { validate_cubic(p.alpha, p.t, r); }

void validate_impl(const SaddleNodeParams& p, ValidationReport& r) {
  validate_cubic(p.alpha, p.t, r);
  if (std::abs(p.b) > 2.0 * p.alpha) r.violations.push_back("|b| must be <= 2 alpha");
}

void validate_impl(const TranscriticalParams& p, ValidationReport& r) {
  if (!(p.alpha > 0.0)) r.violations.push_back("alpha must be > 0");
  if (!(p.c > -p.alpha && p.c < 1.0)) r.violations.push_back("c must lie in (-alpha, 1)");
}

void validate_impl(const HopfParams& p, ValidationReport& r) {
  if (!(p.delta > 0.0 && p.delta < 1.0)) r.violations.push_back("delta must lie in (0, 1)");
  const double bound = std::min(0.5 * p.delta, 0.5 * p.delta * (2.0 - p.delta));
  if (!(p.epsilon < bound)) {
    r.violations.push_back("epsilon must be < min(delta/2, delta(2-delta)/2) = " + format_value(bound));
  }
}

void validate_impl(const RoesslerParams& p, ValidationReport& r) {
  if (!(p.M > 0.0)) r.violations.push_back("M must be > 0");
  if (!(p.epsilon > 0.0)) r.violations.push_back("epsilon must be > 0");
  if (!(p.h33_scale > 0.0)) r.violations.push_back("h33_scale must be > 0");
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

ModelKind ModelSpec::kind() const noexcept {
  return std::visit([](const auto& p) { return std::decay_t<decltype(p)>::kind; }, params);
}

std::vector<std::string> ModelSpec::param_names() const {
  return std::visit(
      [](const auto& p) {
        std::vector<std::string> names;
        for (const auto& field : std::decay_t<decltype(p)>::fields) names.emplace_back(field.first);
        return names;
      },
      params);
}

double ModelSpec::get(std::string_view name) const {
  ModelParams copy = params;
  const double* field = std::visit([&](auto& p) -> const double* { return find_field(p, name); }, copy);
  if (field == nullptr) {
    throw InvalidParams("model " + std::string(to_string(kind())) + " has no parameter '" +
                        std::string(name) + "'");
  }
  return *field;
}

ModelSpec ModelSpec::with(std::string_view name, double value) const {
  ModelSpec out = *this;
  double* field = std::visit([&](auto& p) { return find_field(p, name); }, out.params);
  if (field == nullptr) {
    throw InvalidParams("model " + std::string(to_string(kind())) + " has no parameter '" +
                        std::string(name) + "'");
  }
  *field = value;
  return out;
}

bool ModelSpec::is_one_dimensional() const noexcept {
  const ModelKind k = kind();
  return k == ModelKind::Pitchfork || k == ModelKind::SaddleNode || k == ModelKind::Transcritical;
}

ModelSpec default_model(ModelKind kind) {
  switch (kind) {
    case ModelKind::ConstantH: return {ConstantHParams{}};
    case ModelKind::Pitchfork: return {PitchforkParams{}};
    case ModelKind::SaddleNode: return {SaddleNodeParams{}};
    case ModelKind::Transcritical: return {TranscriticalParams{}};
    case ModelKind::Hopf: return {HopfParams{}};
    case ModelKind::Roessler: return {RoesslerParams{}};
  }
  throw UnsupportedKind("unknown model kind");
}

ValidationReport validate_params(const ModelSpec& model) {
  ValidationReport report;
  check_finite(model, report);
  std::visit([&](const auto& p) { validate_impl(p, report); }, model.params);
  return report;
}

void require_valid(const ModelSpec& model) {
  const ValidationReport report = validate_params(model);
  if (report.ok()) return;
  std::string msg = "invalid " + std::string(to_string(model.kind())) + " parameters:";
  for (const auto& v : report.violations) msg += " " + v + ";";
  throw InvalidParams(msg);
}

ModelTerms evaluate(const ModelSpec& model, const BlochVector& v) noexcept {
  return std::visit([&](const auto& p) { return evaluate_impl(p, v); }, model.params);
}

ModelTerms evaluate_checked(const ModelSpec& model, const BlochVector& v) {
  require_valid(model);
  return evaluate(model, v);
}

double nonneg_scan(const ModelSpec& model, int grid_n) {
  if (!model.is_one_dimensional()) {
    throw UnsupportedKind("nonneg_scan applies to one-dimensional models, not " +
                          std::string(to_string(model.kind())));
  }
  if (grid_n < 1) throw DomainError("nonneg_scan needs grid_n >= 1");
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i) {
    // Uniform in z on [-1, 1]; for Transcritical this is uniform in q on [0, 1].
    const double z = grid_n == 1 ? 0.0 : -1.0 + 2.0 * i / (grid_n - 1);
    const CoeffMatrix h = evaluate(model, BlochVector{0.0, 0.0, z}).h;
    lowest = std::min({lowest, h.h11, h.h22});
  }
  return lowest;
}

}  // namespace lindblad
