#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindblad/analysis.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/models.hpp"
#include "lindblad/solver.hpp"

namespace lindblad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Malformed or out-of-range configuration (exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

struct ValidateOptions {
  std::size_t n_samples{10000};
  int grid_n{1001};
  std::size_t boundary_samples{1000};
};

struct PortraitOptions {
  Plane plane{Plane::Y0};
  int n{21};
};

/// Everything a command needs, resolved from JSON with defaults filled in.
struct RunConfig {
  ModelSpec model{HopfParams{}};
  BlochVector initial_state{};
  IntegratorConfig integrator{};
  FixedPointOptions fixed_points{};
  SweepSpec sweep{};
  LyapunovOptions lyapunov{};
  ValidateOptions validate{};
  PortraitOptions portrait{};
  std::optional<std::uint64_t> seed;
  std::string output_prefix{"lindblad"};
};

/// Parses a config document. Unknown keys and non-finite numbers are errors.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);

/// Canonical JSON of a resolved config (what metadata files embed).
[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);

/// Applies "a.b.c=value"; value is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Decimal with 17 significant digits, as written to CSV files.
[[nodiscard]] std::string format_number(double v);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lindblad::cli
