#pragma once
// Run configuration: flat "key = value" text, optionally split into
// [sections] for readability. Section headers carry no meaning; every key is
// global. Lengths in m, angles in rad, frequencies in Hz.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmzi/detection.hpp"
#include "nmzi/elements.hpp"
#include "nmzi/interferometer.hpp"

namespace nmzi {

inline constexpr std::string_view kEngineVersion = "1.0.0";

enum class Command { WeakValues, Centroid, Dither, Photons, BeforeF };
enum class EngineChoice { Analytic, Numeric, Both };

std::string_view to_string(Command c) noexcept;
std::string_view to_string(EngineChoice e) noexcept;

struct RunConfig {
  Command command = Command::WeakValues;
  std::string preset = "custom";
  Scenario scenario{};
  TiltSet tilt{};
  DitherProtocol protocol = DitherProtocol::defaults();
  EngineChoice engine = EngineChoice::Both;
  std::optional<std::uint64_t> seed;
  std::uint64_t photons_per_sample = 100000;
  std::uint64_t photon_count = 100000;
  std::filesystem::path out = "out";

  /// Canonical text of every resolved parameter (output directory
  /// excluded). Parsing it back yields an equivalent configuration.
  std::string manifest() const;
  /// Hex SHA-256 of manifest().
  std::string manifest_hash() const;
};

/// Parse and fully validate. Preset values are applied first, explicit keys
/// override them. Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);

std::string usage_text();

struct RunResult {
  std::vector<std::filesystem::path> files;
  std::string manifest_hash;
  std::string summary;  ///< short human-readable result
};

/// Execute the configured command, writing CSV data files and manifest.txt
/// into config.out. Throws nmzi::Error on failure.
RunResult run(const RunConfig& config);

/// 0 success, 2 config error, 3 numerical-guard violation, 1 otherwise.
int exit_code_for(const class Error& e) noexcept;

}  // namespace nmzi
