#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "emkm/cli/config.hpp"

namespace emkm::cli {

/// Fraction of singular cross-range blocks on a grid above which a run fails numerically.
inline constexpr double kSingularDensityLimit = 0.5;

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  ///< overrides outputs.directory
  std::optional<std::uint64_t> seed;             ///< overrides noise.seed
  std::size_t threads = 0;                       ///< 0: hardware concurrency
  std::ostream* log = nullptr;
};

struct FileRecord {
  std::string path;  ///< relative to the output directory
  std::string format;
  int schema_version = 1;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  int schema_version = 1;
  std::string scenario;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::vector<FileRecord> files;
  std::vector<std::pair<std::string, double>> timings;  ///< wall-clock seconds per phase
  std::size_t total_points = 0;
  std::size_t singular_points = 0;
  std::string status = "ok";  ///< "ok" or "numerical_failure"
};

/// Synthesizes, images, recovers and writes every product of the scenario into
/// the output directory, then writes manifest.json. Throws ConfigError or IoError.
RunManifest run(ScenarioConfig config, const RunOptions& options = {});

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Human-readable summary of a finished run (manifest plus report records).
std::string summarize_run(const std::filesystem::path& manifest_path);

/// Dry-run description of a validated config.
std::string describe_config(const ScenarioConfig& config);

}  // namespace emkm::cli
