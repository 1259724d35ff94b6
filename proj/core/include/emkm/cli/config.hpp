#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emkm/emcore.hpp"
#include "emkm/scene.hpp"

namespace emkm::cli {

inline constexpr int kConfigSchemaVersion = 1;

/// Unit of every length in the file: meters or central wavelengths c/f0.
enum class LengthUnit { Meter, Wavelength };
enum class SceneKind { Dipoles, Scatterers, Extended };
enum class RecoveryMode { CrossRange, Full3x3 };

struct ArraySpec {
  ArrayShape shape = ArrayShape::Square;
  double a = 0.0;  ///< side (square) or radius (disk)
  std::size_t n = 0;
  std::size_t n_r = 0;
  std::size_t n_theta = 0;
};

struct BandSpec {
  double f0 = 0.0;         ///< Hz
  double bandwidth = 0.0;  ///< Hz
  std::size_t n_freq = 0;  ///< 0 selects the default
};

/// Cube of scatterers sharing one polarizability.
struct ExtendedSpec {
  Point3 center;
  double side = 0.0;
  double spacing = 0.0;
  ComplexMat3 polarizability;
};

/// Regular grid centred on `center`; axes are 'x', 'y' or 'z'.
struct GridSpec {
  std::string name;
  Point3 center;
  std::vector<char> axes;
  std::vector<std::size_t> counts;
  std::vector<double> spacing;  ///< empty: λ0/8 cross-range, λ0/16 range
};

/// Grid line along `axis` through the grid point nearest `through` (default: grid centre).
struct ProfileSpec {
  std::string name;
  std::string grid;
  char axis = 'x';
  std::optional<Point3> through;
};

struct NoiseSpec {
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

struct RecoverySpec {
  RecoveryMode mode = RecoveryMode::CrossRange;
  double delta = 1e-6;  ///< relative to the largest pivot magnitude
};

struct OutputSpec {
  std::string directory = "out";
  bool csv = true;
  bool binary = true;
};

struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name = "scenario";
  LengthUnit unit = LengthUnit::Meter;
  MediumParams medium;
  ArraySpec array;
  BandSpec band;
  SceneKind scene = SceneKind::Dipoles;
  std::vector<Dipole> dipoles;
  std::vector<Scatterer> scatterers;
  ExtendedSpec extended;
  std::vector<GridSpec> grids;
  std::vector<ProfileSpec> profiles;
  std::optional<NoiseSpec> noise;
  RecoverySpec recovery;
  OutputSpec outputs;

  bool passive() const { return scene == SceneKind::Dipoles; }
};

/// Parses and validates JSON text. Throws ConfigError naming the offending field.
ScenarioConfig parse_config(const std::string& text);
/// Reads a config file; IoError when unreadable.
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical JSON text (sorted keys, complex numbers as [re, im]).
std::string serialize_config(const ScenarioConfig& config);
/// Semantic checks; throws ConfigError.
void validate_config(const ScenarioConfig& config);
/// FNV-1a 64 of the canonical serialization without outputs.directory, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

/// Meters per config length unit.
double length_scale(const ScenarioConfig& config);

/// Regular lattice filling the cube, (⌊side/spacing⌋+1)³ scatterers centred on the cube centre.
std::vector<Scatterer> expand_extended(const ExtendedSpec& block);

/// Scene objects in meters.
ArrayGeometry build_array(const ScenarioConfig& config);
FrequencyBand build_band(const ScenarioConfig& config);
std::vector<Dipole> build_dipoles(const ScenarioConfig& config);
std::vector<Scatterer> build_scatterers(const ScenarioConfig& config);
ImagingGrid build_grid(const ScenarioConfig& config, const GridSpec& grid);

}  // namespace emkm::cli
