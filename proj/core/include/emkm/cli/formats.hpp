#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emkm/analysis.hpp"
#include "emkm/imaging.hpp"
#include "emkm/scene.hpp"

namespace emkm::cli {

inline constexpr std::uint32_t kGridFormatVersion = 1;
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

/// Payload kinds of the binary grid format.
enum class ValueKind : std::uint32_t {
  VectorImage = 1,             ///< 3 components
  TensorImage = 2,             ///< 9 components, row-major
  PolarizationRecovery = 3,    ///< 2 components (corrected p_x, p_y)
  PolarizabilityRecovery = 4,  ///< 4 components (corrected α11, α12, α21, α22)
  FullPolarization = 5,        ///< 3 components
};

std::uint32_t components(ValueKind kind);

/// Contents of a binary grid file.
struct GridFile {
  ValueKind kind = ValueKind::VectorImage;
  std::uint32_t axes = 0;
  std::array<std::uint32_t, 3> dims{1, 1, 1};
  std::uint32_t components = 0;
  Point3 origin;
  std::array<Point3, 3> steps{};
  std::vector<cplx> values;  ///< point-major, components fastest
};

/// Little-endian binary grid: 128-byte header followed by interleaved float64 complex values.
void write_grid_binary(const std::filesystem::path& path, const ImagingGrid& grid, ValueKind kind,
                       std::span<const cplx> values);
GridFile read_grid_binary(const std::filesystem::path& path);

/// Flattened per-point components of each product.
std::vector<cplx> pack(const VectorImage& image);
std::vector<cplx> pack(const TensorImage& image);
std::vector<cplx> pack(const CrossRangeRecovery& recovery);

void write_image_csv(const std::filesystem::path& path, const VectorImage& image);
void write_image_csv(const std::filesystem::path& path, const TensorImage& image);
void write_recovery_csv(const std::filesystem::path& path, const CrossRangeRecovery& recovery);

struct FullRecoveryPoint {
  ComplexVec3 p;
  double condition = 0.0;
  bool singular = false;
};
void write_full_recovery_csv(const std::filesystem::path& path, std::span<const Point3> points,
                             std::span<const FullRecoveryPoint> values);

void write_profile_csv(const std::filesystem::path& path, std::span<const Point3> points,
                       std::span<const ProfileSample> samples);

/// One row of report.csv.
struct ReportRecord {
  std::string section;
  std::string name;
  std::string key;
  std::string value;
};
void write_report_csv(const std::filesystem::path& path, std::span<const ReportRecord> records);
std::vector<ReportRecord> read_report_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace emkm::cli
