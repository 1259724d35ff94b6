#pragma once

#include <span>
#include <vector>

#include "emkm/imaging.hpp"
#include "emkm/scene.hpp"

namespace emkm {

struct ProfileSample {
  double position;  ///< signed distance from the line origin (m)
  double magnitude;
};

/// Sampling line origin + i·step, i = 0..count−1.
struct LineSpec {
  Point3 origin;
  Point3 step;
  std::size_t count = 0;
};

/// Per-point magnitudes: Euclidean norms, Frobenius norms, recovered norms.
std::vector<double> magnitudes(const VectorImage& image);
std::vector<double> magnitudes(const TensorImage& image);
std::vector<double> magnitudes(const CrossRangeRecovery& recovery);

/// Samples per-point magnitudes of a gridded image along a line, each line
/// point taking the value of its nearest grid point.
std::vector<ProfileSample> profile(const ImagingGrid& grid, std::span<const double> values, const LineSpec& line);

/// Profile of an image evaluated directly on the line points.
std::vector<ProfileSample> profile(std::span<const Point3> line_points, std::span<const double> values);

/// Half the distance between the first local minima bracketing the maximum.
/// A side without a sampled minimum falls back to its 10%-of-peak crossing.
/// Throws DomainError when the peak sits on the boundary or no bracket exists.
double focal_width(std::span<const ProfileSample> profile);

/// Index of the profile maximum.
std::size_t peak_index(std::span<const ProfileSample> profile);

struct EllipseParams {
  double major = 0.0;      ///< |e1|
  double minor = 0.0;      ///< |e2|
  double angle = 0.0;      ///< major-axis direction in (−π/2, π/2]
  double major_eig = 0.0;  ///< signed eigenvalue along the major axis
  double minor_eig = 0.0;
};

/// Eigen-decomposition of a real symmetric 2x2 matrix [[a, b], [b, c]].
/// Equal-magnitude eigenvalues of opposite sign take the direction of the
/// positive one; a multiple of the identity (including zero) has angle 0.
EllipseParams ellipse_of(double a, double b, double c);
/// Real or imaginary part of a complex block; throws DomainError if not symmetric.
EllipseParams ellipse_of(const std::array<double, 4>& m);
/// R(θ) diag(e1, e2) R(θ)ᵀ, row-major.
std::array<double, 4> reconstruct(const EllipseParams& e);

std::array<double, 4> real_part(const ComplexMat2& m);
std::array<double, 4> imag_part(const ComplexMat2& m);

struct DiskPsfReport {
  double discrepancy = 0.0;  ///< ‖(16πL²/a²) H̃(y*,y*) − diag(1,1,0)‖_F
  ComplexMat3 normalized;    ///< (16πL²/a²) H̃(y*,y*)
  double aperture_scale = 0.0;  ///< a²/L²
  double offset_scale = 0.0;    ///< b/L with b the cross-range offset of y*
};

/// Compares the paraxial point-spread matrix of a disk array with its
/// asymptotic value a²/(16πL²) diag(1,1,0). Throws DomainError for non-disk arrays.
DiskPsfReport validate_disk_psf(const ArrayGeometry& disk, const Point3& y_star, Wavenumber k, double L);

struct FraunhoferReport {
  double max_phase_error = 0.0;      ///< max |k‖x_r − y‖ − paraxial phase| (rad)
  double max_amplitude_error = 0.0;  ///< max |L/‖x_r − y‖ − 1|
  double theta_b = 0.0;              ///< k b²/L with b the largest window cross-range offset
  double aperture_term = 0.0;        ///< a² Θ_a / L² = k a⁴ / L³
};

/// Paraxial expansion error over array elements and window points (range L).
FraunhoferReport validate_fraunhofer(const ArrayGeometry& array, std::span<const Point3> window, Wavenumber k,
                                     double L);

}  // namespace emkm
