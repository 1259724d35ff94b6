#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "emkm/linalg.hpp"

namespace emkm {

enum class ArrayShape { Square, Disk, Custom };

/// Planar sensor array at z = 0. Elements double as quadrature nodes for
/// integrals over the aperture: ∫ f dx_r ≈ Σ weight_r f(x_r).
class ArrayGeometry {
 public:
  ArrayGeometry(ArrayShape shape, double aperture, std::vector<Point2> positions, std::vector<double> weights);

  /// Arbitrary element layout (tests, toy problems).
  static ArrayGeometry custom(std::vector<Point2> positions, std::vector<double> weights);

  ArrayShape shape() const { return shape_; }
  /// Side length (square) or radius (disk); zero for custom layouts.
  double aperture() const { return aperture_; }
  std::size_t size() const { return positions_.size(); }
  const std::vector<Point2>& positions() const { return positions_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Sum of the quadrature weights.
  double area() const;

 private:
  ArrayShape shape_;
  double aperture_;
  std::vector<Point2> positions_;
  std::vector<double> weights_;
};

/// n x n cell-centred grid of side a, spacing a/n, weight (a/n)².
ArrayGeometry make_square_array(double a, std::size_t n);

/// Polar midpoint grid on the disk of radius a, weight r_i Δr Δθ.
ArrayGeometry make_disk_array(double a, std::size_t n_r, std::size_t n_theta);

struct Dipole {
  Point3 position;
  ComplexVec3 polarization;
};

struct Scatterer {
  Point3 position;
  ComplexMat3 polarizability;
};

/// Throws DomainError on a zero polarization.
void validate(const Dipole& d);
/// Throws DomainError on a non-symmetric polarizability.
void validate(const Scatterer& s);

/// Equally spaced angular frequencies in [omega0 − B/2, omega0 + B/2].
class FrequencyBand {
 public:
  /// omega0 > 0, 0 ≤ B < 2 omega0, n_freq == 1 exactly when B == 0.
  FrequencyBand(double omega0, double bandwidth, std::size_t n_freq);

  double omega0() const { return omega0_; }
  double bandwidth() const { return bandwidth_; }
  std::size_t size() const { return omegas_.size(); }
  const std::vector<double>& omegas() const { return omegas_; }
  double omega(std::size_t i) const { return omegas_[i]; }
  /// Trapezoid weights in omega. The degenerate band B = 0 has the single weight 1.
  std::vector<double> trapezoid_weights() const;
  /// Central wavelength 2πc/omega0.
  double central_wavelength(double c) const;

 private:
  double omega0_;
  double bandwidth_;
  std::vector<double> omegas_;
};

/// Band from frequencies in Hz.
FrequencyBand make_band(double f0, double B_hz, std::size_t n_freq);

/// 25 samples for a nonzero bandwidth, 1 otherwise.
std::size_t default_frequency_count(double B_hz);

/// Regular lattice of imaging points with 1 to 3 axes. Points are enumerated in
/// row-major order, the first axis varying slowest.
class ImagingGrid {
 public:
  ImagingGrid(Point3 origin, std::vector<Point3> steps, std::vector<std::size_t> counts);

  static ImagingGrid line(Point3 origin, Point3 step, std::size_t n);
  static ImagingGrid plane(Point3 origin, Point3 step_u, Point3 step_v, std::size_t nu, std::size_t nv);
  /// Lattice whose middle index (count/2 on every axis) sits on `center`.
  static ImagingGrid centered(Point3 center, std::vector<Point3> steps, std::vector<std::size_t> counts);

  const Point3& origin() const { return origin_; }
  const std::vector<Point3>& steps() const { return steps_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t axes() const { return counts_.size(); }
  std::size_t size() const { return size_; }

  Point3 point(std::size_t flat) const;
  std::vector<Point3> points() const;
  /// Multi-index of a flat index; unused axes are 0.
  std::array<std::size_t, 3> unflatten(std::size_t flat) const;
  /// Flat index of the lattice point nearest to p (per-axis rounding, clamped).
  std::size_t nearest(const Point3& p) const;

 private:
  Point3 origin_;
  std::vector<Point3> steps_;
  std::vector<std::size_t> counts_;
  std::size_t size_;
};

}  // namespace emkm
