#pragma once

#include <span>
#include <vector>

#include "emkm/emcore.hpp"
#include "emkm/forward.hpp"
#include "emkm/scene.hpp"

namespace emkm {

/// Kirchhoff image with one complex 3-vector per point.
struct VectorImage {
  std::vector<Point3> points;
  std::vector<ComplexVec3> values;
  std::vector<double> omegas;  ///< frequencies integrated into the image
  double bandwidth = 0.0;      ///< rad/s; zero for single-frequency images
};

/// Kirchhoff image with one complex 3x3 matrix per point.
struct TensorImage {
  std::vector<Point3> points;
  std::vector<ComplexMat3> values;
  std::vector<double> omegas;
  double bandwidth = 0.0;
};

/// H(y, y; k_f) on a fixed point set for every band sample.
class DiagonalPsf {
 public:
  DiagonalPsf() = default;
  DiagonalPsf(std::vector<Point3> points, std::vector<double> omegas);

  /// Direct array quadrature at every point and frequency.
  static DiagonalPsf compute(std::span<const Point3> points, const ArrayGeometry& array,
                             std::span<const double> omegas, const MediumParams& medium);

  std::size_t frequencies() const { return omegas_.size(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point3>& points() const { return points_; }
  const std::vector<double>& omegas() const { return omegas_; }
  ComplexMat3& at(std::size_t f, std::size_t p) { return values_[f * points_.size() + p]; }
  const ComplexMat3& at(std::size_t f, std::size_t p) const { return values_[f * points_.size() + p]; }
  /// Σ_f w_f H(y_p, y_p; k_f).
  ComplexMat3 integrated(std::size_t p, std::span<const double> weights) const;

 private:
  std::vector<Point3> points_;
  std::vector<double> omegas_;
  std::vector<ComplexMat3> values_;
};

/// H(y, y2; k) = Σ_r w_r conj(G(x_r, y; k)) G(x_r, y2; k).
ComplexMat3 point_spread(const Point3& y, const Point3& y2, Wavenumber k, const ArrayGeometry& array);

/// Paraxial point-spread matrix Σ_r w_r conj(G̃(x_r,y)) G̃(x_r,y2) P(x_r,y) P(x_r,y2).
ComplexMat3 point_spread_fraunhofer(const Point3& y, const Point3& y2, Wavenumber k, const ArrayGeometry& array,
                                    double L);

/// Single-frequency image (μω²)⁻¹ Σ_r w_r conj(G(x_r, y)) Π(x_r) for band sample f.
/// When `psf` is non-null it receives H(y, y; k_f) for every point (one frequency).
VectorImage passive_image(const PassiveData& data, std::size_t f, std::span<const Point3> points,
                          const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf = nullptr);
VectorImage passive_image(const PassiveData& data, std::size_t f, const ImagingGrid& grid,
                          const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf = nullptr);

/// Trapezoid integral of the single-frequency images over the band.
VectorImage passive_image_band(const PassiveData& data, std::span<const Point3> points, const FrequencyBand& band,
                               const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf = nullptr);
VectorImage passive_image_band(const PassiveData& data, const ImagingGrid& grid, const FrequencyBand& band,
                               const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf = nullptr);

struct FullRecovery {
  ComplexVec3 p;
  double condition = 0.0;
};

/// Solves H p = image_value with a rank-revealing decomposition.
/// Throws SingularSystem above condition number 1e12.
FullRecovery recover_polarization_full(const ComplexVec3& image_value, const ComplexMat3& H);

enum class RecoveryKind { Polarization, Polarizability };

struct CrossRangeSample {
  ComplexVec2 vector;      ///< corrected polarization (passive)
  ComplexMat2 tensor;      ///< corrected polarizability block (active)
  ComplexVec2 raw_vector;  ///< before phase correction
  ComplexMat2 raw_tensor;
  double condition = 1.0;  ///< band block (passive) or worst per-frequency block (active)
  cplx phase_factor = 1.0;
  int pivot = -1;  ///< 0: x / (1,1), 1: y / (2,2), -1: none
  bool singular = false;
};

struct CrossRangeRecovery {
  RecoveryKind kind = RecoveryKind::Polarization;
  std::vector<Point3> points;
  std::vector<CrossRangeSample> samples;
  double delta = 0.0;  ///< absolute pivot threshold used

  /// Euclidean norm of p or Frobenius norm of the 2x2 block.
  double norm(std::size_t i) const;
  std::size_t singular_count() const;
};

/// Solves [Σ_f w_f H_{1:2,1:2}(y,y;k_f)] p = I_{1:2}(y) per point and phase-corrects.
/// `delta_rel` scales the largest pivot magnitude of the image into the threshold δ.
CrossRangeRecovery recover_polarization_crossrange(const VectorImage& band_image, const DiagonalPsf& psf,
                                                   const FrequencyBand& band, double delta_rel = 1e-6);

/// Multiplier conj(p_x)/(|p_x|+δ), or the p_y variant when |p_x| ≤ δ < |p_y|.
/// Writes the pivot index (or -1 when both entries vanish).
cplx vector_phase_factor(const ComplexVec2& p, double delta, int* pivot = nullptr);
cplx tensor_phase_factor(const ComplexMat2& alpha, double delta, int* pivot = nullptr);

ComplexVec2 phase_correct_vector(const ComplexVec2& p, double delta);
ComplexMat2 phase_correct_tensor(const ComplexMat2& alpha, double delta);

/// Single-frequency matrix image Σ_r Σ_s w_r w_s conj(G_r) Π_rs conj(G_s).
TensorImage active_image(const ActiveData& data, std::size_t f, std::span<const Point3> points,
                         const ArrayGeometry& array, DiagonalPsf* psf = nullptr);
TensorImage active_image(const ActiveData& data, std::size_t f, const ImagingGrid& grid,
                         const ArrayGeometry& array, DiagonalPsf* psf = nullptr);

/// Single-frequency images for every band sample of the data.
std::vector<TensorImage> active_images(const ActiveData& data, std::span<const Point3> points,
                                       const ArrayGeometry& array, DiagonalPsf* psf = nullptr);

/// Trapezoid integral of per-frequency images.
TensorImage integrate_band(std::span<const TensorImage> per_frequency, const FrequencyBand& band);

TensorImage active_image_band(const ActiveData& data, std::span<const Point3> points, const FrequencyBand& band,
                              const ArrayGeometry& array, DiagonalPsf* psf = nullptr);
TensorImage active_image_band(const ActiveData& data, const ImagingGrid& grid, const FrequencyBand& band,
                              const ArrayGeometry& array, DiagonalPsf* psf = nullptr);

/// α = (1/B) Σ_f w_f H_f⁻¹ I_f H_f⁻¹ on the cross-range blocks, then phase correction.
CrossRangeRecovery recover_polarizability_crossrange(std::span<const TensorImage> per_frequency,
                                                     const DiagonalPsf& psf, const FrequencyBand& band,
                                                     double delta_rel = 1e-6);

}  // namespace emkm
