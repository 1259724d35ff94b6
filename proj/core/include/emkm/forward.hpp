#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emkm/emcore.hpp"
#include "emkm/scene.hpp"

namespace emkm {

/// Passive field samples Π(x_r; k), one ComplexVec3 per (frequency, element).
class PassiveData {
 public:
  PassiveData(std::vector<double> omegas, std::size_t elements);

  std::size_t frequencies() const { return omegas_.size(); }
  std::size_t elements() const { return elements_; }
  const std::vector<double>& omegas() const { return omegas_; }

  ComplexVec3& at(std::size_t f, std::size_t r) { return values_[f * elements_ + r]; }
  const ComplexVec3& at(std::size_t f, std::size_t r) const { return values_[f * elements_ + r]; }
  std::span<const ComplexVec3> frequency(std::size_t f) const {
    return {values_.data() + f * elements_, elements_};
  }
  const std::vector<ComplexVec3>& values() const { return values_; }

  PassiveData& operator+=(const PassiveData& other);

 private:
  std::vector<double> omegas_;
  std::size_t elements_;
  std::vector<ComplexVec3> values_;
};

/// Active array response Π(x_r, x_s; k). Born data is kept in factored form
/// (the scatterer list); measured or perturbed data lives in dense per-frequency
/// (3N)x(3N) row-major blocks with row 3r+a, column 3s+b. The response is the sum
/// of both parts.
class ActiveData {
 public:
  ActiveData(ArrayGeometry array, std::vector<double> omegas, MediumParams medium,
             std::vector<Scatterer> scatterers = {});

  /// Dense response blocks, one (3N)² row-major matrix per frequency.
  static ActiveData from_dense(ArrayGeometry array, std::vector<double> omegas, MediumParams medium,
                               std::vector<std::vector<cplx>> blocks);

  const ArrayGeometry& array() const { return array_; }
  const MediumParams& medium() const { return medium_; }
  const std::vector<double>& omegas() const { return omegas_; }
  std::size_t frequencies() const { return omegas_.size(); }
  std::size_t elements() const { return array_.size(); }

  const std::vector<Scatterer>& scatterers() const { return scatterers_; }
  bool has_dense() const { return !dense_.empty(); }
  const std::vector<cplx>& dense(std::size_t f) const { return dense_.at(f); }

  /// Π(x_r, x_s; k_f).
  ComplexMat3 response(std::size_t f, std::size_t r, std::size_t s) const;
  /// Full (3N)x(3N) response at frequency f.
  std::vector<cplx> materialize(std::size_t f) const;
  /// Adds a (3N)² block to the dense part at frequency f.
  void add_dense(std::size_t f, std::span<const cplx> block);

 private:
  ArrayGeometry array_;
  std::vector<double> omegas_;
  MediumParams medium_;
  std::vector<Scatterer> scatterers_;
  std::vector<std::vector<cplx>> dense_;
};

/// Π(x_r; k) = μω² Σ_j G((x_r,0), y_j; k) p_j for every element and band sample.
PassiveData synthesize_passive(std::span<const Dipole> dipoles, const ArrayGeometry& array, const FrequencyBand& band,
                               const MediumParams& medium);

/// μω² Σ_s w_s G(x, x_s; k) p(x_s) for a dipole distribution p on the array.
ComplexVec3 incident_field(std::span<const ComplexVec3> p_dist, const ArrayGeometry& array, const Point3& x,
                           Wavenumber k, const MediumParams& medium);

/// Born response Σ_n G(x_r,y_n;k) α_n G(y_n,x_s;k).
ActiveData synthesize_active(std::span<const Scatterer> scatterers, const ArrayGeometry& array,
                             const FrequencyBand& band, const MediumParams& medium);

/// Mean signal power p_avg = Σ_f ‖Π_f‖²_F / ((3N)² N_freq).
double average_power(const ActiveData& data);
double average_power(const PassiveData& data);

/// Adds circular complex Gaussian noise with per-entry variance 10^(snr_db/10)·p_avg.
/// Each frequency draws from its own mt19937_64 stream seeded by (seed, frequency
/// index), consuming entries in row-major order, real part before imaginary part.
ActiveData add_noise(const ActiveData& data, double snr_db, std::uint64_t seed);
/// Same recipe applied to the 3N field samples of each frequency.
PassiveData add_noise(const PassiveData& data, double snr_db, std::uint64_t seed);

}  // namespace emkm
