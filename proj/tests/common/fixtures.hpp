#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "emkm/emcore.hpp"
#include "emkm/scene.hpp"

namespace emkm::testing {

using namespace std::complex_literals;

// Microwave regime in vacuum: 2.4 GHz, 20-wavelength aperture, 100-wavelength range.
inline constexpr double kC = 3.0e8;
inline constexpr double kF0 = 2.4e9;
inline constexpr double kLambda0 = kC / kF0;
inline constexpr double kAperture = 20.0 * kLambda0;
inline constexpr double kRange = 100.0 * kLambda0;
inline constexpr double kBandwidthHz = 2.4e9;

inline MediumParams vacuum() { return MediumParams{kC, 1.0}; }
inline Wavenumber k0() { return Wavenumber(2.0 * std::numbers::pi * kF0 / kC); }

inline ComplexVec3 single_dipole_polarization() { return {{1.0 + 2.0i, 1.0 - 1.0i, 1.0 + 1.0i}}; }

inline ComplexMat3 sym(cplx a11, cplx a12, cplx a13, cplx a22, cplx a23, cplx a33) {
  return {{a11, a12, a13, a12, a22, a23, a13, a23, a33}};
}

inline std::array<ComplexMat3, 3> three_tensors() {
  return {sym(2.0 + 1.0i, 1.0, 0.0, 2.0 + 2.0i, 0.0, 0.5 + 0.5i),
          sym(2.0 + 2.0i, -1.0i, 0.5, 1.0 + 1.0i, 0.0, 1.0),
          sym(1.0 + 2.0i, 1.0, 0.5i, 3.0 + 2.0i, 0.0, 0.5i)};
}

inline std::array<Point3, 3> three_positions() {
  return {Point3{-7.0 * kLambda0, 7.0 * kLambda0, kRange}, Point3{7.0 * kLambda0, 7.0 * kLambda0, kRange},
          Point3{2.0 * kLambda0, -2.0 * kLambda0, kRange + 7.0 * kLambda0}};
}

inline std::array<ComplexVec3, 3> three_polarizations() {
  return {ComplexVec3{{2.0, 1.0 - 2.0i, 1.0 - 1.0i}}, ComplexVec3{{-2.0, 2.0 - 2.0i, 1.0 + 1.0i}},
          ComplexVec3{{1.0, 2.0 + 2.0i, 1.0 - 1.0i}}};
}

inline ComplexMat3 cube_tensor() { return sym(2.0 + 1.0i, 1.0, 0.0, 2.0 + 2.0i, 0.0, 1.0 + 1.0i); }

/// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  cplx complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  Point3 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
  ComplexVec3 vec3(double scale = 1.0) { return {{complex(scale), complex(scale), complex(scale)}}; }
  ComplexMat3 mat3(double scale = 1.0) {
    ComplexMat3 m;
    for (auto& e : m.m) e = complex(scale);
    return m;
  }
  ComplexMat3 symmetric(double scale = 1.0) {
    const ComplexMat3 m = mat3(scale);
    return 0.5 * (m + m.transpose());
  }
  /// Point in front of the array at roughly the given range.
  Point3 imaging_point(double range, double spread) {
    return {uniform(-spread, spread), uniform(-spread, spread), range + uniform(-spread, spread)};
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace emkm::testing
