#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace emkm {

using cplx = std::complex<double>;

/// Real point or direction in 3D (meters).
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }

  friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point3 operator*(double s, const Point3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Point in the array plane z = 0.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point3 lift() const { return {x, y, 0.0}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct ComplexVec2 {
  std::array<cplx, 2> v{};

  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }
  double norm() const { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

  friend ComplexVec2 operator*(cplx s, const ComplexVec2& a) { return {{s * a.v[0], s * a.v[1]}}; }
  friend ComplexVec2 operator+(const ComplexVec2& a, const ComplexVec2& b) {
    return {{a.v[0] + b.v[0], a.v[1] + b.v[1]}};
  }
  friend ComplexVec2 operator-(const ComplexVec2& a, const ComplexVec2& b) {
    return {{a.v[0] - b.v[0], a.v[1] - b.v[1]}};
  }
  friend bool operator==(const ComplexVec2&, const ComplexVec2&) = default;
};

/// Complex 3-vector: polarizations, fields and passive image values.
struct ComplexVec3 {
  std::array<cplx, 3> v{};

  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }

  /// Euclidean norm of the moduli.
  double norm() const { return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2])); }
  ComplexVec3 conj() const { return {{std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}}; }
  ComplexVec2 head() const { return {{v[0], v[1]}}; }

  ComplexVec3& operator+=(const ComplexVec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  friend ComplexVec3 operator+(ComplexVec3 a, const ComplexVec3& b) { return a += b; }
  friend ComplexVec3 operator-(const ComplexVec3& a, const ComplexVec3& b) {
    return {{a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]}};
  }
  friend ComplexVec3 operator*(cplx s, const ComplexVec3& a) { return {{s * a.v[0], s * a.v[1], s * a.v[2]}}; }
  friend bool operator==(const ComplexVec3&, const ComplexVec3&) = default;
};

/// Complex 2x2 matrix, row-major.
struct ComplexMat2 {
  std::array<cplx, 4> m{};

  cplx& operator()(std::size_t i, std::size_t j) { return m[2 * i + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m[2 * i + j]; }

  static ComplexMat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
  cplx determinant() const { return m[0] * m[3] - m[1] * m[2]; }
  double frobenius() const;
  ComplexMat2 transpose() const { return {{m[0], m[2], m[1], m[3]}}; }
  /// Explicit inverse; throws SingularSystem when the determinant vanishes.
  ComplexMat2 inverse() const;
  /// Spectral condition number sigma_max / sigma_min (infinity when singular).
  double condition_number() const;

  ComplexMat2& operator+=(const ComplexMat2& o) {
    for (std::size_t i = 0; i < 4; ++i) m[i] += o.m[i];
    return *this;
  }
  friend ComplexMat2 operator+(ComplexMat2 a, const ComplexMat2& b) { return a += b; }
  friend ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b) {
    return {{a.m[0] - b.m[0], a.m[1] - b.m[1], a.m[2] - b.m[2], a.m[3] - b.m[3]}};
  }
  friend ComplexMat2 operator*(cplx s, const ComplexMat2& a) {
    return {{s * a.m[0], s * a.m[1], s * a.m[2], s * a.m[3]}};
  }
  friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
    return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
             a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
  }
  friend ComplexVec2 operator*(const ComplexMat2& a, const ComplexVec2& x) {
    return {{a.m[0] * x.v[0] + a.m[1] * x.v[1], a.m[2] * x.v[0] + a.m[3] * x.v[1]}};
  }
  friend bool operator==(const ComplexMat2&, const ComplexMat2&) = default;
};

/// Complex 3x3 matrix, row-major: Green tensors, point-spread matrices, polarizabilities.
struct ComplexMat3 {
  std::array<cplx, 9> m{};

  cplx& operator()(std::size_t i, std::size_t j) { return m[3 * i + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m[3 * i + j]; }

  static ComplexMat3 identity() { return diagonal(1.0, 1.0, 1.0); }
  static ComplexMat3 diagonal(cplx a, cplx b, cplx c) { return {{a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, c}}; }
  /// u vᵀ for real u, v.
  static ComplexMat3 outer(const Point3& u, const Point3& v);

  ComplexMat3 transpose() const;
  ComplexMat3 conj() const;
  ComplexMat3 adjoint() const { return conj().transpose(); }
  cplx trace() const { return m[0] + m[4] + m[8]; }
  double frobenius() const;
  /// Upper-left 2x2 (cross-range) block.
  ComplexMat2 block12() const { return {{m[0], m[1], m[3], m[4]}}; }
  /// Mᵀ = M within `rel_tol` relative to the Frobenius norm.
  bool is_symmetric(double rel_tol = 1e-12) const;

  ComplexMat3& operator+=(const ComplexMat3& o) {
    for (std::size_t i = 0; i < 9; ++i) m[i] += o.m[i];
    return *this;
  }
  friend ComplexMat3 operator+(ComplexMat3 a, const ComplexMat3& b) { return a += b; }
  friend ComplexMat3 operator-(const ComplexMat3& a, const ComplexMat3& b) {
    ComplexMat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
  }
  friend ComplexMat3 operator*(cplx s, const ComplexMat3& a) {
    ComplexMat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
  }
  friend ComplexMat3 operator*(const ComplexMat3& a, const ComplexMat3& b);
  friend ComplexVec3 operator*(const ComplexMat3& a, const ComplexVec3& x) {
    return {{a.m[0] * x.v[0] + a.m[1] * x.v[1] + a.m[2] * x.v[2],
             a.m[3] * x.v[0] + a.m[4] * x.v[1] + a.m[5] * x.v[2],
             a.m[6] * x.v[0] + a.m[7] * x.v[1] + a.m[8] * x.v[2]}};
  }
  friend bool operator==(const ComplexMat3&, const ComplexMat3&) = default;
};

/// ‖a − b‖ / ‖b‖ with a 1e-300 floor on the denominator.
double relative_difference(const ComplexMat3& a, const ComplexMat3& b);
double relative_difference(const ComplexVec3& a, const ComplexVec3& b);

/// Result of the rank-revealing 3x3 solve.
struct SvdSolution {
  ComplexVec3 x;
  std::array<double, 3> singular_values{};  ///< descending
  double condition = 0.0;
};

/// Solves A x = b through a full singular value decomposition.
/// Throws SingularSystem when sigma_max / sigma_min exceeds `max_condition`.
SvdSolution solve_svd(const ComplexMat3& a, const ComplexVec3& b, double max_condition = 1e12);

/// Spectral condition number of a 3x3 matrix (infinity when singular).
double condition_number(const ComplexMat3& a);

}  // namespace emkm
