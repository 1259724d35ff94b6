#include "emkm/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

#include "emkm/error.hpp"

namespace emkm {

double ComplexMat2::frobenius() const {
  double s = 0.0;
  for (const auto& e : m) s += std::norm(e);
  return std::sqrt(s);
}

ComplexMat2 ComplexMat2::inverse() const {
  const cplx det = determinant();
  if (det == cplx{0.0, 0.0}) {
    throw SingularSystem("singular 2x2 block", std::numeric_limits<double>::infinity());
  }
  const cplx inv = 1.0 / det;
  return {{inv * m[3], -inv * m[1], -inv * m[2], inv * m[0]}};
}

double ComplexMat2::condition_number() const {
  // Eigenvalues of AᴴA are l± with l+ + l- = ‖A‖², l+ l- = |det A|².
  const double t = std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]) + std::norm(m[3]);
  const double d = std::abs(determinant());
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
  const double lmax = 0.5 * (t + disc);
  return std::max(1.0, lmax / d);
}

ComplexMat3 ComplexMat3::outer(const Point3& u, const Point3& v) {
  ComplexMat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = u[i] * v[j];
  return r;
}

ComplexMat3 ComplexMat3::transpose() const {
  return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
}

ComplexMat3 ComplexMat3::conj() const {
  ComplexMat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = std::conj(m[i]);
  return r;
}

double ComplexMat3::frobenius() const {
  double s = 0.0;
  for (const auto& e : m) s += std::norm(e);
  return std::sqrt(s);
}

bool ComplexMat3::is_symmetric(double rel_tol) const {
  const double scale = std::max(frobenius(), 1e-300);
  const double d = std::sqrt(std::norm(m[1] - m[3]) + std::norm(m[2] - m[6]) + std::norm(m[5] - m[7]));
  return d <= rel_tol * scale;
}

ComplexMat3 operator*(const ComplexMat3& a, const ComplexMat3& b) {
  ComplexMat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

double relative_difference(const ComplexMat3& a, const ComplexMat3& b) {
  return (a - b).frobenius() / std::max(b.frobenius(), 1e-300);
}

double relative_difference(const ComplexVec3& a, const ComplexVec3& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

namespace {

Eigen::Matrix3cd to_eigen(const ComplexMat3& a) {
  Eigen::Matrix3cd e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = a(i, j);
  return e;
}

}  // namespace

SvdSolution solve_svd(const ComplexMat3& a, const ComplexVec3& b, double max_condition) {
  const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(to_eigen(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  SvdSolution out;
  for (int i = 0; i < 3; ++i) out.singular_values[i] = s(i);
  out.condition = s(2) > 0.0 ? s(0) / s(2) : std::numeric_limits<double>::infinity();
  if (!(out.condition <= max_condition)) {
    throw SingularSystem("3x3 system condition number exceeds limit", out.condition);
  }
  const Eigen::Vector3cd rhs(b[0], b[1], b[2]);
  const Eigen::Vector3cd x = svd.solve(rhs);
  out.x = {{x(0), x(1), x(2)}};
  return out;
}

double condition_number(const ComplexMat3& a) {
  const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return s(2) > 0.0 ? s(0) / s(2) : std::numeric_limits<double>::infinity();
}

}  // namespace emkm
