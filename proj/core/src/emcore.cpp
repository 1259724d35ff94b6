#include "emkm/emcore.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "emkm/error.hpp"

namespace emkm {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kSeparationGuard = 1e-9;  // in wavelengths

void check_separation(double r, double k) {
  const double limit = k > 0.0 ? kSeparationGuard * 2.0 * std::numbers::pi / k : 0.0;
  if (!(r > limit)) {
    throw SingularEvaluation("Green function evaluated at coincident points (separation " +
                             std::to_string(r) + " m)");
  }
}

void require_positive_k(double k, const char* op) {
  if (!(k > 0.0)) throw DomainError(std::string(op) + " requires k > 0");
}

}  // namespace

void MediumParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("medium wave speed c must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("medium permeability mu must be positive");
}

Wavenumber::Wavenumber(double k) : k_(k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be finite and non-negative");
}

Wavenumber Wavenumber::from_omega(double omega, const MediumParams& medium) {
  medium.validate();
  return Wavenumber(omega / medium.c);
}

Wavenumber Wavenumber::from_frequency(double f_hz, const MediumParams& medium) {
  return from_omega(2.0 * std::numbers::pi * f_hz, medium);
}

double Wavenumber::wavelength() const {
  return k_ > 0.0 ? 2.0 * std::numbers::pi / k_ : std::numeric_limits<double>::infinity();
}

cplx green_m(double kr) { return cplx(-1.0, kr) / (kr * kr); }

cplx acoustic_green(const Point3& x, const Point3& y, Wavenumber k) {
  const double r = (x - y).norm();
  check_separation(r, k.value());
  return std::polar(1.0 / (kFourPi * r), k.value() * r);
}

DyadicCoefficients dyadic_coefficients(const Point3& x, const Point3& y, Wavenumber k) {
  require_positive_k(k.value(), "dyadic_green");
  const Point3 r = x - y;
  const double dist = r.norm();
  check_separation(dist, k.value());
  const double kr = k.value() * dist;
  const cplx g = std::polar(1.0 / (kFourPi * dist), kr);
  const cplx m = green_m(kr);
  return {g * (1.0 + m), -g * (1.0 + 3.0 * m) / (dist * dist), r, dist, g};
}

ComplexMat3 dyadic_green(const Point3& x, const Point3& y, Wavenumber k) {
  const DyadicCoefficients c = dyadic_coefficients(x, y, k);
  ComplexMat3 out = c.outer * ComplexMat3::outer(c.r, c.r);
  for (std::size_t i = 0; i < 3; ++i) out(i, i) += c.identity;
  return out;
}

GreenEigenvalues dyadic_green_eigen(Wavenumber k, double r) {
  require_positive_k(k.value(), "dyadic_green_eigen");
  if (!(r > 0.0)) throw DomainError("dyadic_green_eigen requires r > 0");
  const double kr = k.value() * r;
  const cplx g = std::polar(1.0 / (kFourPi * r), kr);
  const cplx m = green_m(kr);
  return {-2.0 * m * g, (1.0 + m) * g};
}

double green_condition_number(Wavenumber k, double r) {
  require_positive_k(k.value(), "green_condition_number");
  if (!(r > 0.0)) throw DomainError("green_condition_number requires r > 0");
  const cplx m = green_m(k.value() * r);
  return std::abs((m + 1.0) / (2.0 * m));
}

ComplexMat3 projector(const Point3& x, const Point3& y) {
  const Point3 r = x - y;
  const double r2 = r.dot(r);
  if (!(r2 > 0.0)) throw SingularEvaluation("projector evaluated at coincident points");
  ComplexMat3 out = (-1.0 / r2) * ComplexMat3::outer(r, r);
  for (std::size_t i = 0; i < 3; ++i) out(i, i) += 1.0;
  return out;
}

cplx paraxial_green(const Point2& x_r, const Point3& y, Wavenumber k, double L) {
  if (!(L > 0.0)) throw DomainError("paraxial_green requires L > 0");
  const double kv = k.value();
  const double eta = y.z - L;
  const double xr2 = x_r.x * x_r.x + x_r.y * x_r.y;
  const double cross = x_r.x * y.x + x_r.y * y.y;
  const double phase = kv * L + kv * xr2 / (2.0 * L) - kv * cross / L + kv * eta;
  return std::polar(1.0 / (kFourPi * L), phase);
}

}  // namespace emkm
