#pragma once

#include "emkm/linalg.hpp"

namespace emkm {

/// Homogeneous background medium. `mu` is carried through the data model but
/// cancels in every image; it defaults to the normalized value 1.
struct MediumParams {
  double c = 3.0e8;  ///< wave speed (m/s)
  double mu = 1.0;   ///< permeability

  /// Permittivity from c = (eps mu)^(-1/2).
  double epsilon() const { return 1.0 / (c * c * mu); }
  /// Throws DomainError unless c > 0 and mu > 0.
  void validate() const;
};

/// Wavenumber k = omega / c in 1/m. Zero is accepted as the static limit,
/// which only the scalar Green function supports.
class Wavenumber {
 public:
  explicit Wavenumber(double k);
  static Wavenumber from_omega(double omega, const MediumParams& medium);
  static Wavenumber from_frequency(double f_hz, const MediumParams& medium);

  double value() const { return k_; }
  double wavelength() const;
  /// omega = k c.
  double omega(const MediumParams& medium) const { return k_ * medium.c; }

 private:
  double k_;
};

/// m(kr) = (i kr − 1) / (kr)².
cplx green_m(double kr);

/// exp(ik‖x−y‖) / (4π‖x−y‖).
cplx acoustic_green(const Point3& x, const Point3& y, Wavenumber k);

/// Dyadic Green function G [(1+m) I − (1+3m) r̂ r̂ᵀ].
ComplexMat3 dyadic_green(const Point3& x, const Point3& y, Wavenumber k);

struct GreenEigenvalues {
  cplx lambda1;  ///< along r̂
  cplx lambda2;  ///< on the plane orthogonal to r̂ (double)
};

GreenEigenvalues dyadic_green_eigen(Wavenumber k, double r);

/// |(m+1) / (2m)|, the ratio of the eigenvalue moduli.
double green_condition_number(Wavenumber k, double r);

/// Orthogonal projector I − r̂ r̂ᵀ onto the plane orthogonal to x − y.
ComplexMat3 projector(const Point3& x, const Point3& y);

/// Paraxial Green function for y = (y_cr, L + eta):
/// exp(i(kL + k‖x_r‖²/2L − k x_r·y_cr/L + k eta)) / (4πL).
cplx paraxial_green(const Point2& x_r, const Point3& y, Wavenumber k, double L);

/// Compact form G = identity·I + outer·r rᵀ with r = x − y (not normalized).
struct DyadicCoefficients {
  cplx identity;
  cplx outer;
  Point3 r;
  double distance;
  cplx scalar;  ///< acoustic Green function
};

/// Validated coefficient form of dyadic_green.
DyadicCoefficients dyadic_coefficients(const Point3& x, const Point3& y, Wavenumber k);

}  // namespace emkm
