#pragma once

#include <cmath>
#include <numbers>

#include "emkm/linalg.hpp"

namespace emkm::detail {

/// Unchecked dyadic Green coefficients; callers guarantee x != y and k > 0.
struct Dyad {
  double cid_re, cid_im;  // identity coefficient
  double cout_re, cout_im;  // coefficient of r rᵀ
  double rx, ry, rz;
};

inline Dyad dyad(double xx, double xy, double xz, const Point3& y, double k) noexcept {
  Dyad d;
  d.rx = xx - y.x;
  d.ry = xy - y.y;
  d.rz = xz - y.z;
  const double r2 = d.rx * d.rx + d.ry * d.ry + d.rz * d.rz;
  const double r = std::sqrt(r2);
  const double kr = k * r;
  const double s = std::sin(kr);
  const double c = std::cos(kr);
  const double inv = 1.0 / (4.0 * std::numbers::pi * r);
  const double g_re = c * inv;
  const double g_im = s * inv;
  const double ikr2 = 1.0 / (kr * kr);
  // m = (i kr − 1) / (kr)²
  const double m_re = -ikr2;
  const double m_im = kr * ikr2;
  // g (1 + m)
  d.cid_re = g_re * (1.0 + m_re) - g_im * m_im;
  d.cid_im = g_re * m_im + g_im * (1.0 + m_re);
  // −g (1 + 3m) / r²
  const double a_re = 1.0 + 3.0 * m_re;
  const double a_im = 3.0 * m_im;
  const double ir2 = 1.0 / r2;
  d.cout_re = -(g_re * a_re - g_im * a_im) * ir2;
  d.cout_im = -(g_re * a_im + g_im * a_re) * ir2;
  return d;
}

/// Row-major 3x3 entries of the dyad.
inline void dyad_matrix(const Dyad& d, cplx* out) noexcept {
  const double r[3] = {d.rx, d.ry, d.rz};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double rr = r[i] * r[j];
      double re = d.cout_re * rr;
      double im = d.cout_im * rr;
      if (i == j) {
        re += d.cid_re;
        im += d.cid_im;
      }
      out[3 * i + j] = cplx(re, im);
    }
  }
}

}  // namespace emkm::detail
