#include "emkm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emkm/error.hpp"

namespace emkm {

std::vector<double> magnitudes(const VectorImage& image) {
  std::vector<double> out(image.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = image.values[i].norm();
  return out;
}

std::vector<double> magnitudes(const TensorImage& image) {
  std::vector<double> out(image.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = image.values[i].frobenius();
  return out;
}

std::vector<double> magnitudes(const CrossRangeRecovery& recovery) {
  std::vector<double> out(recovery.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = recovery.norm(i);
  return out;
}

std::vector<ProfileSample> profile(const ImagingGrid& grid, std::span<const double> values, const LineSpec& line) {
  if (line.count == 0) throw DomainError("profile line has no samples");
  if (values.size() != grid.size()) throw DomainError("profile values do not match the grid");
  const double h = line.step.norm();
  std::vector<ProfileSample> out(line.count);
  for (std::size_t i = 0; i < line.count; ++i) {
    const double t = static_cast<double>(i);
    const Point3 p = line.origin + t * line.step;
    out[i] = {t * h, values[grid.nearest(p)]};
  }
  return out;
}

std::vector<ProfileSample> profile(std::span<const Point3> line_points, std::span<const double> values) {
  if (line_points.empty()) throw DomainError("profile line has no samples");
  if (values.size() != line_points.size()) throw DomainError("profile values do not match the line");
  const Point3 dir = line_points.back() - line_points.front();
  const double len = dir.norm();
  std::vector<ProfileSample> out(line_points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Point3 d = line_points[i] - line_points.front();
    out[i] = {len > 0.0 ? d.dot(dir) / len : 0.0, values[i]};
  }
  return out;
}

std::size_t peak_index(std::span<const ProfileSample> profile) {
  if (profile.empty()) throw DomainError("empty profile");
  std::size_t best = 0;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].magnitude > profile[best].magnitude) best = i;
  }
  return best;
}

namespace {

/// Position of the first minimum (or 10% crossing) walking from the peak in direction dir.
double bracket(std::span<const ProfileSample> pr, std::size_t peak, int dir) {
  const double peak_val = pr[peak].magnitude;
  const auto n = static_cast<long>(pr.size());
  for (long i = static_cast<long>(peak) + dir; i + dir >= 0 && i + dir < n; i += dir) {
    if (pr[i + dir].magnitude > pr[i].magnitude) return pr[i].position;
  }
  const double level = 0.1 * peak_val;
  for (long i = static_cast<long>(peak) + dir; i >= 0 && i < n; i += dir) {
    if (pr[i].magnitude < level) {
      const auto& a = pr[i - dir];
      const auto& b = pr[i];
      const double t = (a.magnitude - level) / (a.magnitude - b.magnitude);
      return a.position + t * (b.position - a.position);
    }
  }
  throw DomainError("focal spot is not bracketed inside the profile");
}

}  // namespace

double focal_width(std::span<const ProfileSample> profile) {
  if (profile.size() < 3) throw DomainError("profile too short for a width");
  const std::size_t peak = peak_index(profile);
  if (peak == 0 || peak + 1 == profile.size()) throw DomainError("profile peak on the boundary");
  const double left = bracket(profile, peak, -1);
  const double right = bracket(profile, peak, +1);
  return 0.5 * std::abs(right - left);
}

EllipseParams ellipse_of(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double half = 0.5 * (a - c);
  const double d = std::hypot(half, b);
  const double e_plus = mean + d;
  const double e_minus = mean - d;
  const double theta_plus = 0.5 * std::atan2(2.0 * b, a - c);
  const double tol = 1e-12 * std::max({std::abs(e_plus), std::abs(e_minus), 1e-300});
  EllipseParams out;
  if (std::abs(e_plus) + tol >= std::abs(e_minus)) {
    out.major_eig = e_plus;
    out.minor_eig = e_minus;
    out.angle = theta_plus;
  } else {
    out.major_eig = e_minus;
    out.minor_eig = e_plus;
    out.angle = theta_plus + 0.5 * std::numbers::pi;
    if (out.angle > 0.5 * std::numbers::pi) out.angle -= std::numbers::pi;
  }
  if (out.angle <= -0.5 * std::numbers::pi) out.angle += std::numbers::pi;
  out.major = std::abs(out.major_eig);
  out.minor = std::abs(out.minor_eig);
  return out;
}

EllipseParams ellipse_of(const std::array<double, 4>& m) {
  const double scale = std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2]), std::abs(m[3]), 1e-300});
  if (std::abs(m[1] - m[2]) > 1e-10 * scale) throw DomainError("ellipse_of requires a symmetric matrix");
  return ellipse_of(m[0], 0.5 * (m[1] + m[2]), m[3]);
}

std::array<double, 4> reconstruct(const EllipseParams& e) {
  const double c = std::cos(e.angle);
  const double s = std::sin(e.angle);
  return {e.major_eig * c * c + e.minor_eig * s * s, (e.major_eig - e.minor_eig) * c * s,
          (e.major_eig - e.minor_eig) * c * s, e.major_eig * s * s + e.minor_eig * c * c};
}

std::array<double, 4> real_part(const ComplexMat2& m) {
  return {m.m[0].real(), m.m[1].real(), m.m[2].real(), m.m[3].real()};
}

std::array<double, 4> imag_part(const ComplexMat2& m) {
  return {m.m[0].imag(), m.m[1].imag(), m.m[2].imag(), m.m[3].imag()};
}

DiskPsfReport validate_disk_psf(const ArrayGeometry& disk, const Point3& y_star, Wavenumber k, double L) {
  if (disk.shape() != ArrayShape::Disk) throw DomainError("validate_disk_psf requires a disk array");
  if (!(L > 0.0)) throw DomainError("reference range must be positive");
  const double a = disk.aperture();
  DiskPsfReport rep;
  rep.normalized = (16.0 * std::numbers::pi * L * L / (a * a)) * point_spread_fraunhofer(y_star, y_star, k, disk, L);
  rep.discrepancy = (rep.normalized - ComplexMat3::diagonal(1.0, 1.0, 0.0)).frobenius();
  rep.aperture_scale = a * a / (L * L);
  rep.offset_scale = std::hypot(y_star.x, y_star.y) / L;
  return rep;
}

FraunhoferReport validate_fraunhofer(const ArrayGeometry& array, std::span<const Point3> window, Wavenumber k,
                                     double L) {
  if (!(L > 0.0)) throw DomainError("reference range must be positive");
  const double kv = k.value();
  FraunhoferReport rep;
  double b = 0.0;
  for (const auto& y : window) b = std::max(b, std::hypot(y.x, y.y));
  double a = array.aperture();
  if (a == 0.0) {
    for (const auto& x : array.positions()) a = std::max(a, std::hypot(x.x, x.y));
  }
  for (const auto& x : array.positions()) {
    const double xr2 = x.x * x.x + x.y * x.y;
    for (const auto& y : window) {
      const double dist = (x.lift() - y).norm();
      const double eta = y.z - L;
      const double parax = kv * L + kv * xr2 / (2.0 * L) - kv * (x.x * y.x + x.y * y.y) / L + kv * eta;
      rep.max_phase_error = std::max(rep.max_phase_error, std::abs(kv * dist - parax));
      rep.max_amplitude_error = std::max(rep.max_amplitude_error, std::abs(L / dist - 1.0));
    }
  }
  rep.theta_b = kv * b * b / L;
  rep.aperture_term = kv * a * a * a * a / (L * L * L);
  return rep;
}

}  // namespace emkm
