#include "emkm/scene.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "emkm/error.hpp"

namespace emkm {

ArrayGeometry::ArrayGeometry(ArrayShape shape, double aperture, std::vector<Point2> positions,
                             std::vector<double> weights)
    : shape_(shape), aperture_(aperture), positions_(std::move(positions)), weights_(std::move(weights)) {
  if (positions_.empty()) throw DomainError("array has no elements");
  if (positions_.size() != weights_.size()) throw DomainError("array positions and weights differ in length");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("array weights must be positive");
  }
}

ArrayGeometry ArrayGeometry::custom(std::vector<Point2> positions, std::vector<double> weights) {
  return ArrayGeometry(ArrayShape::Custom, 0.0, std::move(positions), std::move(weights));
}

double ArrayGeometry::area() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

ArrayGeometry make_square_array(double a, std::size_t n) {
  if (!(a > 0.0)) throw DomainError("square array side must be positive");
  if (n < 2) throw DomainError("square array needs n >= 2");
  const double h = a / static_cast<double>(n);
  std::vector<Point2> pos;
  pos.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      pos.push_back({-0.5 * a + (static_cast<double>(i) + 0.5) * h, -0.5 * a + (static_cast<double>(j) + 0.5) * h});
    }
  }
  return ArrayGeometry(ArrayShape::Square, a, std::move(pos), std::vector<double>(n * n, h * h));
}

ArrayGeometry make_disk_array(double a, std::size_t n_r, std::size_t n_theta) {
  if (!(a > 0.0)) throw DomainError("disk array radius must be positive");
  if (n_r < 2 || n_theta < 4) throw DomainError("disk array needs n_r >= 2 and n_theta >= 4");
  const double dr = a / static_cast<double>(n_r);
  const double dt = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
  std::vector<Point2> pos;
  std::vector<double> w;
  pos.reserve(n_r * n_theta);
  w.reserve(n_r * n_theta);
  for (std::size_t i = 0; i < n_r; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double t = static_cast<double>(j) * dt;
      pos.push_back({r * std::cos(t), r * std::sin(t)});
      w.push_back(r * dr * dt);
    }
  }
  return ArrayGeometry(ArrayShape::Disk, a, std::move(pos), std::move(w));
}

void validate(const Dipole& d) {
  if (!(d.polarization.norm() > 0.0)) throw DomainError("dipole polarization must be nonzero");
}

void validate(const Scatterer& s) {
  if (!s.polarizability.is_symmetric(1e-12)) throw DomainError("scatterer polarizability must be symmetric");
}

FrequencyBand::FrequencyBand(double omega0, double bandwidth, std::size_t n_freq)
    : omega0_(omega0), bandwidth_(bandwidth) {
  if (!(omega0 > 0.0)) throw DomainError("central frequency must be positive");
  if (!(bandwidth >= 0.0)) throw DomainError("bandwidth must be non-negative");
  if (!(bandwidth < 2.0 * omega0)) throw DomainError("bandwidth must be below twice the central frequency");
  if (n_freq == 0) throw DomainError("band needs at least one sample");
  if ((n_freq == 1) != (bandwidth == 0.0)) {
    throw DomainError("a band has exactly one sample if and only if its bandwidth is zero");
  }
  omegas_.resize(n_freq);
  if (n_freq == 1) {
    omegas_[0] = omega0;
  } else {
    const double step = bandwidth / static_cast<double>(n_freq - 1);
    for (std::size_t i = 0; i < n_freq; ++i) {
      // symmetric pairs so that omegas_[i] + omegas_[n-1-i] == 2 omega0 up to rounding
      const double offset = (static_cast<double>(i) - 0.5 * static_cast<double>(n_freq - 1)) * step;
      omegas_[i] = omega0 + offset;
    }
  }
}

std::vector<double> FrequencyBand::trapezoid_weights() const {
  const std::size_t n = omegas_.size();
  if (n == 1) return {1.0};
  const double step = bandwidth_ / static_cast<double>(n - 1);
  std::vector<double> w(n, step);
  w.front() = 0.5 * step;
  w.back() = 0.5 * step;
  return w;
}

double FrequencyBand::central_wavelength(double c) const { return 2.0 * std::numbers::pi * c / omega0_; }

FrequencyBand make_band(double f0, double B_hz, std::size_t n_freq) {
  if (!(f0 > 0.0)) throw DomainError("f0 must be positive");
  if (!(B_hz >= 0.0)) throw DomainError("bandwidth must be non-negative");
  if (!(B_hz < 2.0 * f0)) throw DomainError("bandwidth must be below 2 f0 (nonpositive frequencies)");
  const double two_pi = 2.0 * std::numbers::pi;
  return FrequencyBand(two_pi * f0, two_pi * B_hz, n_freq);
}

std::size_t default_frequency_count(double B_hz) { return B_hz > 0.0 ? 25 : 1; }

ImagingGrid::ImagingGrid(Point3 origin, std::vector<Point3> steps, std::vector<std::size_t> counts)
    : origin_(origin), steps_(std::move(steps)), counts_(std::move(counts)), size_(1) {
  if (counts_.empty() || counts_.size() > 3) throw DomainError("imaging grid needs 1 to 3 axes");
  if (steps_.size() != counts_.size()) throw DomainError("imaging grid steps and counts differ in length");
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    if (counts_[a] == 0) throw DomainError("imaging grid axis has zero points");
    if (counts_[a] > 1 && !(steps_[a].norm() > 0.0)) throw DomainError("imaging grid axis has zero step");
    size_ *= counts_[a];
  }
}

ImagingGrid ImagingGrid::line(Point3 origin, Point3 step, std::size_t n) { return ImagingGrid(origin, {step}, {n}); }

ImagingGrid ImagingGrid::plane(Point3 origin, Point3 step_u, Point3 step_v, std::size_t nu, std::size_t nv) {
  return ImagingGrid(origin, {step_u, step_v}, {nu, nv});
}

ImagingGrid ImagingGrid::centered(Point3 center, std::vector<Point3> steps, std::vector<std::size_t> counts) {
  Point3 origin = center;
  for (std::size_t a = 0; a < steps.size() && a < counts.size(); ++a) {
    origin = origin - static_cast<double>(counts[a] / 2) * steps[a];
  }
  return ImagingGrid(origin, std::move(steps), std::move(counts));
}

std::array<std::size_t, 3> ImagingGrid::unflatten(std::size_t flat) const {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (std::size_t a = counts_.size(); a-- > 0;) {
    idx[a] = flat % counts_[a];
    flat /= counts_[a];
  }
  return idx;
}

Point3 ImagingGrid::point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point3 p = origin_;
  for (std::size_t a = 0; a < counts_.size(); ++a) {
    const double t = static_cast<double>(idx[a]);
    p = Point3{p.x + t * steps_[a].x, p.y + t * steps_[a].y, p.z + t * steps_[a].z};
  }
  return p;
}

std::vector<Point3> ImagingGrid::points() const {
  std::vector<Point3> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = point(i);
  return out;
}

std::size_t ImagingGrid::nearest(const Point3& p) const {
  const std::size_t na = counts_.size();
  Eigen::Matrix3d gram = Eigen::Matrix3d::Identity();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  const Point3 d = p - origin_;
  for (std::size_t a = 0; a < na; ++a) {
    rhs(static_cast<int>(a)) = steps_[a].dot(d);
    for (std::size_t b = 0; b < na; ++b) gram(static_cast<int>(a), static_cast<int>(b)) = steps_[a].dot(steps_[b]);
    if (counts_[a] == 1) {
      // degenerate axis: pin its coordinate
      for (std::size_t b = 0; b < 3; ++b) {
        gram(static_cast<int>(a), static_cast<int>(b)) = a == b ? 1.0 : 0.0;
      }
      rhs(static_cast<int>(a)) = 0.0;
    }
  }
  const Eigen::Vector3d t = gram.colPivHouseholderQr().solve(rhs);
  std::size_t flat = 0;
  for (std::size_t a = 0; a < na; ++a) {
    const double ta = std::round(t(static_cast<int>(a)));
    const double hi = static_cast<double>(counts_[a] - 1);
    const std::size_t ia = static_cast<std::size_t>(std::clamp(ta, 0.0, hi));
    flat = flat * counts_[a] + ia;
  }
  return flat;
}

}  // namespace emkm
