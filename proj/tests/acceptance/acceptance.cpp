// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "common/fixtures.hpp"
#include "emkm/analysis.hpp"
#include "emkm/cli/config.hpp"
#include "emkm/error.hpp"
#include "emkm/forward.hpp"
#include "emkm/imaging.hpp"

namespace fs = std::filesystem;
using namespace emkm;
using namespace emkm::testing;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return std::abs(a);
}

// Distance between undirected axes.
double axis_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kPi);
  return std::min(d, kPi - d);
}

// Major-axis angle when the semi-axes are distinct; for nearly equal magnitudes
// the major axis is not defined, so the direction of the largest signed
// eigenvalue is compared instead.
double orientation_error(const EllipseParams& got, const EllipseParams& truth) {
  if (truth.major - truth.minor >= 0.1 * truth.major) return axis_distance(got.angle, truth.angle);
  auto top = [](const EllipseParams& e) { return e.major_eig >= e.minor_eig ? e.angle : e.angle + kPi / 2.0; };
  return axis_distance(top(got), top(truth));
}

std::array<double, 4> symmetrized(const std::array<double, 4>& m) {
  const double off = 0.5 * (m[1] + m[2]);
  return {m[0], off, off, m[3]};
}

struct TensorAngles {
  double re = 0.0;
  double im = 0.0;
};

TensorAngles tensor_orientation_errors(const ComplexMat2& recovered, const ComplexMat2& truth) {
  const ComplexMat2 t = phase_correct_tensor(truth, 0.0);
  return {orientation_error(ellipse_of(symmetrized(real_part(recovered))), ellipse_of(real_part(t))),
          orientation_error(ellipse_of(symmetrized(imag_part(recovered))), ellipse_of(imag_part(t)))};
}

std::vector<Point3> line_points(Point3 center, Point3 step, int half) {
  std::vector<Point3> pts;
  for (int i = -half; i <= half; ++i) pts.push_back(center + static_cast<double>(i) * step);
  return pts;
}

std::vector<double> unwrap(std::vector<double> phase) {
  for (std::size_t i = 1; i < phase.size(); ++i) {
    while (phase[i] - phase[i - 1] > kPi) phase[i] -= 2.0 * kPi;
    while (phase[i] - phase[i - 1] < -kPi) phase[i] += 2.0 * kPi;
  }
  return phase;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

Outcome disk_psf_asymptotics() {
  Clock clock;
  const Wavenumber k = k0();
  std::vector<double> scale, disc;
  double a = kAperture;
  for (int i = 0; i < 4; ++i, a *= 0.5) {
    const auto disk = make_disk_array(a, 64, 128);
    const auto rep = validate_disk_psf(disk, {0.0, 0.0, kRange}, k, kRange);
    scale.push_back(std::log(rep.aperture_scale));
    disc.push_back(rep.discrepancy);
  }
  bool halves = true;
  for (std::size_t i = 1; i < disc.size(); ++i) halves = halves && disc[i] <= 0.5 * disc[i - 1];
  std::vector<double> log_disc;
  for (double d : disc) log_disc.push_back(std::log(d));
  // aperture_scale is a²/L², so the slope in a/L is twice the fitted one.
  const double slope = 2.0 * fit_slope(scale, log_disc);
  const double t = clock.seconds();
  const bool pass = disc[0] <= 0.1 && halves && std::abs(slope - 2.0) <= 0.3 && t < 10.0;
  return {pass, fmt("discrepancy %.4g (<= 0.1), ratios %.2f %.2f %.2f, slope %.3f (2 +- 0.3), %.2f s", disc[0],
                    disc[0] / disc[1], disc[1] / disc[2], disc[2] / disc[3], slope, t)};
}

struct PassiveSetup {
  ArrayGeometry array = make_square_array(kAperture, 40);
  MediumParams medium = vacuum();
  Dipole dipole{{0.0, 0.0, kRange}, single_dipole_polarization()};
};

Outcome passive_crossrange_recovery() {
  Clock clock;
  PassiveSetup s;
  const auto band = make_band(kF0, 0.0, 1);
  const auto data = synthesize_passive(std::span(&s.dipole, 1), s.array, band, s.medium);
  const double h = 20.0 * kLambda0 / 64.0;
  const auto grid = ImagingGrid::centered(s.dipole.position, {{h, 0, 0}, {0, h, 0}}, {64, 64});
  DiagonalPsf psf;
  const auto image = passive_image_band(data, grid, band, s.array, s.medium, &psf);
  const auto rec = recover_polarization_crossrange(image, psf, band);
  const std::size_t cell = grid.nearest(s.dipole.position);
  const double norm = rec.norm(cell);
  const ComplexVec2 got = rec.samples[cell].vector;
  const ComplexVec2 truth = phase_correct_vector(s.dipole.polarization.head(), 0.0);
  auto re_angle = [](const ComplexVec2& p) { return std::atan2(p[1].real(), p[0].real()); };
  auto im_angle = [](const ComplexVec2& p) { return std::atan2(p[1].imag(), p[0].imag()); };
  const double d_re = wrap_angle(re_angle(got) - re_angle(truth));
  const double d_im = wrap_angle(im_angle(got) - im_angle(truth));
  const double t = clock.seconds();
  const bool pass = norm >= 2.3 && norm <= 2.7 && d_re <= 10 * kDeg && d_im <= 10 * kDeg && t < 60.0;
  return {pass, fmt("|p| = %.4f in [2.3, 2.7], Re angle err %.2f deg, Im angle err %.2f deg (<= 10), %.2f s", norm,
                    d_re / kDeg, d_im / kDeg, t)};
}

Outcome ill_conditioning() {
  const Point3 y{0.0, 0.0, kRange};
  std::vector<double> full;
  double ratio = 0.0;
  double a = kAperture;
  for (int i = 0; i < 4; ++i, a *= 0.5) {
    const auto H = point_spread(y, y, k0(), make_square_array(a, 40));
    full.push_back(condition_number(H));
    if (i == 0) ratio = full[0] / H.block12().condition_number();
  }
  bool monotone = true;
  for (std::size_t i = 1; i < full.size(); ++i) monotone = monotone && full[i] > full[i - 1];
  return {ratio >= 100.0 && monotone,
          fmt("cond full / cond block = %.1f (>= 100); cond full over halvings %.3g %.3g %.3g %.3g", ratio, full[0],
              full[1], full[2], full[3])};
}

Outcome resolution() {
  PassiveSetup s;
  const Point3 y = s.dipole.position;
  const auto single = make_band(kF0, 0.0, 1);
  const auto wide = make_band(kF0, kBandwidthHz, 25);

  // Cross-range width of the recovered |p| at one frequency.
  const auto x_line = line_points(y, {kLambda0 / 8.0, 0, 0}, 120);
  const auto d1 = synthesize_passive(std::span(&s.dipole, 1), s.array, single, s.medium);
  DiagonalPsf psf1;
  const auto img1 = passive_image_band(d1, x_line, single, s.array, s.medium, &psf1);
  const auto rec1 = recover_polarization_crossrange(img1, psf1, single);
  const double w_cross = focal_width(profile(x_line, magnitudes(rec1))) / kLambda0;

  // Range width of the recovered |p| and the image profile over the band.
  const auto z_line = line_points(y, {0, 0, kLambda0 / 32.0}, 64);
  const auto d2 = synthesize_passive(std::span(&s.dipole, 1), s.array, wide, s.medium);
  DiagonalPsf psf2;
  const auto img2 = passive_image_band(d2, z_line, wide, s.array, s.medium, &psf2);
  const auto rec2 = recover_polarization_crossrange(img2, psf2, wide);
  const double w_range = focal_width(profile(z_line, magnitudes(rec2))) / kLambda0;

  const auto img_mag = magnitudes(img2);
  const double B = wide.bandwidth();
  double suv = 0, suu = 0, svv = 0;
  for (std::size_t i = 0; i < z_line.size(); ++i) {
    const double eta = z_line[i].z - y.z;
    if (std::abs(eta) >= kLambda0) continue;
    const double x = B * eta / (2.0 * s.medium.c);
    const double sinc = x == 0.0 ? 1.0 : std::abs(std::sin(x) / x);
    suv += img_mag[i] * sinc;
    suu += img_mag[i] * img_mag[i];
    svv += sinc * sinc;
  }
  const double corr = suv / std::sqrt(suu * svv);

  // Active range width against the passive one on the same line.
  const Scatterer sc{y, three_tensors()[0]};
  const auto act = synthesize_active(std::span(&sc, 1), s.array, wide, s.medium);
  const auto act_img = active_image_band(act, z_line, wide, s.array);
  const double w_act = focal_width(profile(z_line, magnitudes(act_img)));
  const double w_pas = focal_width(profile(z_line, img_mag));
  const double null_ratio = w_act / w_pas;

  const bool pass = std::abs(w_cross - 5.0) <= 0.25 * 5.0 && std::abs(w_range - 1.0) <= 0.25 && corr >= 0.95 &&
                    std::abs(null_ratio - 0.5) <= 0.15 * 0.5;
  return {pass, fmt("cross-range width %.3f l0 (5 +- 25%%), range width %.3f l0 (1 +- 25%%), sinc correlation "
                    "%.4f (>= 0.95), active/passive null ratio %.3f (0.5 +- 15%%)",
                    w_cross, w_range, corr, null_ratio)};
}

Outcome phase_oscillation() {
  PassiveSetup s;
  const Point3 y = s.dipole.position;
  const auto band = make_band(kF0, kBandwidthHz, 25);
  const auto z_line = line_points(y, {0, 0, kLambda0 / 32.0}, 48);

  auto measured_period = [&](const CrossRangeRecovery& rec, double half_window, auto entry) {
    std::vector<double> eta, phase;
    for (std::size_t i = 0; i < z_line.size(); ++i) {
      const double e = z_line[i].z - y.z;
      if (std::abs(e) > half_window) continue;
      eta.push_back(e);
      phase.push_back(std::arg(entry(rec.samples[i])));
    }
    return 2.0 * kPi / std::abs(fit_slope(eta, unwrap(phase)));
  };
  // Largest |arg| of the corrected pivot over the focal spot.
  auto residual_phase = [&](const CrossRangeRecovery& rec, double half_window) {
    double worst = 0.0;
    for (std::size_t i = 0; i < z_line.size(); ++i) {
      if (std::abs(z_line[i].z - y.z) >= half_window) continue;
      const auto& smp = rec.samples[i];
      if (smp.pivot < 0) continue;
      const cplx v = rec.kind == RecoveryKind::Polarization ? smp.vector[smp.pivot]
                                                             : smp.tensor(smp.pivot, smp.pivot);
      if (std::abs(v) <= rec.delta) continue;
      worst = std::max(worst, std::abs(std::arg(v)));
    }
    return worst;
  };

  const auto pd = synthesize_passive(std::span(&s.dipole, 1), s.array, band, s.medium);
  DiagonalPsf ppsf;
  const auto pimg = passive_image_band(pd, z_line, band, s.array, s.medium, &ppsf);
  const auto prec = recover_polarization_crossrange(pimg, ppsf, band);
  const double p_period =
      measured_period(prec, kLambda0 / 2.0, [](const CrossRangeSample& c) { return c.raw_vector[0]; }) / kLambda0;
  const double p_resid = residual_phase(prec, kLambda0);

  const Scatterer sc{y, three_tensors()[0]};
  const auto ad = synthesize_active(std::span(&sc, 1), s.array, band, s.medium);
  DiagonalPsf apsf;
  const auto per_f = active_images(ad, z_line, s.array, &apsf);
  const auto arec = recover_polarizability_crossrange(per_f, apsf, band);
  const double a_period =
      measured_period(arec, kLambda0 / 4.0, [](const CrossRangeSample& c) { return c.raw_tensor(0, 0); }) /
      kLambda0;
  const double a_resid = residual_phase(arec, kLambda0 / 2.0);

  const bool pass = std::abs(p_period - 1.0) <= 0.05 && std::abs(a_period - 0.5) <= 0.05 * 0.5 &&
                    p_resid <= 1e-8 && a_resid <= 1e-8;
  return {pass, fmt("passive period %.4f l0 (1 +- 5%%), active period %.4f l0 (0.5 +- 5%%), corrected pivot "
                    "phase %.2e / %.2e rad (<= 1e-8)",
                    p_period, a_period, p_resid, a_resid)};
}

Outcome active_three_scatterers() {
  const auto array = make_square_array(kAperture, 40);
  const auto band = make_band(kF0, kBandwidthHz, 25);
  const auto pos = three_positions();
  const auto alpha = three_tensors();
  std::vector<Scatterer> scene;
  for (int i = 0; i < 3; ++i) scene.push_back({pos[i], alpha[i]});
  const auto data = synthesize_active(scene, array, band, vacuum());
  const std::vector<Point3> cells(pos.begin(), pos.end());
  DiagonalPsf psf;
  const auto per_f = active_images(data, cells, array, &psf);
  const auto rec = recover_polarizability_crossrange(per_f, psf, band);

  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double truth = alpha[i].block12().frobenius();
    const double norm = rec.norm(i);
    const auto err = tensor_orientation_errors(rec.samples[i].tensor, alpha[i].block12());
    pass = pass && std::abs(norm - truth) <= 0.15 * truth && err.re <= 10 * kDeg && err.im <= 10 * kDeg;
    detail += fmt("%s#%d |a| %.3f vs %.3f, angle err Re %.2f Im %.2f deg", i ? "; " : "", i + 1, norm, truth,
                  err.re / kDeg, err.im / kDeg);
  }
  return {pass, detail + " (15%, 10 deg)"};
}

Outcome noise_robustness() {
  // Reduced element count keeps the dense (3N)² noise blocks small; aperture,
  // range and bandwidth are unchanged so the resolution cell is the same.
  const auto array = make_square_array(kAperture, 10);
  const auto band = make_band(kF0, kBandwidthHz, 13);
  const auto pos = three_positions();
  const auto alpha = three_tensors();
  std::vector<Scatterer> scene;
  for (int i = 0; i < 3; ++i) scene.push_back({pos[i], alpha[i]});
  const auto clean = synthesize_active(scene, array, band, vacuum());

  auto recovered_norms = [&](const ActiveData& data, const std::vector<Point3>& pts) {
    DiagonalPsf psf;
    const auto per_f = active_images(data, pts, array, &psf);
    return magnitudes(recover_polarizability_crossrange(per_f, psf, band));
  };

  // Cross-range search plane at each scatterer depth, then a range line through the found peak.
  const int half_plane = 8;
  std::vector<Point3> plane;
  for (int i = 0; i < 3; ++i)
    for (int u = -half_plane; u <= half_plane; ++u)
      for (int v = -half_plane; v <= half_plane; ++v)
        plane.push_back(pos[i] + Point3{u * kLambda0, v * kLambda0, 0.0});
  const std::size_t per_plane = plane.size() / 3;

  int good_runs = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto noisy = add_noise(clean, 10.0, seed);
    const auto pn = recovered_norms(noisy, plane);
    std::vector<Point3> lines;
    std::vector<Point3> found;
    for (int i = 0; i < 3; ++i) {
      const auto first = pn.begin() + static_cast<std::ptrdiff_t>(i * per_plane);
      const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(per_plane)) - pn.begin();
      found.push_back(plane[best]);
      for (const auto& p : line_points(plane[best], {0, 0, kLambda0 / 8.0}, 16)) lines.push_back(p);
    }
    const auto ln = recovered_norms(noisy, lines);
    const std::size_t per_line = lines.size() / 3;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const auto first = ln.begin() + static_cast<std::ptrdiff_t>(i * per_line);
      const auto best = std::max_element(first, first + static_cast<std::ptrdiff_t>(per_line)) - ln.begin();
      const double cross = std::hypot(found[i].x - pos[i].x, found[i].y - pos[i].y);
      const double range = std::abs(lines[best].z - pos[i].z);
      if (cross > 5.0 * kLambda0 || range > kLambda0) {
        ok = false;
        misses += fmt(" seed %d #%d", static_cast<int>(seed), i + 1);
      }
    }
    good_runs += ok ? 1 : 0;
  }
  return {good_runs >= 8, fmt("%d/10 runs locate all three scatterers (>= 8)%s", good_runs,
                              misses.empty() ? "" : (";" + misses).c_str())};
}

Outcome extended_target() {
  const auto array = make_square_array(kAperture, 12);
  const auto band = make_band(kF0, kBandwidthHz, 17);
  const ComplexMat3 alpha = cube_tensor();
  const Point3 center{0.0, 0.0, kRange};
  const double side = 5.0 * kLambda0;
  const double h = kLambda0 / 4.0;
  const int n = static_cast<int>(std::floor(side / h + 1e-9)) + 1;
  std::vector<Scatterer> cube;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        cube.push_back({center + Point3{(i - n / 2) * h, (j - n / 2) * h, (l - n / 2) * h}, alpha});
  const auto data = synthesize_active(cube, array, band, vacuum());
  const auto z_line = line_points(center, {0, 0, kLambda0 / 8.0}, 28);
  DiagonalPsf psf;
  const auto per_f = active_images(data, z_line, array, &psf);
  const auto rec = recover_polarizability_crossrange(per_f, psf, band);
  const auto mags = magnitudes(rec);

  const std::size_t mid = z_line.size() / 2;
  bool pass = true;
  std::string detail = fmt("%zu scatterers, mid %.4g", cube.size(), mags[mid]);
  for (const double face : {-side / 2.0, side / 2.0}) {
    std::size_t best = mid;
    for (std::size_t i = 0; i < z_line.size(); ++i) {
      const double e = z_line[i].z - center.z;
      if (std::abs(e - face) <= kLambda0 / 2.0 + 1e-12 && mags[i] > mags[best]) best = i;
    }
    const auto err = tensor_orientation_errors(rec.samples[best].tensor, alpha.block12());
    const double ratio = mags[best] / mags[mid];
    pass = pass && ratio >= 2.0 && err.re <= 15 * kDeg && err.im <= 15 * kDeg;
    detail += fmt("; face %+.2f l0: %.4g (x%.1f, >= 2), angle err Re %.2f Im %.2f deg (<= 15)", face / kLambda0,
                  mags[best], ratio, err.re / kDeg, err.im / kDeg);
  }
  return {pass, detail};
}

// Independent evaluation straight from the definitions.
ComplexMat3 brute_green(const Point3& x, const Point3& y, double k) {
  const double r[3] = {x.x - y.x, x.y - y.y, x.z - y.z};
  const double R = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const cplx ikr(0.0, k * R);
  const cplx m = (ikr - 1.0) / ((k * R) * (k * R));
  const cplx g = std::exp(ikr) / (4.0 * kPi * R);
  ComplexMat3 G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = g * ((i == j ? 1.0 + m : 0.0) - (1.0 + 3.0 * m) * r[i] * r[j] / (R * R));
  return G;
}

Outcome oracle_equivalence() {
  Gen gen(20240917);
  std::vector<Point2> pos;
  std::vector<double> w;
  for (int r = 0; r < 3; ++r) {
    pos.push_back({gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0)});
    w.push_back(gen.uniform(0.2, 1.0));
  }
  const auto array = ArrayGeometry::custom(pos, w);
  const auto band = make_band(kF0, 0.4e9, 2);
  const auto medium = vacuum();
  std::vector<Scatterer> scat;
  std::vector<Dipole> dip;
  for (int n = 0; n < 2; ++n) {
    const Point3 p = gen.imaging_point(5.0, 0.5);
    scat.push_back({p, gen.symmetric(2.0)});
    dip.push_back({p, gen.vec3(2.0)});
  }
  const std::vector<Point3> ys = {gen.imaging_point(5.0, 0.5), gen.imaging_point(5.0, 0.5)};

  const auto pdata = synthesize_passive(dip, array, band, medium);
  const auto adata = synthesize_active(scat, array, band, medium);
  std::vector<std::vector<cplx>> blocks;
  for (std::size_t f = 0; f < band.size(); ++f) blocks.push_back(adata.materialize(f));
  const auto dense = ActiveData::from_dense(array, band.omegas(), medium, blocks);
  const auto factored_images = active_images(adata, ys, array);
  const auto dense_images = active_images(dense, ys, array);

  double worst_p = 0.0, worst_a = 0.0;
  for (std::size_t f = 0; f < band.size(); ++f) {
    const double omega = band.omega(f);
    const double k = omega / medium.c;
    const double muw2 = medium.mu * omega * omega;
    const auto pimg = passive_image(pdata, f, ys, array, medium);
    for (std::size_t p = 0; p < ys.size(); ++p) {
      ComplexVec3 ref;
      for (int r = 0; r < 3; ++r) {
        const Point3 xr = pos[r].lift();
        cplx field[3] = {0.0, 0.0, 0.0};
        for (const auto& d : dip) {
          const auto G = brute_green(xr, d.position, k);
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) field[a] += muw2 * G(a, b) * d.polarization[b];
        }
        const auto Gy = brute_green(xr, ys[p], k);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) ref[a] += w[r] * std::conj(Gy(a, b)) * field[b] / muw2;
      }
      worst_p = std::max(worst_p, relative_difference(pimg.values[p], ref));

      ComplexMat3 aref;
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) {
          const Point3 xr = pos[r].lift(), xs = pos[s].lift();
          ComplexMat3 pi_rs;
          for (const auto& sc : scat) {
            const auto Gr = brute_green(xr, sc.position, k);
            const auto Gs = brute_green(sc.position, xs, k);
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                  for (int d = 0; d < 3; ++d) pi_rs(a, d) += Gr(a, b) * sc.polarizability(b, c) * Gs(c, d);
          }
          const auto Gyr = brute_green(xr, ys[p], k);
          const auto Gys = brute_green(xs, ys[p], k);
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                  aref(a, b) += w[r] * w[s] * std::conj(Gyr(a, c)) * pi_rs(c, d) * std::conj(Gys(d, b));
        }
      worst_a = std::max(worst_a, relative_difference(factored_images[f].values[p], aref));
      worst_a = std::max(worst_a, relative_difference(dense_images[f].values[p], aref));
    }
  }
  return {worst_p <= 1e-13 && worst_a <= 1e-13,
          fmt("passive max rel err %.2e, active (factored and dense) %.2e (<= 1e-13)", worst_p, worst_a)};
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / fmt("emkm-acceptance-%d", static_cast<int>(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);

  cli::ScenarioConfig passive;
  passive.name = "det-passive";
  passive.unit = cli::LengthUnit::Wavelength;
  passive.array = {ArrayShape::Square, 20.0, 12, 0, 0};
  passive.band = {kF0, kBandwidthHz, 5};
  passive.scene = cli::SceneKind::Dipoles;
  passive.dipoles = {{{1.0, -2.0, 100.0}, single_dipole_polarization()}};
  passive.grids = {{"xy", {0.0, 0.0, 100.0}, {'x', 'y'}, {16, 16}, {}}};
  passive.noise = cli::NoiseSpec{0.0, 7};

  cli::ScenarioConfig active = passive;
  active.name = "det-active";
  active.scene = cli::SceneKind::Scatterers;
  active.dipoles.clear();
  active.scatterers = {{{-1.0, 1.0, 100.0}, three_tensors()[1]}, {{2.0, 0.0, 101.0}, three_tensors()[2]}};
  active.noise = cli::NoiseSpec{10.0, 11};

  std::size_t compared = 0;
  bool identical = true;
  std::string detail;
  for (const auto& cfg : {passive, active}) {
    const fs::path cfg_path = root / (cfg.name + ".json");
    std::ofstream(cfg_path) << cli::serialize_config(cfg);
    std::vector<fs::path> outs;
    for (const char* threads : {"1", "1", "3"}) {
      const fs::path out = root / fmt("%s-%zu", cfg.name.c_str(), outs.size());
      const std::string cmd = fmt("\"%s\" run \"%s\" --out-dir \"%s\" --threads %s -q", EMKM_CLI_PATH,
                                  cfg_path.c_str(), out.c_str(), threads);
      if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
      outs.push_back(out);
    }
    for (const auto& entry : fs::directory_iterator(outs[0])) {
      if (entry.path().extension() != ".emkm") continue;
      const std::string ref = read_bytes(entry.path());
      for (std::size_t i = 1; i < outs.size(); ++i) {
        ++compared;
        if (read_bytes(outs[i] / entry.path().filename()) != ref) {
          identical = false;
          detail += " differs: " + entry.path().filename().string();
        }
      }
    }
  }
  fs::remove_all(root);
  return {identical && compared > 0,
          fmt("%zu grid file comparisons across repeated runs and thread counts%s", compared, detail.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "disk point-spread asymptotics", disk_psf_asymptotics},
      {2, "passive cross-range recovery", passive_crossrange_recovery},
      {3, "ill-conditioning of the full point-spread matrix", ill_conditioning},
      {4, "cross-range and range resolution", resolution},
      {5, "phase oscillation and suppression", phase_oscillation},
      {6, "active three-scatterer recovery", active_three_scatterers},
      {7, "noise robustness", noise_robustness},
      {8, "extended target edges", extended_target},
      {9, "oracle equivalence", oracle_equivalence},
      {10, "determinism", determinism},
  };
  // Optional criterion numbers on the command line select a subset.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Clock clock;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                clock.seconds());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
