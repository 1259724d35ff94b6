#include "emkm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blas.hpp"
#include "emkm/error.hpp"
#include "emkm/parallel.hpp"
#include "kernels.hpp"

namespace emkm {

namespace {

constexpr std::size_t kPointChunk = 64;
constexpr std::size_t kFactorBudgetBytes = std::size_t{64} << 20;
constexpr double kBlockConditionLimit = 1e12;

void require_imaging_points(std::span<const Point3> points) {
  for (const auto& p : points) {
    if (!(p.z > 0.0)) throw DomainError("imaging points must lie strictly in front of the array (z > 0)");
  }
}

void require_same_array(const ArrayGeometry& a, const ArrayGeometry& b) {
  if (a.size() != b.size() || a.positions() != b.positions() || a.weights() != b.weights()) {
    throw DomainError("data were not recorded on the given array");
  }
}

void require_band_matches(const FrequencyBand& band, const std::vector<double>& omegas) {
  if (band.omegas() != omegas) throw DomainError("band samples do not match the data frequencies");
}

/// w |cid|² I + w (2 Re(conj(cid) cout) + |cout|² R²) r rᵀ, accumulated into a real symmetric 3x3.
inline void accumulate_psf(const detail::Dyad& d, double w, double* h) {
  const double r2 = d.rx * d.rx + d.ry * d.ry + d.rz * d.rz;
  const double c11 = d.cid_re * d.cid_re + d.cid_im * d.cid_im;
  const double s = 2.0 * (d.cid_re * d.cout_re + d.cid_im * d.cout_im) +
                   (d.cout_re * d.cout_re + d.cout_im * d.cout_im) * r2;
  const double ws = w * s;
  h[0] += w * c11 + ws * d.rx * d.rx;
  h[1] += ws * d.rx * d.ry;
  h[2] += ws * d.rx * d.rz;
  h[3] += w * c11 + ws * d.ry * d.ry;
  h[4] += ws * d.ry * d.rz;
  h[5] += w * c11 + ws * d.rz * d.rz;
}

inline ComplexMat3 psf_matrix(const double* h) {
  return {{h[0], h[1], h[2], h[1], h[3], h[4], h[2], h[4], h[5]}};
}

/// Weighted conjugate Green factor for points [p0, p1):
/// a[(3r+i)·cols + 3(p−p0)+j] = w_r conj(G(x_r, y_p))_ij, cols = 3(p1−p0).
void conj_factor(const ArrayGeometry& array, std::span<const Point3> pts, std::size_t p0, std::size_t p1, double k,
                 std::vector<cplx>& a, ComplexMat3* psf_out) {
  const std::size_t n_el = array.size();
  const std::size_t np = p1 - p0;
  const std::size_t cols = 3 * np;
  a.resize(3 * n_el * cols);
  const auto& pos = array.positions();
  const auto& wts = array.weights();
  std::vector<double> h(psf_out ? 6 * np : 0, 0.0);
  for (std::size_t r = 0; r < n_el; ++r) {
    const double w = wts[r];
    cplx* row0 = a.data() + 3 * r * cols;
    for (std::size_t p = 0; p < np; ++p) {
      detail::Dyad d = detail::dyad(pos[r].x, pos[r].y, 0.0, pts[p0 + p], k);
      if (psf_out) accumulate_psf(d, w, h.data() + 6 * p);
      d.cid_re *= w;
      d.cid_im *= -w;
      d.cout_re *= w;
      d.cout_im *= -w;
      cplx g[9];
      detail::dyad_matrix(d, g);
      for (std::size_t i = 0; i < 3; ++i) {
        cplx* dst = row0 + i * cols + 3 * p;
        dst[0] = g[3 * i];
        dst[1] = g[3 * i + 1];
        dst[2] = g[3 * i + 2];
      }
    }
  }
  if (psf_out) {
    for (std::size_t p = 0; p < np; ++p) psf_out[p] = psf_matrix(h.data() + 6 * p);
  }
}

/// Green factor G(x_r, y_n; k) for scatterers [n0, n1), row 3r+a, column 3(n−n0)+b.
void scatterer_factor(const ArrayGeometry& array, const std::vector<Scatterer>& sc, std::size_t n0, std::size_t n1,
                      double k, std::vector<cplx>& out) {
  const std::size_t n_el = array.size();
  const std::size_t cols = 3 * (n1 - n0);
  out.resize(3 * n_el * cols);
  const auto& pos = array.positions();
  parallel_chunks(n_el, 64, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      for (std::size_t n = n0; n < n1; ++n) {
        const detail::Dyad d = detail::dyad(pos[r].x, pos[r].y, 0.0, sc[n].position, k);
        cplx g[9];
        detail::dyad_matrix(d, g);
        const std::size_t c0 = 3 * (n - n0);
        for (std::size_t i = 0; i < 3; ++i) {
          cplx* dst = out.data() + (3 * r + i) * cols + c0;
          dst[0] = g[3 * i];
          dst[1] = g[3 * i + 1];
          dst[2] = g[3 * i + 2];
        }
      }
    }
  });
}

template <class Image>
Image empty_image(std::span<const Point3> points, std::vector<double> omegas, double bandwidth) {
  Image img;
  img.points.assign(points.begin(), points.end());
  img.values.resize(points.size());
  img.omegas = std::move(omegas);
  img.bandwidth = bandwidth;
  return img;
}

void prepare_psf(DiagonalPsf* psf, std::span<const Point3> points, const std::vector<double>& omegas) {
  if (psf) *psf = DiagonalPsf(std::vector<Point3>(points.begin(), points.end()), omegas);
}

}  // namespace

DiagonalPsf::DiagonalPsf(std::vector<Point3> points, std::vector<double> omegas)
    : points_(std::move(points)), omegas_(std::move(omegas)), values_(points_.size() * omegas_.size()) {}

DiagonalPsf DiagonalPsf::compute(std::span<const Point3> points, const ArrayGeometry& array,
                                 std::span<const double> omegas, const MediumParams& medium) {
  medium.validate();
  require_imaging_points(points);
  DiagonalPsf psf(std::vector<Point3>(points.begin(), points.end()), std::vector<double>(omegas.begin(), omegas.end()));
  const auto& pos = array.positions();
  const auto& wts = array.weights();
  for (std::size_t f = 0; f < omegas.size(); ++f) {
    const double k = omegas[f] / medium.c;
    parallel_chunks(points.size(), kPointChunk, [&](std::size_t p0, std::size_t p1) {
      for (std::size_t p = p0; p < p1; ++p) {
        double h[6] = {0, 0, 0, 0, 0, 0};
        for (std::size_t r = 0; r < array.size(); ++r) {
          accumulate_psf(detail::dyad(pos[r].x, pos[r].y, 0.0, points[p], k), wts[r], h);
        }
        psf.at(f, p) = psf_matrix(h);
      }
    });
  }
  return psf;
}

ComplexMat3 DiagonalPsf::integrated(std::size_t p, std::span<const double> weights) const {
  if (weights.size() != omegas_.size()) throw DomainError("band weights do not match the point-spread samples");
  ComplexMat3 out;
  for (std::size_t f = 0; f < omegas_.size(); ++f) out += cplx(weights[f]) * at(f, p);
  return out;
}

ComplexMat3 point_spread(const Point3& y, const Point3& y2, Wavenumber k, const ArrayGeometry& array) {
  const Point3 pts[2] = {y, y2};
  require_imaging_points(pts);
  ComplexMat3 out;
  for (std::size_t r = 0; r < array.size(); ++r) {
    const Point3 xr = array.positions()[r].lift();
    out += cplx(array.weights()[r]) * (dyadic_green(xr, y, k).conj() * dyadic_green(xr, y2, k));
  }
  return out;
}

ComplexMat3 point_spread_fraunhofer(const Point3& y, const Point3& y2, Wavenumber k, const ArrayGeometry& array,
                                    double L) {
  const Point3 pts[2] = {y, y2};
  require_imaging_points(pts);
  ComplexMat3 out;
  for (std::size_t r = 0; r < array.size(); ++r) {
    const Point2& x2 = array.positions()[r];
    const Point3 xr = x2.lift();
    const cplx phase = std::conj(paraxial_green(x2, y, k, L)) * paraxial_green(x2, y2, k, L);
    out += (array.weights()[r] * phase) * (projector(xr, y) * projector(xr, y2));
  }
  return out;
}

VectorImage passive_image(const PassiveData& data, std::size_t f, std::span<const Point3> points,
                          const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf) {
  medium.validate();
  if (data.elements() != array.size()) throw DomainError("passive data do not match the array");
  if (f >= data.frequencies()) throw DomainError("frequency index out of range");
  require_imaging_points(points);
  const double omega = data.omegas()[f];
  const double k = omega / medium.c;
  const double scale = 1.0 / (medium.mu * omega * omega);
  auto img = empty_image<VectorImage>(points, {omega}, 0.0);
  prepare_psf(psf, points, {omega});
  const auto& pos = array.positions();
  const auto& wts = array.weights();
  const auto field = data.frequency(f);
  parallel_chunks(points.size(), kPointChunk, [&](std::size_t p0, std::size_t p1) {
    for (std::size_t p = p0; p < p1; ++p) {
      cplx acc[3] = {};
      double h[6] = {0, 0, 0, 0, 0, 0};
      for (std::size_t r = 0; r < array.size(); ++r) {
        const detail::Dyad d = detail::dyad(pos[r].x, pos[r].y, 0.0, points[p], k);
        const double w = wts[r];
        if (psf) accumulate_psf(d, w, h);
        const ComplexVec3& v = field[r];
        const cplx cid(w * d.cid_re, -w * d.cid_im);
        const cplx cout(w * d.cout_re, -w * d.cout_im);
        const cplx rv = cout * (d.rx * v[0] + d.ry * v[1] + d.rz * v[2]);
        acc[0] += cid * v[0] + d.rx * rv;
        acc[1] += cid * v[1] + d.ry * rv;
        acc[2] += cid * v[2] + d.rz * rv;
      }
      img.values[p] = {{scale * acc[0], scale * acc[1], scale * acc[2]}};
      if (psf) psf->at(0, p) = psf_matrix(h);
    }
  });
  return img;
}

VectorImage passive_image(const PassiveData& data, std::size_t f, const ImagingGrid& grid,
                          const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf) {
  const auto pts = grid.points();
  return passive_image(data, f, pts, array, medium, psf);
}

VectorImage passive_image_band(const PassiveData& data, std::span<const Point3> points, const FrequencyBand& band,
                               const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf) {
  require_band_matches(band, data.omegas());
  const auto weights = band.trapezoid_weights();
  auto img = empty_image<VectorImage>(points, band.omegas(), band.bandwidth());
  prepare_psf(psf, points, band.omegas());
  DiagonalPsf single;
  for (std::size_t f = 0; f < band.size(); ++f) {
    const VectorImage one = passive_image(data, f, points, array, medium, psf ? &single : nullptr);
    for (std::size_t p = 0; p < points.size(); ++p) img.values[p] += cplx(weights[f]) * one.values[p];
    if (psf) {
      for (std::size_t p = 0; p < points.size(); ++p) psf->at(f, p) = single.at(0, p);
    }
  }
  return img;
}

VectorImage passive_image_band(const PassiveData& data, const ImagingGrid& grid, const FrequencyBand& band,
                               const ArrayGeometry& array, const MediumParams& medium, DiagonalPsf* psf) {
  const auto pts = grid.points();
  return passive_image_band(data, pts, band, array, medium, psf);
}

FullRecovery recover_polarization_full(const ComplexVec3& image_value, const ComplexMat3& H) {
  const SvdSolution s = solve_svd(H, image_value, 1e12);
  return {s.x, s.condition};
}

double CrossRangeRecovery::norm(std::size_t i) const {
  const auto& s = samples[i];
  return kind == RecoveryKind::Polarization ? s.vector.norm() : s.tensor.frobenius();
}

std::size_t CrossRangeRecovery::singular_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const CrossRangeSample& s) { return s.singular; }));
}

cplx vector_phase_factor(const ComplexVec2& p, double delta, int* pivot) {
  const double ax = std::abs(p[0]);
  const double ay = std::abs(p[1]);
  int piv = 0;
  if (ax <= delta && ay > ax) piv = 1;
  const double a = piv == 0 ? ax : ay;
  if (pivot) *pivot = a > 0.0 ? piv : -1;
  if (!(a > 0.0)) return 1.0;
  return std::conj(p[piv]) / (a + delta);
}

cplx tensor_phase_factor(const ComplexMat2& alpha, double delta, int* pivot) {
  return vector_phase_factor(ComplexVec2{{alpha(0, 0), alpha(1, 1)}}, delta, pivot);
}

ComplexVec2 phase_correct_vector(const ComplexVec2& p, double delta) {
  if (delta < 0.0) throw DomainError("phase-correction threshold must be non-negative");
  return vector_phase_factor(p, delta) * p;
}

ComplexMat2 phase_correct_tensor(const ComplexMat2& alpha, double delta) {
  if (delta < 0.0) throw DomainError("phase-correction threshold must be non-negative");
  return tensor_phase_factor(alpha, delta) * alpha;
}

CrossRangeRecovery recover_polarization_crossrange(const VectorImage& band_image, const DiagonalPsf& psf,
                                                   const FrequencyBand& band, double delta_rel) {
  if (psf.size() != band_image.points.size()) throw DomainError("point-spread samples do not match the image");
  require_band_matches(band, psf.omegas());
  if (!(delta_rel >= 0.0)) throw DomainError("delta must be non-negative");
  const auto weights = band.trapezoid_weights();
  CrossRangeRecovery out;
  out.kind = RecoveryKind::Polarization;
  out.points = band_image.points;
  out.samples.resize(out.points.size());
  for (std::size_t p = 0; p < out.points.size(); ++p) {
    auto& s = out.samples[p];
    const ComplexMat2 h = psf.integrated(p, weights).block12();
    s.condition = h.condition_number();
    if (!(s.condition <= kBlockConditionLimit)) {
      s.singular = true;
      continue;
    }
    s.raw_vector = h.inverse() * band_image.values[p].head();
  }
  double pmax = 0.0;
  for (const auto& s : out.samples) pmax = std::max({pmax, std::abs(s.raw_vector[0]), std::abs(s.raw_vector[1])});
  out.delta = delta_rel * pmax;
  for (auto& s : out.samples) {
    s.phase_factor = vector_phase_factor(s.raw_vector, out.delta, &s.pivot);
    s.vector = s.phase_factor * s.raw_vector;
  }
  return out;
}

std::vector<TensorImage> active_images(const ActiveData& data, std::span<const Point3> points,
                                       const ArrayGeometry& array, DiagonalPsf* psf) {
  require_same_array(data.array(), array);
  require_imaging_points(points);
  const std::size_t n_pts = points.size();
  const std::size_t n_el = array.size();
  const std::size_t dim = 3 * n_el;
  const auto& scatterers = data.scatterers();
  prepare_psf(psf, points, data.omegas());

  std::vector<TensorImage> images;
  images.reserve(data.frequencies());
  for (std::size_t f = 0; f < data.frequencies(); ++f) {
    const double omega = data.omegas()[f];
    const double k = omega / data.medium().c;
    auto img = empty_image<TensorImage>(points, {omega}, 0.0);
    ComplexMat3* psf_f = psf && n_pts > 0 ? &psf->at(f, 0) : nullptr;
    bool psf_done = psf_f == nullptr;

    // Born part: I(y) = Σ_n H(y, y_n) α_n H(y, y_n)ᵀ with H from one GEMM per chunk pair.
    const std::size_t per_scatterer = dim * 3 * sizeof(cplx);
    const std::size_t s_chunk = std::max<std::size_t>(1, kFactorBudgetBytes / per_scatterer);
    std::vector<cplx> gfac;
    for (std::size_t n0 = 0; n0 < scatterers.size(); n0 += s_chunk) {
      const std::size_t n1 = std::min(scatterers.size(), n0 + s_chunk);
      const std::size_t ns = n1 - n0;
      scatterer_factor(array, scatterers, n0, n1, k, gfac);
      const bool want_psf = !psf_done;
      parallel_chunks(n_pts, kPointChunk, [&](std::size_t p0, std::size_t p1) {
        std::vector<cplx> abar;
        conj_factor(array, points, p0, p1, k, abar, want_psf ? psf_f + p0 : nullptr);
        const std::size_t np = p1 - p0;
        std::vector<cplx> hc(3 * np * 3 * ns);
        detail::zgemm(true, false, static_cast<int>(3 * np), static_cast<int>(3 * ns), static_cast<int>(dim),
                      abar.data(), static_cast<int>(3 * np), gfac.data(), static_cast<int>(3 * ns), hc.data(),
                      static_cast<int>(3 * ns), false);
        const std::size_t ld = 3 * ns;
        for (std::size_t p = 0; p < np; ++p) {
          ComplexMat3 acc;
          for (std::size_t n = 0; n < ns; ++n) {
            ComplexMat3 h;
            for (std::size_t i = 0; i < 3; ++i)
              for (std::size_t j = 0; j < 3; ++j) h(i, j) = hc[(3 * p + i) * ld + 3 * n + j];
            const ComplexMat3& al = scatterers[n0 + n].polarizability;
            acc += h * al * h.transpose();
          }
          img.values[p0 + p] += acc;
        }
      });
      psf_done = true;
    }

    // Dense part: I(y_p) = Ā_pᵀ (Π Ā)_p.
    if (data.has_dense() || !psf_done) {
      const std::vector<cplx>* blk = data.has_dense() ? &data.dense(f) : nullptr;
      const bool want_psf = !psf_done;
      parallel_chunks(n_pts, kPointChunk, [&](std::size_t p0, std::size_t p1) {
        std::vector<cplx> abar;
        conj_factor(array, points, p0, p1, k, abar, want_psf ? psf_f + p0 : nullptr);
        if (!blk) return;
        const std::size_t np = p1 - p0;
        const std::size_t cols = 3 * np;
        std::vector<cplx> t(dim * cols);
        detail::zgemm(false, false, static_cast<int>(dim), static_cast<int>(cols), static_cast<int>(dim), blk->data(),
                      static_cast<int>(dim), abar.data(), static_cast<int>(cols), t.data(), static_cast<int>(cols),
                      false);
        for (std::size_t p = 0; p < np; ++p) {
          ComplexMat3 acc;
          for (std::size_t row = 0; row < dim; ++row) {
            const cplx* a = abar.data() + row * cols + 3 * p;
            const cplx* b = t.data() + row * cols + 3 * p;
            for (std::size_t i = 0; i < 3; ++i)
              for (std::size_t j = 0; j < 3; ++j) acc(i, j) += a[i] * b[j];
          }
          img.values[p0 + p] += acc;
        }
      });
    }
    images.push_back(std::move(img));
  }
  return images;
}

TensorImage active_image(const ActiveData& data, std::size_t f, std::span<const Point3> points,
                         const ArrayGeometry& array, DiagonalPsf* psf) {
  if (f >= data.frequencies()) throw DomainError("frequency index out of range");
  ActiveData single(data.array(), {data.omegas()[f]}, data.medium(), data.scatterers());
  if (data.has_dense()) single.add_dense(0, data.dense(f));
  auto images = active_images(single, points, array, psf);
  return std::move(images.front());
}

TensorImage active_image(const ActiveData& data, std::size_t f, const ImagingGrid& grid,
                         const ArrayGeometry& array, DiagonalPsf* psf) {
  const auto pts = grid.points();
  return active_image(data, f, pts, array, psf);
}

TensorImage integrate_band(std::span<const TensorImage> per_frequency, const FrequencyBand& band) {
  if (per_frequency.size() != band.size()) throw DomainError("one image per band sample expected");
  const auto weights = band.trapezoid_weights();
  TensorImage out;
  out.points = per_frequency.front().points;
  out.values.resize(out.points.size());
  out.omegas = band.omegas();
  out.bandwidth = band.bandwidth();
  for (std::size_t f = 0; f < band.size(); ++f) {
    if (per_frequency[f].values.size() != out.values.size()) throw DomainError("per-frequency images differ in size");
    for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] += cplx(weights[f]) * per_frequency[f].values[p];
  }
  return out;
}

TensorImage active_image_band(const ActiveData& data, std::span<const Point3> points, const FrequencyBand& band,
                              const ArrayGeometry& array, DiagonalPsf* psf) {
  require_band_matches(band, data.omegas());
  const auto images = active_images(data, points, array, psf);
  return integrate_band(images, band);
}

TensorImage active_image_band(const ActiveData& data, const ImagingGrid& grid, const FrequencyBand& band,
                              const ArrayGeometry& array, DiagonalPsf* psf) {
  const auto pts = grid.points();
  return active_image_band(data, pts, band, array, psf);
}

CrossRangeRecovery recover_polarizability_crossrange(std::span<const TensorImage> per_frequency,
                                                     const DiagonalPsf& psf, const FrequencyBand& band,
                                                     double delta_rel) {
  if (per_frequency.size() != band.size()) throw DomainError("one image per band sample expected");
  require_band_matches(band, psf.omegas());
  if (!(delta_rel >= 0.0)) throw DomainError("delta must be non-negative");
  const auto weights = band.trapezoid_weights();
  const double norm = band.size() == 1 ? 1.0 : 1.0 / band.bandwidth();
  CrossRangeRecovery out;
  out.kind = RecoveryKind::Polarizability;
  out.points = per_frequency.front().points;
  out.samples.resize(out.points.size());
  if (psf.size() != out.points.size()) throw DomainError("point-spread samples do not match the image");
  for (std::size_t p = 0; p < out.points.size(); ++p) {
    auto& s = out.samples[p];
    ComplexMat2 acc;
    for (std::size_t f = 0; f < band.size(); ++f) {
      const ComplexMat2 h = psf.at(f, p).block12();
      const double cond = h.condition_number();
      s.condition = f == 0 ? cond : std::max(s.condition, cond);
      if (!(cond <= kBlockConditionLimit)) {
        s.singular = true;
        break;
      }
      const ComplexMat2 hi = h.inverse();
      acc += cplx(weights[f]) * (hi * per_frequency[f].values[p].block12() * hi);
    }
    if (!s.singular) s.raw_tensor = norm * acc;
  }
  double amax = 0.0;
  for (const auto& s : out.samples) {
    amax = std::max({amax, std::abs(s.raw_tensor(0, 0)), std::abs(s.raw_tensor(1, 1))});
  }
  out.delta = delta_rel * amax;
  for (auto& s : out.samples) {
    s.phase_factor = tensor_phase_factor(s.raw_tensor, out.delta, &s.pivot);
    s.tensor = s.phase_factor * s.raw_tensor;
  }
  return out;
}

}  // namespace emkm
