#include "emkm/forward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blas.hpp"
#include "emkm/error.hpp"
#include "emkm/parallel.hpp"
#include "kernels.hpp"

namespace emkm {

namespace {

constexpr std::size_t kFactorBudgetBytes = std::size_t{64} << 20;

void require_off_plane(const Point3& p, const char* what) {
  if (!(p.z > 0.0)) throw DomainError(std::string(what) + " must lie strictly in front of the array (z > 0)");
}

/// Columns [3 n0, 3 n1) of the (3N)x(3 count) Green factor: G(x_r, y_n; k), row 3r+a.
void green_factor(const ArrayGeometry& array, std::span<const Scatterer> sc, std::size_t n0, std::size_t n1, double k,
                  std::vector<cplx>& out) {
  const std::size_t n_el = array.size();
  const std::size_t cols = 3 * (n1 - n0);
  out.assign(3 * n_el * cols, cplx{});
  const auto& pos = array.positions();
  for (std::size_t r = 0; r < n_el; ++r) {
    for (std::size_t n = n0; n < n1; ++n) {
      const detail::Dyad d = detail::dyad(pos[r].x, pos[r].y, 0.0, sc[n].position, k);
      cplx g[9];
      detail::dyad_matrix(d, g);
      const std::size_t c0 = 3 * (n - n0);
      for (std::size_t a = 0; a < 3; ++a) {
        cplx* row = out.data() + (3 * r + a) * cols + c0;
        row[0] = g[3 * a];
        row[1] = g[3 * a + 1];
        row[2] = g[3 * a + 2];
      }
    }
  }
}

std::size_t scatterer_chunk(std::size_t n_el, std::size_t n_sc) {
  const std::size_t per = 3 * n_el * 3 * sizeof(cplx);
  return std::clamp<std::size_t>(kFactorBudgetBytes / per, 1, std::max<std::size_t>(n_sc, 1));
}

}  // namespace

PassiveData::PassiveData(std::vector<double> omegas, std::size_t elements)
    : omegas_(std::move(omegas)), elements_(elements), values_(omegas_.size() * elements) {}

PassiveData& PassiveData::operator+=(const PassiveData& other) {
  if (other.omegas_ != omegas_ || other.elements_ != elements_) throw DomainError("passive data shapes differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ActiveData::ActiveData(ArrayGeometry array, std::vector<double> omegas, MediumParams medium,
                       std::vector<Scatterer> scatterers)
    : array_(std::move(array)), omegas_(std::move(omegas)), medium_(medium), scatterers_(std::move(scatterers)) {
  medium_.validate();
}

ActiveData ActiveData::from_dense(ArrayGeometry array, std::vector<double> omegas, MediumParams medium,
                                  std::vector<std::vector<cplx>> blocks) {
  ActiveData out(std::move(array), std::move(omegas), medium);
  if (blocks.size() != out.frequencies()) throw DomainError("one dense block per frequency expected");
  const std::size_t dim = 3 * out.elements();
  for (const auto& b : blocks) {
    if (b.size() != dim * dim) throw DomainError("dense block has wrong size");
  }
  out.dense_ = std::move(blocks);
  return out;
}

ComplexMat3 ActiveData::response(std::size_t f, std::size_t r, std::size_t s) const {
  const std::size_t n_el = elements();
  if (f >= frequencies() || r >= n_el || s >= n_el) throw DomainError("response index out of range");
  const Wavenumber k = Wavenumber::from_omega(omegas_[f], medium_);
  const Point3 xr = array_.positions()[r].lift();
  const Point3 xs = array_.positions()[s].lift();
  ComplexMat3 out;
  for (const auto& sc : scatterers_) {
    out += dyadic_green(xr, sc.position, k) * sc.polarizability * dyadic_green(sc.position, xs, k);
  }
  if (has_dense()) {
    const std::size_t dim = 3 * n_el;
    const auto& blk = dense_[f];
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) out(a, b) += blk[(3 * r + a) * dim + 3 * s + b];
  }
  return out;
}

std::vector<cplx> ActiveData::materialize(std::size_t f) const {
  const std::size_t n_el = elements();
  const std::size_t dim = 3 * n_el;
  std::vector<cplx> out = has_dense() ? dense_.at(f) : std::vector<cplx>(dim * dim);
  if (scatterers_.empty()) return out;
  const double k = Wavenumber::from_omega(omegas_.at(f), medium_).value();
  const std::size_t chunk = scatterer_chunk(n_el, scatterers_.size());
  std::vector<cplx> gf;
  std::vector<cplx> ga;
  for (std::size_t n0 = 0; n0 < scatterers_.size(); n0 += chunk) {
    const std::size_t n1 = std::min(scatterers_.size(), n0 + chunk);
    green_factor(array_, scatterers_, n0, n1, k, gf);
    const std::size_t cols = 3 * (n1 - n0);
    // ga = gf · blockdiag(α_n)
    ga.assign(gf.size(), cplx{});
    for (std::size_t row = 0; row < dim; ++row) {
      const cplx* g = gf.data() + row * cols;
      cplx* o = ga.data() + row * cols;
      for (std::size_t n = n0; n < n1; ++n) {
        const ComplexMat3& al = scatterers_[n].polarizability;
        const std::size_t c = 3 * (n - n0);
        for (std::size_t b = 0; b < 3; ++b) o[c + b] = g[c] * al(0, b) + g[c + 1] * al(1, b) + g[c + 2] * al(2, b);
      }
    }
    detail::zgemm(false, true, static_cast<int>(dim), static_cast<int>(dim), static_cast<int>(cols), ga.data(),
                  static_cast<int>(cols), gf.data(), static_cast<int>(cols), out.data(), static_cast<int>(dim), true);
  }
  return out;
}

void ActiveData::add_dense(std::size_t f, std::span<const cplx> block) {
  const std::size_t dim = 3 * elements();
  if (f >= frequencies() || block.size() != dim * dim) throw DomainError("dense block shape mismatch");
  if (dense_.empty()) dense_.assign(frequencies(), std::vector<cplx>(dim * dim));
  auto& d = dense_[f];
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += block[i];
}

PassiveData synthesize_passive(std::span<const Dipole> dipoles, const ArrayGeometry& array, const FrequencyBand& band,
                               const MediumParams& medium) {
  medium.validate();
  for (const auto& d : dipoles) {
    require_off_plane(d.position, "dipole");
    validate(d);
  }
  PassiveData data(band.omegas(), array.size());
  const auto& pos = array.positions();
  for (std::size_t f = 0; f < band.size(); ++f) {
    const double omega = band.omega(f);
    const double k = omega / medium.c;
    const double scale = medium.mu * omega * omega;
    parallel_chunks(array.size(), 256, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        ComplexVec3 acc;
        for (const auto& dp : dipoles) {
          const detail::Dyad d = detail::dyad(pos[r].x, pos[r].y, 0.0, dp.position, k);
          const cplx cid(d.cid_re, d.cid_im);
          const cplx cout(d.cout_re, d.cout_im);
          const auto& p = dp.polarization;
          const cplx rp = d.rx * p[0] + d.ry * p[1] + d.rz * p[2];
          acc[0] += cid * p[0] + cout * d.rx * rp;
          acc[1] += cid * p[1] + cout * d.ry * rp;
          acc[2] += cid * p[2] + cout * d.rz * rp;
        }
        data.at(f, r) = cplx(scale) * acc;
      }
    });
  }
  return data;
}

ComplexVec3 incident_field(std::span<const ComplexVec3> p_dist, const ArrayGeometry& array, const Point3& x,
                           Wavenumber k, const MediumParams& medium) {
  medium.validate();
  if (p_dist.size() != array.size()) throw DomainError("dipole distribution does not match the array");
  require_off_plane(x, "field point");
  const double omega = k.omega(medium);
  ComplexVec3 acc;
  for (std::size_t s = 0; s < array.size(); ++s) {
    acc += cplx(array.weights()[s]) * (dyadic_green(x, array.positions()[s].lift(), k) * p_dist[s]);
  }
  return cplx(medium.mu * omega * omega) * acc;
}

ActiveData synthesize_active(std::span<const Scatterer> scatterers, const ArrayGeometry& array,
                             const FrequencyBand& band, const MediumParams& medium) {
  for (const auto& s : scatterers) {
    require_off_plane(s.position, "scatterer");
    validate(s);
  }
  return ActiveData(array, band.omegas(), medium, std::vector<Scatterer>(scatterers.begin(), scatterers.end()));
}

double average_power(const ActiveData& data) {
  const double dim = 3.0 * static_cast<double>(data.elements());
  double total = 0.0;
  for (std::size_t f = 0; f < data.frequencies(); ++f) {
    for (const cplx& v : data.materialize(f)) total += std::norm(v);
  }
  return total / (dim * dim * static_cast<double>(data.frequencies()));
}

double average_power(const PassiveData& data) {
  double total = 0.0;
  for (const auto& v : data.values()) total += v.norm() * v.norm();
  return total / (3.0 * static_cast<double>(data.elements()) * static_cast<double>(data.frequencies()));
}

namespace {

std::mt19937_64 noise_stream(std::uint64_t seed, std::size_t f) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(std::uint64_t{f} >> 32)};
  return std::mt19937_64(seq);
}

double noise_variance(double p_avg, double snr_db) {
  if (!(p_avg > 0.0)) throw DomainError("cannot scale noise to all-zero data");
  if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite");
  return std::pow(10.0, snr_db / 10.0) * p_avg;
}

}  // namespace

ActiveData add_noise(const ActiveData& data, double snr_db, std::uint64_t seed) {
  const double var = noise_variance(average_power(data), snr_db);
  const std::size_t dim = 3 * data.elements();
  ActiveData out = data;
  std::vector<cplx> w(dim * dim);
  for (std::size_t f = 0; f < data.frequencies(); ++f) {
    auto gen = noise_stream(seed, f);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * var));
    for (auto& e : w) {
      const double re = normal(gen);
      const double im = normal(gen);
      e = cplx(re, im);
    }
    out.add_dense(f, w);
  }
  return out;
}

PassiveData add_noise(const PassiveData& data, double snr_db, std::uint64_t seed) {
  const double var = noise_variance(average_power(data), snr_db);
  PassiveData out = data;
  for (std::size_t f = 0; f < data.frequencies(); ++f) {
    auto gen = noise_stream(seed, f);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * var));
    for (std::size_t r = 0; r < data.elements(); ++r) {
      for (std::size_t a = 0; a < 3; ++a) {
        const double re = normal(gen);
        const double im = normal(gen);
        out.at(f, r)[a] += cplx(re, im);
      }
    }
  }
  return out;
}

}  // namespace emkm
