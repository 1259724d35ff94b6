#include "emkm/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "emkm/analysis.hpp"
#include "emkm/cli/formats.hpp"
#include "emkm/error.hpp"
#include "emkm/forward.hpp"
#include "emkm/imaging.hpp"
#include "emkm/parallel.hpp"

namespace emkm::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(RunManifest& m) : manifest_(m), start_(std::chrono::steady_clock::now()) {}
  void lap(const std::string& phase) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.timings.emplace_back(phase, std::chrono::duration<double>(now - start_).count());
    start_ = now;
  }

 private:
  RunManifest& manifest_;
  std::chrono::steady_clock::time_point start_;
};

/// Output directory plus manifest bookkeeping.
class Outputs {
 public:
  Outputs(fs::path dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void record(const std::string& name, const std::string& format, int version) {
    std::error_code ec;
    const auto bytes = fs::file_size(dir_ / name, ec);
    manifest_.files.push_back({name, format, version, ec ? 0 : bytes});
  }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

std::string fmt(double v) { return format_double(v); }

std::string fmt_point(const Point3& p) { return fmt(p.x) + " " + fmt(p.y) + " " + fmt(p.z); }

struct GridProducts {
  ImagingGrid grid;
  std::vector<double> magnitude;  ///< recovered norm per point
};

void report_peak(std::vector<ReportRecord>& rep, const std::string& grid, const ImagingGrid& g,
                 const std::vector<double>& mag) {
  const auto it = std::max_element(mag.begin(), mag.end());
  const std::size_t i = static_cast<std::size_t>(it - mag.begin());
  rep.push_back({"grid", grid, "points", std::to_string(g.size())});
  rep.push_back({"grid", grid, "peak_norm", fmt(*it)});
  rep.push_back({"grid", grid, "peak_position_m", fmt_point(g.point(i))});
}

void report_ellipses(std::vector<ReportRecord>& rep, const std::string& name, const ComplexMat2& a) {
  const auto symmetric = [](std::array<double, 4> m) {
    const double off = 0.5 * (m[1] + m[2]);
    m[1] = off;
    m[2] = off;
    return m;
  };
  const EllipseParams re = ellipse_of(symmetric(real_part(a)));
  const EllipseParams im = ellipse_of(symmetric(imag_part(a)));
  rep.push_back({"source", name, "re_axes", fmt(re.major) + " " + fmt(re.minor)});
  rep.push_back({"source", name, "re_angle_rad", fmt(re.angle)});
  rep.push_back({"source", name, "im_axes", fmt(im.major) + " " + fmt(im.minor)});
  rep.push_back({"source", name, "im_angle_rad", fmt(im.angle)});
}

}  // namespace

RunManifest run(ScenarioConfig config, const RunOptions& options) {
  if (options.out_dir) config.outputs.directory = options.out_dir->string();
  if (options.seed && config.noise) config.noise->seed = *options.seed;
  validate_config(config);
  if (options.threads > 0) set_thread_count(options.threads);
  std::ostream* log = options.log;

  RunManifest manifest;
  manifest.schema_version = kManifestSchemaVersion;
  manifest.scenario = config.name;
  manifest.config_hash = config_hash(config);
  if (config.noise) manifest.seed = config.noise->seed;
  Outputs out(config.outputs.directory, manifest);
  Stopwatch clock(manifest);

  {
    std::ofstream f(out.path("config.json"));
    if (!f) throw IoError("cannot write " + out.path("config.json").string());
    f << serialize_config(config);
    f.close();
    if (!f) throw IoError("failed writing config.json");
    out.record("config.json", "config-json", kConfigSchemaVersion);
  }

  const ArrayGeometry array = build_array(config);
  const FrequencyBand band = build_band(config);
  const MediumParams& medium = config.medium;
  const double scale = length_scale(config);
  const double delta = config.recovery.delta;
  std::vector<ReportRecord> rep;
  rep.push_back({"run", config.name, "elements", std::to_string(array.size())});
  rep.push_back({"run", config.name, "frequencies", std::to_string(band.size())});

  std::optional<PassiveData> passive;
  std::optional<ActiveData> active;
  std::vector<Dipole> dipoles;
  std::vector<Scatterer> scatterers;
  if (config.passive()) {
    dipoles = build_dipoles(config);
    passive = synthesize_passive(dipoles, array, band, medium);
    if (config.noise) passive = add_noise(*passive, config.noise->snr_db, config.noise->seed);
  } else {
    scatterers = build_scatterers(config);
    rep.push_back({"run", config.name, "scatterers", std::to_string(scatterers.size())});
    active = synthesize_active(scatterers, array, band, medium);
    if (config.noise) active = add_noise(*active, config.noise->snr_db, config.noise->seed);
  }
  clock.lap("synthesis");
  if (log) *log << "synthesized data: " << array.size() << " elements, " << band.size() << " frequencies\n";

  std::vector<std::pair<std::string, GridProducts>> products;
  const auto weights = band.trapezoid_weights();
  for (const auto& spec : config.grids) {
    const ImagingGrid grid = build_grid(config, spec);
    const auto points = grid.points();
    GridProducts gp{grid, {}};
    std::size_t singular = 0;
    std::vector<std::pair<std::string, ComplexMat2>> source_blocks;

    if (passive) {
      DiagonalPsf psf;
      const VectorImage image = passive_image_band(*passive, points, band, array, medium, &psf);
      if (config.outputs.csv) {
        write_image_csv(out.path(spec.name + "_image.csv"), image);
        out.record(spec.name + "_image.csv", "grid-csv", kCsvSchemaVersion);
      }
      if (config.outputs.binary) {
        write_grid_binary(out.path(spec.name + "_image.emkm"), grid, ValueKind::VectorImage, pack(image));
        out.record(spec.name + "_image.emkm", "grid-binary", static_cast<int>(kGridFormatVersion));
      }
      if (config.recovery.mode == RecoveryMode::CrossRange) {
        const CrossRangeRecovery rec = recover_polarization_crossrange(image, psf, band, delta);
        gp.magnitude = magnitudes(rec);
        singular = rec.singular_count();
        if (config.outputs.csv) {
          write_recovery_csv(out.path(spec.name + "_recovery.csv"), rec);
          out.record(spec.name + "_recovery.csv", "grid-csv", kCsvSchemaVersion);
        }
        if (config.outputs.binary) {
          write_grid_binary(out.path(spec.name + "_recovery.emkm"), grid, ValueKind::PolarizationRecovery, pack(rec));
          out.record(spec.name + "_recovery.emkm", "grid-binary", static_cast<int>(kGridFormatVersion));
        }
        for (std::size_t j = 0; j < dipoles.size(); ++j) {
          const std::size_t cell = grid.nearest(dipoles[j].position);
          const std::string name = spec.name + ":dipole" + std::to_string(j);
          rep.push_back({"source", name, "cell_position_m", fmt_point(grid.point(cell))});
          rep.push_back({"source", name, "recovered_norm", fmt(rec.norm(cell))});
          rep.push_back({"source", name, "true_crossrange_norm", fmt(dipoles[j].polarization.head().norm())});
        }
      } else {
        std::vector<FullRecoveryPoint> full(points.size());
        std::vector<cplx> packed(3 * points.size());
        gp.magnitude.resize(points.size());
        for (std::size_t p = 0; p < points.size(); ++p) {
          const ComplexMat3 h = psf.integrated(p, weights);
          try {
            const FullRecovery fr = recover_polarization_full(image.values[p], h);
            full[p] = {fr.p, fr.condition, false};
          } catch (const SingularSystem& e) {
            full[p] = {{}, e.condition(), true};
            ++singular;
          }
          gp.magnitude[p] = full[p].p.norm();
          for (std::size_t a = 0; a < 3; ++a) packed[3 * p + a] = full[p].p[a];
        }
        if (config.outputs.csv) {
          write_full_recovery_csv(out.path(spec.name + "_recovery.csv"), points, full);
          out.record(spec.name + "_recovery.csv", "grid-csv", kCsvSchemaVersion);
        }
        if (config.outputs.binary) {
          write_grid_binary(out.path(spec.name + "_recovery.emkm"), grid, ValueKind::FullPolarization, packed);
          out.record(spec.name + "_recovery.emkm", "grid-binary", static_cast<int>(kGridFormatVersion));
        }
        for (std::size_t j = 0; j < dipoles.size(); ++j) {
          const std::size_t cell = grid.nearest(dipoles[j].position);
          const std::string name = spec.name + ":dipole" + std::to_string(j);
          rep.push_back({"source", name, "cell_position_m", fmt_point(grid.point(cell))});
          rep.push_back({"source", name, "recovered_norm", fmt(gp.magnitude[cell])});
          rep.push_back({"source", name, "condition", fmt(full[cell].condition)});
        }
      }
    } else {
      DiagonalPsf psf;
      const auto per_freq = active_images(*active, points, array, &psf);
      const TensorImage image = integrate_band(per_freq, band);
      const CrossRangeRecovery rec = recover_polarizability_crossrange(per_freq, psf, band, delta);
      gp.magnitude = magnitudes(rec);
      singular = rec.singular_count();
      if (config.outputs.csv) {
        write_image_csv(out.path(spec.name + "_image.csv"), image);
        out.record(spec.name + "_image.csv", "grid-csv", kCsvSchemaVersion);
        write_recovery_csv(out.path(spec.name + "_recovery.csv"), rec);
        out.record(spec.name + "_recovery.csv", "grid-csv", kCsvSchemaVersion);
      }
      if (config.outputs.binary) {
        write_grid_binary(out.path(spec.name + "_image.emkm"), grid, ValueKind::TensorImage, pack(image));
        out.record(spec.name + "_image.emkm", "grid-binary", static_cast<int>(kGridFormatVersion));
        write_grid_binary(out.path(spec.name + "_recovery.emkm"), grid, ValueKind::PolarizabilityRecovery, pack(rec));
        out.record(spec.name + "_recovery.emkm", "grid-binary", static_cast<int>(kGridFormatVersion));
      }
      if (config.scene == SceneKind::Scatterers) {
        for (std::size_t j = 0; j < scatterers.size(); ++j) {
          const std::size_t cell = grid.nearest(scatterers[j].position);
          const std::string name = spec.name + ":scatterer" + std::to_string(j);
          rep.push_back({"source", name, "cell_position_m", fmt_point(grid.point(cell))});
          rep.push_back({"source", name, "recovered_norm", fmt(rec.norm(cell))});
          rep.push_back({"source", name, "true_crossrange_norm", fmt(scatterers[j].polarizability.block12().frobenius())});
          report_ellipses(rep, name, rec.samples[cell].tensor);
        }
      } else {
        const Point3 c = scale * config.extended.center;
        const double half = 0.5 * scale * config.extended.side;
        const std::pair<const char*, Point3> probes[] = {
            {"face_near", c - Point3{0, 0, half}}, {"mid", c}, {"face_far", c + Point3{0, 0, half}}};
        for (const auto& [label, pt] : probes) {
          const std::size_t cell = grid.nearest(pt);
          const std::string name = spec.name + ":cube_" + label;
          rep.push_back({"source", name, "cell_position_m", fmt_point(grid.point(cell))});
          rep.push_back({"source", name, "recovered_norm", fmt(rec.norm(cell))});
          report_ellipses(rep, name, rec.samples[cell].tensor);
        }
      }
    }
    report_peak(rep, spec.name, grid, gp.magnitude);
    rep.push_back({"grid", spec.name, "singular_points", std::to_string(singular)});
    manifest.total_points += grid.size();
    manifest.singular_points += singular;
    if (static_cast<double>(singular) > kSingularDensityLimit * static_cast<double>(grid.size())) {
      manifest.status = "numerical_failure";
    }
    products.emplace_back(spec.name, std::move(gp));
    clock.lap("grid:" + spec.name);
    if (log) *log << "imaged grid " << spec.name << " (" << grid.size() << " points)\n";
  }

  for (const auto& pspec : config.profiles) {
    const auto it = std::find_if(products.begin(), products.end(), [&](const auto& p) { return p.first == pspec.grid; });
    const GridSpec& gspec = *std::find_if(config.grids.begin(), config.grids.end(),
                                          [&](const GridSpec& g) { return g.name == pspec.grid; });
    const ImagingGrid& grid = it->second.grid;
    const std::size_t axis =
        static_cast<std::size_t>(std::find(gspec.axes.begin(), gspec.axes.end(), pspec.axis) - gspec.axes.begin());
    const Point3 through = scale * pspec.through.value_or(gspec.center);
    auto idx = grid.unflatten(grid.nearest(through));
    idx[axis] = 0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < grid.axes(); ++a) flat = flat * grid.counts()[a] + idx[a];
    const LineSpec line{grid.point(flat), grid.steps()[axis], grid.counts()[axis]};
    const auto samples = profile(grid, it->second.magnitude, line);
    std::vector<Point3> pts(line.count);
    for (std::size_t i = 0; i < line.count; ++i) pts[i] = line.origin + static_cast<double>(i) * line.step;
    const std::string file = pspec.name + "_profile.csv";
    write_profile_csv(out.path(file), pts, samples);
    out.record(file, "profile-csv", kCsvSchemaVersion);
    std::string width = "n/a";
    try {
      width = fmt(focal_width(samples));
    } catch (const DomainError&) {
    }
    rep.push_back({"profile", pspec.name, "focal_width_m", width});
    rep.push_back({"profile", pspec.name, "peak_position_m", fmt_point(pts[peak_index(samples)])});
  }
  clock.lap("profiles");

  write_report_csv(out.path("report.csv"), rep);
  out.record("report.csv", "report-csv", kCsvSchemaVersion);
  write_manifest(out.path("manifest.json"), manifest);
  return manifest;
}

void write_manifest(const fs::path& path, const RunManifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["scenario"] = m.scenario;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["status"] = m.status;
  j["total_points"] = m.total_points;
  j["singular_points"] = m.singular_points;
  json files = json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path}, {"format", f.format}, {"schema_version", f.schema_version}, {"bytes", f.bytes}});
  }
  j["files"] = files;
  json timings = json::array();
  for (const auto& [phase, secs] : m.timings) timings.push_back({{"phase", phase}, {"seconds", secs}});
  j["timings"] = timings;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  json j;
  try {
    in >> j;
    RunManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    m.scenario = j.at("scenario").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
    m.status = j.at("status").get<std::string>();
    m.total_points = j.at("total_points").get<std::size_t>();
    m.singular_points = j.at("singular_points").get<std::size_t>();
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("path").get<std::string>(), f.at("format").get<std::string>(),
                         f.at("schema_version").get<int>(), f.at("bytes").get<std::uintmax_t>()});
    }
    for (const auto& t : j.at("timings")) m.timings.emplace_back(t.at("phase").get<std::string>(), t.at("seconds").get<double>());
    return m;
  } catch (const json::exception& e) {
    throw IoError("malformed manifest " + path.string() + ": " + e.what());
  }
}

std::string summarize_run(const fs::path& manifest_path) {
  const RunManifest m = read_manifest(manifest_path);
  std::ostringstream s;
  s << "scenario     " << m.scenario << "\n";
  s << "config hash  " << m.config_hash << "\n";
  s << "status       " << m.status << "\n";
  if (m.seed) s << "seed         " << *m.seed << "\n";
  s << "points       " << m.total_points << " (" << m.singular_points << " singular)\n";
  s << "files\n";
  for (const auto& f : m.files) s << "  " << f.path << "  [" << f.format << " v" << f.schema_version << ", " << f.bytes << " bytes]\n";
  s << "timings\n";
  for (const auto& [phase, secs] : m.timings) s << "  " << phase << "  " << secs << " s\n";
  const fs::path report = manifest_path.parent_path() / "report.csv";
  if (fs::exists(report)) {
    s << "report\n";
    for (const auto& r : read_report_csv(report)) s << "  " << r.section << "  " << r.name << "  " << r.key << " = " << r.value << "\n";
  }
  return s.str();
}

std::string describe_config(const ScenarioConfig& config) {
  const ArrayGeometry array = build_array(config);
  const FrequencyBand band = build_band(config);
  std::ostringstream s;
  s << "scenario     " << config.name << "\n";
  s << "array        " << (config.array.shape == ArrayShape::Disk ? "disk" : "square") << ", " << array.size()
    << " elements, area " << array.area() << " m^2\n";
  s << "band         " << band.size() << " samples, f0 " << config.band.f0 << " Hz, B " << config.band.bandwidth
    << " Hz\n";
  if (config.passive()) {
    s << "scene        " << config.dipoles.size() << " dipoles (passive)\n";
  } else {
    s << "scene        " << build_scatterers(config).size() << " scatterers (active)\n";
  }
  for (const auto& g : config.grids) s << "grid         " << g.name << ": " << build_grid(config, g).size() << " points\n";
  if (config.noise) s << "noise        " << config.noise->snr_db << " dB, seed " << config.noise->seed << "\n";
  s << "recovery     " << (config.recovery.mode == RecoveryMode::CrossRange ? "crossrange" : "full3x3") << "\n";
  s << "outputs      " << config.outputs.directory << "\n";
  s << "config hash  " << config_hash(config) << "\n";
  return s.str();
}

}  // namespace emkm::cli
