#include "emkm/cli/formats.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "emkm/error.hpp"

namespace emkm::cli {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'K', 'M'};
constexpr std::size_t kHeaderBytes = 128;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& buf, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

const char* kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::VectorImage: return "vector_image";
    case ValueKind::TensorImage: return "tensor_image";
    case ValueKind::PolarizationRecovery: return "polarization_recovery";
    case ValueKind::PolarizabilityRecovery: return "polarizability_recovery";
    case ValueKind::FullPolarization: return "full_polarization";
  }
  return "unknown";
}

void csv_preamble(std::ostream& out, ValueKind kind, std::size_t n_freq, double bandwidth) {
  out << "# emkm-grid-csv " << kCsvSchemaVersion << "\n";
  out << "# kind " << kind_name(kind) << "\n";
  out << "# frequencies " << n_freq << "\n";
  out << "# bandwidth_rad_s " << format_double(bandwidth) << "\n";
}

void put_point(std::ostream& out, const Point3& p) {
  out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z);
}

void put_complex(std::ostream& out, cplx v) { out << ',' << format_double(v.real()) << ',' << format_double(v.imag()); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint32_t components(ValueKind kind) {
  switch (kind) {
    case ValueKind::VectorImage: return 3;
    case ValueKind::TensorImage: return 9;
    case ValueKind::PolarizationRecovery: return 2;
    case ValueKind::PolarizabilityRecovery: return 4;
    case ValueKind::FullPolarization: return 3;
  }
  throw DomainError("unknown value kind");
}

void write_grid_binary(const std::filesystem::path& path, const ImagingGrid& grid, ValueKind kind,
                       std::span<const cplx> values) {
  const std::uint32_t comps = components(kind);
  if (values.size() != grid.size() * comps) throw DomainError("value count does not match grid and kind");
  std::string buf;
  buf.reserve(kHeaderBytes + values.size() * 16);
  buf.append(kMagic, 4);
  put_u32(buf, kGridFormatVersion);
  put_u32(buf, static_cast<std::uint32_t>(kind));
  put_u32(buf, static_cast<std::uint32_t>(grid.axes()));
  for (std::size_t a = 0; a < 3; ++a) put_u32(buf, a < grid.axes() ? static_cast<std::uint32_t>(grid.counts()[a]) : 1u);
  put_u32(buf, comps);
  put_f64(buf, grid.origin().x);
  put_f64(buf, grid.origin().y);
  put_f64(buf, grid.origin().z);
  for (std::size_t a = 0; a < 3; ++a) {
    const Point3 s = a < grid.axes() ? grid.steps()[a] : Point3{};
    put_f64(buf, s.x);
    put_f64(buf, s.y);
    put_f64(buf, s.z);
  }
  for (const cplx& v : values) {
    put_f64(buf, v.real());
    put_f64(buf, v.imag());
  }
  auto out = open_out(path, true);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  finish(out, path);
}

GridFile read_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw IoError(path.string() + " is not an EMKM grid file");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (get_u32(p + 4) != kGridFormatVersion) throw IoError(path.string() + ": unsupported grid format version");
  GridFile g;
  g.kind = static_cast<ValueKind>(get_u32(p + 8));
  g.axes = get_u32(p + 12);
  for (std::size_t a = 0; a < 3; ++a) g.dims[a] = get_u32(p + 16 + 4 * a);
  g.components = get_u32(p + 28);
  g.origin = {get_f64(p + 32), get_f64(p + 40), get_f64(p + 48)};
  for (std::size_t a = 0; a < 3; ++a) {
    const unsigned char* s = p + 56 + 24 * a;
    g.steps[a] = {get_f64(s), get_f64(s + 8), get_f64(s + 16)};
  }
  const std::size_t n = static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2] * g.components;
  if (buf.size() != kHeaderBytes + 16 * n) throw IoError(path.string() + ": truncated payload");
  g.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.values[i] = {get_f64(p + kHeaderBytes + 16 * i), get_f64(p + kHeaderBytes + 16 * i + 8)};
  }
  return g;
}

std::vector<cplx> pack(const VectorImage& image) {
  std::vector<cplx> out;
  out.reserve(3 * image.values.size());
  for (const auto& v : image.values) out.insert(out.end(), v.v.begin(), v.v.end());
  return out;
}

std::vector<cplx> pack(const TensorImage& image) {
  std::vector<cplx> out;
  out.reserve(9 * image.values.size());
  for (const auto& m : image.values) out.insert(out.end(), m.m.begin(), m.m.end());
  return out;
}

std::vector<cplx> pack(const CrossRangeRecovery& recovery) {
  std::vector<cplx> out;
  for (const auto& s : recovery.samples) {
    if (recovery.kind == RecoveryKind::Polarization) {
      out.insert(out.end(), s.vector.v.begin(), s.vector.v.end());
    } else {
      out.insert(out.end(), s.tensor.m.begin(), s.tensor.m.end());
    }
  }
  return out;
}

void write_image_csv(const std::filesystem::path& path, const VectorImage& image) {
  std::ostringstream out;
  csv_preamble(out, ValueKind::VectorImage, image.omegas.size(), image.bandwidth);
  out << "x,y,z,v0_re,v0_im,v1_re,v1_im,v2_re,v2_im\n";
  for (std::size_t i = 0; i < image.points.size(); ++i) {
    put_point(out, image.points[i]);
    for (const cplx& v : image.values[i].v) put_complex(out, v);
    out << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

void write_image_csv(const std::filesystem::path& path, const TensorImage& image) {
  std::ostringstream out;
  csv_preamble(out, ValueKind::TensorImage, image.omegas.size(), image.bandwidth);
  out << "x,y,z";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out << ",m" << i << j << "_re,m" << i << j << "_im";
  out << '\n';
  for (std::size_t i = 0; i < image.points.size(); ++i) {
    put_point(out, image.points[i]);
    for (const cplx& v : image.values[i].m) put_complex(out, v);
    out << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

void write_recovery_csv(const std::filesystem::path& path, const CrossRangeRecovery& recovery) {
  const bool passive = recovery.kind == RecoveryKind::Polarization;
  std::ostringstream out;
  out << "# emkm-grid-csv " << kCsvSchemaVersion << "\n";
  out << "# kind " << kind_name(passive ? ValueKind::PolarizationRecovery : ValueKind::PolarizabilityRecovery) << "\n";
  out << "# delta " << format_double(recovery.delta) << "\n";
  out << "x,y,z";
  if (passive) out << ",p0_re,p0_im,p1_re,p1_im";
  else out << ",a00_re,a00_im,a01_re,a01_im,a10_re,a10_im,a11_re,a11_im";
  out << ",norm,condition,phase_re,phase_im,pivot,singular\n";
  for (std::size_t i = 0; i < recovery.points.size(); ++i) {
    const auto& s = recovery.samples[i];
    put_point(out, recovery.points[i]);
    if (passive) {
      for (const cplx& v : s.vector.v) put_complex(out, v);
    } else {
      for (const cplx& v : s.tensor.m) put_complex(out, v);
    }
    out << ',' << format_double(recovery.norm(i)) << ',' << format_double(s.condition);
    put_complex(out, s.phase_factor);
    out << ',' << s.pivot << ',' << (s.singular ? 1 : 0) << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

void write_full_recovery_csv(const std::filesystem::path& path, std::span<const Point3> points,
                             std::span<const FullRecoveryPoint> values) {
  std::ostringstream out;
  out << "# emkm-grid-csv " << kCsvSchemaVersion << "\n";
  out << "# kind " << kind_name(ValueKind::FullPolarization) << "\n";
  out << "x,y,z,p0_re,p0_im,p1_re,p1_im,p2_re,p2_im,norm,condition,singular\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    put_point(out, points[i]);
    for (const cplx& v : values[i].p.v) put_complex(out, v);
    out << ',' << format_double(values[i].p.norm()) << ',' << format_double(values[i].condition) << ','
        << (values[i].singular ? 1 : 0) << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

void write_profile_csv(const std::filesystem::path& path, std::span<const Point3> points,
                       std::span<const ProfileSample> samples) {
  std::ostringstream out;
  out << "# emkm-profile-csv " << kCsvSchemaVersion << "\n";
  out << "position,x,y,z,magnitude\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << format_double(samples[i].position) << ',';
    put_point(out, points[i]);
    out << ',' << format_double(samples[i].magnitude) << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

namespace {

// Quotes a field when it holds a separator, quote or line break.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

void write_report_csv(const std::filesystem::path& path, std::span<const ReportRecord> records) {
  std::ostringstream out;
  out << "# emkm-report-csv " << kCsvSchemaVersion << "\n";
  out << "section,name,key,value\n";
  for (const auto& r : records) {
    out << csv_field(r.section) << ',' << csv_field(r.name) << ',' << csv_field(r.key) << ',' << csv_field(r.value)
        << '\n';
  }
  auto f = open_out(path, false);
  f << out.str();
  finish(f, path);
}

std::vector<ReportRecord> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ReportRecord> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 4) throw IoError("malformed report row in " + path.string());
    out.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return out;
}

}  // namespace emkm::cli
