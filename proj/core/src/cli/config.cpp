#include "emkm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "emkm/error.hpp"

namespace emkm::cli {

using json = nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(join(path, it.key()), "unknown field");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Point3 point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected [x, y, z]");
  return {number(j[0], index(path, 0)), number(j[1], index(path, 1)), number(j[2], index(path, 2))};
}

cplx complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a number or [re, im]");
  return {number(j[0], index(path, 0)), number(j[1], index(path, 1))};
}

ComplexVec3 complex_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected 3 complex entries");
  ComplexVec3 v;
  for (std::size_t i = 0; i < 3; ++i) v[i] = complex_number(j[i], index(path, i));
  return v;
}

ComplexMat3 complex_mat3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected 3 rows");
  ComplexMat3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto row = complex_vec3(j[i], index(path, i));
    for (std::size_t c = 0; c < 3; ++c) m(i, c) = row[c];
  }
  return m;
}

char axis_name(const json& j, const std::string& path) {
  const std::string s = text(j, path);
  if (s != "x" && s != "y" && s != "z") throw ConfigError(path, "axis must be \"x\", \"y\" or \"z\"");
  return s[0];
}

json to_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }
json to_json(cplx c) { return json::array({c.real(), c.imag()}); }
json to_json(const ComplexVec3& v) { return json::array({to_json(v[0]), to_json(v[1]), to_json(v[2])}); }
json to_json(const ComplexMat3& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < 3; ++i) rows.push_back(json::array({to_json(m(i, 0)), to_json(m(i, 1)), to_json(m(i, 2))}));
  return rows;
}

ScenarioConfig from_json(const json& root) {
  ScenarioConfig c;
  allow_keys(root, "", {"schema_version", "name", "length_unit", "medium", "array", "band", "scene", "grids",
                        "profiles", "noise", "recovery", "outputs"});
  const json& sv = require(root, "schema_version", "");
  if (!sv.is_number_integer()) throw ConfigError("schema_version", "expected an integer");
  c.schema_version = sv.get<int>();
  if (c.schema_version != kConfigSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(c.schema_version));
  }
  if (root.contains("name")) c.name = text(root["name"], "name");
  if (root.contains("length_unit")) {
    const std::string u = text(root["length_unit"], "length_unit");
    if (u == "m") c.unit = LengthUnit::Meter;
    else if (u == "wavelength") c.unit = LengthUnit::Wavelength;
    else throw ConfigError("length_unit", "must be \"m\" or \"wavelength\"");
  }

  if (root.contains("medium")) {
    const json& m = root["medium"];
    allow_keys(m, "medium", {"c", "mu"});
    if (m.contains("c")) c.medium.c = number(m["c"], "medium.c");
    if (m.contains("mu")) c.medium.mu = number(m["mu"], "medium.mu");
  }

  {
    const json& a = require(root, "array", "");
    allow_keys(a, "array", {"shape", "a", "n", "n_r", "n_theta"});
    const std::string shape = text(require(a, "shape", "array"), "array.shape");
    c.array.a = number(require(a, "a", "array"), "array.a");
    if (shape == "square") {
      c.array.shape = ArrayShape::Square;
      c.array.n = count(require(a, "n", "array"), "array.n");
    } else if (shape == "disk") {
      c.array.shape = ArrayShape::Disk;
      c.array.n_r = count(require(a, "n_r", "array"), "array.n_r");
      c.array.n_theta = count(require(a, "n_theta", "array"), "array.n_theta");
    } else {
      throw ConfigError("array.shape", "must be \"square\" or \"disk\"");
    }
  }

  {
    const json& b = require(root, "band", "");
    allow_keys(b, "band", {"f0", "bandwidth", "n_freq"});
    c.band.f0 = number(require(b, "f0", "band"), "band.f0");
    if (b.contains("bandwidth")) c.band.bandwidth = number(b["bandwidth"], "band.bandwidth");
    if (b.contains("n_freq")) c.band.n_freq = count(b["n_freq"], "band.n_freq");
  }

  {
    const json& s = require(root, "scene", "");
    allow_keys(s, "scene", {"dipoles", "scatterers", "extended"});
    const int present = static_cast<int>(s.contains("dipoles")) + static_cast<int>(s.contains("scatterers")) +
                        static_cast<int>(s.contains("extended"));
    if (present != 1) throw ConfigError("scene", "exactly one of dipoles, scatterers, extended is required");
    if (s.contains("dipoles")) {
      c.scene = SceneKind::Dipoles;
      const json& list = s["dipoles"];
      if (!list.is_array()) throw ConfigError("scene.dipoles", "expected a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = index("scene.dipoles", i);
        allow_keys(list[i], p, {"position", "polarization"});
        c.dipoles.push_back({point(require(list[i], "position", p), join(p, "position")),
                             complex_vec3(require(list[i], "polarization", p), join(p, "polarization"))});
      }
    } else if (s.contains("scatterers")) {
      c.scene = SceneKind::Scatterers;
      const json& list = s["scatterers"];
      if (!list.is_array()) throw ConfigError("scene.scatterers", "expected a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = index("scene.scatterers", i);
        allow_keys(list[i], p, {"position", "polarizability"});
        c.scatterers.push_back({point(require(list[i], "position", p), join(p, "position")),
                                complex_mat3(require(list[i], "polarizability", p), join(p, "polarizability"))});
      }
    } else {
      c.scene = SceneKind::Extended;
      const json& e = s["extended"];
      const std::string p = "scene.extended";
      allow_keys(e, p, {"center", "side", "spacing", "polarizability"});
      c.extended.center = point(require(e, "center", p), join(p, "center"));
      c.extended.side = number(require(e, "side", p), join(p, "side"));
      c.extended.spacing = number(require(e, "spacing", p), join(p, "spacing"));
      c.extended.polarizability = complex_mat3(require(e, "polarizability", p), join(p, "polarizability"));
    }
  }

  {
    const json& g = require(root, "grids", "");
    if (!g.is_array()) throw ConfigError("grids", "expected a list");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string p = index("grids", i);
      allow_keys(g[i], p, {"name", "center", "axes", "counts", "spacing"});
      GridSpec spec;
      spec.name = text(require(g[i], "name", p), join(p, "name"));
      spec.center = point(require(g[i], "center", p), join(p, "center"));
      const json& axes = require(g[i], "axes", p);
      const json& counts = require(g[i], "counts", p);
      if (!axes.is_array()) throw ConfigError(join(p, "axes"), "expected a list");
      if (!counts.is_array()) throw ConfigError(join(p, "counts"), "expected a list");
      for (std::size_t a = 0; a < axes.size(); ++a) spec.axes.push_back(axis_name(axes[a], index(join(p, "axes"), a)));
      for (std::size_t a = 0; a < counts.size(); ++a) spec.counts.push_back(count(counts[a], index(join(p, "counts"), a)));
      if (g[i].contains("spacing")) {
        const json& sp = g[i]["spacing"];
        if (!sp.is_array()) throw ConfigError(join(p, "spacing"), "expected a list");
        for (std::size_t a = 0; a < sp.size(); ++a) spec.spacing.push_back(number(sp[a], index(join(p, "spacing"), a)));
      }
      c.grids.push_back(std::move(spec));
    }
  }

  if (root.contains("profiles")) {
    const json& list = root["profiles"];
    if (!list.is_array()) throw ConfigError("profiles", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = index("profiles", i);
      allow_keys(list[i], p, {"name", "grid", "axis", "through"});
      ProfileSpec spec;
      spec.name = text(require(list[i], "name", p), join(p, "name"));
      spec.grid = text(require(list[i], "grid", p), join(p, "grid"));
      spec.axis = axis_name(require(list[i], "axis", p), join(p, "axis"));
      if (list[i].contains("through")) spec.through = point(list[i]["through"], join(p, "through"));
      c.profiles.push_back(std::move(spec));
    }
  }

  if (root.contains("noise") && !root["noise"].is_null()) {
    const json& n = root["noise"];
    allow_keys(n, "noise", {"snr_db", "seed"});
    NoiseSpec spec;
    spec.snr_db = number(require(n, "snr_db", "noise"), "noise.snr_db");
    if (n.contains("seed")) {
      if (!n["seed"].is_number_unsigned()) throw ConfigError("noise.seed", "expected a non-negative integer");
      spec.seed = n["seed"].get<std::uint64_t>();
    }
    c.noise = spec;
  }

  if (root.contains("recovery")) {
    const json& r = root["recovery"];
    allow_keys(r, "recovery", {"mode", "delta"});
    if (r.contains("mode")) {
      const std::string mode = text(r["mode"], "recovery.mode");
      if (mode == "crossrange") c.recovery.mode = RecoveryMode::CrossRange;
      else if (mode == "full3x3") c.recovery.mode = RecoveryMode::Full3x3;
      else throw ConfigError("recovery.mode", "must be \"crossrange\" or \"full3x3\"");
    }
    if (r.contains("delta")) c.recovery.delta = number(r["delta"], "recovery.delta");
  }

  if (root.contains("outputs")) {
    const json& o = root["outputs"];
    allow_keys(o, "outputs", {"directory", "formats"});
    if (o.contains("directory")) c.outputs.directory = text(o["directory"], "outputs.directory");
    if (o.contains("formats")) {
      const json& f = o["formats"];
      if (!f.is_array()) throw ConfigError("outputs.formats", "expected a list");
      c.outputs.csv = false;
      c.outputs.binary = false;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string s = text(f[i], index("outputs.formats", i));
        if (s == "csv") c.outputs.csv = true;
        else if (s == "binary") c.outputs.binary = true;
        else throw ConfigError(index("outputs.formats", i), "must be \"csv\" or \"binary\"");
      }
    }
  }
  return c;
}

json to_json(const ScenarioConfig& c) {
  json root;
  root["schema_version"] = c.schema_version;
  root["name"] = c.name;
  root["length_unit"] = c.unit == LengthUnit::Meter ? "m" : "wavelength";
  root["medium"] = {{"c", c.medium.c}, {"mu", c.medium.mu}};
  json arr;
  arr["a"] = c.array.a;
  if (c.array.shape == ArrayShape::Disk) {
    arr["shape"] = "disk";
    arr["n_r"] = c.array.n_r;
    arr["n_theta"] = c.array.n_theta;
  } else {
    arr["shape"] = "square";
    arr["n"] = c.array.n;
  }
  root["array"] = arr;
  json band = {{"f0", c.band.f0}, {"bandwidth", c.band.bandwidth}};
  if (c.band.n_freq > 0) band["n_freq"] = c.band.n_freq;
  root["band"] = band;
  json scene = json::object();
  if (c.scene == SceneKind::Dipoles) {
    json list = json::array();
    for (const auto& d : c.dipoles) list.push_back({{"position", to_json(d.position)}, {"polarization", to_json(d.polarization)}});
    scene["dipoles"] = list;
  } else if (c.scene == SceneKind::Scatterers) {
    json list = json::array();
    for (const auto& s : c.scatterers) {
      list.push_back({{"position", to_json(s.position)}, {"polarizability", to_json(s.polarizability)}});
    }
    scene["scatterers"] = list;
  } else {
    scene["extended"] = {{"center", to_json(c.extended.center)},
                         {"side", c.extended.side},
                         {"spacing", c.extended.spacing},
                         {"polarizability", to_json(c.extended.polarizability)}};
  }
  root["scene"] = scene;
  json grids = json::array();
  for (const auto& g : c.grids) {
    json axes = json::array();
    for (char a : g.axes) axes.push_back(std::string(1, a));
    json gj = {{"name", g.name}, {"center", to_json(g.center)}, {"axes", axes}, {"counts", g.counts}};
    if (!g.spacing.empty()) gj["spacing"] = g.spacing;
    grids.push_back(gj);
  }
  root["grids"] = grids;
  if (!c.profiles.empty()) {
    json list = json::array();
    for (const auto& p : c.profiles) {
      json pj = {{"name", p.name}, {"grid", p.grid}, {"axis", std::string(1, p.axis)}};
      if (p.through) pj["through"] = to_json(*p.through);
      list.push_back(pj);
    }
    root["profiles"] = list;
  }
  if (c.noise) root["noise"] = {{"snr_db", c.noise->snr_db}, {"seed", c.noise->seed}};
  root["recovery"] = {{"mode", c.recovery.mode == RecoveryMode::CrossRange ? "crossrange" : "full3x3"},
                      {"delta", c.recovery.delta}};
  json formats = json::array();
  if (c.outputs.csv) formats.push_back("csv");
  if (c.outputs.binary) formats.push_back("binary");
  root["outputs"] = {{"directory", c.outputs.directory}, {"formats", formats}};
  return root;
}

constexpr double kDenseNoiseLimitBytes = 4.0 * 1024.0 * 1024.0 * 1024.0;

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  ScenarioConfig c = from_json(root);
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_hash(const ScenarioConfig& config) {
  // Where the products go does not change what they contain.
  json j = to_json(config);
  j["outputs"].erase("directory");
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double length_scale(const ScenarioConfig& config) {
  return config.unit == LengthUnit::Meter ? 1.0 : config.medium.c / config.band.f0;
}

void validate_config(const ScenarioConfig& c) {
  if (c.schema_version != kConfigSchemaVersion) throw ConfigError("schema_version", "unsupported version");
  if (!(c.medium.c > 0.0)) throw ConfigError("medium.c", "must be positive");
  if (!(c.medium.mu > 0.0)) throw ConfigError("medium.mu", "must be positive");
  if (!(c.array.a > 0.0)) throw ConfigError("array.a", "must be positive");
  if (c.array.shape == ArrayShape::Square && c.array.n < 2) throw ConfigError("array.n", "must be at least 2");
  if (c.array.shape == ArrayShape::Disk) {
    if (c.array.n_r < 2) throw ConfigError("array.n_r", "must be at least 2");
    if (c.array.n_theta < 4) throw ConfigError("array.n_theta", "must be at least 4");
  }
  if (c.array.shape == ArrayShape::Custom) throw ConfigError("array.shape", "must be square or disk");
  if (!(c.band.f0 > 0.0)) throw ConfigError("band.f0", "must be positive");
  if (!(c.band.bandwidth >= 0.0)) throw ConfigError("band.bandwidth", "must be non-negative");
  if (!(c.band.bandwidth < 2.0 * c.band.f0)) throw ConfigError("band.bandwidth", "must be below 2 f0");
  if (c.band.n_freq > 0 && (c.band.n_freq == 1) != (c.band.bandwidth == 0.0)) {
    throw ConfigError("band.n_freq", "must be 1 exactly when the bandwidth is zero");
  }
  switch (c.scene) {
    case SceneKind::Dipoles:
      if (c.dipoles.empty()) throw ConfigError("scene.dipoles", "needs at least one dipole");
      for (std::size_t i = 0; i < c.dipoles.size(); ++i) {
        const std::string p = index("scene.dipoles", i);
        if (!(c.dipoles[i].position.z > 0.0)) throw ConfigError(join(p, "position"), "must have z > 0");
        if (!(c.dipoles[i].polarization.norm() > 0.0)) throw ConfigError(join(p, "polarization"), "must be nonzero");
      }
      break;
    case SceneKind::Scatterers:
      if (c.scatterers.empty()) throw ConfigError("scene.scatterers", "needs at least one scatterer");
      for (std::size_t i = 0; i < c.scatterers.size(); ++i) {
        const std::string p = index("scene.scatterers", i);
        if (!(c.scatterers[i].position.z > 0.0)) throw ConfigError(join(p, "position"), "must have z > 0");
        if (!c.scatterers[i].polarizability.is_symmetric(1e-12)) {
          throw ConfigError(join(p, "polarizability"), "must be symmetric");
        }
      }
      break;
    case SceneKind::Extended: {
      const auto& e = c.extended;
      if (!(e.side > 0.0)) throw ConfigError("scene.extended.side", "must be positive");
      if (!(e.spacing > 0.0)) throw ConfigError("scene.extended.spacing", "must be positive");
      if (!(e.spacing <= e.side)) throw ConfigError("scene.extended.spacing", "must not exceed the side");
      if (!(e.center.z - 0.5 * e.side > 0.0)) throw ConfigError("scene.extended.center", "cube must lie in z > 0");
      if (!e.polarizability.is_symmetric(1e-12)) {
        throw ConfigError("scene.extended.polarizability", "must be symmetric");
      }
      break;
    }
  }

  if (c.grids.empty()) throw ConfigError("grids", "needs at least one grid");
  std::set<std::string> names;
  for (std::size_t i = 0; i < c.grids.size(); ++i) {
    const auto& g = c.grids[i];
    const std::string p = index("grids", i);
    if (g.name.empty()) throw ConfigError(join(p, "name"), "must be nonempty");
    if (g.name.find_first_of("/\\. ") != std::string::npos) throw ConfigError(join(p, "name"), "must be a plain word");
    if (!names.insert(g.name).second) throw ConfigError(join(p, "name"), "duplicate grid name");
    if (g.axes.empty() || g.axes.size() > 3) throw ConfigError(join(p, "axes"), "needs 1 to 3 axes");
    if (std::set<char>(g.axes.begin(), g.axes.end()).size() != g.axes.size()) {
      throw ConfigError(join(p, "axes"), "axes must be distinct");
    }
    if (g.counts.size() != g.axes.size()) throw ConfigError(join(p, "counts"), "one count per axis");
    for (std::size_t a = 0; a < g.counts.size(); ++a) {
      if (g.counts[a] == 0) throw ConfigError(index(join(p, "counts"), a), "must be positive");
    }
    if (!g.spacing.empty()) {
      if (g.spacing.size() != g.axes.size()) throw ConfigError(join(p, "spacing"), "one spacing per axis");
      for (std::size_t a = 0; a < g.spacing.size(); ++a) {
        if (!(g.spacing[a] > 0.0)) throw ConfigError(index(join(p, "spacing"), a), "must be positive");
      }
    }
    const ImagingGrid grid = build_grid(c, g);
    double zmin = grid.origin().z;
    for (std::size_t a = 0; a < grid.axes(); ++a) {
      zmin += std::min(0.0, static_cast<double>(grid.counts()[a] - 1) * grid.steps()[a].z);
    }
    if (!(zmin > 0.0)) throw ConfigError(join(p, "center"), "grid must lie in z > 0");
  }

  std::set<std::string> profile_names;
  for (std::size_t i = 0; i < c.profiles.size(); ++i) {
    const auto& pr = c.profiles[i];
    const std::string p = index("profiles", i);
    if (pr.name.empty() || pr.name.find_first_of("/\\. ") != std::string::npos) {
      throw ConfigError(join(p, "name"), "must be a plain word");
    }
    if (!profile_names.insert(pr.name).second) throw ConfigError(join(p, "name"), "duplicate profile name");
    const auto g = std::find_if(c.grids.begin(), c.grids.end(), [&](const GridSpec& s) { return s.name == pr.grid; });
    if (g == c.grids.end()) throw ConfigError(join(p, "grid"), "no grid named " + pr.grid);
    if (std::find(g->axes.begin(), g->axes.end(), pr.axis) == g->axes.end()) {
      throw ConfigError(join(p, "axis"), "grid " + pr.grid + " has no such axis");
    }
  }

  if (c.noise) {
    if (!std::isfinite(c.noise->snr_db)) throw ConfigError("noise.snr_db", "must be finite");
    const double n_el = c.array.shape == ArrayShape::Square ? static_cast<double>(c.array.n * c.array.n)
                                                            : static_cast<double>(c.array.n_r * c.array.n_theta);
    const double n_freq = static_cast<double>(c.band.n_freq > 0 ? c.band.n_freq : default_frequency_count(c.band.bandwidth));
    const double bytes = (c.passive() ? 3.0 * n_el : 9.0 * n_el * n_el) * 16.0 * n_freq;
    if (bytes > kDenseNoiseLimitBytes) {
      throw ConfigError("noise", "dense noise for this array needs " + std::to_string(bytes / (1 << 30)) +
                                     " GiB; reduce array.n or band.n_freq");
    }
  }

  if (!(c.recovery.delta >= 0.0)) throw ConfigError("recovery.delta", "must be non-negative");
  if (c.recovery.mode == RecoveryMode::Full3x3 && !c.passive()) {
    throw ConfigError("recovery.mode", "full3x3 is only available for passive scenes");
  }
  if (c.outputs.directory.empty()) throw ConfigError("outputs.directory", "must be nonempty");
  if (!c.outputs.csv && !c.outputs.binary) throw ConfigError("outputs.formats", "needs at least one format");
}

std::vector<Scatterer> expand_extended(const ExtendedSpec& block) {
  if (!(block.side > 0.0) || !(block.spacing > 0.0) || block.spacing > block.side) {
    throw DomainError("cube needs side > 0 and 0 < spacing <= side");
  }
  const auto n = static_cast<std::size_t>(std::floor(block.side / block.spacing + 1e-9)) + 1;
  const double mid = 0.5 * static_cast<double>(n - 1);
  std::vector<Scatterer> out;
  out.reserve(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        const Point3 off{(static_cast<double>(i) - mid) * block.spacing, (static_cast<double>(j) - mid) * block.spacing,
                         (static_cast<double>(l) - mid) * block.spacing};
        out.push_back({block.center + off, block.polarizability});
      }
    }
  }
  return out;
}

ArrayGeometry build_array(const ScenarioConfig& c) {
  const double s = length_scale(c);
  if (c.array.shape == ArrayShape::Disk) return make_disk_array(c.array.a * s, c.array.n_r, c.array.n_theta);
  return make_square_array(c.array.a * s, c.array.n);
}

FrequencyBand build_band(const ScenarioConfig& c) {
  const std::size_t n = c.band.n_freq > 0 ? c.band.n_freq : default_frequency_count(c.band.bandwidth);
  return make_band(c.band.f0, c.band.bandwidth, n);
}

std::vector<Dipole> build_dipoles(const ScenarioConfig& c) {
  const double s = length_scale(c);
  std::vector<Dipole> out;
  for (const auto& d : c.dipoles) out.push_back({s * d.position, d.polarization});
  return out;
}

std::vector<Scatterer> build_scatterers(const ScenarioConfig& c) {
  const double s = length_scale(c);
  if (c.scene == SceneKind::Extended) {
    ExtendedSpec e = c.extended;
    e.center = s * e.center;
    e.side *= s;
    e.spacing *= s;
    return expand_extended(e);
  }
  std::vector<Scatterer> out;
  for (const auto& sc : c.scatterers) out.push_back({s * sc.position, sc.polarizability});
  return out;
}

ImagingGrid build_grid(const ScenarioConfig& c, const GridSpec& g) {
  const double s = length_scale(c);
  const double lambda0 = c.medium.c / c.band.f0;
  std::vector<Point3> steps;
  for (std::size_t a = 0; a < g.axes.size(); ++a) {
    const double h = g.spacing.empty() ? (g.axes[a] == 'z' ? lambda0 / 16.0 : lambda0 / 8.0) : g.spacing[a] * s;
    Point3 step;
    if (g.axes[a] == 'x') step.x = h;
    else if (g.axes[a] == 'y') step.y = h;
    else step.z = h;
    steps.push_back(step);
  }
  return ImagingGrid::centered(s * g.center, std::move(steps), g.counts);
}

}  // namespace emkm::cli
