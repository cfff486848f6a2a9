#include "backaction/scenario.hpp"

#include <cmath>
#include <fstream>

#include "backaction/errors.hpp"
#include "backaction/grid_io.hpp"

namespace backaction {

using nlohmann::json;

namespace {

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& object_at(const json& parent, const char* key, const std::string& path) {
  static const json empty = json::object();
  const json* node = find(parent, key);
  if (!node) return empty;
  require(node->is_object(), path + key, "must be an object");
  return *node;
}

double number(const json& node, const std::string& path) {
  require(node.is_number(), path, "must be a number");
  const double v = node.get<double>();
  require(std::isfinite(v), path, "must be finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  const json* node = find(obj, key);
  return node ? number(*node, path + key) : fallback;
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
  const json* node = find(obj, key);
  if (!node) return std::nullopt;
  return number(*node, path + key);
}

long long integer_or(const json& obj, const char* key, long long fallback, const std::string& path) {
  const json* node = find(obj, key);
  if (!node) return fallback;
  require(node->is_number_integer() || node->is_number_unsigned(), path + key, "must be an integer");
  return node->get<long long>();
}

bool bool_or(const json& obj, const char* key, bool fallback, const std::string& path) {
  const json* node = find(obj, key);
  if (!node) return fallback;
  require(node->is_boolean(), path + key, "must be a boolean");
  return node->get<bool>();
}

std::string string_or(const json& obj, const char* key, const std::string& fallback, const std::string& path) {
  const json* node = find(obj, key);
  if (!node) return fallback;
  require(node->is_string(), path + key, "must be a string");
  return node->get<std::string>();
}

std::array<double, 3> triple(const json& node, const std::string& path) {
  require(node.is_array() && node.size() == 3, path, "must be an array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = number(node[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::complex<double> complex_pair(const json& node, const std::string& path) {
  require(node.is_array() && node.size() == 2, path, "must be [re, im]");
  return {number(node[0], path + "[0]"), number(node[1], path + "[1]")};
}

json complex_json(std::complex<double> v) { return json::array({v.real(), v.imag()}); }

}  // namespace

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  require(doc.is_object(), "config", "must be a JSON object");
  ScenarioConfig cfg;
  cfg.schema_version = static_cast<int>(integer_or(doc, "schema_version", -1, ""));
  require(cfg.schema_version == kSchemaVersion, "schema_version",
          "unsupported (expected " + std::to_string(kSchemaVersion) + ")");

  // params
  {
    const std::string p = "params.";
    const json& node = object_at(doc, "params", "");
    auto& out = cfg.params;
    out.reduced_mode = bool_or(node, "reduced_mode", false, p);
    out.chi0 = number_or(node, "chi0", 1.0, p);
    if (out.reduced_mode) {
      out.wavelength = 1.0;
      out.intensity_scale = number_or(node, "intensity_scale", 1.0, p);
      out.intensity = out.intensity_scale * kHbar * kSpeedOfLight;
      require(out.intensity_scale >= 0.0, p + "intensity_scale", "must be non-negative");
    } else {
      const json* wl = find(node, "wavelength");
      const json* in = find(node, "intensity");
      require(wl != nullptr, p + "wavelength", "is required unless reduced_mode is set");
      require(in != nullptr, p + "intensity", "is required unless reduced_mode is set");
      out.wavelength = number(*wl, p + "wavelength");
      out.intensity = number(*in, p + "intensity");
      out.intensity_scale = 1.0;
    }
    try {
      (void)make_params(out.wavelength, out.chi0, out.intensity);
    } catch (const ValidationError& e) {
      throw ValidationError(p + e.what());
    }
  }
  const double wavelength = cfg.params.wavelength;

  // profile
  {
    const std::string p = "profile.";
    const json& node = object_at(doc, "profile", "");
    auto& out = cfg.profile;
    out.kind = string_or(node, "kind", "gaussian", p);
    require(out.kind == "gaussian" || out.kind == "sampled_gaussian" || out.kind == "thomas_fermi" ||
                out.kind == "box" || out.kind == "grid_file",
            p + "kind", "must be gaussian, sampled_gaussian, thomas_fermi, box or grid_file");
    if (const json* s = find(node, "size")) out.size = triple(*s, p + "size");
    if (const json* c = find(node, "center")) out.center = triple(*c, p + "center");
    out.atom_count = number_or(node, "atom_count", 1.0, p);
    require(out.atom_count >= 0.0, p + "atom_count", "must be non-negative");
    for (std::size_t i = 0; i < 3; ++i) {
      require(out.size[i] > 0.0, p + "size[" + std::to_string(i) + "]", "must be positive");
    }
    if (out.kind == "grid_file") {
      out.path = string_or(node, "path", "", p);
      require(!out.path.empty(), p + "path", "is required for grid_file profiles");
      std::filesystem::path file(out.path);
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      require(std::filesystem::exists(file), p + "path", "file not found: " + file.string());
      out.path = file.string();
    }
  }

  // grid
  {
    const std::string p = "grid.";
    const json& node = object_at(doc, "grid", "");
    auto& out = cfg.grid;
    const auto nx = integer_or(node, "nx", 128, p);
    const auto ny = integer_or(node, "ny", 128, p);
    const auto nz = integer_or(node, "nz", 64, p);
    require(nx >= 2, p + "nx", "must be at least 2");
    require(ny >= 2, p + "ny", "must be at least 2");
    require(nz >= 1, p + "nz", "must be at least 1");
    out.nx = static_cast<std::size_t>(nx);
    out.ny = static_cast<std::size_t>(ny);
    out.nz = static_cast<std::size_t>(nz);
    if (const json* e = find(node, "extent")) {
      out.extent = triple(*e, p + "extent");
    } else {
      for (std::size_t i = 0; i < 3; ++i) out.extent[i] = 16.0 * cfg.profile.size[i];
    }
    for (std::size_t i = 0; i < 3; ++i) {
      require(out.extent[i] > 0.0, p + "extent[" + std::to_string(i) + "]", "must be positive");
    }
  }

  // observation
  {
    const std::string p = "observation.";
    const json& node = object_at(doc, "observation", "");
    auto& out = cfg.observation;
    out.mode = parse_imaging_mode(string_or(node, "mode", "phase_contrast", p));
    out.snr_target = number_or(node, "snr_target", 1.0, p);
    require(out.snr_target > 0.0, p + "snr_target", "must be positive");
    if (const json* counts = find(node, "atom_counts")) {
      require(counts->is_array(), p + "atom_counts", "must be an array");
      for (std::size_t i = 0; i < counts->size(); ++i) {
        const std::string ip = p + "atom_counts[" + std::to_string(i) + "]";
        const double n = number((*counts)[i], ip);
        require(n > 0.0, ip, "must be positive");
        out.atom_counts.push_back(n);
      }
    }
    out.duration = optional_number(node, "duration", p);
    if (out.duration) require(*out.duration > 0.0, p + "duration", "must be positive");
    out.dc_radius_bins = static_cast<int>(integer_or(node, "dc_radius_bins", 0, p));
    require(out.dc_radius_bins >= 0, p + "dc_radius_bins", "must be non-negative");
    out.shot_noise_photons = optional_number(node, "shot_noise_photons", p);
    if (out.shot_noise_photons) require(*out.shot_noise_photons >= 0.0, p + "shot_noise_photons", "must be non-negative");
  }

  // oracle
  {
    const std::string p = "oracle.";
    const json& node = object_at(doc, "oracle", "");
    auto& out = cfg.oracle;
    out.tau0 = number_or(node, "tau0", 1e3 * wavelength / kSpeedOfLight, p);
    out.epsilon = number_or(node, "epsilon", 1e-6 * wavelength, p);
    require(out.epsilon > 0.0, p + "epsilon", "must be positive");
    require(kSpeedOfLight * out.tau0 >= 10.0 * wavelength, p + "tau0", "c * tau0 must be at least 10 wavelengths");
  }

  // evolution
  {
    const std::string p = "evolution.";
    const json& node = object_at(doc, "evolution", "");
    auto& out = cfg.evolution;
    out.n_max = static_cast<int>(integer_or(node, "n_max", 16, p));
    require(out.n_max >= 0 && out.n_max <= 256, p + "n_max", "must be in [0, 256]");
    out.t = number_or(node, "t", 1.0, p);
    require(out.t >= 0.0, p + "t", "must be non-negative");
    out.dt = number_or(node, "dt", 1e-3, p);
    require(out.dt > 0.0, p + "dt", "must be positive");
    out.record_every = static_cast<int>(integer_or(node, "record_every", 1, p));
    require(out.record_every >= 1, p + "record_every", "must be at least 1");
    out.im_gamma_p = number_or(node, "im_gamma_p", 0.0, p);
    out.im_gamma_l = number_or(node, "im_gamma_l", 0.0, p);

    const json& init = object_at(node, "initial", p);
    const std::string ip = p + "initial.";
    out.initial.kind = string_or(init, "kind", "fock", ip);
    require(out.initial.kind == "fock" || out.initial.kind == "pure" || out.initial.kind == "coherent",
            ip + "kind", "must be fock, pure or coherent");
    out.initial.n = static_cast<int>(integer_or(init, "n", 0, ip));
    if (out.initial.kind == "fock") {
      require(out.initial.n >= 0 && out.initial.n <= out.n_max, ip + "n", "must lie in [0, n_max]");
    }
    if (const json* amps = find(init, "amplitudes")) {
      require(amps->is_array(), ip + "amplitudes", "must be an array of [re, im]");
      for (std::size_t i = 0; i < amps->size(); ++i) {
        out.initial.amplitudes.push_back(complex_pair((*amps)[i], ip + "amplitudes[" + std::to_string(i) + "]"));
      }
    }
    if (out.initial.kind == "pure") {
      require(!out.initial.amplitudes.empty() &&
                  out.initial.amplitudes.size() <= static_cast<std::size_t>(out.n_max) + 1,
              ip + "amplitudes", "need between 1 and n_max + 1 amplitudes");
    }
    if (const json* a = find(init, "alpha")) out.initial.alpha = complex_pair(*a, ip + "alpha");

    if (const json* r = find(node, "rates")) {
      require(r->is_object(), p + "rates", "must be an object");
      const double gp = number_or(*r, "gamma_p", 0.0, p + "rates.");
      const double gl = number_or(*r, "gamma_l", 0.0, p + "rates.");
      require(gp >= 0.0 && gl >= gp, p + "rates", "need gamma_l >= gamma_p >= 0");
      out.rates = std::make_pair(gp, gl);
    }
    if (const json* coh = find(node, "coherences")) {
      require(coh->is_array(), p + "coherences", "must be an array of [m, n]");
      for (std::size_t i = 0; i < coh->size(); ++i) {
        const auto& e = (*coh)[i];
        const std::string cp = p + "coherences[" + std::to_string(i) + "]";
        require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer(), cp,
                "must be [m, n] integers");
        const int m = e[0].get<int>();
        const int n = e[1].get<int>();
        require(m >= 0 && n >= 0 && m <= out.n_max && n <= out.n_max, cp, "indices must lie in [0, n_max]");
        out.coherences.emplace_back(m, n);
      }
    }
  }

  {
    const json& node = object_at(doc, "output", "");
    cfg.output_directory = string_or(node, "directory", "out", "output.");
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), path.string(), "cannot open config");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["schema_version"] = cfg.schema_version;
  if (cfg.params.reduced_mode) {
    doc["params"] = {{"reduced_mode", true}, {"chi0", cfg.params.chi0}, {"intensity_scale", cfg.params.intensity_scale}};
  } else {
    doc["params"] = {{"wavelength", cfg.params.wavelength}, {"chi0", cfg.params.chi0}, {"intensity", cfg.params.intensity}};
  }
  doc["profile"] = {{"kind", cfg.profile.kind},
                    {"size", cfg.profile.size},
                    {"center", cfg.profile.center},
                    {"atom_count", cfg.profile.atom_count}};
  if (!cfg.profile.path.empty()) doc["profile"]["path"] = cfg.profile.path;
  doc["grid"] = {{"nx", cfg.grid.nx}, {"ny", cfg.grid.ny}, {"nz", cfg.grid.nz}, {"extent", cfg.grid.extent}};

  json obs = {{"mode", to_string(cfg.observation.mode)},
              {"snr_target", cfg.observation.snr_target},
              {"atom_counts", cfg.observation.atom_counts},
              {"dc_radius_bins", cfg.observation.dc_radius_bins}};
  if (cfg.observation.duration) obs["duration"] = *cfg.observation.duration;
  if (cfg.observation.shot_noise_photons) obs["shot_noise_photons"] = *cfg.observation.shot_noise_photons;
  doc["observation"] = obs;

  doc["oracle"] = {{"tau0", cfg.oracle.tau0}, {"epsilon", cfg.oracle.epsilon}};

  const auto& ev = cfg.evolution;
  json init = {{"kind", ev.initial.kind}, {"n", ev.initial.n}, {"alpha", complex_json(ev.initial.alpha)}};
  json amps = json::array();
  for (const auto& a : ev.initial.amplitudes) amps.push_back(complex_json(a));
  init["amplitudes"] = amps;
  json evo = {{"n_max", ev.n_max}, {"t", ev.t},       {"dt", ev.dt}, {"record_every", ev.record_every},
              {"initial", init},   {"im_gamma_p", ev.im_gamma_p}, {"im_gamma_l", ev.im_gamma_l}};
  if (ev.rates) evo["rates"] = {{"gamma_p", ev.rates->first}, {"gamma_l", ev.rates->second}};
  json coh = json::array();
  for (const auto& [m, n] : ev.coherences) coh.push_back({m, n});
  evo["coherences"] = coh;
  doc["evolution"] = evo;
  doc["output"] = {{"directory", cfg.output_directory}};
  return doc;
}

PhysicalParams physical_params(const ScenarioConfig& cfg) {
  return make_params(cfg.params.wavelength, cfg.params.chi0, cfg.params.intensity);
}

CondensateProfile build_profile(const ScenarioConfig& cfg) {
  const auto& pc = cfg.profile;
  const auto& g = cfg.grid;
  const double dx = g.extent[0] / static_cast<double>(g.nx);
  const double dy = g.extent[1] / static_cast<double>(g.ny);
  const double dz = g.extent[2] / static_cast<double>(g.nz);
  const GaussianShape shape{pc.size[0], pc.size[1], pc.size[2], pc.center};
  if (pc.kind == "gaussian") return CondensateProfile::gaussian(shape, pc.atom_count);
  if (pc.kind == "sampled_gaussian") {
    return CondensateProfile::sampled(sample_gaussian(shape, g.nx, g.ny, g.nz, dx, dy, dz), pc.atom_count);
  }
  if (pc.kind == "thomas_fermi") {
    return CondensateProfile::sampled(sample_thomas_fermi(pc.size, g.nx, g.ny, g.nz, dx, dy, dz), pc.atom_count);
  }
  if (pc.kind == "box") {
    return CondensateProfile::sampled(sample_box(pc.size, g.nx, g.ny, g.nz, dx, dy, dz), pc.atom_count);
  }
  return CondensateProfile::sampled(io::read_density(pc.path), pc.atom_count);
}

TransverseGrid transverse_grid(const ScenarioConfig& cfg, const CondensateProfile& profile) {
  if (!profile.is_gaussian()) {
    const auto& g = profile.grid();
    return {g.nx, g.ny, g.dx, g.dy};
  }
  return {cfg.grid.nx, cfg.grid.ny, cfg.grid.extent[0] / static_cast<double>(cfg.grid.nx),
          cfg.grid.extent[1] / static_cast<double>(cfg.grid.ny)};
}

}  // namespace backaction
