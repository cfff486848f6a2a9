#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "backaction/condensate.hpp"
#include "backaction/imaging.hpp"
#include "backaction/params.hpp"
#include "backaction/rates.hpp"

namespace backaction {

inline constexpr int kSchemaVersion = 1;

// Scenario file schema (JSON). Every field below is also what to_json() emits,
// so parse -> serialize -> parse is the identity.
//
//   schema_version   1
//   params           {wavelength, chi0, intensity} in SI, or
//                    {reduced_mode: true, chi0, intensity_scale}: wavelength 1, I = scale * hbar c
//   profile          {kind, size[3], center[3], atom_count, path}
//                    kind: gaussian | sampled_gaussian | thomas_fermi | box | grid_file
//                    size: rms widths (gaussian kinds), radii (thomas_fermi), edge lengths (box)
//   grid             {nx, ny, nz, extent[3]}  full widths in m; default 16 * size
//   observation      {mode, snr_target, atom_counts[], duration?, dc_radius_bins, shot_noise_photons?}
//   oracle           {tau0, epsilon}  default c tau0 = 1e3 wavelengths, epsilon = 1e-6 wavelengths
//   evolution        {n_max, t, dt, record_every, initial{kind, n, amplitudes[[re,im]], alpha[re,im]},
//                     rates?{gamma_p, gamma_l}, im_gamma_p, im_gamma_l, coherences[[m,n]]}
//   output           {directory}
struct ParamsConfig {
  bool reduced_mode = false;
  double wavelength = 1.0;
  double chi0 = 1.0;
  double intensity = 0.0;
  double intensity_scale = 1.0;
  bool operator==(const ParamsConfig&) const = default;
};

struct ProfileConfig {
  std::string kind = "gaussian";
  std::array<double, 3> size{1.0, 1.0, 1.0};
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double atom_count = 1.0;
  std::string path;
  bool operator==(const ProfileConfig&) const = default;
};

struct GridConfig {
  std::size_t nx = 128;
  std::size_t ny = 128;
  std::size_t nz = 64;
  std::array<double, 3> extent{16.0, 16.0, 16.0};
  bool operator==(const GridConfig&) const = default;
};

struct ObservationConfig {
  ImagingMode mode = ImagingMode::phase_contrast;
  double snr_target = 1.0;
  std::vector<double> atom_counts;
  std::optional<double> duration;
  int dc_radius_bins = 0;
  std::optional<double> shot_noise_photons;
  bool operator==(const ObservationConfig&) const = default;
};

struct OracleConfig {
  double tau0 = 0.0;
  double epsilon = 0.0;
  bool operator==(const OracleConfig&) const = default;
};

struct InitialStateConfig {
  std::string kind = "fock";  // fock | pure | coherent
  int n = 0;
  std::vector<std::complex<double>> amplitudes;
  std::complex<double> alpha{0.0, 0.0};
  bool operator==(const InitialStateConfig&) const = default;
};

struct EvolutionConfig {
  int n_max = 16;
  double t = 1.0;
  double dt = 1e-3;
  int record_every = 1;
  InitialStateConfig initial;
  std::optional<std::pair<double, double>> rates;  // (gamma_p, gamma_l) override
  double im_gamma_p = 0.0;
  double im_gamma_l = 0.0;
  std::vector<std::pair<int, int>> coherences;
  bool operator==(const EvolutionConfig&) const = default;
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  ParamsConfig params;
  ProfileConfig profile;
  GridConfig grid;
  ObservationConfig observation;
  OracleConfig oracle;
  EvolutionConfig evolution;
  std::string output_directory = "out";
  bool operator==(const ScenarioConfig&) const = default;
};

// Throws ValidationError with a dotted field path on any schema or range problem.
// Relative grid_file paths resolve against `base_dir`.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& config);

PhysicalParams physical_params(const ScenarioConfig& config);
CondensateProfile build_profile(const ScenarioConfig& config);
// Transverse sampling for rates and images: the profile's own x-y grid for
// sampled kinds, otherwise nx x ny over the configured extent.
TransverseGrid transverse_grid(const ScenarioConfig& config, const CondensateProfile& profile);

}  // namespace backaction
