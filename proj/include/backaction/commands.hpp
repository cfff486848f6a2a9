#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "backaction/master_equation.hpp"
#include "backaction/scenario.hpp"

namespace backaction {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunContext {
  ScenarioConfig config;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int threads = 1;

  // {config_digest, artifact_version, seed}
  nlohmann::json provenance() const;
};

RunContext make_context(ScenarioConfig config, std::filesystem::path out_dir, std::uint64_t seed, int threads);

// Each command writes its files into ctx.out_dir (temp file + rename) and
// returns the JSON record it wrote.

// rates.json: gamma_p (both routes), closed-form gamma_l, contour oracle and deviation.
nlohmann::json cmd_rates(const RunContext& ctx);

// estimate.json + estimate.csv: one row per observation.atom_counts entry.
nlohmann::json cmd_estimate(const RunContext& ctx);

// evolve.csv time series + final_state.json.
nlohmann::json cmd_evolve(const RunContext& ctx);

// phase_map.pxi, dark_ground.pxi, phase_contrast.pxi, line_profile.csv, image.json
// (+ counts.pxi when observation.shot_noise_photons is set).
nlohmann::json cmd_image(const RunContext& ctx);

struct CheckReport {
  nlohmann::json record;
  bool all_passed = false;
};

// check.json: commutator PDE residual, transverse integral, tau0 independence,
// Parseval agreement of gamma_p, kappa identity.
CheckReport cmd_check(const RunContext& ctx);

// Serialized density matrix: {n_max, rho: [[re, im], ...] row-major}.
nlohmann::json state_to_json(const ComplexMatrix& rho);
ComplexMatrix state_from_json(const nlohmann::json& doc);

}  // namespace backaction
