#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "backaction/commands.hpp"
#include "backaction/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kNumerical = 2 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backaction of dispersive imaging on a Bose-Einstein condensate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--config", config_path, "Scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--seed", seed, "Seed for randomized checks and shot-noise sampling");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

  // Global options may appear after the subcommand as well.
  app.fallthrough();
  auto* rates = app.add_subcommand("rates", "Phase-diffusion and depletion rates");
  auto* estimate = app.add_subcommand("estimate", "Depletion constant over an atom-number sweep");
  auto* evolve = app.add_subcommand("evolve", "Master-equation evolution of the condensate mode");
  auto* image = app.add_subcommand("image", "Dark-ground and phase-contrast images");
  auto* check = app.add_subcommand("check", "Numerical self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    auto ctx = backaction::make_context(backaction::load_config(config_path), out_dir, seed, threads);
    if (rates->parsed()) {
      std::cout << backaction::cmd_rates(ctx).dump(2) << "\n";
    } else if (estimate->parsed()) {
      std::cout << backaction::cmd_estimate(ctx).dump(2) << "\n";
    } else if (evolve->parsed()) {
      std::cout << backaction::cmd_evolve(ctx)["summary"].dump(2) << "\n";
    } else if (image->parsed()) {
      std::cout << backaction::cmd_image(ctx).dump(2) << "\n";
    } else if (check->parsed()) {
      const auto report = backaction::cmd_check(ctx);
      std::cout << report.record.dump(2) << "\n";
      return report.all_passed ? kOk : kNumerical;
    }
  } catch (const backaction::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const backaction::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
