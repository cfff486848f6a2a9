#pragma once

#include <numbers>

namespace backaction {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Probe light and atom-light coupling. Immutable once built; use make_params().
//
// Units are SI. The "reduced mode" used throughout the tests takes
// wavelength = 1 m, chi0 = 1 m^3 and intensity = hbar*c, which makes the
// rate prefactor exactly 1 m^3/s.
struct PhysicalParams {
  double wavelength = 0.0;  // m
  double chi0 = 0.0;        // m^3, susceptibility = chi0 |psi|^2
  double intensity = 0.0;   // W/m^2
  double hbar = kHbar;
  double c = kSpeedOfLight;

  double k0 = 0.0;              // 2 pi / wavelength
  double omega0 = 0.0;          // k0 c
  double rate_prefactor = 0.0;  // chi0^2 I / (hbar c), m^3/s
};

PhysicalParams make_params(double wavelength, double chi0, double intensity);

// wavelength = 1, chi0 given, intensity = hbar c. rate_prefactor = chi0^2.
PhysicalParams reduced_params(double chi0 = 1.0);

// Same wavelength and chi0, new intensity.
PhysicalParams with_intensity(const PhysicalParams& p, double intensity);

}  // namespace backaction
