#include "backaction/params.hpp"

#include "backaction/errors.hpp"

namespace backaction {

PhysicalParams make_params(double wavelength, double chi0, double intensity) {
  require_finite(wavelength, "wavelength");
  require_finite(chi0, "chi0");
  require_finite(intensity, "intensity");
  require(wavelength > 0.0, "wavelength", "must be positive");
  require(chi0 > 0.0, "chi0", "must be positive");
  require(intensity >= 0.0, "intensity", "must be non-negative");

  PhysicalParams p;
  p.wavelength = wavelength;
  p.chi0 = chi0;
  p.intensity = intensity;
  p.k0 = kTwoPi / wavelength;
  p.omega0 = p.k0 * p.c;
  p.rate_prefactor = chi0 * chi0 * intensity / (p.hbar * p.c);
  return p;
}

PhysicalParams reduced_params(double chi0) {
  return make_params(1.0, chi0, kHbar * kSpeedOfLight);
}

PhysicalParams with_intensity(const PhysicalParams& p, double intensity) {
  return make_params(p.wavelength, p.chi0, intensity);
}

}  // namespace backaction
