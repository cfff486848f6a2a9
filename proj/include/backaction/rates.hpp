#pragma once

#include <optional>

#include "backaction/condensate.hpp"
#include "backaction/params.hpp"

namespace backaction {

// Real parts of the phase-diffusion and depletion rates, with the imaginary
// parts carried through for the master equation. The imaginary parts have no
// closed form here; they are user inputs and default to zero.
struct BackactionRates {
  double gamma_p = 0.0;     // s^-1
  double gamma_l = 0.0;     // s^-1
  double im_gamma_p = 0.0;  // s^-1
  double im_gamma_l = 0.0;  // s^-1
  double tau0 = 0.0;        // s, metadata only

  std::complex<double> complex_gamma_p() const { return {gamma_p, im_gamma_p}; }
  std::complex<double> complex_gamma_l() const { return {gamma_l, im_gamma_l}; }
};

struct GammaP {
  double value = 0.0;          // real-space route (returned rate)
  double kspace = 0.0;         // spectral route
  double relative_mismatch = 0.0;
};

// Relative agreement required between the real-space and k-space routes.
inline constexpr double kParsevalTolerance = 1e-4;

// gamma_P = (pi/4) s / wavelength * integral (integral p0 dz)^2 dx dy, cross-checked
// against (pi/4) s k0 / (2 pi)^3 * integral |p0~(k_x, k_y, 0)|^2 dk_x dk_y.
// Gaussian profiles are sampled on `grid`; sampled profiles use their own grid.
// Throws NumericalError (with refinement advice) if the routes disagree by more
// than kParsevalTolerance.
GammaP gamma_p(const CondensateProfile& profile, const PhysicalParams& params, const TransverseGrid& grid);
GammaP gamma_p(const CondensateProfile& profile, const PhysicalParams& params);

// (pi^2 / 4) s / wavelength^3, independent of the condensate shape.
double gamma_l_closed(const PhysicalParams& params);

struct ContourOracle {
  double value = 0.0;            // s^-1
  double imaginary_residue = 0.0;  // should vanish by symmetry
  double quadrature_error = 0.0;   // s^-1
  double regularized_analytic = 0.0;  // same integral via 2i arctan(c tau0 / eps)
};

// Numerical z-integral of the regularized on-axis commutator,
//   gamma_L = (k0/8) s * integral_{-c tau0}^{c tau0} C(0, 0, z) e^{-i k0 z} dz,
// by adaptive Gauss-Kronrod split at z = 0.
// Requires c tau0 >= 10 wavelengths and epsilon > 0.
ContourOracle gamma_l_contour_oracle(const PhysicalParams& params, double tau0, double epsilon);

struct ImaginaryParts {
  double gamma_p = 0.0;
  double gamma_l = 0.0;
};

// gamma_P and closed-form gamma_L bundled. Throws NumericalError if gamma_L < gamma_P,
// which happens only when the column density is too compact for the paraxial
// treatment (integral eta^2 dx dy > pi / wavelength^2).
BackactionRates rates(const CondensateProfile& profile, const PhysicalParams& params, const TransverseGrid& grid,
                      std::optional<ImaginaryParts> im_parts = std::nullopt, double tau0 = 0.0);
BackactionRates rates(const CondensateProfile& profile, const PhysicalParams& params,
                      std::optional<ImaginaryParts> im_parts = std::nullopt, double tau0 = 0.0);

}  // namespace backaction
