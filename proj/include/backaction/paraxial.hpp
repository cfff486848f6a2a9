#pragma once

#include <complex>
#include <vector>

#include "backaction/grid.hpp"
#include "backaction/params.hpp"

namespace backaction {

// ---------------------------------------------------------------------------
// Field commutator of the paraxial theory,
//
//   C(x, y, z) = k0^2 / (i (2 pi)^2 (z - i eps)) exp[i k0 (x^2 + y^2) / 2(z - i eps) + i k0 z],
//
// a free paraxial wave: (-i d/dz - lap_perp / 2k0) C = k0 C, with
// C(x, y, z -> 0) = delta(x) delta(y) / wavelength. The -i0 prescription is
// realized by the finite offset eps, which shifts z only inside the envelope
// (the carrier e^{i k0 z} keeps the real z), so the regularized C still solves
// the paraxial equation exactly.
// ---------------------------------------------------------------------------

// 1e-9 wavelengths.
double default_epsilon(const PhysicalParams& params);

struct CommutatorSample {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::complex<double> value;  // m^-3
};

std::complex<double> commutator_value(double x, double y, double z, const PhysicalParams& params,
                                      double epsilon);
std::complex<double> commutator_value(double x, double y, double z, const PhysicalParams& params);

// Same closed form at complex transverse coordinates; used for rotated contours.
std::complex<double> commutator_value(std::complex<double> x, std::complex<double> y, double z,
                                      const PhysicalParams& params, double epsilon);

struct TransverseIntegral {
  std::complex<double> value;  // m^-1
  double error = 0.0;
  int evaluations = 0;
};

// Integral of C over the transverse plane by adaptive 2D quadrature. Both
// transverse axes are rotated into the complex plane where the Fresnel factor
// becomes a decaying Gaussian. Expected result: e^{i k0 z} / wavelength.
TransverseIntegral transverse_integral(double z, const PhysicalParams& params, double epsilon);
TransverseIntegral transverse_integral(double z, const PhysicalParams& params);

// |(-i dz - lap_perp/2k0 - k0) C| / |k0 C| with central differences of step h.
double greens_pde_residual(double x, double y, double z, const PhysicalParams& params, double h,
                           double epsilon);
double greens_pde_residual(double x, double y, double z, const PhysicalParams& params, double h);

// ---------------------------------------------------------------------------
// Beam propagation
// ---------------------------------------------------------------------------

// Atom number density N p0 (m^-3) sampled on the field grid, one slice per
// equal-length layer covering [0, z_extent]. No slices means vacuum.
struct Medium {
  std::vector<RealGrid2D> slices;
};

struct PropagationResult {
  ComplexField2D field;
  double max_step_phase = 0.0;  // largest k0 chi0 rho dz / 2 over the run
  bool accuracy_warning = false;  // max_step_phase > pi/4
};

// Symmetric split-step Fourier solution of the optical Schroedinger equation
//   i dE/dz = -lap_perp E / 2k0 - (k0 chi0 rho / 2) E
// with periodic boundaries. Pad the grid yourself if the beam would wrap.
PropagationResult propagate(const ComplexField2D& input, const Medium& medium, double z_extent,
                            int n_steps, const PhysicalParams& params);

// Thin phase object: multiply by exp(i (k0 chi0 / 2) N eta(x, y)).
ComplexField2D thin_phase_mask(const ComplexField2D& field, const RealGrid2D& column_density,
                               double atom_count, const PhysicalParams& params);

// Gaussian beam exp(-(x^2 + y^2) / w0^2) centered on the grid.
ComplexField2D gaussian_beam(std::size_t nx, std::size_t ny, double dx, double dy, double waist);

// 1/e^2 intensity radius from the second moment: w = 2 sqrt(<x^2>), x axis.
double beam_radius_x(const ComplexField2D& field);

}  // namespace backaction
