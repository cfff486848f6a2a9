#include "backaction/rates.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "backaction/errors.hpp"
#include "backaction/paraxial.hpp"
#include "backaction/quadrature.hpp"

namespace backaction {

namespace {
constexpr double kPi = std::numbers::pi;
}

GammaP gamma_p(const CondensateProfile& profile, const PhysicalParams& params, const TransverseGrid& grid) {
  const RealGrid2D eta = profile.is_gaussian() ? column_density(profile, grid) : column_density(profile);
  double eta_sq = 0.0;
  for (double v : eta.values) eta_sq += v * v;
  eta_sq *= eta.dx * eta.dy;

  const SpectralPlane plane = fourier_plane_power(profile, grid);
  const double s = params.rate_prefactor;

  GammaP out;
  out.value = 0.25 * kPi * s / params.wavelength * eta_sq;
  out.kspace = 0.25 * kPi * s * params.k0 / std::pow(kTwoPi, 3) * plane.integral();
  const double scale = std::max(std::abs(out.value), std::abs(out.kspace));
  out.relative_mismatch = scale > 0.0 ? std::abs(out.value - out.kspace) / scale : 0.0;
  if (out.relative_mismatch > kParsevalTolerance) {
    std::ostringstream msg;
    msg << "gamma_p: real-space and k-space routes disagree by " << out.relative_mismatch
        << " (tolerance " << kParsevalTolerance << "); refine the transverse grid or widen its extent";
    throw NumericalError(msg.str());
  }
  return out;
}

GammaP gamma_p(const CondensateProfile& profile, const PhysicalParams& params) {
  const TransverseGrid grid =
      profile.is_gaussian() ? transverse_grid_for(profile.gaussian_shape(), 128) : TransverseGrid{};
  return gamma_p(profile, params, grid);
}

double gamma_l_closed(const PhysicalParams& params) {
  return 0.25 * kPi * kPi * params.rate_prefactor / std::pow(params.wavelength, 3);
}

ContourOracle gamma_l_contour_oracle(const PhysicalParams& params, double tau0, double epsilon) {
  require(std::isfinite(tau0) && params.c * tau0 >= 10.0 * params.wavelength, "tau0",
          "c * tau0 must be at least 10 wavelengths");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon", "must be positive");

  const double half_length = params.c * tau0;
  const double k0 = params.k0;
  auto integrand = [&](double z) {
    return commutator_value(0.0, 0.0, z, params, epsilon) * std::polar(1.0, -k0 * z);
  };
  QuadOptions opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  const QuadResult left = integrate(integrand, -half_length, 0.0, opts);
  const QuadResult right = integrate(integrand, 0.0, half_length, opts);
  if (!left.converged || !right.converged) {
    std::ostringstream msg;
    msg << "gamma_l_contour_oracle: quadrature did not converge (error " << left.error + right.error << ")";
    throw NumericalError(msg.str());
  }
  const double prefactor = 0.125 * k0 * params.rate_prefactor;
  const std::complex<double> total = prefactor * (left.value + right.value);

  ContourOracle out;
  out.value = total.real();
  out.imaginary_residue = total.imag();
  out.quadrature_error = prefactor * (left.error + right.error);
  // integral dz / (z - i eps) over [-L, L] = 2i arctan(L / eps)
  const std::complex<double> kernel_integral{0.0, 2.0 * std::atan(half_length / epsilon)};
  out.regularized_analytic =
      (prefactor * k0 * k0 / (std::complex<double>(0.0, 1.0) * kTwoPi * kTwoPi) * kernel_integral).real();
  return out;
}

BackactionRates rates(const CondensateProfile& profile, const PhysicalParams& params, const TransverseGrid& grid,
                      std::optional<ImaginaryParts> im_parts, double tau0) {
  BackactionRates out;
  out.gamma_p = gamma_p(profile, params, grid).value;
  out.gamma_l = gamma_l_closed(params);
  if (im_parts) {
    require_finite(im_parts->gamma_p, "im_gamma_p");
    require_finite(im_parts->gamma_l, "im_gamma_l");
    out.im_gamma_p = im_parts->gamma_p;
    out.im_gamma_l = im_parts->gamma_l;
  }
  out.tau0 = tau0;
  if (out.gamma_l < out.gamma_p) {
    std::ostringstream msg;
    msg << "rates: gamma_l (" << out.gamma_l << ") < gamma_p (" << out.gamma_p
        << "); the profile is too compact for the paraxial phase-diffusion formula";
    throw NumericalError(msg.str());
  }
  return out;
}

BackactionRates rates(const CondensateProfile& profile, const PhysicalParams& params,
                      std::optional<ImaginaryParts> im_parts, double tau0) {
  const TransverseGrid grid =
      profile.is_gaussian() ? transverse_grid_for(profile.gaussian_shape(), 128) : TransverseGrid{};
  return rates(profile, params, grid, im_parts, tau0);
}

}  // namespace backaction
