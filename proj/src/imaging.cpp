#include "backaction/imaging.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "backaction/errors.hpp"
#include "backaction/fft.hpp"
#include "backaction/rates.hpp"

namespace backaction {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(ImagingMode mode) {
  return mode == ImagingMode::dark_ground ? "dark_ground" : "phase_contrast";
}

ImagingMode parse_imaging_mode(const std::string& name) {
  if (name == "dark_ground") return ImagingMode::dark_ground;
  if (name == "phase_contrast") return ImagingMode::phase_contrast;
  throw ValidationError("mode: expected dark_ground or phase_contrast, got '" + name + "'");
}

SignalPhase signal_phase(const PhysicalParams& params, double atom_count, double eta, double peak_density) {
  require(std::isfinite(atom_count) && atom_count >= 0.0, "atom_count", "must be non-negative");
  require(std::isfinite(eta) && eta >= 0.0, "eta", "must be non-negative");
  SignalPhase out;
  out.phase = kPi / params.wavelength * params.chi0 * atom_count * eta;
  out.expansion_warning = params.chi0 * atom_count * peak_density >= 0.5;
  return out;
}

double mean_photon_number(const PhysicalParams& params, double duration) {
  require(std::isfinite(duration) && duration > 0.0, "duration", "must be positive");
  return kPi * params.wavelength * params.wavelength * params.intensity * duration / (params.hbar * params.omega0);
}

double phase_noise(double mean_photons) {
  require(std::isfinite(mean_photons) && mean_photons > 0.0, "n_bar",
          "phase noise is undefined without photons");
  return 1.0 / std::sqrt(mean_photons);
}

BackactionReport kappa(const PhysicalParams& params, double atom_count, double eta, double duration) {
  require(atom_count > 0.0, "atom_count", "must be positive");
  require(eta > 0.0, "eta", "must be positive");
  BackactionReport r;
  r.duration = duration;
  r.delta_phi = signal_phase(params, atom_count, eta).phase;
  r.n_bar = mean_photon_number(params, duration);
  r.delta_phi_noise = phase_noise(r.n_bar);
  r.snr = r.delta_phi / r.delta_phi_noise;
  r.kappa = 2.0 * gamma_l_closed(params) * duration;
  const double areal = atom_count * params.wavelength * params.wavelength * eta;
  r.kappa_from_snr = r.snr * r.snr / (areal * areal);
  r.survival = std::exp(-r.kappa);
  const double scale = std::max(std::abs(r.kappa), std::abs(r.kappa_from_snr));
  if (scale > 0.0 && std::abs(r.kappa - r.kappa_from_snr) > kKappaIdentityTolerance * scale) {
    std::ostringstream msg;
    msg << "kappa: 2 gamma_L dt = " << r.kappa << " but the signal-to-noise route gives " << r.kappa_from_snr;
    throw NumericalError(msg.str());
  }
  return r;
}

ObservationPlan plan_for_snr(const PhysicalParams& params, double atom_count, double eta, double snr_target,
                             ImagingMode mode) {
  require(std::isfinite(snr_target) && snr_target > 0.0, "snr_target", "must be positive");
  require(params.intensity > 0.0, "intensity", "must be positive to plan an observation");
  const double dphi = signal_phase(params, atom_count, eta).phase;
  require(dphi > 0.0, "signal", "no phase signal (N or eta is zero)");
  const double n_bar = (snr_target / dphi) * (snr_target / dphi);
  const double duration =
      n_bar * params.hbar * params.omega0 / (kPi * params.wavelength * params.wavelength * params.intensity);
  return {duration, mode, snr_target};
}

RealGrid2D render_image(const ComplexField2D& field, ImagingMode mode, int dc_radius_bins) {
  require(dc_radius_bins >= 0, "dc_radius_bins", "must be non-negative");
  const std::size_t nx = field.nx;
  const std::size_t ny = field.ny;
  std::vector<std::complex<double>> data = field.values;
  const Fft2D fft(nx, ny);
  fft.forward(data);

  const std::complex<double> filter =
      mode == ImagingMode::dark_ground ? std::complex<double>(0.0, 0.0) : std::complex<double>(0.0, 1.0);
  const auto r = static_cast<long>(dc_radius_bins);
  for (long by = -r; by <= r; ++by) {
    for (long bx = -r; bx <= r; ++bx) {
      if (bx * bx + by * by > r * r) continue;
      const auto ix = static_cast<std::size_t>((bx + static_cast<long>(nx)) % static_cast<long>(nx));
      const auto iy = static_cast<std::size_t>((by + static_cast<long>(ny)) % static_cast<long>(ny));
      data[iy * nx + ix] *= filter;
    }
  }

  fft.inverse(data);
  const double inv_n = 1.0 / static_cast<double>(nx * ny);
  RealGrid2D image(nx, ny, field.dx, field.dy);
  for (std::size_t i = 0; i < data.size(); ++i) image.values[i] = std::norm(data[i] * inv_n);
  return image;
}

RealGrid2D sample_shot_noise(const RealGrid2D& intensity, double photons_per_unit, std::uint64_t seed) {
  require(std::isfinite(photons_per_unit) && photons_per_unit >= 0.0, "photons_per_unit", "must be non-negative");
  std::mt19937_64 rng(seed);
  RealGrid2D counts(intensity.nx, intensity.ny, intensity.dx, intensity.dy);
  const double area = intensity.dx * intensity.dy;
  for (std::size_t i = 0; i < intensity.values.size(); ++i) {
    const double mean = photons_per_unit * intensity.values[i] * area;
    if (mean <= 0.0) continue;
    std::poisson_distribution<long long> poisson(mean);
    counts.values[i] = static_cast<double>(poisson(rng));
  }
  return counts;
}

}  // namespace backaction
