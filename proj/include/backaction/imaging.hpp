#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "backaction/grid.hpp"
#include "backaction/params.hpp"

namespace backaction {

enum class ImagingMode { dark_ground, phase_contrast };

std::string to_string(ImagingMode mode);
ImagingMode parse_imaging_mode(const std::string& name);

struct ObservationPlan {
  double duration = 0.0;  // s
  ImagingMode mode = ImagingMode::phase_contrast;
  std::optional<double> snr_target;
};

struct SignalPhase {
  double phase = 0.0;               // rad
  bool expansion_warning = false;   // chi0 N max(p0) >= 0.5
};

// Phase imprinted by N atoms at column density eta: (pi / wavelength) chi0 N eta.
// `peak_density` (m^-3) of the single-atom p0 enables the expansion-validity flag.
SignalPhase signal_phase(const PhysicalParams& params, double atom_count, double eta, double peak_density = 0.0);

// Photons in a cylinder of radius wavelength during dt: pi wavelength^2 I dt / (hbar omega0).
double mean_photon_number(const PhysicalParams& params, double duration);

// Shot-noise phase uncertainty n^{-1/2}; rejects n <= 0.
double phase_noise(double mean_photons);

struct BackactionReport {
  double delta_phi = 0.0;
  double delta_phi_noise = 0.0;
  double n_bar = 0.0;
  double snr = 0.0;
  double kappa = 0.0;           // 2 gamma_L dt
  double kappa_from_snr = 0.0;  // (dphi / delta phi)^2 (N wavelength^2 eta)^-2
  double survival = 1.0;        // exp(-kappa)
  double duration = 0.0;
};

// Relative tolerance on kappa == kappa_from_snr.
inline constexpr double kKappaIdentityTolerance = 1e-12;

// Evaluates kappa both directly and through the signal-to-noise chain, and
// throws NumericalError if they disagree beyond kKappaIdentityTolerance.
BackactionReport kappa(const PhysicalParams& params, double atom_count, double eta, double duration);

// Observation time that reaches `snr_target`: n = (snr / dphi)^2, dt = n hbar omega0 / (pi wavelength^2 I).
ObservationPlan plan_for_snr(const PhysicalParams& params, double atom_count, double eta, double snr_target,
                             ImagingMode mode = ImagingMode::phase_contrast);

// Focal-plane filtering of the field behind the object. Dark ground removes the
// unscattered light, phase contrast retards it by pi/2. The filter acts on the
// DC bin plus all bins within `dc_radius_bins` of it. Returns |E|^2.
RealGrid2D render_image(const ComplexField2D& field, ImagingMode mode, int dc_radius_bins = 0);

// Poisson photon counts with mean photons_per_unit * intensity * pixel area.
RealGrid2D sample_shot_noise(const RealGrid2D& intensity, double photons_per_unit, std::uint64_t seed);

}  // namespace backaction
