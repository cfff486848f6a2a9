#include "backaction/paraxial.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "backaction/errors.hpp"
#include "backaction/fft.hpp"
#include "backaction/quadrature.hpp"

namespace backaction {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> regularized_z(double z, double epsilon) {
  require_finite(z, "z");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "epsilon", "must be finite and non-negative");
  if (z == 0.0 && epsilon == 0.0) throw NumericalError("commutator is singular at z = 0 without regularization");
  return {z, -epsilon};
}

}  // namespace

double default_epsilon(const PhysicalParams& params) { return 1e-9 * params.wavelength; }

std::complex<double> commutator_value(std::complex<double> x, std::complex<double> y, double z,
                                      const PhysicalParams& params, double epsilon) {
  const std::complex<double> zeta = regularized_z(z, epsilon);
  const double k0 = params.k0;
  const std::complex<double> prefactor = k0 * k0 / (kI * (kTwoPi * kTwoPi) * zeta);
  return prefactor * std::exp(kI * k0 * (x * x + y * y) / (2.0 * zeta) + kI * k0 * z);
}

std::complex<double> commutator_value(double x, double y, double z, const PhysicalParams& params,
                                      double epsilon) {
  return commutator_value(std::complex<double>(x), std::complex<double>(y), z, params, epsilon);
}

std::complex<double> commutator_value(double x, double y, double z, const PhysicalParams& params) {
  return commutator_value(x, y, z, params, default_epsilon(params));
}

TransverseIntegral transverse_integral(double z, const PhysicalParams& params, double epsilon) {
  const std::complex<double> zeta = regularized_z(z, epsilon);
  // Along x = e^{i theta} s the Fresnel exponent becomes -k0 s^2 / (2 |zeta|).
  const double theta = 0.25 * std::numbers::pi + 0.5 * std::arg(zeta);
  const std::complex<double> rot = std::polar(1.0, theta);
  const double extent = std::sqrt(2.0 * 40.0 * std::abs(zeta) / params.k0);  // e^{-40} tail

  QuadOptions opts;
  opts.rel_tol = 1e-11;
  opts.abs_tol = 0.0;
  const QuadResult q = integrate_2d(
      [&](double s, double t) { return commutator_value(rot * s, rot * t, z, params, epsilon); },
      -extent, extent, -extent, extent, opts);
  const std::complex<double> jacobian = rot * rot;
  TransverseIntegral out{q.value * jacobian, q.error, q.evaluations};
  if (!q.converged) {
    throw NumericalError("transverse_integral did not converge at z = " + std::to_string(z) +
                         " (error estimate " + std::to_string(q.error) + ")");
  }
  return out;
}

TransverseIntegral transverse_integral(double z, const PhysicalParams& params) {
  return transverse_integral(z, params, default_epsilon(params));
}

double greens_pde_residual(double x, double y, double z, const PhysicalParams& params, double h,
                           double epsilon) {
  require(h > 0.0 && std::isfinite(h), "h", "must be positive");
  auto c = [&](double xx, double yy, double zz) { return commutator_value(xx, yy, zz, params, epsilon); };
  const std::complex<double> c0 = c(x, y, z);
  const std::complex<double> dz = (c(x, y, z + h) - c(x, y, z - h)) / (2.0 * h);
  const std::complex<double> lap =
      (c(x + h, y, z) + c(x - h, y, z) + c(x, y + h, z) + c(x, y - h, z) - 4.0 * c0) / (h * h);
  const double k0 = params.k0;
  const std::complex<double> lhs = -kI * dz - lap / (2.0 * k0) - k0 * c0;
  return std::abs(lhs) / std::abs(k0 * c0);
}

double greens_pde_residual(double x, double y, double z, const PhysicalParams& params, double h) {
  return greens_pde_residual(x, y, z, params, h, default_epsilon(params));
}

PropagationResult propagate(const ComplexField2D& input, const Medium& medium, double z_extent,
                            int n_steps, const PhysicalParams& params) {
  require(n_steps >= 1, "n_steps", "must be at least 1");
  require(std::isfinite(z_extent) && z_extent >= 0.0, "z_extent", "must be finite and non-negative");
  for (const auto& slice : medium.slices) require_same_grid(input, slice, "medium slice");

  const std::size_t nx = input.nx;
  const std::size_t ny = input.ny;
  const double dz = z_extent / n_steps;
  const double k0 = params.k0;

  // Half-step diffraction propagator exp(-i k^2 dz / 4k0) and its square.
  std::vector<std::complex<double>> half(nx * ny);
  std::vector<std::complex<double>> full(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double ky = fft_wavenumber(iy, ny, input.dy);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double kx = fft_wavenumber(ix, nx, input.dx);
      const double phase = -(kx * kx + ky * ky) * dz / (2.0 * k0);
      half[iy * nx + ix] = std::polar(1.0, 0.5 * phase);
      full[iy * nx + ix] = std::polar(1.0, phase);
    }
  }

  PropagationResult result{input, 0.0, false};
  auto& data = result.field.values;
  const Fft2D fft(nx, ny);
  const double inv_n = 1.0 / static_cast<double>(nx * ny);
  const double coupling = 0.5 * k0 * params.chi0 * dz;

  fft.forward(data);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= half[i];
  for (int step = 0; step < n_steps; ++step) {
    if (!medium.slices.empty()) {
      fft.inverse(data);
      const std::size_t n_slices = medium.slices.size();
      const auto slice_index = std::min<std::size_t>(
          n_slices - 1, static_cast<std::size_t>((step + 0.5) * static_cast<double>(n_slices) / n_steps));
      const auto& rho = medium.slices[slice_index].values;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const double phase = coupling * rho[i];
        result.max_step_phase = std::max(result.max_step_phase, std::abs(phase));
        data[i] *= std::polar(inv_n, phase);
      }
      fft.forward(data);
    }
    const auto& kernel = step + 1 < n_steps ? full : half;
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= kernel[i];
  }
  fft.inverse(data);
  for (auto& v : data) v *= inv_n;
  result.accuracy_warning = result.max_step_phase > 0.25 * std::numbers::pi;
  return result;
}

ComplexField2D thin_phase_mask(const ComplexField2D& field, const RealGrid2D& column_density,
                               double atom_count, const PhysicalParams& params) {
  require_same_grid(field, column_density, "column density");
  require(std::isfinite(atom_count) && atom_count >= 0.0, "atom_count", "must be non-negative");
  ComplexField2D out = field;
  const double coupling = 0.5 * params.k0 * params.chi0 * atom_count;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] *= std::polar(1.0, coupling * column_density.values[i]);
  }
  return out;
}

ComplexField2D gaussian_beam(std::size_t nx, std::size_t ny, double dx, double dy, double waist) {
  require(waist > 0.0, "waist", "must be positive");
  ComplexField2D field(nx, ny, dx, dy);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double r2 = field.x(ix) * field.x(ix) + field.y(iy) * field.y(iy);
      field.at(ix, iy) = std::exp(-r2 / (waist * waist));
    }
  }
  return field;
}

double beam_radius_x(const ComplexField2D& field) {
  double weight = 0.0;
  double moment = 0.0;
  for (std::size_t iy = 0; iy < field.ny; ++iy) {
    for (std::size_t ix = 0; ix < field.nx; ++ix) {
      const double intensity = std::norm(field.at(ix, iy));
      weight += intensity;
      moment += intensity * field.x(ix) * field.x(ix);
    }
  }
  return 2.0 * std::sqrt(moment / weight);
}

}  // namespace backaction
