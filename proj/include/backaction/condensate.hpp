#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "backaction/grid.hpp"

namespace backaction {

// Separable Gaussian single-atom density with rms widths a_x, a_y, a_z:
//   p0(x) = prod_i (2 pi a_i^2)^{-1/2} exp(-(x_i - c_i)^2 / 2 a_i^2),
// whose transform is exp(-a_x^2 k_x^2 / 2 - a_y^2 k_y^2 / 2 - a_z^2 k_z^2 / 2) e^{-i k.c}.
struct GaussianShape {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

// Single-atom probability density p0 of the condensate mode plus the atom count.
class CondensateProfile {
 public:
  static CondensateProfile gaussian(const GaussianShape& shape, double atom_count);
  // Takes ownership of sampled p0 (m^-3). The discrete integral
  // sum * cell volume must equal 1 within 1e-9 and all samples be >= 0.
  static CondensateProfile sampled(DensityGrid3D density, double atom_count);

  bool is_gaussian() const { return std::holds_alternative<GaussianShape>(shape_); }
  const GaussianShape& gaussian_shape() const { return std::get<GaussianShape>(shape_); }
  const DensityGrid3D& grid() const { return std::get<DensityGrid3D>(shape_); }
  double atom_count() const { return atom_count_; }

  // Stable content hash (hex SHA-256 of kind, dimensions and samples).
  std::string digest() const;

 private:
  CondensateProfile(std::variant<GaussianShape, DensityGrid3D> shape, double atom_count)
      : shape_(std::move(shape)), atom_count_(atom_count) {}
  std::variant<GaussianShape, DensityGrid3D> shape_;
  double atom_count_ = 0.0;
};

struct TransverseGrid {
  std::size_t nx = 128;
  std::size_t ny = 128;
  double dx = 0.0;
  double dy = 0.0;
};

// Centered grid spanning +-half_widths[k] sigma in x and y with n points each.
TransverseGrid transverse_grid_for(const GaussianShape& shape, std::size_t n, double half_width_sigmas = 8.0);

// --- generators (all normalized so that sum * cell volume == 1) ---
DensityGrid3D sample_gaussian(const GaussianShape& shape, std::size_t nx, std::size_t ny, std::size_t nz,
                              double dx, double dy, double dz);
// Inverted parabola max(0, 1 - x^2/Rx^2 - y^2/Ry^2 - z^2/Rz^2).
DensityGrid3D sample_thomas_fermi(std::array<double, 3> radii, std::size_t nx, std::size_t ny, std::size_t nz,
                                  double dx, double dy, double dz);
// Uniform density on the grid cells whose centers lie inside the box.
DensityGrid3D sample_box(std::array<double, 3> lengths, std::size_t nx, std::size_t ny, std::size_t nz, double dx,
                         double dy, double dz);
// Weighted Gaussian mixture; weights are normalized internally.
DensityGrid3D sample_mixture(std::span<const GaussianShape> components, std::span<const double> weights,
                             std::size_t nx, std::size_t ny, std::size_t nz, double dx, double dy, double dz);

// eta(x, y) = integral of p0 dz (m^-2). Gaussian profiles are evaluated in
// closed form on `grid`; sampled profiles use the periodic trapezoid rule in z
// on their own x-y grid, and `grid` must match it.
RealGrid2D column_density(const CondensateProfile& profile, const TransverseGrid& grid);
RealGrid2D column_density(const CondensateProfile& profile);  // sampled: own grid; Gaussian: 128^2, +-8 sigma

// Peak column density: exactly 1 / (2 pi a_x a_y) for Gaussians.
double effective_eta(const CondensateProfile& profile);

// p0~(k) = integral p0 e^{-i k.x} d^3x. Sampled profiles: direct sum over cells.
std::complex<double> fourier_density(const CondensateProfile& profile, std::array<double, 3> k);

// |p0~(k_x, k_y, 0)|^2 sampled on the FFT wavenumber grid of a transverse grid,
// FFT bin order (bin 0 is k = 0).
struct SpectralPlane {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dkx = 0.0;
  double dky = 0.0;
  std::vector<double> power;

  double integral() const;  // sum * dkx * dky
};

// Gaussian: closed form. Sampled: 2D FFT of the column density.
SpectralPlane fourier_plane_power(const CondensateProfile& profile, const TransverseGrid& grid);

}  // namespace backaction
