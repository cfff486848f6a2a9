#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace backaction {

// Uniform grids are centered: sample i sits at (i - n/2) * d, so index n/2 is
// the origin. Storage is row-major with x fastest: index = iy * nx + ix.

// Transverse complex optical envelope. Unit incident amplitude is 1.
struct ComplexField2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<std::complex<double>> values;

  // Throws ValidationError unless nx, ny are powers of two and dx, dy > 0.
  ComplexField2D(std::size_t nx, std::size_t ny, double dx, double dy,
                 std::complex<double> fill = {0.0, 0.0});
  ComplexField2D() = default;

  double x(std::size_t ix) const { return (static_cast<double>(ix) - static_cast<double>(nx / 2)) * dx; }
  double y(std::size_t iy) const { return (static_cast<double>(iy) - static_cast<double>(ny / 2)) * dy; }
  std::complex<double>& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
  const std::complex<double>& at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }

  // Discrete L2 norm squared: sum |v|^2 dx dy.
  double power() const;
};

// Real transverse map: column densities, intensity images.
struct RealGrid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> values;

  RealGrid2D(std::size_t nx, std::size_t ny, double dx, double dy, double fill = 0.0);
  RealGrid2D() = default;

  double x(std::size_t ix) const { return (static_cast<double>(ix) - static_cast<double>(nx / 2)) * dx; }
  double y(std::size_t iy) const { return (static_cast<double>(iy) - static_cast<double>(ny / 2)) * dy; }
  double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }

  double sum() const;       // plain sum of samples
  double integral() const;  // sum * dx * dy
  double max() const;
};

// Sampled 3D density, x fastest then y then z.
struct DensityGrid3D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;
  std::vector<double> values;

  DensityGrid3D(std::size_t nx, std::size_t ny, std::size_t nz, double dx, double dy, double dz);
  DensityGrid3D() = default;

  double x(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nx / 2)) * dx; }
  double y(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(ny / 2)) * dy; }
  double z(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(nz / 2)) * dz; }
  double& at(std::size_t ix, std::size_t iy, std::size_t iz) { return values[(iz * ny + iy) * nx + ix]; }
  double at(std::size_t ix, std::size_t iy, std::size_t iz) const { return values[(iz * ny + iy) * nx + ix]; }
  double cell_volume() const { return dx * dy * dz; }
};

bool is_power_of_two(std::size_t n);

// Throws ValidationError naming `what` if the two grids differ in shape or spacing.
void require_same_grid(std::size_t nx_a, std::size_t ny_a, double dx_a, double dy_a, std::size_t nx_b,
                       std::size_t ny_b, double dx_b, double dy_b, const char* what);

template <class A, class B>
void require_same_grid(const A& a, const B& b, const char* what) {
  require_same_grid(a.nx, a.ny, a.dx, a.dy, b.nx, b.ny, b.dx, b.dy, what);
}

}  // namespace backaction
