#include "backaction/condensate.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "backaction/digest.hpp"
#include "backaction/errors.hpp"
#include "backaction/fft.hpp"
#include "backaction/params.hpp"

namespace backaction {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void validate_shape(const GaussianShape& s) {
  for (double a : {s.ax, s.ay, s.az}) {
    require(std::isfinite(a) && a > 0.0, "profile.a", "Gaussian widths must be positive");
  }
  for (double c : s.center) require_finite(c, "profile.center");
}

double discrete_mass(const DensityGrid3D& g) {
  double acc = 0.0;
  for (double v : g.values) acc += v;
  return acc * g.cell_volume();
}

void normalize(DensityGrid3D& g, const char* what) {
  const double mass = discrete_mass(g);
  require(mass > 0.0, what, "density is identically zero on the grid");
  for (auto& v : g.values) v /= mass;
}

template <class F>
DensityGrid3D sample(std::size_t nx, std::size_t ny, std::size_t nz, double dx, double dy, double dz, F&& f) {
  DensityGrid3D g(nx, ny, nz, dx, dy, dz);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t ix = 0; ix < nx; ++ix) g.at(ix, iy, iz) = f(g.x(ix), g.y(iy), g.z(iz));
    }
  }
  return g;
}

double gaussian_density(const GaussianShape& s, double x, double y, double z) {
  const double ux = (x - s.center[0]) / s.ax;
  const double uy = (y - s.center[1]) / s.ay;
  const double uz = (z - s.center[2]) / s.az;
  const double norm = std::pow(kTwoPi, 1.5) * s.ax * s.ay * s.az;
  return std::exp(-0.5 * (ux * ux + uy * uy + uz * uz)) / norm;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CondensateProfile CondensateProfile::gaussian(const GaussianShape& shape, double atom_count) {
  validate_shape(shape);
  require(std::isfinite(atom_count) && atom_count >= 0.0, "profile.atom_count", "must be non-negative");
  return CondensateProfile(shape, atom_count);
}

CondensateProfile CondensateProfile::sampled(DensityGrid3D density, double atom_count) {
  require(std::isfinite(atom_count) && atom_count >= 0.0, "profile.atom_count", "must be non-negative");
  for (double v : density.values) {
    require(std::isfinite(v) && v >= 0.0, "profile.density", "samples must be finite and non-negative");
  }
  const double mass = discrete_mass(density);
  require(std::abs(mass - 1.0) <= 1e-9, "profile.density",
          "must integrate to 1 (got " + format_double(mass) + ")");
  return CondensateProfile(std::move(density), atom_count);
}

std::string CondensateProfile::digest() const {
  std::string bytes;
  if (is_gaussian()) {
    const auto& s = gaussian_shape();
    bytes = "gaussian";
    for (double v : {s.ax, s.ay, s.az, s.center[0], s.center[1], s.center[2]}) bytes += ":" + format_double(v);
  } else {
    const auto& g = grid();
    bytes = "grid:" + std::to_string(g.nx) + ":" + std::to_string(g.ny) + ":" + std::to_string(g.nz);
    for (double v : {g.dx, g.dy, g.dz}) bytes += ":" + format_double(v);
    const auto* raw = reinterpret_cast<const char*>(g.values.data());
    bytes.append(raw, g.values.size() * sizeof(double));
  }
  bytes += ":N=" + format_double(atom_count_);
  return sha256_hex(bytes);
}

TransverseGrid transverse_grid_for(const GaussianShape& shape, std::size_t n, double half_width_sigmas) {
  validate_shape(shape);
  require(n >= 2, "grid.n", "need at least 2 points");
  return {n, n, 2.0 * half_width_sigmas * shape.ax / static_cast<double>(n),
          2.0 * half_width_sigmas * shape.ay / static_cast<double>(n)};
}

DensityGrid3D sample_gaussian(const GaussianShape& shape, std::size_t nx, std::size_t ny, std::size_t nz,
                              double dx, double dy, double dz) {
  validate_shape(shape);
  auto g = sample(nx, ny, nz, dx, dy, dz, [&](double x, double y, double z) { return gaussian_density(shape, x, y, z); });
  normalize(g, "gaussian");
  return g;
}

DensityGrid3D sample_thomas_fermi(std::array<double, 3> radii, std::size_t nx, std::size_t ny, std::size_t nz,
                                  double dx, double dy, double dz) {
  for (double r : radii) require(r > 0.0, "profile.radii", "Thomas-Fermi radii must be positive");
  auto g = sample(nx, ny, nz, dx, dy, dz, [&](double x, double y, double z) {
    const double u = 1.0 - x * x / (radii[0] * radii[0]) - y * y / (radii[1] * radii[1]) -
                     z * z / (radii[2] * radii[2]);
    return std::max(0.0, u);
  });
  normalize(g, "thomas_fermi");
  return g;
}

DensityGrid3D sample_box(std::array<double, 3> lengths, std::size_t nx, std::size_t ny, std::size_t nz, double dx,
                         double dy, double dz) {
  for (double l : lengths) require(l > 0.0, "profile.lengths", "box lengths must be positive");
  auto g = sample(nx, ny, nz, dx, dy, dz, [&](double x, double y, double z) {
    const bool inside = std::abs(x) < 0.5 * lengths[0] && std::abs(y) < 0.5 * lengths[1] && std::abs(z) < 0.5 * lengths[2];
    return inside ? 1.0 : 0.0;
  });
  normalize(g, "box");
  return g;
}

DensityGrid3D sample_mixture(std::span<const GaussianShape> components, std::span<const double> weights,
                             std::size_t nx, std::size_t ny, std::size_t nz, double dx, double dy, double dz) {
  require(!components.empty() && components.size() == weights.size(), "mixture",
          "need one weight per component");
  for (const auto& c : components) validate_shape(c);
  for (double w : weights) require(w >= 0.0, "mixture.weights", "must be non-negative");
  auto g = sample(nx, ny, nz, dx, dy, dz, [&](double x, double y, double z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) acc += weights[i] * gaussian_density(components[i], x, y, z);
    return acc;
  });
  normalize(g, "mixture");
  return g;
}

RealGrid2D column_density(const CondensateProfile& profile, const TransverseGrid& grid) {
  if (profile.is_gaussian()) {
    const auto& s = profile.gaussian_shape();
    RealGrid2D eta(grid.nx, grid.ny, grid.dx, grid.dy);
    const double peak = 1.0 / (kTwoPi * s.ax * s.ay);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      const double uy = (eta.y(iy) - s.center[1]) / s.ay;
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double ux = (eta.x(ix) - s.center[0]) / s.ax;
        eta.at(ix, iy) = peak * std::exp(-0.5 * (ux * ux + uy * uy));
      }
    }
    return eta;
  }
  const auto& g = profile.grid();
  require_same_grid(grid.nx, grid.ny, grid.dx, grid.dy, g.nx, g.ny, g.dx, g.dy, "column density grid");
  return column_density(profile);
}

RealGrid2D column_density(const CondensateProfile& profile) {
  if (profile.is_gaussian()) {
    return column_density(profile, transverse_grid_for(profile.gaussian_shape(), 128));
  }
  const auto& g = profile.grid();
  RealGrid2D eta(g.nx, g.ny, g.dx, g.dy);
  // Periodic trapezoid rule in z: every sample carries weight dz.
  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) eta.at(ix, iy) += g.at(ix, iy, iz) * g.dz;
    }
  }
  return eta;
}

double effective_eta(const CondensateProfile& profile) {
  if (profile.is_gaussian()) {
    const auto& s = profile.gaussian_shape();
    return 1.0 / (kTwoPi * s.ax * s.ay);
  }
  return column_density(profile).max();
}

std::complex<double> fourier_density(const CondensateProfile& profile, std::array<double, 3> k) {
  if (profile.is_gaussian()) {
    const auto& s = profile.gaussian_shape();
    const double env = std::exp(-0.5 * (s.ax * s.ax * k[0] * k[0] + s.ay * s.ay * k[1] * k[1] +
                                        s.az * s.az * k[2] * k[2]));
    const double phase = -(k[0] * s.center[0] + k[1] * s.center[1] + k[2] * s.center[2]);
    return std::polar(env, phase);
  }
  const auto& g = profile.grid();
  auto phases = [](std::size_t n, auto coord, double kk) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-kI * kk * coord(i));
    return out;
  };
  const auto px = phases(g.nx, [&](std::size_t i) { return g.x(i); }, k[0]);
  const auto py = phases(g.ny, [&](std::size_t i) { return g.y(i); }, k[1]);
  const auto pz = phases(g.nz, [&](std::size_t i) { return g.z(i); }, k[2]);
  std::complex<double> acc = 0.0;
  for (std::size_t iz = 0; iz < g.nz; ++iz) {
    std::complex<double> plane = 0.0;
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      std::complex<double> row = 0.0;
      for (std::size_t ix = 0; ix < g.nx; ++ix) row += g.at(ix, iy, iz) * px[ix];
      plane += row * py[iy];
    }
    acc += plane * pz[iz];
  }
  return acc * g.cell_volume();
}

double SpectralPlane::integral() const {
  double acc = 0.0;
  for (double v : power) acc += v;
  return acc * dkx * dky;
}

SpectralPlane fourier_plane_power(const CondensateProfile& profile, const TransverseGrid& grid) {
  if (profile.is_gaussian()) {
    const auto& s = profile.gaussian_shape();
    SpectralPlane plane{grid.nx, grid.ny, kTwoPi / (grid.nx * grid.dx), kTwoPi / (grid.ny * grid.dy), {}};
    plane.power.resize(grid.nx * grid.ny);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
      const double ky = fft_wavenumber(iy, grid.ny, grid.dy);
      for (std::size_t ix = 0; ix < grid.nx; ++ix) {
        const double kx = fft_wavenumber(ix, grid.nx, grid.dx);
        plane.power[iy * grid.nx + ix] = std::exp(-s.ax * s.ax * kx * kx - s.ay * s.ay * ky * ky);
      }
    }
    return plane;
  }
  const RealGrid2D eta = column_density(profile);
  SpectralPlane plane{eta.nx, eta.ny, kTwoPi / (eta.nx * eta.dx), kTwoPi / (eta.ny * eta.dy), {}};
  std::vector<std::complex<double>> buf(eta.values.begin(), eta.values.end());
  Fft2D(eta.nx, eta.ny).forward(buf);
  const double cell = eta.dx * eta.dy;
  plane.power.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) plane.power[i] = std::norm(buf[i] * cell);
  return plane;
}

}  // namespace backaction
