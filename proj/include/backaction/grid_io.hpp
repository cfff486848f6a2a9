#pragma once

#include <filesystem>
#include <string>

#include "backaction/grid.hpp"

namespace backaction::io {

// Binary grid files. All share a 64-byte little-endian header:
//   char[4] magic, u32 nx, u32 ny, [u32 nz], f64 dx, f64 dy, [f64 dz], zero padding.
// Payload follows, row-major with x fastest.
//   PXF1  complex field, interleaved f64 (re, im)
//   PXI1  real image, f64
//   PXD1  3D density, f64 (header carries nz and dz)
inline constexpr std::size_t kHeaderBytes = 64;

void write_field(const std::filesystem::path& path, const ComplexField2D& field);
ComplexField2D read_field(const std::filesystem::path& path);

void write_image(const std::filesystem::path& path, const RealGrid2D& image);
RealGrid2D read_image(const std::filesystem::path& path);

void write_density(const std::filesystem::path& path, const DensityGrid3D& density);
DensityGrid3D read_density(const std::filesystem::path& path);

// Write `contents` to a sibling temp file, then rename over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace backaction::io
