#include "backaction/grid_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <algorithm>

#include "backaction/errors.hpp"

namespace backaction {

ComplexField2D::ComplexField2D(std::size_t nx_, std::size_t ny_, double dx_, double dy_,
                               std::complex<double> fill)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {
  require(is_power_of_two(nx) && is_power_of_two(ny), "grid", "nx and ny must be powers of two");
  require(dx > 0.0 && dy > 0.0 && std::isfinite(dx) && std::isfinite(dy), "grid",
          "dx and dy must be positive");
  values.assign(nx * ny, fill);
}

double ComplexField2D::power() const {
  double acc = 0.0;
  for (const auto& v : values) acc += std::norm(v);
  return acc * dx * dy;
}

RealGrid2D::RealGrid2D(std::size_t nx_, std::size_t ny_, double dx_, double dy_, double fill)
    : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {
  require(nx > 0 && ny > 0, "grid", "nx and ny must be positive");
  require(dx > 0.0 && dy > 0.0 && std::isfinite(dx) && std::isfinite(dy), "grid",
          "dx and dy must be positive");
  values.assign(nx * ny, fill);
}

double RealGrid2D::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
double RealGrid2D::integral() const { return sum() * dx * dy; }
double RealGrid2D::max() const { return *std::max_element(values.begin(), values.end()); }

DensityGrid3D::DensityGrid3D(std::size_t nx_, std::size_t ny_, std::size_t nz_, double dx_, double dy_,
                             double dz_)
    : nx(nx_), ny(ny_), nz(nz_), dx(dx_), dy(dy_), dz(dz_) {
  require(nx > 0 && ny > 0 && nz > 0, "grid", "nx, ny and nz must be positive");
  require(dx > 0.0 && dy > 0.0 && dz > 0.0, "grid", "dx, dy and dz must be positive");
  values.assign(nx * ny * nz, 0.0);
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(std::size_t nx_a, std::size_t ny_a, double dx_a, double dy_a, std::size_t nx_b,
                       std::size_t ny_b, double dx_b, double dy_b, const char* what) {
  require(nx_a == nx_b && ny_a == ny_b, what, "grid shape mismatch");
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
  require(close(dx_a, dx_b) && close(dy_a, dy_b), what, "grid spacing mismatch");
}

namespace io {

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
  }
  void magic(const char* m) { bytes_.append(m, 4); }
  void pad_header() { bytes_.resize(kHeaderBytes, '\0'); }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), path_, "cannot open for reading");
    bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  void expect_magic(const char* m) {
    need(4);
    require(std::memcmp(bytes_.data(), m, 4) == 0, path_, std::string("bad magic, expected ") + m);
    pos_ = 4;
  }
  std::uint32_t u32() {
    need(pos_ + 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(pos_ + 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  void skip_header() { pos_ = kHeaderBytes; }
  void expect_payload(std::size_t count_f64) {
    require(bytes_.size() == kHeaderBytes + 8 * count_f64, path_, "payload size does not match header");
  }

 private:
  void need(std::size_t n) const { require(bytes_.size() >= n, path_, "truncated file"); }
  std::string path_;
  std::string bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t n) {
  require(n <= 0xffffffffu, "grid", "dimension exceeds u32");
  return static_cast<std::uint32_t>(n);
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), tmp.string(), "cannot open for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    require(static_cast<bool>(out), tmp.string(), "write failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_field(const std::filesystem::path& path, const ComplexField2D& field) {
  Writer w;
  w.magic("PXF1");
  w.u32(checked_u32(field.nx));
  w.u32(checked_u32(field.ny));
  w.f64(field.dx);
  w.f64(field.dy);
  w.pad_header();
  for (const auto& v : field.values) {
    w.f64(v.real());
    w.f64(v.imag());
  }
  write_atomically(path, w.bytes());
}

ComplexField2D read_field(const std::filesystem::path& path) {
  Reader r(path);
  r.expect_magic("PXF1");
  const std::size_t nx = r.u32();
  const std::size_t ny = r.u32();
  const double dx = r.f64();
  const double dy = r.f64();
  r.expect_payload(2 * nx * ny);
  r.skip_header();
  ComplexField2D field(nx, ny, dx, dy);
  for (auto& v : field.values) {
    const double re = r.f64();
    const double im = r.f64();
    v = {re, im};
  }
  return field;
}

void write_image(const std::filesystem::path& path, const RealGrid2D& image) {
  Writer w;
  w.magic("PXI1");
  w.u32(checked_u32(image.nx));
  w.u32(checked_u32(image.ny));
  w.f64(image.dx);
  w.f64(image.dy);
  w.pad_header();
  for (double v : image.values) w.f64(v);
  write_atomically(path, w.bytes());
}

RealGrid2D read_image(const std::filesystem::path& path) {
  Reader r(path);
  r.expect_magic("PXI1");
  const std::size_t nx = r.u32();
  const std::size_t ny = r.u32();
  const double dx = r.f64();
  const double dy = r.f64();
  r.expect_payload(nx * ny);
  r.skip_header();
  RealGrid2D image(nx, ny, dx, dy);
  for (auto& v : image.values) v = r.f64();
  return image;
}

void write_density(const std::filesystem::path& path, const DensityGrid3D& density) {
  Writer w;
  w.magic("PXD1");
  w.u32(checked_u32(density.nx));
  w.u32(checked_u32(density.ny));
  w.u32(checked_u32(density.nz));
  w.f64(density.dx);
  w.f64(density.dy);
  w.f64(density.dz);
  w.pad_header();
  for (double v : density.values) w.f64(v);
  write_atomically(path, w.bytes());
}

DensityGrid3D read_density(const std::filesystem::path& path) {
  Reader r(path);
  r.expect_magic("PXD1");
  const std::size_t nx = r.u32();
  const std::size_t ny = r.u32();
  const std::size_t nz = r.u32();
  const double dx = r.f64();
  const double dy = r.f64();
  const double dz = r.f64();
  r.expect_payload(nx * ny * nz);
  r.skip_header();
  DensityGrid3D density(nx, ny, nz, dx, dy, dz);
  for (auto& v : density.values) v = r.f64();
  return density;
}

}  // namespace io
}  // namespace backaction
