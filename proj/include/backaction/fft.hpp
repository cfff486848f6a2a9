#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace backaction {

// In-place 2D complex DFT on an ny-by-nx row-major grid (x fastest).
// Unnormalized in both directions, FFTW sign convention: forward uses e^{-i k x}.
// Plans use FFTW_ESTIMATE so results are reproducible run to run.
class Fft2D {
 public:
  Fft2D(std::size_t nx, std::size_t ny);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;

  void forward(std::span<std::complex<double>> data) const;
  void inverse(std::span<std::complex<double>> data) const;

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

 private:
  struct Plans;
  std::size_t nx_;
  std::size_t ny_;
  std::unique_ptr<Plans> plans_;
};

// Angular wavenumber of FFT bin i on an n-point grid of spacing d (m^-1).
double fft_wavenumber(std::size_t i, std::size_t n, double d);

}  // namespace backaction
