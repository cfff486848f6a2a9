#include "backaction/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "backaction/errors.hpp"
#include "backaction/params.hpp"

namespace backaction {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft2D::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

Fft2D::Fft2D(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), plans_(std::make_unique<Plans>()) {
  require(nx > 0 && ny > 0, "grid", "FFT dimensions must be positive");
  std::vector<std::complex<double>> scratch(nx * ny);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf,
                                     FFTW_FORWARD, flags);
  plans_->inverse = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf,
                                     FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->inverse) throw NumericalError("FFTW planning failed");
}

Fft2D::~Fft2D() = default;
Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&&) noexcept = default;

void Fft2D::forward(std::span<std::complex<double>> data) const {
  require(data.size() == nx_ * ny_, "grid", "FFT buffer size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->forward, buf, buf);
}

void Fft2D::inverse(std::span<std::complex<double>> data) const {
  require(data.size() == nx_ * ny_, "grid", "FFT buffer size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans_->inverse, buf, buf);
}

double fft_wavenumber(std::size_t i, std::size_t n, double d) {
  const auto signed_i = i < (n + 1) / 2 ? static_cast<double>(i)
                                        : static_cast<double>(i) - static_cast<double>(n);
  return kTwoPi * signed_i / (static_cast<double>(n) * d);
}

}  // namespace backaction
