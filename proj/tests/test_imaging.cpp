#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "backaction/condensate.hpp"
#include "backaction/errors.hpp"
#include "backaction/imaging.hpp"
#include "backaction/paraxial.hpp"
#include "backaction/rates.hpp"

using namespace backaction;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const double kScenarioEta = 1.0 / (2.0 * kPi * 1e4);

// Unit plane wave with phase phi on a centered disk of radius r (in cells).
ComplexField2D disk_object(std::size_t n, double r, double phi, double* fraction = nullptr) {
  ComplexField2D f(n, n, 1.0, 1.0);
  std::size_t inside = 0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const bool in = f.x(ix) * f.x(ix) + f.y(iy) * f.y(iy) < r * r;
      f.at(ix, iy) = in ? std::polar(1.0, phi) : cd(1.0);
      inside += in;
    }
  }
  if (fraction) *fraction = static_cast<double>(inside) / static_cast<double>(n * n);
  return f;
}

double kappa_at_snr(const PhysicalParams& p, double n_atoms, double snr) {
  const auto plan = plan_for_snr(p, n_atoms, kScenarioEta, snr);
  return kappa(p, n_atoms, kScenarioEta, plan.duration).kappa;
}

}  // namespace

TEST_CASE("signal phase") {
  const auto p = reduced_params();
  CHECK(signal_phase(p, 0.0, 0.1).phase == 0.0);
  const double n_atoms = 1e4, eta = 1e-3;
  const auto tuned = reduced_params(1.0 / (n_atoms * eta));
  CHECK(signal_phase(tuned, n_atoms, eta).phase == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(signal_phase(p, 2e4, eta).phase == doctest::Approx(2.0 * signal_phase(p, 1e4, eta).phase).epsilon(1e-15));

  CHECK_FALSE(signal_phase(p, 1e3, eta, 1e-4).expansion_warning);
  CHECK(signal_phase(p, 1e3, eta, 1e-3).expansion_warning);
}

TEST_CASE("mean photon number and phase noise") {
  const auto p = reduced_params();
  CHECK(mean_photon_number(with_intensity(p, 0.0), 3.0) == 0.0);
  CHECK(mean_photon_number(p, 2.0) == doctest::Approx(2.0 * mean_photon_number(p, 1.0)).epsilon(1e-15));
  CHECK(mean_photon_number(with_intensity(p, 3.0 * p.intensity), 1.0) ==
        doctest::Approx(3.0 * mean_photon_number(p, 1.0)).epsilon(1e-15));
  const auto spot = with_intensity(p, p.hbar * p.omega0 / kPi);
  CHECK(mean_photon_number(spot, 7.5) == doctest::Approx(7.5).epsilon(1e-14));

  CHECK(phase_noise(1.0) == 1.0);
  CHECK(phase_noise(1e4) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_THROWS_AS(phase_noise(0.0), ValidationError);
  CHECK_THROWS_AS(phase_noise(-1.0), ValidationError);
}

TEST_CASE("depletion constant in the imaging scenario") {
  const auto p = reduced_params();
  SUBCASE("large condensate") {
    const auto plan = plan_for_snr(p, 1e6, kScenarioEta, 1.0);
    const auto r = kappa(p, 1e6, kScenarioEta, plan.duration);
    const double expected = std::pow(2.0 * kPi * 1e4 / 1e6, 2);
    CHECK(r.kappa == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.kappa == doctest::Approx(3.95e-3).epsilon(1e-3));
    CHECK(r.kappa > 3e-3);
    CHECK(r.kappa < 1.5e-2);
    CHECK(r.snr == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.survival == doctest::Approx(std::exp(-expected)).epsilon(1e-14));
    CHECK(plan.mode == ImagingMode::phase_contrast);
  }
  SUBCASE("small condensate disappears") {
    const auto plan = plan_for_snr(p, 1e3, kScenarioEta, 1.0);
    const auto r = kappa(p, 1e3, kScenarioEta, plan.duration);
    CHECK(r.kappa > 1e3);
    CHECK(r.kappa == doctest::Approx(3.948e3).epsilon(1e-3));
    CHECK(r.survival < 1e-100);
  }
  SUBCASE("scaling laws") {
    const double base = kappa_at_snr(p, 1e6, 1.0);
    CHECK(kappa_at_snr(p, 1e6, 2.0) == doctest::Approx(4.0 * base).epsilon(1e-12));
    CHECK(kappa_at_snr(p, 1e5, 1.0) == doctest::Approx(100.0 * base).epsilon(1e-12));
    CHECK(std::abs(kappa_at_snr(reduced_params(10.0), 1e6, 1.0) / base - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(plan_for_snr(p, 0.0, kScenarioEta, 1.0), ValidationError);
  CHECK_THROWS_AS(plan_for_snr(p, 1e6, kScenarioEta, 0.0), ValidationError);
}

TEST_CASE("kappa identity over random tuples") {
  std::mt19937_64 rng(64);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  for (int i = 0; i < 100; ++i) {
    const auto p = make_params(log_uniform(3e-7, 2e-6), log_uniform(1e-30, 1e-26), log_uniform(1e-3, 1e3));
    const double n_atoms = log_uniform(1e2, 1e8);
    const double eta = 1.0 / (2.0 * kPi * log_uniform(1e-6, 1e-4) * log_uniform(1e-6, 1e-4));
    const double dt = log_uniform(1e-9, 1e-2);
    const auto r = kappa(p, n_atoms, eta, dt);
    CHECK(std::abs(r.kappa_from_snr / r.kappa - 1.0) < 1e-12);
    CHECK(r.kappa == doctest::Approx(2.0 * gamma_l_closed(p) * dt).epsilon(1e-14));
    CHECK(r.survival > 0.0);
    CHECK(r.survival <= 1.0);
  }
}

TEST_CASE("dark-ground image") {
  const std::size_t n = 256;
  SUBCASE("featureless object is black") {
    const auto img = render_image(disk_object(n, 20.0, 0.0), ImagingMode::dark_ground);
    CHECK(img.max() < 1e-20);
  }
  SUBCASE("small phase disk") {
    const double phi = 0.05;
    double f = 0.0;
    const auto field = disk_object(n, 16.0, phi, &f);
    const auto img = render_image(field, ImagingMode::dark_ground);
    const double centre = img.at(n / 2, n / 2);
    CHECK(std::abs(centre / (phi * phi) - 1.0) < 0.05);
    CHECK(centre == doctest::Approx(std::norm(std::polar(1.0, phi) - 1.0) * (1.0 - f) * (1.0 - f)).epsilon(1e-10));
  }
  SUBCASE("Parseval power budget") {
    const auto field = disk_object(n, 10.0, 0.3);
    cd dc{};
    for (const cd& v : field.values) dc += v;
    const double expected = field.power() - std::norm(dc) * field.dx * field.dy / static_cast<double>(n * n);
    const double got = render_image(field, ImagingMode::dark_ground).integral();
    CHECK(std::abs(got - expected) <= 1e-10 * field.power());
  }
  SUBCASE("wider stop removes more light") {
    const auto field = disk_object(n, 10.0, 0.3);
    CHECK(render_image(field, ImagingMode::dark_ground, 2).integral() <
          render_image(field, ImagingMode::dark_ground, 0).integral());
  }
}

TEST_CASE("phase-contrast image") {
  const std::size_t n = 256;
  const double phi = 0.05;
  double f = 0.0;
  const auto field = disk_object(n, 16.0, phi, &f);
  const auto img = render_image(field, ImagingMode::phase_contrast);
  const cd d = 1.0 + (std::polar(1.0, phi) - 1.0) * f;
  const double analytic = std::norm(std::polar(1.0, phi) - d + cd(0.0, 1.0) * d);
  CHECK(img.at(n / 2, n / 2) == doctest::Approx(analytic).epsilon(1e-10));
  CHECK(img.at(n / 2, n / 2) - 1.0 == doctest::Approx(2.0 * phi * (1.0 - f)).epsilon(0.05));
  CHECK(img.at(n / 2, n / 2) > img.at(0, 0));

  const auto negative = render_image(disk_object(n, 16.0, -phi), ImagingMode::phase_contrast);
  CHECK(negative.at(n / 2, n / 2) < 1.0);
}

TEST_CASE("images ignore a global phase") {
  const auto field = disk_object(64, 8.0, 0.4);
  auto rotated = field;
  for (auto& v : rotated.values) v *= std::polar(1.0, 1.234);
  for (auto mode : {ImagingMode::dark_ground, ImagingMode::phase_contrast}) {
    const auto a = render_image(field, mode);
    const auto b = render_image(rotated, mode);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-14);
  }
}

TEST_CASE("thin phase mask imprints the signal phase") {
  const auto p = reduced_params(1e-3);
  const auto profile = CondensateProfile::gaussian({3.0, 2.0, 1.0, {}}, 1.0);
  const TransverseGrid grid{64, 64, 0.5, 0.5};
  const auto eta = column_density(profile, grid);
  const double n_atoms = 50.0;
  auto ones = ComplexField2D(64, 64, 0.5, 0.5);
  for (auto& v : ones.values) v = 1.0;
  const auto object = thin_phase_mask(ones, eta, n_atoms, p);
  const double expected = signal_phase(p, n_atoms, effective_eta(profile)).phase;
  CHECK(std::abs(std::arg(object.at(32, 32)) - expected) < 1e-12);
}

TEST_CASE("shot noise is seeded") {
  RealGrid2D intensity(32, 32, 0.5, 0.5);
  for (auto& v : intensity.values) v = 2.0;
  const auto a = sample_shot_noise(intensity, 100.0, 42);
  const auto b = sample_shot_noise(intensity, 100.0, 42);
  const auto c = sample_shot_noise(intensity, 100.0, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  const double mean = a.sum() / static_cast<double>(a.values.size());
  CHECK(mean == doctest::Approx(50.0).epsilon(0.02));
  for (double v : a.values) CHECK(v == std::floor(v));
  CHECK_THROWS_AS(sample_shot_noise(intensity, -1.0, 1), ValidationError);
}

TEST_CASE("imaging mode names") {
  CHECK(parse_imaging_mode("dark_ground") == ImagingMode::dark_ground);
  CHECK(parse_imaging_mode(to_string(ImagingMode::phase_contrast)) == ImagingMode::phase_contrast);
  CHECK_THROWS_AS(parse_imaging_mode("bright_field"), ValidationError);
}
