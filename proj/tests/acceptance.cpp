// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "backaction/commands.hpp"
#include "backaction/condensate.hpp"
#include "backaction/imaging.hpp"
#include "backaction/master_equation.hpp"
#include "backaction/paraxial.hpp"
#include "backaction/rates.hpp"

using namespace backaction;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // s, 0 for none
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

BackactionRates make_rates(double gp, double gl, double im_gp = 0.0, double im_gl = 0.0) {
  BackactionRates r;
  r.gamma_p = gp;
  r.gamma_l = gl;
  r.im_gamma_p = im_gp;
  r.im_gamma_l = im_gl;
  return r;
}

Outcome universal_depletion() {
  double worst = 0.0, drift = 0.0;
  for (const auto& p : {reduced_params(), make_params(780e-9, 1e-28, 10.0)}) {
    const double tau0 = 1e3 * p.wavelength / p.c;
    const double eps = 1e-6 * p.wavelength;
    const double closed = gamma_l_closed(p);
    const auto base = gamma_l_contour_oracle(p, tau0, eps);
    const auto doubled = gamma_l_contour_oracle(p, 2.0 * tau0, eps);
    worst = std::max(worst, rel(base.value, closed));
    drift = std::max(drift, rel(doubled.value, base.value));
  }
  return {worst < 1e-3 && drift < 1e-6, fmt("oracle vs closed form %.2e (< 1e-3), tau0 doubling %.2e (< 1e-6)", worst, drift)};
}

Outcome gaussian_phase_diffusion() {
  double worst_analytic = 0.0, worst_routes = 0.0;
  struct Case {
    PhysicalParams p;
    GaussianShape shape;
  };
  const std::vector<Case> cases = {
      {reduced_params(), {1.0, 1.0, 1.0, {}}},
      {reduced_params(2.0), {2.5, 1.5, 0.7, {0.3, -0.2, 0.0}}},
      {reduced_params(), {100.0, 100.0, 30.0, {}}},
      {make_params(780e-9, 1e-28, 10.0), {5e-6, 3e-6, 2e-6, {}}},
  };
  for (const auto& c : cases) {
    const auto profile = CondensateProfile::gaussian(c.shape, 1.0);
    const auto g = gamma_p(profile, c.p, transverse_grid_for(c.shape, 128));
    const double analytic = c.p.rate_prefactor / (16.0 * c.p.wavelength * c.shape.ax * c.shape.ay);
    worst_analytic = std::max({worst_analytic, rel(g.value, analytic), rel(g.kspace, analytic)});
    worst_routes = std::max(worst_routes, g.relative_mismatch);
  }
  return {worst_analytic < 1e-4 && worst_routes < 1e-4,
          fmt("128^2 grid: vs s/(16 wavelength a_x a_y) %.2e (< 1e-4), routes %.2e (< 1e-4)", worst_analytic,
              worst_routes)};
}

Outcome ratio_law() {
  const auto p = reduced_params();
  std::mt19937_64 rng(56);
  std::uniform_real_distribution<double> log_a(0.0, std::log(300.0));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double ax = std::exp(log_a(rng)), ay = std::exp(log_a(rng));
    const auto r = rates(CondensateProfile::gaussian({ax, ay, 1.0, {}}, 1.0), p);
    worst = std::max(worst, rel(r.gamma_p / r.gamma_l, 1.0 / ((2.0 * kPi * ax) * (2.0 * kPi * ay))));
  }

  std::uniform_real_distribution<double> width(1.0, 2.5), offset(-2.0, 2.0), weight(0.1, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GaussianShape> shapes;
    std::vector<double> weights;
    for (int j = count(rng); j > 0; --j) {
      shapes.push_back({width(rng), width(rng), width(rng), {offset(rng), offset(rng), offset(rng)}});
      weights.push_back(weight(rng));
    }
    const auto profile = CondensateProfile::sampled(sample_mixture(shapes, weights, 64, 64, 32, 0.5, 0.5, 0.625), 1.0);
    const double gp = gamma_p(profile, p).value;
    const double gl = gamma_l_closed(p);
    if (gl - gp < -1e-12 * gl) ++violations;
  }
  return {worst < 1e-6 && violations == 0,
          fmt("10 Gaussians %.2e (< 1e-6), 50 mixtures with %d violations of gamma_L >= gamma_P", worst, violations)};
}

Outcome kappa_identity() {
  std::mt19937_64 rng(4);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = make_params(log_uniform(3e-7, 2e-6), log_uniform(1e-30, 1e-26), log_uniform(1e-3, 1e3));
    const double n = log_uniform(1e2, 1e8);
    const double eta = 1.0 / (2.0 * kPi * log_uniform(1e-6, 1e-4) * log_uniform(1e-6, 1e-4));
    const auto r = kappa(p, n, eta, log_uniform(1e-9, 1e-2));
    worst = std::max(worst, std::abs(r.kappa_from_snr - r.kappa) / r.kappa);
  }
  const double eta = 1.0 / (2.0 * kPi * 1e4);
  auto at_snr = [&](double chi0) {
    const auto p = reduced_params(chi0);
    return kappa(p, 1e6, eta, plan_for_snr(p, 1e6, eta, 1.0).duration).kappa;
  };
  const double invariance = rel(at_snr(10.0), at_snr(1.0));
  return {worst < 1e-12 && invariance < 1e-12,
          fmt("100 tuples %.2e (< 1e-12), chi0 -> 10 chi0 %.2e (< 1e-12)", worst, invariance)};
}

Outcome imaging_scenario() {
  const auto p = reduced_params();
  const double eta = 1.0 / (2.0 * kPi * 1e4);
  const auto large = kappa(p, 1e6, eta, plan_for_snr(p, 1e6, eta, 1.0).duration);
  const auto small = kappa(p, 1e3, eta, plan_for_snr(p, 1e3, eta, 1.0).duration);
  const bool ok = large.kappa >= 3.0e-3 && large.kappa <= 1.5e-2 && small.kappa > 1e3 && small.survival < 1e-100;
  return {ok, fmt("N = 1e6: kappa %.4e in [3e-3, 1.5e-2]; N = 1e3: kappa %.4e > 1e3, survival %.1e < 1e-100",
                  large.kappa, small.kappa, small.survival)};
}

ComplexMatrix dense_oracle(const ComplexMatrix& rho0, const BackactionRates& rates, double t) {
  const Eigen::Index d = rho0.rows();
  ComplexMatrix super(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      ComplexMatrix basis = ComplexMatrix::Zero(d, d);
      basis(i, j) = 1.0;
      const ComplexMatrix image = generator(basis, rates);
      super.col(j * d + i) = Eigen::Map<const Eigen::VectorXcd>(image.data(), d * d);
    }
  }
  const Eigen::VectorXcd v = (super * t).exp() * Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

Outcome master_equation() {
  std::string detail;
  bool ok = true;

  // (a)
  {
    const auto rates = make_rates(0.01, 1.0);
    const double dt = 0.5 * kStabilityLimit / stiffness(rates, 64);
    const auto e = evolve(CondensateState::coherent(64, 4.0), rates, 5.0, dt);
    ok = ok && e.max_trace_drift < 1e-9;
    detail += fmt("(a) drift %.1e", e.max_trace_drift);
  }
  // (b)
  {
    const int n_max = 10;
    const double gp = 0.05, t = 2.0;
    const ComplexMatrix rho = ComplexMatrix::Constant(n_max + 1, n_max + 1, 1.0 / (n_max + 1));
    const auto e = evolve(CondensateState(rho), make_rates(gp, gp), t, 0.01);
    double worst = 0.0;
    for (int gap : {1, 2, 5}) {
      const double exponent = -std::log(std::abs(e.state.rho()(2, 2 + gap)) / std::abs(rho(2, 2 + gap))) / t;
      worst = std::max(worst, rel(exponent, gp * gap * gap));
    }
    ok = ok && worst < 1e-4;
    detail += fmt(", (b) %.1e", worst);
  }
  // (c)
  {
    const double gamma = 0.7, t = 0.9;
    const auto e = evolve(CondensateState::fock(8, 8), make_rates(0.0, gamma), t, 1e-3);
    const double p = std::exp(-2.0 * gamma * t);
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const double binom =
          std::exp(std::lgamma(9.0) - std::lgamma(k + 1.0) - std::lgamma(9.0 - k)) * std::pow(p, k) * std::pow(1.0 - p, 8 - k);
      worst = std::max(worst, std::abs(e.state.rho()(k, k).real() - binom));
    }
    ok = ok && worst < 1e-6;
    detail += fmt(", (c) %.1e", worst);
  }
  // (d)
  {
    const auto c = CondensateState::coherent(40, 3.0);
    const double n0 = mean_atom_number(c.rho());
    const auto r1 = make_rates(0.3, 1.0);
    const double t1 = 0.8;
    const auto e1 = evolve(c, r1, t1, 0.5 * kStabilityLimit / stiffness(r1, 40));
    const double rate_error = rel(-std::log(mean_atom_number(e1.state.rho()) / n0) / t1, 2.0 * (1.0 - 0.3));
    const auto r2 = make_rates(5e-5, 1.0);
    const double t2 = 0.5;
    const auto e2 = evolve(c, r2, t2, 0.5 * kStabilityLimit / stiffness(r2, 40));
    const double limit_error = rel(mean_atom_number(e2.state.rho()) / n0, std::exp(-2.0 * t2));
    ok = ok && rate_error < 1e-4 && limit_error < 2e-4;
    detail += fmt(", (d) %.1e / %.1e", rate_error, limit_error);
  }
  // (e)
  {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n;
    ComplexMatrix a(11, 11);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {n(rng), n(rng)};
    ComplexMatrix rho0 = a * a.adjoint();
    rho0 /= rho0.trace();
    const auto rates = make_rates(0.05, 0.4, 0.02, -0.1);
    const auto e = evolve(CondensateState(rho0), rates, 1.3, 0.004);
    const double worst = (e.state.rho() - dense_oracle(rho0, rates, 1.3)).cwiseAbs().maxCoeff();
    ok = ok && worst < 1e-8;
    detail += fmt(", (e) %.1e", worst);
  }
  return {ok, detail};
}

Outcome commutator_suite() {
  const auto p = reduced_params();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> transverse(-1.0, 1.0), axial(0.5, 5.0);
  std::bernoulli_distribution sign(0.5);
  double residual = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = transverse(rng), y = transverse(rng), z = (sign(rng) ? 1.0 : -1.0) * axial(rng);
    residual = std::max(residual, greens_pde_residual(x, y, z, p, 1e-4));
  }
  double worst = 0.0;
  for (int k = -3; k <= 3; ++k) {
    for (double m : {1.0, 3.0}) {
      const double z = m * std::pow(10.0, k);
      if (z > 1e3) continue;
      worst = std::max(worst, std::abs(std::abs(transverse_integral(z, p).value) - 1.0));
    }
  }
  return {residual < 1e-5 && worst < 1e-6,
          fmt("PDE residual %.2e (< 1e-5), |transverse integral| wavelength - 1 = %.2e (< 1e-6)", residual, worst)};
}

double l2_distance(const ComplexField2D& a, const ComplexField2D& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(acc * a.dx * a.dy);
}

Outcome propagator_suite() {
  const auto p = reduced_params();
  const double w0 = 8.0;
  const auto beam = gaussian_beam(256, 256, 0.5, 0.5, w0);
  const auto far = propagate(beam, Medium{}, kPi * w0 * w0, 1, p);
  const double width_error = rel(beam_radius_x(far.field), w0 * std::sqrt(2.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 0.05);
  Medium random_medium;
  for (int s = 0; s < 5; ++s) {
    RealGrid2D slice(64, 64, 0.5, 0.5);
    for (auto& v : slice.values) v = u(rng);
    random_medium.slices.push_back(slice);
  }
  const auto small = gaussian_beam(64, 64, 0.5, 0.5, 4.0);
  const double norm_error = rel(propagate(small, random_medium, 40.0, 23, p).field.power(), small.power());

  const std::size_t n = 128;
  const double dx = 0.5, big_r = n * dx, waist = 4.0;
  const double omega = 2.0 / (p.k0 * waist * waist);
  const double rho0 = omega * omega * big_r * big_r / p.chi0;
  RealGrid2D well(n, n, dx, dx);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      well.at(ix, iy) = rho0 * (1.0 - (well.x(ix) * well.x(ix) + well.y(iy) * well.y(iy)) / (big_r * big_r));
    }
  }
  const auto mode = gaussian_beam(n, n, dx, dx, waist);
  const double length = 60.0;
  auto exact = mode;
  for (auto& v : exact.values) v *= std::polar(1.0, -(omega - 0.5 * p.k0 * p.chi0 * rho0) * length);
  std::vector<double> errors;
  for (int steps : {4, 8, 16}) errors.push_back(l2_distance(propagate(mode, Medium{{well}}, length, steps, p).field, exact));
  const double r1 = errors[0] / errors[1], r2 = errors[1] / errors[2];
  const bool ok = width_error < 1e-3 && norm_error < 1e-10 && std::abs(r1 - 4.0) <= 0.3 && std::abs(r2 - 4.0) <= 0.3;
  return {ok, fmt("width %.2e (< 1e-3), norm %.1e (< 1e-10), error ratios %.3f, %.3f (4.0 +- 0.3)", width_error,
                  norm_error, r1, r2)};
}

Outcome imaging_model() {
  const std::size_t n = 256;
  const double phi = 0.05;
  ComplexField2D disk(n, n, 1.0, 1.0), blank(n, n, 1.0, 1.0, {1.0, 0.0});
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const bool in = disk.x(ix) * disk.x(ix) + disk.y(iy) * disk.y(iy) < 16.0 * 16.0;
      disk.at(ix, iy) = in ? std::polar(1.0, phi) : cd(1.0);
    }
  }
  const double centre = render_image(disk, ImagingMode::dark_ground).at(n / 2, n / 2);
  const double disk_error = rel(centre, 2.0 - 2.0 * std::cos(phi));
  const double leak = render_image(blank, ImagingMode::dark_ground).integral() / blank.power();
  return {disk_error < 0.05 && leak < 1e-20,
          fmt("disk phi = 0.05: %.2e (< 5e-2), blank-object power fraction %.1e (< 1e-20)", disk_error, leak)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const nlohmann::json doc = {
      {"schema_version", 1},
      {"params", {{"reduced_mode", true}}},
      {"profile", {{"kind", "gaussian"}, {"size", {100.0, 100.0, 30.0}}}},
      {"observation", {{"atom_counts", {1e3, 1e4, 1e5, 1e6}}}},
      {"evolution",
       {{"n_max", 12}, {"t", 0.5}, {"dt", 1e-3}, {"record_every", 10},
        {"initial", {{"kind", "coherent"}, {"alpha", {2.0, 0.5}}}},
        {"rates", {{"gamma_p", 0.02}, {"gamma_l", 0.6}}},
        {"coherences", {{0, 1}, {2, 5}}}}}};
  const auto root = fs::temp_directory_path() / "backaction_acceptance";
  fs::remove_all(root);
  std::vector<fs::path> dirs;
  for (int run = 0; run < 2; ++run) {
    const auto ctx = make_context(parse_config(doc), root / ("run" + std::to_string(run)), 42, 2);
    (void)cmd_estimate(ctx);
    (void)cmd_evolve(ctx);
    dirs.push_back(ctx.out_dir);
  }
  int identical = 0;
  const std::vector<std::string> files = {"estimate.csv", "estimate.json", "evolve.csv", "final_state.json"};
  for (const auto& f : files) {
    const std::string a = slurp(dirs[0] / f);
    identical += !a.empty() && a == slurp(dirs[1] / f);
  }
  return {identical == static_cast<int>(files.size()),
          fmt("%d of %zu output files byte-identical across reruns", identical, files.size())};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Universal depletion rate", 1.0, universal_depletion},
      {2, "Phase-diffusion rate, Gaussian", 5.0, gaussian_phase_diffusion},
      {3, "Ratio law and rate inequality", 0.0, ratio_law},
      {4, "Depletion-constant identity", 0.0, kappa_identity},
      {5, "Imaging scenario", 1.0, imaging_scenario},
      {6, "Master equation", 30.0, master_equation},
      {7, "Commutator suite", 0.0, commutator_suite},
      {8, "Propagator suite", 0.0, propagator_suite},
      {9, "Imaging forward model", 0.0, imaging_model},
      {10, "Determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit <= 0.0 || seconds < c.time_limit;
    const bool passed = outcome.passed && in_time;
    failures += !passed;
    std::string timing = fmt("%.3f s", seconds);
    if (c.time_limit > 0.0) timing += fmt(" (< %g s)", c.time_limit);
    std::printf("%s  %2d. %s: %s [%s]\n", passed ? "PASS" : "FAIL", c.id, c.title.c_str(), outcome.detail.c_str(),
                timing.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
