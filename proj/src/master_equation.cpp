#include "backaction/master_equation.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

#include "backaction/errors.hpp"

namespace backaction {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

void symmetrize(ComplexMatrix& rho) {
  const ComplexMatrix adj = rho.adjoint();
  rho = 0.5 * (rho + adj);
}
}  // namespace

CondensateState::CondensateState(ComplexMatrix rho) : rho_(std::move(rho)) {
  require(rho_.rows() > 0 && rho_.rows() == rho_.cols(), "state.rho", "must be a non-empty square matrix");
  require(rho_.allFinite(), "state.rho", "entries must be finite");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  require(herm <= 1e-12, "state.rho", "must be Hermitian");
  require(std::abs(rho_.trace() - 1.0) <= 1e-9, "state.rho", "trace must be 1");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho_, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-9, "state.rho", "must be positive semidefinite");
}

CondensateState CondensateState::unchecked(ComplexMatrix rho) {
  CondensateState s;
  s.rho_ = std::move(rho);
  return s;
}

CondensateState CondensateState::fock(int n_max, int n) {
  require(n_max >= 0, "n_max", "must be non-negative");
  require(n >= 0 && n <= n_max, "n", "Fock index outside [0, n_max]");
  ComplexMatrix rho = ComplexMatrix::Zero(n_max + 1, n_max + 1);
  rho(n, n) = 1.0;
  return CondensateState(std::move(rho));
}

CondensateState CondensateState::pure(const std::vector<std::complex<double>>& amplitudes) {
  require(!amplitudes.empty(), "amplitudes", "must not be empty");
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) psi(static_cast<Eigen::Index>(i)) = amplitudes[i];
  const double norm = psi.norm();
  require(norm > 0.0 && std::isfinite(norm), "amplitudes", "must have non-zero finite norm");
  psi /= norm;
  ComplexMatrix rho = psi * psi.adjoint();
  symmetrize(rho);
  return CondensateState(std::move(rho));
}

CondensateState CondensateState::coherent(int n_max, std::complex<double> alpha) {
  require(n_max >= 0, "n_max", "must be non-negative");
  std::vector<std::complex<double>> amps(n_max + 1);
  std::complex<double> term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= n_max; ++n) {
    amps[n] = term;
    term *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return pure(amps);
}

ComplexMatrix apply_L1(const ComplexMatrix& rho, std::complex<double> gamma_p) {
  const Eigen::Index dim = rho.rows();
  ComplexMatrix out(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double diff = static_cast<double>(m - n);
      const double sq = static_cast<double>(m * m - n * n);
      out(m, n) = (kI * gamma_p.imag() * sq + gamma_p.real() * diff * diff) * rho(m, n);
    }
  }
  return out;
}

ComplexMatrix apply_L2(const ComplexMatrix& rho, std::complex<double> gamma_l, std::complex<double> gamma_p) {
  const std::complex<double> g = gamma_l - gamma_p;
  const Eigen::Index dim = rho.rows();
  ComplexMatrix out(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double mm = static_cast<double>(m);
      const double nn = static_cast<double>(n);
      std::complex<double> jump = 0.0;
      if (m + 1 < dim && n + 1 < dim) jump = std::sqrt((mm + 1.0) * (nn + 1.0)) * rho(m + 1, n + 1);
      out(m, n) = g.real() * ((mm + nn) * rho(m, n) - 2.0 * jump) + kI * g.imag() * (mm - nn) * rho(m, n);
    }
  }
  return out;
}

ComplexMatrix generator(const ComplexMatrix& rho, const BackactionRates& rates) {
  return -apply_L1(rho, rates.complex_gamma_p()) - apply_L2(rho, rates.complex_gamma_l(), rates.complex_gamma_p());
}

double stiffness(const BackactionRates& rates, int n_max) {
  const double n = static_cast<double>(n_max);
  return std::max(std::abs(rates.complex_gamma_p()) * n * n,
                  2.0 * std::abs(rates.complex_gamma_l() - rates.complex_gamma_p()) * n);
}

Evolution evolve(const CondensateState& state, const BackactionRates& rates, double t, double dt,
                 const EvolutionObserver& observer) {
  require(std::isfinite(t) && t >= 0.0, "t", "must be finite and non-negative");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  const int n_max = state.n_max();
  const int steps = t == 0.0 ? 0 : static_cast<int>(std::ceil(t / dt - 1e-12));
  const double h = steps == 0 ? 0.0 : t / steps;

  Evolution out{state, steps, h, 0.0, false};
  const std::complex<double> depletion = rates.complex_gamma_l() - rates.complex_gamma_p();

  if (depletion == 0.0) {
    // L1 is diagonal in (m, n): rho_mn(t) = rho_mn(0) exp(-rate_mn t).
    out.exact_dephasing = true;
    const ComplexMatrix rates_mn = apply_L1(ComplexMatrix::Ones(n_max + 1, n_max + 1), rates.complex_gamma_p());
    const ComplexMatrix& rho0 = state.rho();
    ComplexMatrix rho = rho0;
    for (int k = 1; k <= steps; ++k) {
      const double time = k * h;
      rho = rho0.cwiseProduct((-rates_mn * time).array().exp().matrix());
      out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.trace() - 1.0));
      if (observer) observer(time, rho);
    }
    out.state = CondensateState::unchecked(std::move(rho));
    return out;
  }

  const double limit = stiffness(rates, n_max) * dt;
  if (limit >= kStabilityLimit) {
    std::ostringstream msg;
    msg << "dt: step " << dt << " violates the stability guard (dt * rate = " << limit << " >= "
        << kStabilityLimit << "); use dt <= " << 0.5 * kStabilityLimit / stiffness(rates, n_max);
    throw ValidationError(msg.str());
  }

  ComplexMatrix rho = state.rho();
  for (int k = 1; k <= steps; ++k) {
    const ComplexMatrix k1 = generator(rho, rates);
    const ComplexMatrix k2 = generator(rho + 0.5 * h * k1, rates);
    const ComplexMatrix k3 = generator(rho + 0.5 * h * k2, rates);
    const ComplexMatrix k4 = generator(rho + h * k3, rates);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    symmetrize(rho);
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(rho.trace() - 1.0));
    if (observer) observer(k * h, rho);
  }
  out.state = CondensateState::unchecked(std::move(rho));
  return out;
}

double mean_atom_number(const ComplexMatrix& rho) {
  double acc = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) acc += static_cast<double>(n) * rho(n, n).real();
  return acc;
}

double purity(const ComplexMatrix& rho) { return (rho * rho).trace().real(); }

double PhaseDistribution::spacing() const { return 2.0 * std::numbers::pi / n_phi; }

double PhaseDistribution::integral() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * spacing();
}

std::complex<double> PhaseDistribution::first_moment() const {
  std::complex<double> acc = 0.0;
  for (int j = 0; j < n_phi; ++j) acc += values[j] * std::polar(1.0, j * spacing());
  return acc * spacing();
}

double PhaseDistribution::wrapped_variance() const { return -2.0 * std::log(std::abs(first_moment())); }

PhaseDistribution phase_distribution(const ComplexMatrix& rho, int n_phi) {
  const int n_max = static_cast<int>(rho.rows()) - 1;
  require(n_phi >= 4 * n_max && n_phi > 0, "n_phi", "must be at least 4 * n_max");
  // Offset sums c_d = sum_m rho(m, m + d); Hermiticity covers d < 0.
  std::vector<std::complex<double>> offsets(n_max + 1);
  for (int d = 0; d <= n_max; ++d) {
    for (int m = 0; m + d <= n_max; ++m) offsets[d] += rho(m, m + d);
  }
  PhaseDistribution out{n_phi, std::vector<double>(n_phi)};
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  for (int j = 0; j < n_phi; ++j) {
    const double phi = j * out.spacing();
    double acc = offsets[0].real();
    for (int d = 1; d <= n_max; ++d) acc += 2.0 * (offsets[d] * std::polar(1.0, d * phi)).real();
    out.values[j] = norm * acc;
  }
  return out;
}

}  // namespace backaction
