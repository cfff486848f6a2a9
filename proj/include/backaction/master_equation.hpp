#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "backaction/rates.hpp"

namespace backaction {

using ComplexMatrix = Eigen::MatrixXcd;

// Density matrix of the condensate mode in the Fock basis |0>..|n_max>,
// rho(m, n) = <m| rho |n>.
class CondensateState {
 public:
  // Validates: square, Hermitian within 1e-12, unit trace within 1e-9,
  // eigenvalues >= -1e-9.
  explicit CondensateState(ComplexMatrix rho);

  static CondensateState fock(int n_max, int n);
  // Pure state sum_n c_n |n>; amplitudes are normalized here.
  static CondensateState pure(const std::vector<std::complex<double>>& amplitudes);
  // Coherent state |alpha> truncated at n_max and renormalized.
  static CondensateState coherent(int n_max, std::complex<double> alpha);

  int n_max() const { return static_cast<int>(rho_.rows()) - 1; }
  const ComplexMatrix& rho() const { return rho_; }

  // Skips validation; for integrator internals.
  static CondensateState unchecked(ComplexMatrix rho);

 private:
  CondensateState() = default;
  ComplexMatrix rho_;
};

// <m| L1 rho |n> = [i Im(Gamma_P) (m^2 - n^2) + Re(Gamma_P) (m - n)^2] <m|rho|n>
ComplexMatrix apply_L1(const ComplexMatrix& rho, std::complex<double> gamma_p);

// With Gamma = Gamma_L - Gamma_P = g + i sigma:
//   L2 rho = g (n rho + rho n - 2 a rho a^dag) + i sigma [n, rho]
ComplexMatrix apply_L2(const ComplexMatrix& rho, std::complex<double> gamma_l, std::complex<double> gamma_p);

// d rho / dt = -L1 rho - L2 rho
ComplexMatrix generator(const ComplexMatrix& rho, const BackactionRates& rates);

// Largest dt * rate admitted by evolve():
//   dt * max(|Gamma_P| n_max^2, 2 |Gamma_L - Gamma_P| n_max) < kStabilityLimit.
inline constexpr double kStabilityLimit = 0.1;
double stiffness(const BackactionRates& rates, int n_max);

struct Evolution {
  CondensateState state;
  int steps = 0;
  double step = 0.0;             // actual step used (<= requested dt)
  double max_trace_drift = 0.0;  // max |tr rho - 1| over all steps
  bool exact_dephasing = false;  // L1-only closed-form path was taken
};

// Called after every step with (time, state).
using EvolutionObserver = std::function<void(double, const ComplexMatrix&)>;

// Integrates the master equation from 0 to t with classical RK4 at a fixed step
// <= dt (t / ceil(t / dt)). Rho is re-symmetrized after each step. When the
// depletion term vanishes (Gamma_L == Gamma_P) the exact elementwise
// exponential is used instead. Throws ValidationError with a suggested dt if
// the stability guard fails.
Evolution evolve(const CondensateState& state, const BackactionRates& rates, double t, double dt,
                 const EvolutionObserver& observer = {});

double mean_atom_number(const ComplexMatrix& rho);
double purity(const ComplexMatrix& rho);

struct PhaseDistribution {
  int n_phi = 0;
  std::vector<double> values;  // density on phi_j = 2 pi j / n_phi

  double spacing() const;
  double integral() const;
  // First circular moment integral P(phi) e^{i phi} d phi.
  std::complex<double> first_moment() const;
  // Wrapped-normal variance -2 ln |first_moment|; grows as 2 gamma_P t under dephasing.
  double wrapped_variance() const;
};

// P(phi) = (2 pi)^-1 sum_{mn} rho_mn e^{i (n - m) phi}, with n_phi >= 4 n_max.
PhaseDistribution phase_distribution(const ComplexMatrix& rho, int n_phi);

}  // namespace backaction
