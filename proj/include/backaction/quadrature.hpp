#pragma once

#include <complex>
#include <functional>

namespace backaction {

struct QuadOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
};

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;  // Kronrod-Gauss difference summed over intervals
  int evaluations = 0;
  bool converged = false;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the interval with the
// largest error estimate is bisected until the total error meets
// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
QuadResult integrate(const ComplexIntegrand& f, double a, double b, const QuadOptions& opts = {});

// Iterated 2D version over [ax, bx] x [ay, by]; inner integrals use the same options.
QuadResult integrate_2d(const std::function<std::complex<double>(double, double)>& f, double ax,
                        double bx, double ay, double by, const QuadOptions& opts = {});

}  // namespace backaction
