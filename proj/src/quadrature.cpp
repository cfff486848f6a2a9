#include "backaction/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace backaction {

namespace {

// G7-K15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::complex<double> fc = f(center);
  std::complex<double> kron = fc * kWk[7];
  std::complex<double> gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const std::complex<double> sum = f(center - dx) + f(center + dx);
    kron += kWk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kron *= half;
  gauss *= half;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult integrate(const ComplexIntegrand& f, double a, double b, const QuadOptions& opts) {
  QuadResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod(f, a, b);
  result.evaluations = 15;
  std::complex<double> total = first.value;
  double error = first.error;
  heap.push(first);

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
  int intervals = 1;
  while (error > target() && intervals < opts.max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;  // interval no longer divisible in double precision
    }
    Segment left = kronrod(f, worst.a, mid);
    Segment right = kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum from the leaves to shed accumulated update rounding.
  total = 0.0;
  error = 0.0;
  std::vector<Segment> leaves;
  leaves.reserve(heap.size());
  while (!heap.empty()) {
    leaves.push_back(heap.top());
    heap.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  for (const auto& s : leaves) {
    total += s.value;
    error += s.error;
  }
  result.value = total;
  result.error = error;
  result.converged = error <= target();
  return result;
}

QuadResult integrate_2d(const std::function<std::complex<double>(double, double)>& f, double ax,
                        double bx, double ay, double by, const QuadOptions& opts) {
  QuadResult out;
  double inner_error = 0.0;
  bool inner_ok = true;
  int evaluations = 0;
  auto outer = [&](double y) {
    const QuadResult row = integrate([&](double x) { return f(x, y); }, ax, bx, opts);
    inner_error = std::max(inner_error, row.error);
    inner_ok = inner_ok && row.converged;
    evaluations += row.evaluations;
    return row.value;
  };
  const QuadResult col = integrate(outer, ay, by, opts);
  out.value = col.value;
  out.error = col.error + inner_error * std::abs(by - ay);
  out.evaluations = evaluations;
  out.converged = col.converged && inner_ok;
  return out;
}

}  // namespace backaction
