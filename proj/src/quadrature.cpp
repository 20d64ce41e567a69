#include "specmeasure/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specmeasure {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p_deriv = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      p_deriv = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / p_deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * p_deriv * p_deriv);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

double simpson(double fa, double fm, double fb, double h) { return h * (fa + 4.0 * fm + fb) / 6.0; }

double simpson_rec(const std::function<double(double)>& fn, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = fn(lm), frm = fn(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(fn, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(fn, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                        int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = fn(a), fm = fn(m), fb = fn(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return simpson_rec(fn, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace specmeasure
