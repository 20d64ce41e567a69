#pragma once

#include <functional>
#include <vector>

namespace specmeasure {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(int n);

  /// Integrate fn over [a, b] with this rule.
  template <class Fn>
  auto integrate(Fn&& fn, double a, double b) const {
    using R = decltype(fn(0.0));
    R total{};
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      total += weights[i] * fn(mid + half * nodes[i]);
    return total * half;
  }
};

/// Adaptive Simpson quadrature of fn over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol,
                        int max_depth = 48);

}  // namespace specmeasure
