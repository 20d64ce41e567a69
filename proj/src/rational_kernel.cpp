#include "specmeasure/rational_kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace specmeasure {

namespace {

constexpr double kPi = std::numbers::pi;

double max_pole_modulus(const std::vector<Complex>& poles) {
  double r = 0.0;
  for (const auto& a : poles) r = std::max(r, std::abs(a));
  return r;
}

// Direct evaluation of the single-sum form. Accurate while the moment
// cancellation (~ x^{-(m+1)} result from O(1/x) terms) stays within double
// precision; callers switch to the moment series for large |x|.
double value_direct(const std::vector<Complex>& poles, const std::vector<Complex>& residues,
                    double x) {
  Complex s = 0.0;
  for (std::size_t j = 0; j < poles.size(); ++j) s += residues[j] / (x - poles[j]);
  return s.imag() / kPi;
}

// Tail evaluation via the moment expansion
//   K(x) = (1/pi) sum_{p >= m} Im(M_p) x^{-(p+1)},  M_p = sum_j alpha_j a_j^p,
// which is free of the cancellation that ruins the direct form at large |x|.
// Converges geometrically for |x| > max|a_j|.
double value_series(const std::vector<Complex>& poles, const std::vector<Complex>& residues,
                    double x) {
  const std::size_t m = poles.size();
  double pole_radius = 0.0;
  for (const auto& a : poles) pole_radius = std::max(pole_radius, std::abs(a));
  std::vector<Complex> mp(m);
  for (std::size_t j = 0; j < m; ++j) mp[j] = residues[j] * std::pow(poles[j], double(m));
  const double inv_x = 1.0 / x;
  const double ratio = pole_radius * std::abs(inv_x);  // < 1 past the crossover
  double scale = std::pow(inv_x, double(m + 1));
  double total = 0.0;
  for (int p = 0; p < 512; ++p) {
    Complex moment = 0.0;
    double moment_bound = 0.0;
    for (const auto& v : mp) {
      moment += v;
      moment_bound += std::abs(v);
    }
    total += moment.imag() * scale;
    // geometric bound on everything not yet summed (individual moments may
    // vanish, so the last term is no tail estimate)
    const double tail = moment_bound * std::abs(scale) * ratio / (1.0 - ratio);
    if (tail <= 1e-18 * std::max(std::abs(total), 1e-300)) break;
    for (std::size_t j = 0; j < m; ++j) mp[j] *= poles[j];
    scale *= inv_x;
  }
  return total / kPi;
}

}  // namespace

std::vector<Complex> equispaced_poles(int m) {
  if (m < 1) throw Error("kernel order must be a positive integer");
  std::vector<Complex> poles(m);
  for (int j = 1; j <= m; ++j) poles[j - 1] = Complex(2.0 * j / (m + 1) - 1.0, 1.0);
  return poles;
}

std::vector<Complex> vandermonde_residues(const std::vector<Complex>& poles,
                                          std::vector<std::string>* warnings) {
  const int m = static_cast<int>(poles.size());
  if (m < 1) throw Error("at least one pole is required");
  for (int j = 0; j < m; ++j) {
    if (poles[j].imag() <= 0.0)
      throw Error("all poles must lie in the open upper half-plane");
    for (int k = j + 1; k < m; ++k)
      if (poles[j] == poles[k]) throw SingularSystemError("repeated pole in Vandermonde system");
  }

  Eigen::MatrixXcd V(m, m);
  for (int col = 0; col < m; ++col) {
    Complex p = 1.0;
    for (int row = 0; row < m; ++row) {
      V(row, col) = p;
      p *= poles[col];
    }
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  rhs(0) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
  const Eigen::VectorXcd alpha = lu.solve(rhs);
  const double residual = (V * alpha - rhs).cwiseAbs().maxCoeff();
  if (!alpha.allFinite() || residual > 1e-6)
    throw SingularSystemError("Vandermonde system is numerically singular (residual " +
                              std::to_string(residual) + ")");

  if (m > 10 && warnings)
    warnings->push_back("Vandermonde system of order " + std::to_string(m) +
                        " is ill-conditioned; residues may lose accuracy");

  return {alpha.data(), alpha.data() + m};
}

RationalKernel RationalKernel::equispaced(int m) {
  return from_poles(equispaced_poles(m));
}

RationalKernel RationalKernel::from_poles(std::vector<Complex> poles) {
  RationalKernel k;
  k.order = static_cast<int>(poles.size());
  k.residues = vandermonde_residues(poles, &k.warnings);
  k.poles = std::move(poles);
  return k;
}

double RationalKernel::value(double x) const {
  const double crossover = std::max(16.0, 4.0 * max_pole_modulus(poles));
  if (std::abs(x) >= crossover) return value_series(poles, residues, x);
  return value_direct(poles, residues, x);
}

double RationalKernel::scaled(double x, double eps) const {
  if (!(eps > 0.0)) throw Error("smoothing parameter must be positive");
  return value(x / eps) / eps;
}

double RationalKernel::moment_residual() const {
  const int m = order;
  double worst = 0.0;
  std::vector<Complex> mp(residues.begin(), residues.end());
  for (int k = 0; k < m; ++k) {
    Complex moment = 0.0;
    for (const auto& v : mp) moment += v;
    const Complex target = (k == 0) ? Complex(1.0) : Complex(0.0);
    worst = std::max(worst, std::abs(moment - target));
    for (int j = 0; j < m; ++j) mp[j] *= poles[j];
  }
  return worst;
}

}  // namespace specmeasure
