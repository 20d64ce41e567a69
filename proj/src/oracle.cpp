#include "specmeasure/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "specmeasure/quadrature.hpp"

namespace specmeasure::oracle {

namespace {
constexpr double kPi = std::numbers::pi;

std::complex<double> pv_once(const ComplexFn& v, double x, double radius, int points) {
  const GaussLegendre rule(points);
  const double phi_max = std::atan(radius);
  // int_0^phi_max [v(x+t) - v(x-t)] (1+t^2)/t dphi with t = tan(phi)
  auto integrand = [&](double phi) -> std::complex<double> {
    const double t = std::tan(phi);
    return (v(x + t) - v(x - t)) * ((1.0 + t * t) / t);
  };
  return rule.integrate(integrand, 0.0, phi_max) / std::complex<double>(0.0, kPi);
}

}  // namespace

std::complex<double> pv_cauchy(const ComplexFn& v, double x, const PVQuadratureRule& rule,
                               double* err_est) {
  const std::complex<double> coarse = pv_once(v, x, rule.radius, rule.points);
  if (!err_est) return coarse;
  const std::complex<double> fine = pv_once(v, x, rule.radius, 2 * rule.points);
  *err_est = std::abs(fine - coarse);
  return fine;
}

double dense_measure(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& f,
                     const RationalKernel& kernel, double eps, double x) {
  const double scale = h.cwiseAbs().maxCoeff();
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw Error("dense_measure: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::VectorXcd weights = eig.eigenvectors().adjoint() * f;
  double total = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
    total += std::norm(weights(k)) * kernel.scaled(x - lambda(k), eps);
  return total;
}

double dense_measure_resolvent(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& f,
                               const RationalKernel& kernel, double eps, double x) {
  std::complex<double> s = 0.0;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
  for (int j = 0; j < kernel.order; ++j) {
    const std::complex<double> z = x - eps * kernel.poles[j];
    const Eigen::VectorXcd u = (h - z * id).partialPivLu().solve(f);
    s += kernel.residues[j] * f.dot(u);  // <u, f>
  }
  return -s.imag() / kPi;
}

namespace {

// I_p(s) = int_s^inf u^{-p} e^{-iu} du for p in {2, 3}. Asymptotic by-parts
// series for large s, bridged by direct quadrature below s = 40.
std::complex<double> osc_tail_integral(int p, double s) {
  constexpr double kSeriesFrom = 40.0;
  const std::complex<double> inv_i(0.0, -1.0);  // 1/i
  if (s >= kSeriesFrom) {
    // I_p = (1/i) s^{-p} e^{-is} - (p/i) I_{p+1}
    std::complex<double> total = 0.0;
    std::complex<double> factor = inv_i * std::polar(1.0, -s);
    double power = std::pow(s, -double(p));
    double coeff = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 64; ++k) {
      const std::complex<double> term = factor * coeff * power;
      if (std::abs(term) > prev) break;  // asymptotic series started diverging
      total += term;
      prev = std::abs(term);
      if (prev < 1e-18) break;
      coeff *= -(p + k);
      factor *= inv_i;
      power /= s;
    }
    return total;
  }
  const GaussLegendre rule(256);
  const std::complex<double> bridge = rule.integrate(
      [p](double u) { return std::pow(u, -double(p)) * std::polar(1.0, -u); }, s, kSeriesFrom);
  return bridge + osc_tail_integral(p, kSeriesFrom);
}

}  // namespace

std::complex<double> fourier_transform(const ComplexFn& f, double xi, int points) {
  // Composite Gauss-Legendre panels sized to the oscillation, plus two-term
  // algebraic tail corrections (f ~ A/x^2 + C/x^3) beyond the cutoff. The
  // tangent-map alternative fails here: the mapped integrand oscillates
  // infinitely fast at the endpoints whenever f decays only algebraically.
  const double cutoff = 1000.0;
  const double panel = std::min(2.0, 0.8 / std::max(std::abs(xi), 1e-12));
  const int per_panel = std::max(12, points / 333);
  const GaussLegendre rule(per_panel);
  std::complex<double> total = 0.0;
  for (double lo = -cutoff; lo < cutoff; lo += panel) {
    const double hi = std::min(lo + panel, cutoff);
    total += rule.integrate(
        [&](double x) { return f(x) * std::polar(1.0, -xi * x); }, lo, hi);
  }
  // tails: estimate A, C on each side from samples at cutoff and 2*cutoff
  for (int side : {+1, -1}) {
    const std::complex<double> f1 = f(side * cutoff), f2 = f(side * 2.0 * cutoff);
    // f(x) ~ A x^-2 + C x^-3 (signed x)
    const double x1 = side * cutoff, x2 = side * 2.0 * cutoff;
    const std::complex<double> a_coef =
        (f1 * x1 * x1 * x1 - f2 * x2 * x2 * x2) / (x1 - x2);
    const std::complex<double> c_coef = f1 * x1 * x1 * x1 - a_coef * x1;
    const double s = std::abs(xi) * cutoff;
    std::complex<double> i2, i3;
    if (std::abs(xi) < 1e-12) {
      i2 = 1.0 / cutoff;        // int_X^inf x^-2
      i3 = 0.5 / (cutoff * cutoff);
    } else {
      i2 = std::abs(xi) * osc_tail_integral(2, s);
      i3 = std::abs(xi) * std::abs(xi) * osc_tail_integral(3, s);
    }
    if (side * xi < 0.0) {
      i2 = std::conj(i2);
      i3 = std::conj(i3);
    }
    // int_X^inf (A u^-2 + side * C u^-3) e^{-i xi side u} du in signed form
    total += a_coef * i2 + double(side) * c_coef * i3;
  }
  return total / std::sqrt(2.0 * kPi);
}

double laplacian_density(const ComplexFn& f, double lambda, int points) {
  if (!(lambda > 0.0))
    throw Error("laplacian_density: the density is defined for lambda > 0 only");
  const double root = std::sqrt(lambda);
  const double plus = std::norm(fourier_transform(f, root, points));
  const double minus = std::norm(fourier_transform(f, -root, points));
  return (plus + minus) / (2.0 * root);
}

double smoothed_density(const RealFn& rho, const RationalKernel& kernel, double eps, double x,
                        double lambda_max, double tol) {
  // int_0^inf K_eps(x - lambda) rho(lambda) dlambda with lambda = t^2; the
  // kernel bump at t = sqrt(max(x,0)) has width ~ eps, so integrate the bump
  // region separately from the smooth remainder.
  auto integrand = [&](double t) {
    const double lam = t * t;
    if (lam == 0.0) return 0.0;
    return kernel.scaled(x - lam, eps) * rho(lam) * 2.0 * t;
  };
  const double t_max = std::sqrt(lambda_max);
  const double tb = std::sqrt(std::max(x, 0.0));
  const double half_width = std::max(20.0 * eps, 1e-3);
  const double lo = std::max(0.0, tb - half_width), hi = std::min(t_max, tb + half_width);
  double total = 0.0;
  if (lo > 0.0) total += adaptive_simpson(integrand, 0.0, lo, tol / 3.0);
  if (hi > lo) total += adaptive_simpson(integrand, lo, hi, tol / 3.0);
  if (t_max > hi) total += adaptive_simpson(integrand, hi, t_max, tol / 3.0);
  return total;
}

}  // namespace specmeasure::oracle
