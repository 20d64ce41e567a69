#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "specmeasure/rational_kernel.hpp"

namespace specmeasure::oracle {

/// Reference computations for tests: deliberately slow, simple, and
/// independent of the solver path they validate.

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

/// Symmetric principal-value rule for (1/pi i) pv-int v(y)/(y - x) dy:
/// Gauss-Legendre nodes under t = tan(phi), paired as [v(x+t) - v(x-t)]/t,
/// truncated at |y - x| <= radius.
struct PVQuadratureRule {
  double radius = 1e8;
  int points = 2000;
};

/// Principal-value Cauchy integral with G == 1. When err_est is given, the
/// rule is re-run at twice the node count and the difference reported.
std::complex<double> pv_cauchy(const ComplexFn& v, double x, const PVQuadratureRule& rule = {},
                               double* err_est = nullptr);

/// Smoothed spectral measure of a Hermitian matrix by eigendecomposition:
/// sum_k |<f, v_k>|^2 K_eps(x - lambda_k).
double dense_measure(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& f,
                     const RationalKernel& kernel, double eps, double x);

/// Same quantity through dense resolvent solves (two routes, one matrix).
double dense_measure_resolvent(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& f,
                               const RationalKernel& kernel, double eps, double x);

/// Unitary Fourier transform by quadrature: (1/sqrt(2 pi)) int f e^{-i xi x} dx.
std::complex<double> fourier_transform(const ComplexFn& f, double xi, int points = 4000);

/// Radon-Nikodym derivative of the free-Laplacian measure,
/// rho_f(lambda) = (|fhat(sqrt l)|^2 + |fhat(-sqrt l)|^2) / (2 sqrt l),
/// with fhat computed by quadrature. Throws for lambda <= 0.
double laplacian_density(const ComplexFn& f, double lambda, int points = 4000);

/// [K_eps * rho](x) by adaptive quadrature over lambda = t^2.
double smoothed_density(const RealFn& rho, const RationalKernel& kernel, double eps, double x,
                        double lambda_max = 900.0, double tol = 1e-12);

}  // namespace specmeasure::oracle
