#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string_view>

#include "specmeasure/errors.hpp"

namespace specmeasure {

enum class Basis { realline, fourier1d, fourier2d };

std::string_view basis_name(Basis b);

/// Coefficient vector of a function in one of the supported orthonormal
/// bases.
///
/// realline:  coeffs(i) multiplies rho_n with n = i - N/2, n in [-N/2, N/2).
/// fourier1d: coeffs(i) multiplies e^{ikx} with k = i - N/2.
/// fourier2d: coeffs(i*N + j) multiplies e^{i(kx x + ky y)} with
///            kx = i - N/2, ky = j - N/2 (row-major over kx).
///
/// Fourier coefficients use the plain-exponential convention, so the
/// underlying inner product is the normalized one, (2pi)^{-d} int u conj(v);
/// the coefficient dot product then equals the function-space inner product
/// in every basis.
struct FunctionRep {
  Basis basis = Basis::realline;
  int N = 0;  // per-dimension truncation
  Eigen::VectorXcd coeffs;
  bool resolved = true;

  double l2_norm() const { return coeffs.norm(); }

  /// Same coefficients on the (larger or smaller) symmetric index window.
  FunctionRep rewindow(int new_N) const;
};

/// sum_n u_n conj(v_n); bases and truncations must match.
std::complex<double> inner_product(const FunctionRep& u, const FunctionRep& v);

}  // namespace specmeasure
