#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <span>

#include "specmeasure/banded.hpp"
#include "specmeasure/function_rep.hpp"
#include "specmeasure/operator_spec.hpp"

namespace specmeasure::realline {

/// Spectral backend on the real line in the orthonormal rational basis
///
///   rho_n(x) = (1/sqrt(pi)) (1+ix)^n / (1-ix)^{n+1},  n in Z,
///
/// which the circle map x = tan(theta/2) carries to weighted Fourier modes:
/// rho_n(tan(theta/2)) = (1/sqrt(pi)) cos(theta/2) e^{i theta/2} e^{i n theta}.
/// Expansion coefficients therefore come from a single FFT, multiplication by
/// a smooth a(x) is a banded Toeplitz matrix with symbol a(tan(theta/2)),
/// differentiation is banded, and the Hilbert transform is the diagonal sign
/// matrix (+1 for n >= 0, -1 for n < 0).

/// Expansion coefficients of f on the window n in [-N/2, N/2), N a power of
/// two, sampled at the half-shifted theta grid (avoids theta = +-pi).
/// The `resolved` flag records whether the outer 10% of coefficients are
/// negligible; an unresolved result is not an error.
FunctionRep analyze(const CoeffFn& f, int N);

/// Pointwise evaluation sum_n c_n rho_n(x).
Eigen::VectorXcd synthesize(const FunctionRep& rep, std::span<const double> points);

/// Banded Toeplitz symbol of multiplication by a(x): the plain Fourier
/// coefficients of a(tan(theta/2)), truncated at `rel_tol` relative to the
/// largest coefficient. Throws SelfAdjointnessError for complex-valued a.
struct ToeplitzSymbol {
  Eigen::VectorXcd coeffs;  // offsets -bandwidth .. bandwidth
  int bandwidth = 0;
  std::complex<double> at(int offset) const {
    return std::abs(offset) > bandwidth ? 0.0 : coeffs(offset + bandwidth);
  }
};
ToeplitzSymbol multiplication_symbol(const CoeffFn& a, double rel_tol = 1e-14);

// Matrix sections on a general index window n in [lo, lo + size). All
// builders return the exact section of the corresponding bi-infinite matrix
// (products are formed on padded windows and cropped).
BandedMatrix mult_matrix_window(const ToeplitzSymbol& s, int lo, int size);
BandedMatrix diff_matrix_window(int order, int lo, int size);
BandedMatrix hilbert_matrix_window(int lo, int size);
BandedMatrix sturm_liouville_window(const ToeplitzSymbol& c, int lo, int size);
BandedMatrix cauchy_lowrank_window(const std::vector<ToeplitzSymbol>& factors, int lo, int size);

/// Multiplication by a on the symmetric window [-N/2, N/2).
BandedMatrix mult_matrix(const ToeplitzSymbol& s, int N);
/// d^p/dx^p on the symmetric window; p in {1, 2}.
BandedMatrix diff_matrix(int order, int N);
/// Signature s_n of the Hilbert transform (1/pi i) pv-int v(y)/(y-x) dy.
Eigen::VectorXd hilbert_signs(int N);

/// Operator term with its coefficient symbols already transformed; symbol
/// computation samples and FFTs the coefficients, so callers assembling at
/// many truncations should prepare once.
struct PreparedTerm {
  OperatorTerm::Kind kind = OperatorTerm::Kind::multiplication;
  ToeplitzSymbol coeff;
  std::vector<ToeplitzSymbol> factors;
};
std::vector<PreparedTerm> prepare_terms(const std::vector<OperatorTerm>& terms);

/// Hermitian discretization of a sum of self-adjoint terms on [-N/2, N/2).
BandedMatrix assemble_operator(const std::vector<PreparedTerm>& terms, int N);
BandedMatrix assemble_operator(const std::vector<OperatorTerm>& terms, int N);

/// Truncated discretization of (operator - z) with a reusable factorization.
struct ShiftedSystem {
  std::complex<double> shift;
  int N = 0;
  BandedMatrix matrix;
  std::shared_ptr<const LinearSolver> factorization;

  FunctionRep solve(const FunctionRep& rhs) const;
};

/// Assemble and factor (sum of terms) - z*I. Throws ShiftOnRealAxisError for
/// real z.
ShiftedSystem assemble_shifted(const std::vector<OperatorTerm>& terms, std::complex<double> z,
                               int N);
ShiftedSystem make_shifted(const BandedMatrix& op, std::complex<double> z);

}  // namespace specmeasure::realline
