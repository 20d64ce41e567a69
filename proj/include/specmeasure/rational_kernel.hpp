#pragma once

#include <complex>
#include <string>
#include <vector>

#include "specmeasure/errors.hpp"

namespace specmeasure {

using Complex = std::complex<double>;

/// An m-th order rational smoothing kernel
///
///   K(x) = (1/pi) Im( sum_j residues[j] / (x - poles[j]) ),
///   K_eps(x) = K(x/eps)/eps,
///
/// with all poles in the open upper half-plane and residues solving the
/// transposed Vandermonde moment conditions (sum = 1, higher moments = 0).
/// Immutable after construction; safe to share across threads.
struct RationalKernel {
  int order = 0;
  std::vector<Complex> poles;
  std::vector<Complex> residues;
  std::vector<std::string> warnings;

  /// Kernel with the equispaced pole family a_j = 2j/(m+1) - 1 + i.
  static RationalKernel equispaced(int m);

  /// Kernel from a caller-supplied distinct upper-half-plane pole set.
  static RationalKernel from_poles(std::vector<Complex> poles);

  double value(double x) const;
  double scaled(double x, double eps) const;
  double operator()(double x) const { return value(x); }

  /// Max residual of the Vandermonde moment conditions (diagnostic).
  double moment_residual() const;
};

/// Poles a_j = 2j/(m+1) - 1 + i for j = 1..m. Throws for m < 1.
std::vector<Complex> equispaced_poles(int m);

/// Residues solving the transposed Vandermonde system for the given poles.
/// Appends a conditioning note to `warnings` for m > 10 (system solved anyway).
std::vector<Complex> vandermonde_residues(const std::vector<Complex>& poles,
                                          std::vector<std::string>* warnings = nullptr);

}  // namespace specmeasure
