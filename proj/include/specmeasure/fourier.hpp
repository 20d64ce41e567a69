#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "specmeasure/banded.hpp"
#include "specmeasure/function_rep.hpp"
#include "specmeasure/operator_spec.hpp"

namespace specmeasure::fourier {

/// Periodic Fourier backend on [-pi, pi] (1-D) and [-pi, pi]^2 (2-D tensor
/// grid) in the plain-exponential convention: analyze(e^{ikx}) = e_k.

using Fn1 = std::function<std::complex<double>(double)>;
using Fn2 = std::function<std::complex<double>(double, double)>;

FunctionRep analyze(const Fn1& f, int N);
FunctionRep analyze2d(const Fn2& f, int N);
Eigen::VectorXcd synthesize(const FunctionRep& rep, std::span<const double> x);
std::complex<double> synthesize2d_at(const FunctionRep& rep, double x, double y);

/// Trigonometric-polynomial coefficients of a periodic coefficient function,
/// truncated at rel_tol; throws SelfAdjointnessError for complex values.
struct TrigPoly {
  Eigen::VectorXcd coeffs;  // offsets -degree .. degree
  int degree = 0;
  std::complex<double> at(int offset) const {
    return std::abs(offset) > degree ? 0.0 : coeffs(offset + degree);
  }
};
TrigPoly trig_coefficients(const Fn1& c, double rel_tol = 1e-13);

/// Discretization of the pencil (A, B) on the truncated wavenumber grid.
/// B is a sum of positive diagonal symbols (empty = identity). No supported
/// A term couples the y wavenumbers, so 2-D shifted systems are
/// block-diagonal over ky and each block is banded in kx.
class PencilDiscretization {
 public:
  PencilDiscretization(Basis backend, std::vector<OperatorTerm> a_terms,
                       std::vector<OperatorTerm> b_terms);

  Basis backend() const { return backend_; }
  bool b_is_identity() const { return b_terms_.empty(); }

  /// Diagonal of B over the flattened window (checked positive).
  Eigen::VectorXd b_diagonal(int N) const;
  FunctionRep apply_b(const FunctionRep& f) const;

  /// Factor A - zB at truncation N per dimension.
  class Shifted {
   public:
    FunctionRep solve(const FunctionRep& rhs) const;

   private:
    friend class PencilDiscretization;
    Basis basis_;
    int N_ = 0;
    std::complex<double> shift_;
    std::vector<LinearSolver> blocks_;  // 1-D: one block; 2-D: one per ky
  };
  std::shared_ptr<const Shifted> factor(std::complex<double> z, int N,
                                        int dense_threshold = LinearSolver::kDenseThreshold) const;

  /// Block of A for a fixed ky (2-D) or the full 1-D matrix (ky ignored).
  BandedMatrix a_block(int ky, int N) const;

 private:
  Basis backend_;
  std::vector<OperatorTerm> a_terms_;
  std::vector<OperatorTerm> b_terms_;
  struct PreparedTerm {
    OperatorTerm::Kind kind;
    int order = 0;
    TrigPoly coeff;  // multiplication / derivative coefficient in x
    SymbolFn symbol;
  };
  std::vector<PreparedTerm> prepared_;
};

}  // namespace specmeasure::fourier
