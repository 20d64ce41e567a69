#pragma once

#include <string>
#include <vector>

#include "specmeasure/problem.hpp"
#include "specmeasure/rational_kernel.hpp"

namespace specmeasure {

struct SolverOptions {
  double tol = 1e-6;        // relative tolerance on the resolvent functional
  int init_dofs = 64;       // first truncation (power of two)
  int max_dofs = 1 << 16;   // doubling stops here
  /// Also solve the conjugate-shift systems at the final truncation and
  /// record the imaginary residue of the completed two-sum combination.
  bool conjugate_check = false;

  void validate() const;
};

struct MeasureQuery {
  std::vector<double> points;
  double epsilon = 0.1;
  RationalKernel kernel;
  SolverOptions solver;
};

struct PointResult {
  double value = 0.0;
  double err_est = 0.0;  // relative error estimate from the last doublings
  int dofs = 0;          // largest truncation used over the shifts
  bool converged = true;
  double conj_residue = 0.0;  // only when conjugate_check is set
};

struct MeasureResult {
  std::vector<double> points;
  std::vector<double> values;
  std::vector<double> err_est;
  std::vector<int> dofs;
  double normalization_constant = 1.0;
  std::vector<std::string> warnings;  // NoConvergence and friends, per point
};

struct AdaptiveSolveResult {
  FunctionRep solution;   // at the final truncation
  std::complex<double> functional = 0.0;  // <u, g>
  double err_est = 0.0;   // last relative change of the functional
  int dofs = 0;
  bool converged = true;
};

/// Adaptive resolvent solve at one shift: doubles the truncation from
/// init_dofs until |phi_2N - phi_N| <= tol |phi_2N| for the functional
/// phi_N = <u_N, g_N>, or max_dofs is reached.
AdaptiveSolveResult adaptive_solve(const DiscretizedProblem& problem, std::complex<double> z,
                                   double tol, int init_dofs, int max_dofs);

/// Evaluates smoothed spectral measures by combining adaptive resolvent
/// solves at the shifts x0 - eps*a_j with the kernel residues.
class Engine {
 public:
  explicit Engine(int threads = 1) : threads_(threads < 1 ? 1 : threads) {}

  /// mu_f^eps(x0) = -(1/pi) Im sum_j alpha_j <u_j, g>.
  PointResult evaluate_point(const DiscretizedProblem& problem, const RationalKernel& kernel,
                             double x0, double epsilon, const SolverOptions& opts) const;

  /// Same combination on one fixed truncation N (no adaptivity).
  double evaluate_point_fixed(const DiscretizedProblem& problem, const RationalKernel& kernel,
                              double x0, double epsilon, int N) const;

  /// Grid evaluation; points are independent and may run concurrently, and
  /// the output order always matches the input order.
  MeasureResult evaluate_grid(const DiscretizedProblem& problem, const MeasureQuery& query) const;

 private:
  int threads_;
};

}  // namespace specmeasure
