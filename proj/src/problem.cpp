#include "specmeasure/problem.hpp"

#include <cmath>

namespace specmeasure {

namespace {

struct RealLineSolver : DiscretizedProblem::Solver {
  realline::ShiftedSystem system;
  FunctionRep solve(const FunctionRep& rhs) const override { return system.solve(rhs); }
};

struct FourierSolver : DiscretizedProblem::Solver {
  std::shared_ptr<const fourier::PencilDiscretization::Shifted> shifted;
  FunctionRep solve(const FunctionRep& rhs) const override { return shifted->solve(rhs); }
};

}  // namespace

RealLineProblem::RealLineProblem(std::vector<OperatorTerm> terms, CoeffFn f)
    : terms_(realline::prepare_terms(terms)), f_(std::move(f)) {
  init_normalization();
}

RealLineProblem::RealLineProblem(std::vector<OperatorTerm> terms, FunctionRep f_coeffs)
    : terms_(realline::prepare_terms(terms)), f_coeffs_(std::move(f_coeffs)) {
  if (f_coeffs_->basis != Basis::realline)
    throw BasisMismatchError("RealLineProblem: f coefficients must be in the realline basis");
  init_normalization();
}

void RealLineProblem::init_normalization() {
  // Wide-band terms are expensive to assemble; cache those per truncation.
  for (const auto& t : terms_)
    if (t.kind == OperatorTerm::Kind::cauchy_lowrank) cache_matrices_ = true;

  double norm = 0.0;
  if (f_coeffs_) {
    norm = f_coeffs_->l2_norm();
  } else {
    for (int n = 64; n <= (1 << 14); n *= 2) {
      const FunctionRep rep = realline::analyze(f_, n);
      norm = rep.l2_norm();
      if (rep.resolved) break;
    }
  }
  if (!(norm > 0.0)) throw Error("f has zero norm");
  norm_constant_ = 1.0 / norm;
}

FunctionRep RealLineProblem::rhs(int N) const {
  {
    std::lock_guard lock(mutex_);
    auto it = rhs_cache_.find(N);
    if (it != rhs_cache_.end()) return it->second;
  }
  FunctionRep rep = f_coeffs_ ? f_coeffs_->rewindow(N) : realline::analyze(f_, N);
  rep.coeffs *= norm_constant_;
  std::lock_guard lock(mutex_);
  return rhs_cache_.emplace(N, std::move(rep)).first->second;
}

BandedMatrix RealLineProblem::operator_matrix(int N) const {
  if (cache_matrices_) {
    std::lock_guard lock(mutex_);
    auto it = matrix_cache_.find(N);
    if (it != matrix_cache_.end()) return *it->second;
  }
  BandedMatrix m = realline::assemble_operator(terms_, N);
  if (cache_matrices_) {
    auto shared = std::make_shared<const BandedMatrix>(m);
    std::lock_guard lock(mutex_);
    matrix_cache_.emplace(N, shared);
  }
  return m;
}

std::shared_ptr<const DiscretizedProblem::Solver> RealLineProblem::factor(std::complex<double> z,
                                                                          int N) const {
  auto solver = std::make_shared<RealLineSolver>();
  solver->system = realline::make_shifted(operator_matrix(N), z);
  return solver;
}

FourierProblem::FourierProblem(Basis backend, std::vector<OperatorTerm> a_terms,
                               std::vector<OperatorTerm> b_terms, fourier::Fn1 f)
    : backend_(backend),
      pencil_(backend, std::move(a_terms), std::move(b_terms)),
      f1_(std::move(f)) {
  if (backend_ != Basis::fourier1d)
    throw BasisMismatchError("one-variable f requires the fourier1d backend");
  init_normalization();
}

FourierProblem::FourierProblem(Basis backend, std::vector<OperatorTerm> a_terms,
                               std::vector<OperatorTerm> b_terms, fourier::Fn2 f)
    : backend_(backend),
      pencil_(backend, std::move(a_terms), std::move(b_terms)),
      f2_(std::move(f)) {
  if (backend_ != Basis::fourier2d)
    throw BasisMismatchError("two-variable f requires the fourier2d backend");
  init_normalization();
}

FunctionRep FourierProblem::analyze_f(int N) const {
  return backend_ == Basis::fourier1d ? fourier::analyze(f1_, N) : fourier::analyze2d(f2_, N);
}

void FourierProblem::init_normalization() {
  const int cap = backend_ == Basis::fourier1d ? (1 << 14) : (1 << 9);
  double norm2 = 0.0;
  for (int n = 16; n <= cap; n *= 2) {
    const FunctionRep rep = analyze_f(n);
    const Eigen::VectorXd bdiag = pencil_.b_diagonal(n);
    norm2 = (bdiag.array() * rep.coeffs.array().cwiseAbs2()).sum();
    if (rep.resolved) break;
  }
  if (!(norm2 > 0.0)) throw Error("f has zero norm");
  norm_constant_ = 1.0 / std::sqrt(norm2);
}

FunctionRep FourierProblem::normalized_f(int N) const {
  FunctionRep rep = analyze_f(N);
  rep.coeffs *= norm_constant_;
  return rep;
}

FunctionRep FourierProblem::rhs(int N) const {
  {
    std::lock_guard lock(mutex_);
    auto it = rhs_cache_.find(N);
    if (it != rhs_cache_.end()) return it->second;
  }
  FunctionRep g = pencil_.apply_b(normalized_f(N));
  std::lock_guard lock(mutex_);
  return rhs_cache_.emplace(N, std::move(g)).first->second;
}

std::shared_ptr<const DiscretizedProblem::Solver> FourierProblem::factor(std::complex<double> z,
                                                                         int N) const {
  auto solver = std::make_shared<FourierSolver>();
  solver->shifted = pencil_.factor(z, N);
  return solver;
}

}  // namespace specmeasure
