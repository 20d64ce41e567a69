#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "specmeasure/fourier.hpp"
#include "specmeasure/function_rep.hpp"
#include "specmeasure/operator_spec.hpp"
#include "specmeasure/realline.hpp"

namespace specmeasure {

/// Solver-facing view of a (pencil) problem: a normalized right-hand side g
/// per truncation and a factorization of the shifted system per (z, N).
/// Plain operators use g = f; pencils use g = Bf, and in both cases the
/// resolvent functional is <u, g>. Implementations are immutable after
/// construction apart from internal caches and are safe to share across
/// threads.
class DiscretizedProblem {
 public:
  virtual ~DiscretizedProblem() = default;

  virtual Basis basis() const = 0;

  /// Normalized right-hand side at truncation N.
  virtual FunctionRep rhs(int N) const = 0;

  /// Factor (L - z) resp. (A - zB) at truncation N.
  class Solver {
   public:
    virtual ~Solver() = default;
    virtual FunctionRep solve(const FunctionRep& rhs) const = 0;
  };
  virtual std::shared_ptr<const Solver> factor(std::complex<double> z, int N) const = 0;

  /// Constant c with ||c f|| = 1 (or <B(cf), cf> = 1 for pencils).
  virtual double normalization_constant() const = 0;

  virtual int min_dofs() const { return 4; }
};

/// Self-adjoint singular integro-differential operator on the real line.
class RealLineProblem : public DiscretizedProblem {
 public:
  /// f given in closed form.
  RealLineProblem(std::vector<OperatorTerm> terms, CoeffFn f);
  /// f given as an explicit coefficient window.
  RealLineProblem(std::vector<OperatorTerm> terms, FunctionRep f_coeffs);

  Basis basis() const override { return Basis::realline; }
  FunctionRep rhs(int N) const override;
  std::shared_ptr<const Solver> factor(std::complex<double> z, int N) const override;
  double normalization_constant() const override { return norm_constant_; }

  /// Hermitian operator matrix at truncation N (any N >= 2).
  BandedMatrix operator_matrix(int N) const;

 private:
  void init_normalization();

  std::vector<realline::PreparedTerm> terms_;
  CoeffFn f_;
  std::optional<FunctionRep> f_coeffs_;
  double norm_constant_ = 1.0;
  bool cache_matrices_ = false;

  mutable std::mutex mutex_;
  mutable std::map<int, FunctionRep> rhs_cache_;
  mutable std::map<int, std::shared_ptr<const BandedMatrix>> matrix_cache_;
};

/// Pencil (A, B) -- or plain operator when B is empty -- in a Fourier basis.
class FourierProblem : public DiscretizedProblem {
 public:
  FourierProblem(Basis backend, std::vector<OperatorTerm> a_terms,
                 std::vector<OperatorTerm> b_terms, fourier::Fn1 f);
  FourierProblem(Basis backend, std::vector<OperatorTerm> a_terms,
                 std::vector<OperatorTerm> b_terms, fourier::Fn2 f);

  Basis basis() const override { return backend_; }
  FunctionRep rhs(int N) const override;
  std::shared_ptr<const Solver> factor(std::complex<double> z, int N) const override;
  double normalization_constant() const override { return norm_constant_; }

  const fourier::PencilDiscretization& discretization() const { return pencil_; }
  /// Normalized f itself (not Bf) at truncation N.
  FunctionRep normalized_f(int N) const;

 private:
  void init_normalization();
  FunctionRep analyze_f(int N) const;

  Basis backend_;
  fourier::PencilDiscretization pencil_;
  fourier::Fn1 f1_;
  fourier::Fn2 f2_;
  double norm_constant_ = 1.0;

  mutable std::mutex mutex_;
  mutable std::map<int, FunctionRep> rhs_cache_;
};

}  // namespace specmeasure
