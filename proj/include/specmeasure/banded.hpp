#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

namespace specmeasure {

/// Square complex matrix stored by diagonals (LAPACK band layout):
/// entry (i, j) with -kl <= j - i <= ku lives at data(ku + i - j, j).
/// Everything outside the band is structurally zero.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  std::complex<double> get(int i, int j) const;
  void set(int i, int j, std::complex<double> v);
  void add(int i, int j, std::complex<double> v);

  /// In-place A += c * B (band must fit; grows bandwidth if needed).
  void add_scaled(const BandedMatrix& other, std::complex<double> c = 1.0);
  void shift_diagonal(std::complex<double> c);  // A += c*I
  void scale(std::complex<double> c);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd dense() const;
  BandedMatrix adjoint() const;

  /// Exact product of banded matrices (bandwidths add).
  static BandedMatrix product(const BandedMatrix& a, const BandedMatrix& b);

  /// Center square section, dropping `pad` rows/columns on each side.
  BandedMatrix crop(int pad) const;

  double hermiticity_defect() const;  // max |A - A^*| over the band

  const Eigen::MatrixXcd& raw() const { return data_; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  Eigen::MatrixXcd data_;  // (kl+ku+1) x n
};

/// LU factorization of a banded (or small dense) system, reusable for
/// repeated solves. Banded path uses LAPACK zgbtrf/zgbtrs; systems of
/// dimension <= dense_threshold fall back to a dense factorization.
class LinearSolver {
 public:
  static constexpr int kDenseThreshold = 512;

  explicit LinearSolver(const BandedMatrix& a, int dense_threshold = kDenseThreshold);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  bool dense_path() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace specmeasure
