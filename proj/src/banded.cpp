#include "specmeasure/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "specmeasure/errors.hpp"

namespace specmeasure {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(std::min(kl, n - 1)), ku_(std::min(ku, n - 1)) {
  data_ = Eigen::MatrixXcd::Zero(kl_ + ku_ + 1, n_);
}

std::complex<double> BandedMatrix::get(int i, int j) const {
  const int d = j - i;
  if (d > ku_ || -d > kl_) return 0.0;
  return data_(ku_ + i - j, j);
}

void BandedMatrix::set(int i, int j, std::complex<double> v) {
  data_(ku_ + i - j, j) = v;
}

void BandedMatrix::add(int i, int j, std::complex<double> v) {
  data_(ku_ + i - j, j) += v;
}

void BandedMatrix::add_scaled(const BandedMatrix& other, std::complex<double> c) {
  if (other.n_ != n_) throw Error("banded add: size mismatch");
  if (other.kl_ > kl_ || other.ku_ > ku_) {
    BandedMatrix grown(n_, std::max(kl_, other.kl_), std::max(ku_, other.ku_));
    grown.data_.middleRows(grown.ku_ - ku_, kl_ + ku_ + 1) = data_;
    *this = std::move(grown);
  }
  data_.middleRows(ku_ - other.ku_, other.kl_ + other.ku_ + 1) += c * other.data_;
}

void BandedMatrix::shift_diagonal(std::complex<double> c) {
  data_.row(ku_).array() += c;
}

void BandedMatrix::scale(std::complex<double> c) { data_ *= c; }

Eigen::VectorXcd BandedMatrix::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - ku_), i_hi = std::min(n_ - 1, j + kl_);
    for (int i = i_lo; i <= i_hi; ++i) y(i) += data_(ku_ + i - j, j) * x(j);
  }
  return y;
}

Eigen::MatrixXcd BandedMatrix::dense() const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - ku_), i_hi = std::min(n_ - 1, j + kl_);
    for (int i = i_lo; i <= i_hi; ++i) a(i, j) = data_(ku_ + i - j, j);
  }
  return a;
}

BandedMatrix BandedMatrix::adjoint() const {
  BandedMatrix out(n_, ku_, kl_);
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - ku_), i_hi = std::min(n_ - 1, j + kl_);
    for (int i = i_lo; i <= i_hi; ++i) out.set(j, i, std::conj(data_(ku_ + i - j, j)));
  }
  return out;
}

BandedMatrix BandedMatrix::product(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.n_ != b.n_) throw Error("banded product: size mismatch");
  const int n = a.n_;
  BandedMatrix out(n, a.kl_ + b.kl_, a.ku_ + b.ku_);
  for (int j = 0; j < n; ++j) {
    const int k_lo = std::max(0, j - b.ku_), k_hi = std::min(n - 1, j + b.kl_);
    for (int k = k_lo; k <= k_hi; ++k) {
      const std::complex<double> bkj = b.data_(b.ku_ + k - j, j);
      if (bkj == 0.0) continue;
      const int i_lo = std::max(0, k - a.ku_), i_hi = std::min(n - 1, k + a.kl_);
      for (int i = i_lo; i <= i_hi; ++i) out.add(i, j, a.data_(a.ku_ + i - k, k) * bkj);
    }
  }
  return out;
}

BandedMatrix BandedMatrix::crop(int pad) const {
  const int n = n_ - 2 * pad;
  if (n <= 0) throw Error("banded crop: pad too large");
  BandedMatrix out(n, std::min(kl_, n - 1), std::min(ku_, n - 1));
  for (int j = 0; j < n; ++j) {
    const int i_lo = std::max(0, j - out.ku_), i_hi = std::min(n - 1, j + out.kl_);
    for (int i = i_lo; i <= i_hi; ++i) out.set(i, j, get(i + pad, j + pad));
  }
  return out;
}

double BandedMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int j = 0; j < n_; ++j) {
    const int i_lo = std::max(0, j - ku_), i_hi = std::min(n_ - 1, j + kl_);
    for (int i = i_lo; i <= i_hi; ++i)
      worst = std::max(worst, std::abs(get(i, j) - std::conj(get(j, i))));
  }
  return worst;
}

struct LinearSolver::Impl {
  bool dense = false;
  int n = 0, kl = 0, ku = 0;
  // banded path
  Eigen::MatrixXcd ab;  // (2kl+ku+1) x n factored band
  std::vector<lapack_int> ipiv;
  // dense path
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
};

LinearSolver::LinearSolver(const BandedMatrix& a, int dense_threshold) : impl_(new Impl) {
  impl_->n = a.size();
  impl_->kl = a.lower_bandwidth();
  impl_->ku = a.upper_bandwidth();
  const bool nearly_dense = impl_->kl + impl_->ku >= impl_->n;
  // dense fallback only pays off for wide bands on small systems
  const bool wide_band_small = impl_->n <= dense_threshold && 4 * (impl_->kl + impl_->ku) >= impl_->n;
  if (wide_band_small || nearly_dense) {
    impl_->dense = true;
    impl_->lu.compute(a.dense());
    // PartialPivLU has no rank signal; probe the U diagonal for exact zeros.
    const auto& u = impl_->lu.matrixLU();
    for (int i = 0; i < impl_->n; ++i)
      if (u(i, i) == 0.0)
        throw NearSpectrumError("shifted system is singular at this truncation");
    return;
  }
  const int n = impl_->n, kl = impl_->kl, ku = impl_->ku;
  const int ldab = 2 * kl + ku + 1;
  impl_->ab = Eigen::MatrixXcd::Zero(ldab, n);
  // zgbtrf expects A(i,j) at ab(kl + ku + i - j, j)
  impl_->ab.middleRows(kl, kl + ku + 1) = a.raw();
  impl_->ipiv.resize(n);
  const lapack_int info = LAPACKE_zgbtrf(
      LAPACK_COL_MAJOR, n, n, kl, ku,
      reinterpret_cast<lapack_complex_double*>(impl_->ab.data()), ldab, impl_->ipiv.data());
  if (info < 0) throw Error("zgbtrf: invalid argument " + std::to_string(-info));
  if (info > 0) throw NearSpectrumError("shifted system is singular at this truncation");
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

bool LinearSolver::dense_path() const { return impl_->dense; }

Eigen::VectorXcd LinearSolver::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != impl_->n) throw Error("solve: rhs dimension mismatch");
  if (impl_->dense) return impl_->lu.solve(rhs);
  Eigen::VectorXcd x = rhs;
  const int ldab = 2 * impl_->kl + impl_->ku + 1;
  const lapack_int info = LAPACKE_zgbtrs(
      LAPACK_COL_MAJOR, 'N', impl_->n, impl_->kl, impl_->ku, 1,
      reinterpret_cast<const lapack_complex_double*>(impl_->ab.data()), ldab, impl_->ipiv.data(),
      reinterpret_cast<lapack_complex_double*>(x.data()), impl_->n);
  if (info != 0) throw Error("zgbtrs failed: info=" + std::to_string(info));
  return x;
}

}  // namespace specmeasure
