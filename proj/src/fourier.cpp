#include "specmeasure/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace specmeasure::fourier {

namespace {

constexpr double kPi = std::numbers::pi;

// c_k = (1/N) sum_j f(x_j) e^{-i k x_j} on x_j = -pi + 2 pi j / N equals
// (-1)^k times the plain DFT coefficient.
Eigen::VectorXcd grid_fft(std::vector<std::complex<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> transformed;
  fft.fwd(transformed, samples);
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    const int k = i - n / 2;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out(i) = sign * transformed[(k % n + n) % n] / double(n);
  }
  return out;
}

void require_even(int n) {
  if (n < 2 || n % 2 != 0) throw Error("Fourier truncation must be even and >= 2");
}

}  // namespace

FunctionRep analyze(const Fn1& f, int N) {
  require_even(N);
  std::vector<std::complex<double>> samples(N);
  for (int j = 0; j < N; ++j) samples[j] = f(-kPi + 2.0 * kPi * j / N);
  FunctionRep rep;
  rep.basis = Basis::fourier1d;
  rep.N = N;
  rep.coeffs = grid_fft(samples);
  const double peak = rep.coeffs.cwiseAbs().maxCoeff();
  double edge = 0.0;
  for (int i = 0; i < std::max(1, N / 20); ++i)
    edge = std::max({edge, std::abs(rep.coeffs(i)), std::abs(rep.coeffs(N - 1 - i))});
  rep.resolved = peak == 0.0 || edge <= 1e-12 * peak;
  return rep;
}

FunctionRep analyze2d(const Fn2& f, int N) {
  require_even(N);
  Eigen::MatrixXcd samples(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      samples(i, j) = f(-kPi + 2.0 * kPi * i / N, -kPi + 2.0 * kPi * j / N);
  // transform rows (y direction), then columns (x direction)
  Eigen::MatrixXcd stage(N, N);
  for (int i = 0; i < N; ++i) {
    std::vector<std::complex<double>> row(N);
    for (int j = 0; j < N; ++j) row[j] = samples(i, j);
    stage.row(i) = grid_fft(row).transpose();
  }
  Eigen::MatrixXcd coeff(N, N);
  for (int j = 0; j < N; ++j) {
    std::vector<std::complex<double>> col(N);
    for (int i = 0; i < N; ++i) col[i] = stage(i, j);
    coeff.col(j) = grid_fft(col);
  }
  FunctionRep rep;
  rep.basis = Basis::fourier2d;
  rep.N = N;
  rep.coeffs.resize(static_cast<Eigen::Index>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rep.coeffs(static_cast<Eigen::Index>(i) * N + j) = coeff(i, j);
  const double peak = rep.coeffs.cwiseAbs().maxCoeff();
  double edge = 0.0;
  const int outer = std::max(1, N / 20);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i < outer || i >= N - outer || j < outer || j >= N - outer)
        edge = std::max(edge, std::abs(rep.coeffs(static_cast<Eigen::Index>(i) * N + j)));
  rep.resolved = peak == 0.0 || edge <= 1e-12 * peak;
  return rep;
}

Eigen::VectorXcd synthesize(const FunctionRep& rep, std::span<const double> x) {
  if (rep.basis != Basis::fourier1d)
    throw BasisMismatchError("fourier synthesize: expected a fourier1d representation");
  Eigen::VectorXcd out(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) {
    std::complex<double> total = 0.0;
    for (int i = 0; i < rep.N; ++i)
      total += rep.coeffs(i) * std::polar(1.0, (i - rep.N / 2) * x[p]);
    out(p) = total;
  }
  return out;
}

std::complex<double> synthesize2d_at(const FunctionRep& rep, double x, double y) {
  if (rep.basis != Basis::fourier2d)
    throw BasisMismatchError("fourier synthesize: expected a fourier2d representation");
  std::complex<double> total = 0.0;
  const int N = rep.N;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      total += rep.coeffs(static_cast<Eigen::Index>(i) * N + j) *
               std::polar(1.0, (i - N / 2) * x + (j - N / 2) * y);
  return total;
}

TrigPoly trig_coefficients(const Fn1& c, double rel_tol) {
  for (int m = 64; m <= (1 << 14); m *= 2) {
    std::vector<std::complex<double>> samples(m);
    double peak = 0.0, imag_peak = 0.0;
    for (int j = 0; j < m; ++j) {
      samples[j] = c(-kPi + 2.0 * kPi * j / m);
      peak = std::max(peak, std::abs(samples[j]));
      imag_peak = std::max(imag_peak, std::abs(samples[j].imag()));
    }
    if (imag_peak > 1e-12 * std::max(peak, 1e-300))
      throw SelfAdjointnessError("periodic coefficient must be real-valued");
    Eigen::VectorXcd chat = grid_fft(samples);
    const double cpeak = chat.cwiseAbs().maxCoeff();
    if (cpeak == 0.0) return TrigPoly{Eigen::VectorXcd::Zero(1), 0};
    double edge = 0.0;
    for (int i = 0; i < std::max(1, m / 8); ++i)
      edge = std::max({edge, std::abs(chat(i)), std::abs(chat(m - 1 - i))});
    if (edge > rel_tol * cpeak && m < (1 << 14)) continue;

    int degree = 0;
    for (int i = 0; i < m; ++i)
      if (std::abs(chat(i)) > rel_tol * cpeak) degree = std::max(degree, std::abs(i - m / 2));
    TrigPoly poly;
    poly.degree = degree;
    poly.coeffs = Eigen::VectorXcd::Zero(2 * degree + 1);
    for (int d = -degree; d <= degree; ++d)
      poly.coeffs(d + degree) = 0.5 * (chat(d + m / 2) + std::conj(chat(-d + m / 2)));
    return poly;
  }
  throw Error("periodic coefficient not resolved at the largest sampling size");
}

PencilDiscretization::PencilDiscretization(Basis backend, std::vector<OperatorTerm> a_terms,
                                           std::vector<OperatorTerm> b_terms)
    : backend_(backend), a_terms_(std::move(a_terms)), b_terms_(std::move(b_terms)) {
  if (backend_ != Basis::fourier1d && backend_ != Basis::fourier2d)
    throw InvalidOperatorError("PencilDiscretization requires a Fourier backend");
  if (a_terms_.empty()) throw InvalidOperatorError("operator has no terms");
  const bool two_d = backend_ == Basis::fourier2d;
  for (const auto& t : a_terms_) {
    PreparedTerm p;
    p.kind = t.kind;
    p.order = t.order;
    switch (t.kind) {
      case OperatorTerm::Kind::multiplication:
        if (!t.coeff) throw InvalidOperatorError("multiplication term needs a coefficient");
        p.coeff = trig_coefficients(t.coeff);
        break;
      case OperatorTerm::Kind::derivative:
        if (t.order < 1 || t.order > 2)
          throw UnsupportedOrderError("derivative order must be 1 or 2");
        if (two_d && t.axis != 1)
          throw InvalidOperatorError(
              "2-D derivative terms must act along y (terms coupling the y wavenumbers are "
              "not supported)");
        if (!two_d && t.coeff)
          throw InvalidOperatorError(
              "1-D derivative terms with a variable coefficient are not self-adjoint; use a "
              "fourier_symbol term");
        if (t.coeff) {
          p.coeff = trig_coefficients(t.coeff);
        } else {
          p.coeff.degree = 0;
          p.coeff.coeffs = Eigen::VectorXcd::Constant(1, 1.0);
        }
        break;
      case OperatorTerm::Kind::fourier_symbol:
        if (!t.symbol) throw InvalidOperatorError("fourier_symbol term needs a symbol");
        p.symbol = t.symbol;
        break;
      case OperatorTerm::Kind::cauchy_lowrank:
        throw InvalidOperatorError("cauchy_lowrank terms require the realline backend");
    }
    prepared_.push_back(std::move(p));
  }
  for (const auto& t : b_terms_) {
    if (t.kind != OperatorTerm::Kind::fourier_symbol || !t.symbol)
      throw InvalidPencilError("B must be a sum of diagonal fourier_symbol terms");
  }
}

Eigen::VectorXd PencilDiscretization::b_diagonal(int N) const {
  const bool two_d = backend_ == Basis::fourier2d;
  const Eigen::Index len = two_d ? static_cast<Eigen::Index>(N) * N : N;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(len);
  if (b_terms_.empty()) {
    diag.setOnes();
    return diag;
  }
  for (const auto& t : b_terms_) {
    if (two_d) {
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          diag(static_cast<Eigen::Index>(i) * N + j) += t.symbol(i - N / 2, j - N / 2);
    } else {
      for (int i = 0; i < N; ++i) diag(i) += t.symbol(i - N / 2, 0.0);
    }
  }
  if (diag.minCoeff() <= 0.0)
    throw InvalidPencilError("B symbol must be strictly positive on the truncation");
  return diag;
}

FunctionRep PencilDiscretization::apply_b(const FunctionRep& f) const {
  if (f.basis != backend_) throw BasisMismatchError("apply_b: basis mismatch");
  FunctionRep out = f;
  out.coeffs = b_diagonal(f.N).cast<std::complex<double>>().asDiagonal() * f.coeffs;
  return out;
}

BandedMatrix PencilDiscretization::a_block(int ky, int N) const {
  int band = 0;
  for (const auto& p : prepared_)
    if (p.kind != OperatorTerm::Kind::fourier_symbol) band = std::max(band, p.coeff.degree);
  band = std::min(band, N - 1);
  BandedMatrix block(N, band, band);
  const bool two_d = backend_ == Basis::fourier2d;
  for (const auto& p : prepared_) {
    switch (p.kind) {
      case OperatorTerm::Kind::multiplication:
        for (int j = 0; j < N; ++j)
          for (int i = std::max(0, j - p.coeff.degree);
               i <= std::min(N - 1, j + p.coeff.degree); ++i)
            block.add(i, j, p.coeff.at(i - j));
        break;
      case OperatorTerm::Kind::derivative: {
        // c(x) (-i d/dy)^order: Toeplitz in kx times ky^order
        const double factor = two_d ? std::pow(double(ky), p.order) : 0.0;
        if (!two_d) throw InvalidOperatorError("internal: 1-D derivative slipped through");
        if (factor != 0.0)
          for (int j = 0; j < N; ++j)
            for (int i = std::max(0, j - p.coeff.degree);
                 i <= std::min(N - 1, j + p.coeff.degree); ++i)
              block.add(i, j, factor * p.coeff.at(i - j));
        break;
      }
      case OperatorTerm::Kind::fourier_symbol:
        for (int i = 0; i < N; ++i) {
          const double kx = i - N / 2;
          block.add(i, i, two_d ? p.symbol(kx, ky) : p.symbol(kx, 0.0));
        }
        break;
      default:
        break;
    }
  }
  return block;
}

std::shared_ptr<const PencilDiscretization::Shifted> PencilDiscretization::factor(
    std::complex<double> z, int N, int dense_threshold) const {
  if (z.imag() == 0.0)
    throw ShiftOnRealAxisError("complex shift required: resolvent may not exist on the real axis");
  auto shifted = std::make_shared<Shifted>();
  shifted->basis_ = backend_;
  shifted->N_ = N;
  shifted->shift_ = z;
  const Eigen::VectorXd bdiag = b_diagonal(N);
  if (backend_ == Basis::fourier1d) {
    BandedMatrix m = a_block(0, N);
    for (int i = 0; i < N; ++i) m.add(i, i, -z * bdiag(i));
    shifted->blocks_.emplace_back(m, dense_threshold);
  } else {
    shifted->blocks_.reserve(N);
    for (int jy = 0; jy < N; ++jy) {
      const int ky = jy - N / 2;
      BandedMatrix m = a_block(ky, N);
      for (int i = 0; i < N; ++i)
        m.add(i, i, -z * bdiag(static_cast<Eigen::Index>(i) * N + jy));
      shifted->blocks_.emplace_back(m, dense_threshold);
    }
  }
  return shifted;
}

FunctionRep PencilDiscretization::Shifted::solve(const FunctionRep& rhs) const {
  if (rhs.basis != basis_) throw BasisMismatchError("pencil solve: basis mismatch");
  const FunctionRep in = rhs.N == N_ ? rhs : rhs.rewindow(N_);
  FunctionRep out = in;
  if (basis_ == Basis::fourier1d) {
    out.coeffs = blocks_[0].solve(in.coeffs);
    return out;
  }
  const int N = N_;
  Eigen::VectorXcd column(N);
  for (int jy = 0; jy < N; ++jy) {
    for (int i = 0; i < N; ++i) column(i) = in.coeffs(static_cast<Eigen::Index>(i) * N + jy);
    const Eigen::VectorXcd sol = blocks_[jy].solve(column);
    for (int i = 0; i < N; ++i) out.coeffs(static_cast<Eigen::Index>(i) * N + jy) = sol(i);
  }
  return out;
}

}  // namespace specmeasure::fourier
