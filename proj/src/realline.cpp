#include "specmeasure/realline.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace specmeasure::realline {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// Plain Fourier coefficients g_hat(n), n in [-M/2, M/2), of samples on the
// half-shifted grid theta_k = -pi + (k + 1/2) h, h = 2 pi / M.
Eigen::VectorXcd shifted_grid_fft(const std::vector<std::complex<double>>& samples) {
  const int m = static_cast<int>(samples.size());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> transformed;
  fft.fwd(transformed, samples);  // sum_k g_k e^{-2 pi i n k / M}
  const double h = 2.0 * kPi / m;
  Eigen::VectorXcd out(m);
  for (int i = 0; i < m; ++i) {
    const int n = i - m / 2;
    const std::complex<double> phase = std::polar(1.0, n * (kPi - 0.5 * h));
    out(i) = phase * transformed[(n % m + m) % m] / double(m);
  }
  return out;
}

bool outer_band_resolved(const Eigen::VectorXcd& c, double rel_tol) {
  const int m = static_cast<int>(c.size());
  const double peak = c.cwiseAbs().maxCoeff();
  if (peak == 0.0) return true;
  const int outer = std::max(1, m / 20);  // 5% of each end = outer 10% of the range
  double edge = 0.0;
  for (int i = 0; i < outer; ++i)
    edge = std::max({edge, std::abs(c(i)), std::abs(c(m - 1 - i))});
  return edge <= rel_tol * peak;
}

}  // namespace

FunctionRep analyze(const CoeffFn& f, int N) {
  if (N < 2 || N % 2 != 0) throw Error("analyze: N must be even and >= 2");
  const double h = 2.0 * kPi / N;
  std::vector<std::complex<double>> g(N);
  for (int k = 0; k < N; ++k) {
    const double theta = -kPi + (k + 0.5) * h;
    const double x = std::tan(0.5 * theta);
    const std::complex<double> weight = std::cos(0.5 * theta) * std::polar(1.0, 0.5 * theta);
    g[k] = f(x) / weight;
  }
  FunctionRep rep;
  rep.basis = Basis::realline;
  rep.N = N;
  rep.coeffs = kSqrtPi * shifted_grid_fft(g);
  rep.resolved = outer_band_resolved(rep.coeffs, 1e-12);
  return rep;
}

Eigen::VectorXcd synthesize(const FunctionRep& rep, std::span<const double> points) {
  if (rep.basis != Basis::realline)
    throw BasisMismatchError("synthesize: expected a realline representation");
  const int N = rep.N;
  Eigen::VectorXcd values(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double x = points[p];
    const std::complex<double> den(1.0, -x);  // 1 - i x
    const std::complex<double> base = 1.0 / (kSqrtPi * den);
    const std::complex<double> ratio = std::complex<double>(1.0, x) / den;  // |ratio| = 1
    std::complex<double> total = 0.0;
    // n >= 0 ascending, then n < 0 descending
    std::complex<double> pw = 1.0;
    for (int n = 0; n < N / 2; ++n) {
      total += rep.coeffs(n + N / 2) * pw;
      pw *= ratio;
    }
    pw = 1.0 / ratio;
    for (int n = -1; n >= -N / 2; --n) {
      total += rep.coeffs(n + N / 2) * pw;
      pw /= ratio;
    }
    values(p) = base * total;
  }
  return values;
}

ToeplitzSymbol multiplication_symbol(const CoeffFn& a, double rel_tol) {
  // Sample a(tan(theta/2)) on the half-shifted grid, doubling until the
  // trailing Fourier coefficients fall below rel_tol relative to the peak.
  for (int m = 256; m <= (1 << 16); m *= 2) {
    const double h = 2.0 * kPi / m;
    std::vector<std::complex<double>> samples(m);
    double peak = 0.0, imag_peak = 0.0;
    for (int k = 0; k < m; ++k) {
      const double theta = -kPi + (k + 0.5) * h;
      samples[k] = a(std::tan(0.5 * theta));
      peak = std::max(peak, std::abs(samples[k]));
      imag_peak = std::max(imag_peak, std::abs(samples[k].imag()));
    }
    if (imag_peak > 1e-12 * std::max(peak, 1e-300))
      throw SelfAdjointnessError("multiplication coefficient must be real-valued");
    Eigen::VectorXcd chat = shifted_grid_fft(samples);
    const double cpeak = chat.cwiseAbs().maxCoeff();
    if (cpeak == 0.0) return ToeplitzSymbol{Eigen::VectorXcd::Zero(1), 0};
    if (!outer_band_resolved(chat, rel_tol) && m < (1 << 16)) continue;

    int band = 0;
    for (int i = 0; i < m; ++i)
      if (std::abs(chat(i)) > rel_tol * cpeak) band = std::max(band, std::abs(i - m / 2));
    ToeplitzSymbol sym;
    sym.bandwidth = band;
    sym.coeffs = Eigen::VectorXcd::Zero(2 * band + 1);
    // Hermitian symmetrization keeps the Toeplitz matrix exactly Hermitian.
    for (int d = -band; d <= band; ++d) {
      const std::complex<double> fwd = chat(d + m / 2);
      const std::complex<double> rev = std::conj(chat(-d + m / 2));
      sym.coeffs(d + band) = 0.5 * (fwd + rev);
    }
    return sym;
  }
  throw Error("multiplication coefficient not resolved at the largest sampling size");
}

BandedMatrix mult_matrix_window(const ToeplitzSymbol& s, int /*lo*/, int size) {
  const int b = std::min(s.bandwidth, size - 1);
  BandedMatrix m(size, b, b);
  for (int j = 0; j < size; ++j)
    for (int i = std::max(0, j - b); i <= std::min(size - 1, j + b); ++i)
      m.set(i, j, s.at(i - j));
  return m;
}

BandedMatrix diff_matrix_window(int order, int lo, int size) {
  if (order == 1) {
    // d/dx: tridiagonal, row n: (i n/2, i(n + 1/2), i(n+1)/2)
    BandedMatrix d(size, 1, 1);
    for (int i = 0; i < size; ++i) {
      const double n = lo + i;
      d.set(i, i, std::complex<double>(0.0, n + 0.5));
      if (i > 0) d.set(i, i - 1, std::complex<double>(0.0, 0.5 * n));
      if (i + 1 < size) d.set(i, i + 1, std::complex<double>(0.0, 0.5 * (n + 1.0)));
    }
    return d;
  }
  if (order == 2) {
    const BandedMatrix d1 = diff_matrix_window(1, lo - 1, size + 2);
    return BandedMatrix::product(d1, d1).crop(1);
  }
  throw UnsupportedOrderError("derivative order must be 1 or 2");
}

BandedMatrix hilbert_matrix_window(int lo, int size) {
  BandedMatrix d(size, 0, 0);
  for (int i = 0; i < size; ++i) d.set(i, i, lo + i >= 0 ? 1.0 : -1.0);
  return d;
}

BandedMatrix sturm_liouville_window(const ToeplitzSymbol& c, int lo, int size) {
  const int pad = c.bandwidth + 2;
  const int lo_p = lo - pad, size_p = size + 2 * pad;
  const BandedMatrix d1 = diff_matrix_window(1, lo_p, size_p);
  const BandedMatrix mc = mult_matrix_window(c, lo_p, size_p);
  BandedMatrix out = BandedMatrix::product(d1, BandedMatrix::product(mc, d1)).crop(pad);
  out.scale(-1.0);
  return out;
}

BandedMatrix cauchy_lowrank_window(const std::vector<ToeplitzSymbol>& factors, int lo, int size) {
  if (factors.empty()) throw InvalidOperatorError("cauchy_lowrank term needs at least one factor");
  int pad = 1;
  for (const auto& k : factors) pad = std::max(pad, k.bandwidth + 1);
  const int lo_p = lo - pad, size_p = size + 2 * pad;
  const BandedMatrix sign = hilbert_matrix_window(lo_p, size_p);
  BandedMatrix total;
  bool first = true;
  for (const auto& k : factors) {
    const BandedMatrix mk = mult_matrix_window(k, lo_p, size_p);
    BandedMatrix term =
        BandedMatrix::product(mk, BandedMatrix::product(sign, mk.adjoint())).crop(pad);
    if (first) {
      total = std::move(term);
      first = false;
    } else {
      total.add_scaled(term);
    }
  }
  return total;
}

BandedMatrix mult_matrix(const ToeplitzSymbol& s, int N) {
  return mult_matrix_window(s, -N / 2, N);
}

BandedMatrix diff_matrix(int order, int N) { return diff_matrix_window(order, -N / 2, N); }

Eigen::VectorXd hilbert_signs(int N) {
  Eigen::VectorXd s(N);
  for (int i = 0; i < N; ++i) s(i) = (i - N / 2 >= 0) ? 1.0 : -1.0;
  return s;
}

std::vector<PreparedTerm> prepare_terms(const std::vector<OperatorTerm>& terms) {
  if (terms.empty()) throw InvalidOperatorError("operator has no terms");
  std::vector<PreparedTerm> prepared;
  prepared.reserve(terms.size());
  for (const auto& term : terms) {
    PreparedTerm p;
    p.kind = term.kind;
    switch (term.kind) {
      case OperatorTerm::Kind::multiplication:
        if (!term.coeff) throw InvalidOperatorError("multiplication term needs a coefficient");
        p.coeff = multiplication_symbol(term.coeff);
        break;
      case OperatorTerm::Kind::derivative:
        if (term.order != 2)
          throw InvalidOperatorError(
              "realline derivative terms must have order 2 (-d/dx(c du/dx))");
        if (term.coeff) {
          p.coeff = multiplication_symbol(term.coeff);
        } else {
          p.coeff.bandwidth = 0;
          p.coeff.coeffs = Eigen::VectorXcd::Constant(1, 1.0);
        }
        break;
      case OperatorTerm::Kind::cauchy_lowrank:
        for (const auto& k : term.factors) p.factors.push_back(multiplication_symbol(k));
        break;
      case OperatorTerm::Kind::fourier_symbol:
        throw InvalidOperatorError("fourier_symbol terms require a Fourier backend");
    }
    prepared.push_back(std::move(p));
  }
  return prepared;
}

BandedMatrix assemble_operator(const std::vector<PreparedTerm>& terms, int N) {
  if (terms.empty()) throw InvalidOperatorError("operator has no terms");
  const int lo = -N / 2;
  BandedMatrix total;
  bool first = true;
  for (const auto& term : terms) {
    BandedMatrix part;
    switch (term.kind) {
      case OperatorTerm::Kind::multiplication:
        part = mult_matrix_window(term.coeff, lo, N);
        break;
      case OperatorTerm::Kind::derivative:
        part = sturm_liouville_window(term.coeff, lo, N);
        break;
      case OperatorTerm::Kind::cauchy_lowrank:
        part = cauchy_lowrank_window(term.factors, lo, N);
        break;
      case OperatorTerm::Kind::fourier_symbol:
        throw InvalidOperatorError("fourier_symbol terms require a Fourier backend");
    }
    if (first) {
      total = std::move(part);
      first = false;
    } else {
      total.add_scaled(part);
    }
  }
  return total;
}

BandedMatrix assemble_operator(const std::vector<OperatorTerm>& terms, int N) {
  return assemble_operator(prepare_terms(terms), N);
}

FunctionRep ShiftedSystem::solve(const FunctionRep& rhs) const {
  if (rhs.basis != Basis::realline)
    throw BasisMismatchError("shifted solve: expected a realline rhs");
  const Eigen::VectorXcd b = rhs.N == N ? rhs.coeffs : rhs.rewindow(N).coeffs;
  FunctionRep out;
  out.basis = Basis::realline;
  out.N = N;
  out.coeffs = factorization->solve(b);
  return out;
}

ShiftedSystem make_shifted(const BandedMatrix& op, std::complex<double> z) {
  if (z.imag() == 0.0)
    throw ShiftOnRealAxisError("complex shift required: resolvent may not exist on the real axis");
  BandedMatrix m = op;
  m.shift_diagonal(-z);
  ShiftedSystem sys;
  sys.shift = z;
  sys.N = m.size();
  sys.factorization = std::make_shared<LinearSolver>(m);
  sys.matrix = std::move(m);
  return sys;
}

ShiftedSystem assemble_shifted(const std::vector<OperatorTerm>& terms, std::complex<double> z,
                               int N) {
  if (z.imag() == 0.0)
    throw ShiftOnRealAxisError("complex shift required: resolvent may not exist on the real axis");
  return make_shifted(assemble_operator(terms, N), z);
}

}  // namespace specmeasure::realline
