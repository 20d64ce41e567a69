#include "specmeasure/function_rep.hpp"

namespace specmeasure {

std::string_view basis_name(Basis b) {
  switch (b) {
    case Basis::realline: return "realline";
    case Basis::fourier1d: return "fourier1d";
    case Basis::fourier2d: return "fourier2d";
  }
  return "?";
}

FunctionRep FunctionRep::rewindow(int new_N) const {
  if (new_N == N) return *this;
  FunctionRep out;
  out.basis = basis;
  out.N = new_N;
  out.resolved = resolved;
  if (basis == Basis::fourier2d) {
    out.coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(new_N) * new_N);
    const int lo = -std::min(N, new_N) / 2, hi = std::min(N, new_N) / 2;
    for (int kx = lo; kx < hi; ++kx)
      for (int ky = lo; ky < hi; ++ky)
        out.coeffs((kx + new_N / 2) * static_cast<Eigen::Index>(new_N) + (ky + new_N / 2)) =
            coeffs((kx + N / 2) * static_cast<Eigen::Index>(N) + (ky + N / 2));
  } else {
    out.coeffs = Eigen::VectorXcd::Zero(new_N);
    const int lo = -std::min(N, new_N) / 2, hi = std::min(N, new_N) / 2;
    for (int n = lo; n < hi; ++n) out.coeffs(n + new_N / 2) = coeffs(n + N / 2);
  }
  return out;
}

std::complex<double> inner_product(const FunctionRep& u, const FunctionRep& v) {
  if (u.basis != v.basis)
    throw BasisMismatchError("inner product across bases: " + std::string(basis_name(u.basis)) +
                             " vs " + std::string(basis_name(v.basis)));
  if (u.N != v.N || u.coeffs.size() != v.coeffs.size())
    throw BasisMismatchError("inner product across truncations: N=" + std::to_string(u.N) +
                             " vs N=" + std::to_string(v.N));
  // <u, v> = sum u_n conj(v_n)
  return v.coeffs.dot(u.coeffs);
}

}  // namespace specmeasure
