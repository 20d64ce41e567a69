#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specmeasure/fourier.hpp"

using namespace specmeasure;
namespace fr = specmeasure::fourier;

namespace {
constexpr double kPi = std::numbers::pi;

// The internal-waves pencil: A = -i(1 + cos(x)/2) d/dy, B = (1 - d^2/dy^2)^{1/2}
fr::PencilDiscretization internal_waves() {
  std::vector<OperatorTerm> a;
  a.push_back(OperatorTerm::derivative(
      1, [](double x) { return std::complex<double>(1.0 + 0.5 * std::cos(x)); }, 1));
  std::vector<OperatorTerm> b;
  b.push_back(OperatorTerm::fourier_symbol(
      [](double, double ky) { return std::sqrt(1.0 + ky * ky); }));
  return fr::PencilDiscretization(Basis::fourier2d, std::move(a), std::move(b));
}

std::complex<double> f53(double x, double y) {
  return std::exp(std::sin(x + y)) / (2.0 + std::cos(y));
}

}  // namespace

TEST_CASE("fourier analyze") {
  SUBCASE("cos x splits into half modes") {
    const FunctionRep rep = fr::analyze([](double x) { return std::complex<double>(std::cos(x)); }, 16);
    CHECK(std::abs(rep.coeffs(8 + 1) - 0.5) < 1e-14);
    CHECK(std::abs(rep.coeffs(8 - 1) - 0.5) < 1e-14);
    for (int i = 0; i < 16; ++i)
      if (i != 7 && i != 9) CHECK(std::abs(rep.coeffs(i)) < 1e-14);
  }

  SUBCASE("constant one is e_0") {
    const FunctionRep rep = fr::analyze([](double) { return std::complex<double>(1.0); }, 8);
    CHECK(std::abs(rep.coeffs(4) - 1.0) < 1e-15);
    CHECK(rep.coeffs.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("the internal-waves f is conjugate-symmetric") {
    const FunctionRep rep = fr::analyze2d(f53, 64);
    CHECK(rep.resolved);
    const int N = 64;
    for (int kx = -N / 2 + 1; kx < N / 2; ++kx)
      for (int ky = -N / 2 + 1; ky < N / 2; ++ky) {
        const auto c = rep.coeffs((kx + N / 2) * N + (ky + N / 2));
        const auto c_rev = rep.coeffs((-kx + N / 2) * N + (-ky + N / 2));
        CHECK(std::abs(c - std::conj(c_rev)) <= 1e-13);
      }
    // Parseval against direct grid samples (normalized measure)
    double grid_norm2 = 0.0;
    const int M = 64;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        grid_norm2 += std::norm(f53(-kPi + 2 * kPi * i / M, -kPi + 2 * kPi * j / M));
    grid_norm2 /= M * M;
    CHECK(rep.coeffs.squaredNorm() == doctest::Approx(grid_norm2).epsilon(1e-12));
  }

  SUBCASE("round trip") {
    const FunctionRep rep = fr::analyze(
        [](double x) { return std::exp(std::complex<double>(0.0, 1.0) * std::sin(x)); }, 64);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xs(-kPi, kPi);
    for (int i = 0; i < 20; ++i) {
      const double x = xs(rng);
      CHECK(std::abs(fr::synthesize(rep, std::span(&x, 1))(0) -
                     std::exp(std::complex<double>(0.0, 1.0) * std::sin(x))) < 1e-12);
    }
  }
}

TEST_CASE("pencil assembly blocks") {
  SUBCASE("A = -i d/dy, B = I, z = -0.5i gives diagonal ky + 0.5i") {
    std::vector<OperatorTerm> a;
    a.push_back(OperatorTerm::derivative(1, {}, 1));
    fr::PencilDiscretization pencil(Basis::fourier2d, std::move(a), {});
    const int N = 8;
    for (int ky : {-3, 0, 2}) {
      const BandedMatrix block = pencil.a_block(ky, N);
      Eigen::MatrixXcd shifted =
          block.dense() - std::complex<double>(0.0, -0.5) * Eigen::MatrixXcd::Identity(N, N);
      CHECK((shifted - (double(ky) + std::complex<double>(0.0, 0.5)) *
                           Eigen::MatrixXcd::Identity(N, N))
                .cwiseAbs()
                .maxCoeff() < 1e-14);
    }
  }

  SUBCASE("internal waves block is tridiagonal with ky/4 couplings") {
    const fr::PencilDiscretization pencil = internal_waves();
    const int N = 16;
    for (int ky : {1, -2, 5}) {
      const BandedMatrix block = pencil.a_block(ky, N);
      CHECK(block.lower_bandwidth() == 1);
      CHECK(block.upper_bandwidth() == 1);
      const Eigen::MatrixXcd dense = block.dense();
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(dense(i, i) - double(ky)) < 1e-13);
        if (i + 1 < N) {
          CHECK(std::abs(dense(i, i + 1) - ky / 4.0) < 1e-13);
          CHECK(std::abs(dense(i + 1, i) - ky / 4.0) < 1e-13);
        }
      }
      // with the shift, diagonal becomes ky - z sqrt(1 + ky^2)
      const std::complex<double> z(0.3, -0.05);
      const auto solver = pencil.factor(z, N);
      (void)solver;  // factorization succeeds
    }
  }

  SUBCASE("per-block Hermitian structure at real z") {
    const fr::PencilDiscretization pencil = internal_waves();
    for (int ky : {-4, 1, 3}) {
      const BandedMatrix block = pencil.a_block(ky, 16);
      CHECK(block.hermiticity_defect() < 1e-12);
    }
  }

  SUBCASE("A == B reduces to (1 - z) B") {
    std::vector<OperatorTerm> a, b;
    a.push_back(OperatorTerm::fourier_symbol(
        [](double, double ky) { return std::sqrt(1.0 + ky * ky); }));
    b.push_back(OperatorTerm::fourier_symbol(
        [](double, double ky) { return std::sqrt(1.0 + ky * ky); }));
    fr::PencilDiscretization pencil(Basis::fourier2d, std::move(a), std::move(b));
    const int N = 16;
    const std::complex<double> z(0.4, -0.2);
    const auto solver = pencil.factor(z, N);
    const FunctionRep f = fr::analyze2d(f53, N);
    const FunctionRep u = solver->solve(f);
    // u = f / ((1 - z) b(ky))
    const Eigen::VectorXd bdiag = pencil.b_diagonal(N);
    for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) {
      const std::complex<double> expected = f.coeffs(i) / ((1.0 - z) * bdiag(i));
      CHECK(std::abs(u.coeffs(i) - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
    }
  }

  SUBCASE("non-positive B is rejected") {
    std::vector<OperatorTerm> a, b;
    a.push_back(OperatorTerm::fourier_symbol([](double kx, double) { return kx * kx; }));
    b.push_back(OperatorTerm::fourier_symbol([](double kx, double) { return kx; }));
    fr::PencilDiscretization pencil(Basis::fourier1d, std::move(a), std::move(b));
    CHECK_THROWS_AS(pencil.b_diagonal(8), InvalidPencilError);
  }

  SUBCASE("shift on the real axis is rejected") {
    const fr::PencilDiscretization pencil = internal_waves();
    CHECK_THROWS_AS(pencil.factor(std::complex<double>(1.0, 0.0), 8), ShiftOnRealAxisError);
  }
}

TEST_CASE("apply B") {
  const fr::PencilDiscretization pencil = internal_waves();
  const int N = 8;

  SUBCASE("e^{iy} mode gains a factor sqrt 2") {
    FunctionRep f;
    f.basis = Basis::fourier2d;
    f.N = N;
    f.coeffs = Eigen::VectorXcd::Zero(N * N);
    f.coeffs((0 + N / 2) * N + (1 + N / 2)) = 1.0;  // kx = 0, ky = 1
    const FunctionRep g = pencil.apply_b(f);
    CHECK(std::abs(g.coeffs((0 + N / 2) * N + (1 + N / 2)) - std::sqrt(2.0)) < 1e-15);
  }

  SUBCASE("b(0) = 1 leaves e_0 unchanged") {
    FunctionRep f;
    f.basis = Basis::fourier2d;
    f.N = N;
    f.coeffs = Eigen::VectorXcd::Zero(N * N);
    f.coeffs((N / 2) * N + N / 2) = 1.0;
    const FunctionRep g = pencil.apply_b(f);
    CHECK((g.coeffs - f.coeffs).norm() == 0.0);
  }

  SUBCASE("B = I leaves f unchanged") {
    std::vector<OperatorTerm> a;
    a.push_back(OperatorTerm::derivative(1, {}, 1));
    fr::PencilDiscretization identity_b(Basis::fourier2d, std::move(a), {});
    const FunctionRep f = fr::analyze2d(f53, N);
    CHECK((identity_b.apply_b(f).coeffs - f.coeffs).norm() == 0.0);
  }
}

TEST_CASE("block solves equal the full 2-D system") {
  const fr::PencilDiscretization pencil = internal_waves();
  const int N = 8;
  const std::complex<double> z(0.25, -0.1);

  // dense full matrix over flattened (kx, ky)
  const Eigen::Index dim = N * N;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::VectorXd bdiag = pencil.b_diagonal(N);
  for (int ky = -N / 2; ky < N / 2; ++ky) {
    const Eigen::MatrixXcd block = pencil.a_block(ky, N).dense();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        full(static_cast<Eigen::Index>(i) * N + (ky + N / 2),
             static_cast<Eigen::Index>(j) * N + (ky + N / 2)) = block(i, j);
  }
  full -= z * bdiag.cast<std::complex<double>>().asDiagonal().toDenseMatrix();

  std::mt19937 rng(21);
  std::normal_distribution<double> gauss;
  FunctionRep rhs;
  rhs.basis = Basis::fourier2d;
  rhs.N = N;
  rhs.coeffs.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) rhs.coeffs(i) = {gauss(rng), gauss(rng)};

  const FunctionRep via_blocks = pencil.factor(z, N)->solve(rhs);
  const Eigen::VectorXcd via_full = full.partialPivLu().solve(rhs.coeffs);
  CHECK((via_blocks.coeffs - via_full).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("symbol positivity of the internal-waves B") {
  const fr::PencilDiscretization pencil = internal_waves();
  for (int n : {8, 32, 128}) CHECK(pencil.b_diagonal(n).minCoeff() >= 1.0);
}
