#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "specmeasure/oracle.hpp"
#include "specmeasure/quadrature.hpp"

using namespace specmeasure;
namespace orc = specmeasure::oracle;

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

std::complex<double> rho0(double y) { return 1.0 / (kSqrtPi * std::complex<double>(1.0, -y)); }

// f = sqrt(2/pi)/(1+x^2); its unitary Fourier transform is e^{-|xi|} and the
// free-laplacian density is e^{-2 sqrt(l)} / sqrt(l).
std::complex<double> f_std(double x) { return std::sqrt(2.0 / kPi) / (1.0 + x * x); }
}  // namespace

TEST_CASE("principal value quadrature") {
  SUBCASE("odd integrands vanish") {
    CHECK(std::abs(orc::pv_cauchy([](double y) { return std::complex<double>(1.0 / (1.0 + y * y)); },
                                  0.0)) < 1e-10);
    CHECK(std::abs(orc::pv_cauchy([](double y) { return std::complex<double>(std::exp(-y * y)); },
                                  0.0)) < 1e-10);
  }

  SUBCASE("rho_0 is a +1 eigenfunction") {
    double err = 0.0;
    const auto pv = orc::pv_cauchy(rho0, 0.0, {}, &err);
    CHECK(err < 1e-9);
    CHECK(std::abs(pv - 1.0 / kSqrtPi) < 1e-8);  // +rho_0(0) = 0.5641895835
  }

  SUBCASE("linearity") {
    auto u = [](double y) { return rho0(y); };
    auto v = [](double y) { return std::complex<double>(std::exp(-y * y)); };
    const std::complex<double> a(0.7, -0.3), b(1.1, 0.2);
    const auto lhs = orc::pv_cauchy([&](double y) { return a * u(y) + b * v(y); }, 0.4);
    const auto rhs = a * orc::pv_cauchy(u, 0.4) + b * orc::pv_cauchy(v, 0.4);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("dense measure") {
  const RationalKernel kernel = RationalKernel::equispaced(2);
  const double eps = 0.3;

  SUBCASE("single eigenvalue") {
    Eigen::MatrixXcd h(1, 1);
    h << 2.0;
    Eigen::VectorXcd f(1);
    f << 1.0;
    for (double x : {-0.5, 1.0, 2.0, 3.7})
      CHECK(orc::dense_measure(h, f, kernel, eps, x) ==
            doctest::Approx(kernel.scaled(x - 2.0, eps)).epsilon(1e-13));
  }

  SUBCASE("two eigenvalues with equal weights") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(1, 1) = 1.0;
    Eigen::VectorXcd f(2);
    f << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    for (double x : {0.0, 0.4, 1.2})
      CHECK(orc::dense_measure(h, f, kernel, eps, x) ==
            doctest::Approx(0.5 * kernel.scaled(x, eps) + 0.5 * kernel.scaled(x - 1.0, eps))
                .epsilon(1e-13));
  }

  SUBCASE("two routes agree on a random Hermitian matrix") {
    std::mt19937 rng(5);
    std::normal_distribution<double> gauss;
    const int n = 24;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::VectorXcd f(n);
    for (int i = 0; i < n; ++i) f(i) = std::complex<double>(gauss(rng), gauss(rng));
    f.normalize();
    const RationalKernel k4 = RationalKernel::equispaced(4);
    for (double x : {-1.0, 0.3, 2.2}) {
      const double via_eig = orc::dense_measure(h, f, k4, 0.2, x);
      const double via_resolvent = orc::dense_measure_resolvent(h, f, k4, 0.2, x);
      CHECK(std::abs(via_eig - via_resolvent) <= 1e-12 * std::max(1.0, std::abs(via_eig)));
    }
  }

  SUBCASE("non-Hermitian input is rejected") {
    Eigen::MatrixXcd h(2, 2);
    h << 1.0, 2.0, 3.0, 4.0;
    Eigen::VectorXcd f(2);
    f << 1.0, 0.0;
    CHECK_THROWS_AS(orc::dense_measure(h, f, kernel, eps, 0.0), Error);
  }
}

TEST_CASE("laplacian density") {
  SUBCASE("fourier transform of the standard f is e^{-|xi|}") {
    for (double xi : {0.0, 0.5, -1.3, 2.0}) {
      const auto got = orc::fourier_transform(f_std, xi);
      CHECK(std::abs(got - std::exp(-std::abs(xi))) < 1e-9);
    }
  }

  SUBCASE("matches the closed form e^{-2 sqrt(l)}/sqrt(l)") {
    for (double lam : {0.25, 1.0, 2.5}) {
      const double expected = std::exp(-2.0 * std::sqrt(lam)) / std::sqrt(lam);
      CHECK(orc::laplacian_density(f_std, lam) == doctest::Approx(expected).epsilon(1e-8));
    }
  }

  SUBCASE("two quadrature resolutions agree") {
    const double coarse = orc::laplacian_density(f_std, 1.0, 2000);
    const double fine = orc::laplacian_density(f_std, 1.0, 4000);
    CHECK(std::abs(coarse - fine) < 1e-8);
  }

  SUBCASE("even f uses a single branch") {
    // rho_f(l) = |fhat(sqrt l)|^2 / sqrt(l) when f is even
    const double lam = 0.8;
    const double full = orc::laplacian_density(f_std, lam);
    const double one_branch =
        std::norm(orc::fourier_transform(f_std, std::sqrt(lam))) / std::sqrt(lam);
    CHECK(full == doctest::Approx(one_branch).epsilon(1e-10));
  }

  SUBCASE("density integrates to one") {
    // int_0^inf rho_f = ||f||^2 = 1; substitute l = t^2
    const GaussLegendre rule(600);
    const double mass = rule.integrate(
        [&](double t) { return orc::laplacian_density(f_std, t * t, 800) * 2.0 * t; }, 1e-8, 12.0);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }

  SUBCASE("domain error for lambda <= 0") {
    CHECK_THROWS_AS(orc::laplacian_density(f_std, 0.0), Error);
    CHECK_THROWS_AS(orc::laplacian_density(f_std, -1.0), Error);
  }
}

TEST_CASE("smoothed density convolution") {
  // against the sanity value: rho == 1 near x integrates to ~1
  const RationalKernel k = RationalKernel::equispaced(4);
  auto rho_const = [](double) { return 1.0; };
  const double v = orc::smoothed_density(rho_const, k, 0.05, 9.0, 400.0, 1e-10);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  // smoothing the free-laplacian density at eps = 0.1 reproduces the
  // independently computed reference value
  auto rho_f = [](double lam) { return std::exp(-2.0 * std::sqrt(lam)) / std::sqrt(lam); };
  const RationalKernel k2 = RationalKernel::equispaced(2);
  const double mu = orc::smoothed_density(rho_f, k2, 0.1, 1.0, 900.0, 1e-12);
  CHECK(mu == doctest::Approx(0.1380620431235).epsilon(1e-9));
}
