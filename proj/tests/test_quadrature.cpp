#include <doctest.h>

#include <cmath>

#include "dbarn/hessian.hpp"
#include "dbarn/quadrature.hpp"
#include "dbarn/weights.hpp"

using namespace dbarn;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2m-1 exactly") {
  for (int m : {2, 5, 16}) {
    const GaussLegendre gl = gauss_legendre(m);
    for (int deg = 0; deg <= 2 * m - 1; ++deg) {
      double q = 0.0;
      for (int i = 0; i < m; ++i) q += gl.weights[i] * std::pow(gl.nodes[i], deg);
      const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
      CHECK(std::abs(q - exact) < 1e-13);
    }
  }
}

TEST_CASE("disk integrals of simple fields") {
  CHECK(disk_integral([](Complex) { return 1.0; }, 0.0, 1.0) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(disk_integral([](Complex) { return 4.0; }, 0.0, 1.0) ==
        doctest::Approx(4 * kPi).epsilon(1e-12));
  // Laplacian of |z|^4 is 16|z|^2; over the unit disk: 16 * 2*pi / 4 = 8*pi.
  CHECK(disk_integral([](Complex z) { return 16.0 * std::norm(z); }, 0.0, 1.0) ==
        doctest::Approx(8 * kPi).epsilon(1e-12));
}

TEST_CASE("polar rule is exact on radial polynomials times harmonics") {
  // Re(z^2)|z|^2 integrates to zero by symmetry, exactly for the trapezoid rule.
  const double v = disk_integral([](Complex z) { return (z * z).real() * std::norm(z); }, 0.0, 1.0);
  CHECK(std::abs(v) < 1e-13);
  // |z|^4 -> 2*pi/6
  CHECK(disk_integral([](Complex z) { return std::pow(std::abs(z), 4); }, 0.0, 1.0) ==
        doctest::Approx(kPi / 3).epsilon(1e-13));
}

TEST_CASE("translation covariance of the disk rule") {
  auto f = [](Complex z) { return std::exp(-std::norm(z)) * (1.0 + z.real()); };
  const Complex c(0.7, -1.2);
  const double a = disk_integral(f, c, 1.3);
  const double b = disk_integral([&](Complex z) { return f(z + c); }, 0.0, 1.3);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("ball integrals in C^2") {
  const VectorC origin = point2(0.0, 0.0);
  // Volume of the unit ball in R^4 is pi^2/2; the Halton map integrates
  // constants exactly.
  CHECK(ball_integral([](const VectorC&) { return 1.0; }, origin, 1.0) ==
        doctest::Approx(kPi * kPi / 2).epsilon(1e-10));

  // tr(M_gaussian)^2 = 4 at any center.
  const VectorC c = point2(Complex(1.5, 0.2), Complex(-0.4, 2.0));
  CHECK(ball_integral([](const VectorC&) { return 4.0; }, c, 1.0) ==
        doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
}

TEST_CASE("quasi-random and deterministic ball schemes cross-check") {
  const Weight w = make_decoupled_powers({4, 4}).total();
  auto field = [&](const VectorC& z) { return trace_m(w, z); };
  const VectorC origin = point2(0.0, 0.0);

  QuadratureRule halton;
  const double qh = ball_integral(field, origin, 1.0, halton);

  QuadratureRule polar;
  polar.scheme = QuadratureRule::Scheme::SpherePolar;
  const double qp = ball_integral(field, origin, 1.0, polar);

  // tr = 4(|z1|^2 + |z2|^2) = 4|z|^2; exact value 4 * 2 pi^2 / 6 = 4 pi^2 / 3.
  const double exact = 4 * kPi * kPi / 3;
  CHECK(std::abs(qp - exact) <= 1e-8 * exact);
  CHECK(std::abs(qh - qp) <= 1e-3 * std::abs(qp));
}

TEST_CASE("Lebesgue doubling ratio is 2^(2n)") {
  auto one1 = [](const VectorC&) { return 1.0; };
  const VectorC c1 = point1(Complex(0.3, 0.4));
  CHECK(ball_integral(one1, c1, 2.0) / ball_integral(one1, c1, 1.0) ==
        doctest::Approx(4.0).epsilon(1e-8));
  const VectorC c2 = point2(Complex(1, 1), Complex(0, -2));
  CHECK(ball_integral(one1, c2, 1.6) / ball_integral(one1, c2, 0.8) ==
        doctest::Approx(16.0).epsilon(1e-8));
}

TEST_CASE("polydisk integrals") {
  const VectorC centers = point2(0.0, 0.0);
  CHECK(polydisk_integral([](const VectorC&) { return 1.0; }, centers, 1.0) ==
        doctest::Approx(kPi * kPi).epsilon(1e-11));
  CHECK(polydisk_integral([](const VectorC&) { return 2.0; }, centers, 1.0) ==
        doctest::Approx(2 * kPi * kPi).epsilon(1e-11));
}

TEST_CASE("polydisk trace integral splits into disk integrals for decoupled weights") {
  const DecoupledWeight dw = make_decoupled_powers({4, 4});
  const Weight total = dw.total();
  auto field = [&](const VectorC& z) { return trace_m(total, z); };

  for (const VectorC& c : {point2(0.0, 0.0), point2(Complex(2, 0), Complex(0, 3))}) {
    const double lhs = polydisk_integral(field, c, 1.0);
    double rhs = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Weight& comp = dw.components[j];
      rhs += disk_integral(
          [&](Complex zj) { return 4.0 * comp.complex_hessian(point1(zj))(0, 0).real(); }, c[j],
          1.0);
    }
    rhs *= kPi / 4.0;  // pi^(n-1)/4 with n = 2
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("radial moments of the gaussian match Gamma integrals") {
  const Weight g = make_gaussian(1);
  CHECK(radial_moment(g, 0).value == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(radial_moment(g, 1).value == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(radial_moment(g, 3).value == doctest::Approx(6 * kPi).epsilon(1e-10));
  CHECK(!radial_moment(g, 0).divergent);
}

TEST_CASE("radial moments of |z|^4 match Gamma integrals") {
  const Weight w = make_radial_power(1, 4);
  for (int k : {0, 1, 4}) {
    const double exact = (kPi / 2) * std::tgamma((k + 1) / 2.0);
    CHECK(radial_moment(w, k).value == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("divergent moments are flagged") {
  // Sign-flipped gaussian: integrand grows, no moment is finite.
  BergmanProfile bad{[](double r) { return -r * r; }, 0.0, 1.0};
  CHECK(radial_moment(bad, 0).divergent);
  CHECK(radial_moment(bad, 3).divergent);

  // mixed_example monomial profile: k = 0 diverges at the origin, k >= 1 converges.
  const Weight mixed = make_mixed_example();
  CHECK(radial_moment(mixed, 0).divergent);
  const RadialMoment m1 = radial_moment(mixed, 1);
  CHECK(!m1.divergent);
  // pi * 2 pi * int r e^{-r^4} dr = 2 pi^2 * Gamma(1/2)/4 = pi^(5/2)/2
  CHECK(m1.value == doctest::Approx(std::pow(kPi, 2.5) / 2).epsilon(1e-9));
}
