#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "dbarn/hessian.hpp"
#include "dbarn/weights.hpp"

using namespace dbarn;

namespace {

MatrixC random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  MatrixC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return symmetrize(a);
}

// Independent eigenvalue route: characteristic polynomial coefficients by
// Faddeev-LeVerrier, roots as companion-matrix eigenvalues.
VectorR charpoly_roots(const MatrixC& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(n + 1, 0.0);  // p(x) = x^n + c[1] x^(n-1) + ... + c[n]
  c[0] = 1.0;
  MatrixC m = MatrixC::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = (a * m + c[k - 1] * MatrixC::Identity(n, n)).eval();
    c[k] = -(a * m).trace().real() / k;
  }
  MatrixR companion = MatrixR::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1 - i) = 0.0;  // filled below
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[n - i];
  Eigen::EigenSolver<MatrixR> es(companion);
  VectorR roots = es.eigenvalues().real();
  std::sort(roots.data(), roots.data() + roots.size());
  return roots;
}

}  // namespace

TEST_CASE("eigvals_ascending on small fixed matrices") {
  MatrixC d = MatrixC::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  const VectorR ev = eigvals_ascending(d);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(2.0));

  MatrixC pauli_x = MatrixC::Zero(2, 2);
  pauli_x(0, 1) = 1.0;
  pauli_x(1, 0) = 1.0;
  const VectorR px = eigvals_ascending(pauli_x);
  CHECK(px[0] == doctest::Approx(-1.0));
  CHECK(px[1] == doctest::Approx(1.0));
}

TEST_CASE("eigvals_ascending matches the characteristic-polynomial oracle") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixC a = random_hermitian(rng, 5);
    const VectorR ev = eigvals_ascending(a);
    const VectorR oracle = charpoly_roots(a);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(ev[i] - oracle[i]) <= 1e-8 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("eigendecomposition residuals and reconstruction") {
  std::mt19937 rng(31);
  const MatrixC a = random_hermitian(rng, 6);
  Eigen::SelfAdjointEigenSolver<MatrixC> es(a);
  const MatrixC recon = es.eigenvectors() * es.eigenvalues().asDiagonal() *
                        es.eigenvectors().adjoint();
  CHECK((a - recon).norm() <= 1e-12 * a.norm());
  for (int i = 0; i < 6; ++i) {
    const VectorC v = es.eigenvectors().col(i);
    CHECK((a * v - es.eigenvalues()[i] * v).norm() <= 1e-10 * a.norm());
  }
}

TEST_CASE("non-Hermitian input is rejected") {
  MatrixC a = MatrixC::Zero(2, 2);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(eigvals_ascending(a), std::invalid_argument);
}

TEST_CASE("s_q on diagonal and built-in weights") {
  // phi = |z1|^2 + 2|z2|^2: Hessian diag(1, 2)
  Weight w(
      2, [](const VectorC& z) { return std::norm(z[0]) + 2 * std::norm(z[1]); },
      [](const VectorC& z) {
        VectorC g(2);
        g[0] = std::conj(z[0]);
        g[1] = 2.0 * std::conj(z[1]);
        return g;
      },
      [](const VectorC&) {
        MatrixC m = MatrixC::Zero(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = 2.0;
        return m;
      });
  const VectorC z = point2(Complex(0.4, 1.0), Complex(-0.2, 0.1));
  CHECK(s_q(w, z, 1) == doctest::Approx(1.0));
  CHECK(s_q(w, z, 2) == doctest::Approx(3.0));
  CHECK_THROWS_AS(s_q(w, z, 3), std::invalid_argument);
  CHECK_THROWS_AS(s_q(w, z, 0), std::invalid_argument);

  const Weight g3 = make_gaussian(3);
  VectorC p(3);
  p << Complex(1, 2), Complex(0, -1), Complex(0.5, 0.5);
  for (int q = 1; q <= 3; ++q) CHECK(s_q(g3, p, q) == doctest::Approx(q));

  CHECK(s_q(make_mixed_example(), point2(0.0, Complex(2, 1)), 1) == doctest::Approx(0.0));
}

TEST_CASE("trace and Hilbert-Schmidt norm") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-1, 1);
  const Weight g2 = make_gaussian(2);
  const VectorC z = point2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
  CHECK(trace_m(g2, z) == doctest::Approx(2.0));
  CHECK(hs_norm_sq(g2, z) == doctest::Approx(2.0));

  const Weight rp4 = make_radial_power(1, 4);
  CHECK(trace_m(rp4, point1(1.0)) == doctest::Approx(4.0));
  CHECK(hs_norm_sq(rp4, point1(1.0)) == doctest::Approx(16.0));
}

TEST_CASE("tr(M^2) <= tr(M)^2 on random PSD matrices") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixC b = random_hermitian(rng, 4);
    const MatrixC psd = (b * b.adjoint()).eval();  // PSD
    const double tr = psd.trace().real();
    CHECK(psd.squaredNorm() <= tr * tr * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("partial sums are monotone for PSD Hessians and s_n = tr") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const Weight w = make_split_quartic(3, 2);
  for (int trial = 0; trial < 20; ++trial) {
    VectorC z(3);
    for (int j = 0; j < 3; ++j) z[j] = Complex(u(rng), u(rng));
    double prev = s_q(w, z, 1);
    CHECK(prev >= -1e-12);
    for (int q = 2; q <= 3; ++q) {
      const double cur = s_q(w, z, q);
      CHECK(cur >= prev - 1e-12);
      prev = cur;
    }
    CHECK(s_q(w, z, 3) == doctest::Approx(trace_m(w, z)).epsilon(1e-12));
  }
}
