#include <doctest.h>

#include <random>

#include "dbarn/hessian.hpp"
#include "dbarn/weights.hpp"

using namespace dbarn;

namespace {

VectorC random_point(std::mt19937& rng, int n, double r_min = 0.3, double r_max = 2.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorC z(n);
  do {
    for (int j = 0; j < n; ++j) z[j] = Complex(u(rng), u(rng)) * r_max;
  } while (z.norm() < r_min);
  return z;
}

void check_grad_fd_agreement(const Weight& w, int points = 100) {
  std::mt19937 rng(7);
  for (int i = 0; i < points; ++i) {
    VectorC z = random_point(rng, w.dimension());
    if (w.singular_distance(z) < 1e-2) continue;
    const VectorC exact = w.wirtinger_grad(z);
    const VectorC fd = w.wirtinger_grad_fd(z);
    REQUIRE((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()));
  }
}

void check_hessian_fd_agreement(const Weight& w, int points = 50) {
  std::mt19937 rng(11);
  for (int i = 0; i < points; ++i) {
    VectorC z = random_point(rng, w.dimension());
    if (w.singular_distance(z) < 1e-2) continue;
    const MatrixC exact = w.complex_hessian(z);
    const MatrixC fd = w.complex_hessian_fd(z);
    REQUIRE((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()));
  }
}

}  // namespace

TEST_CASE("eval of built-in weights") {
  CHECK(make_gaussian(1).value(point1(0.0)) == 0.0);
  CHECK(make_radial_power(1, 4).value(point1(2.0)) == doctest::Approx(16.0).epsilon(1e-14));
  const Weight dq = make_decoupled_powers({4, 4}).total();
  CHECK(dq.value(point2(1.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("wirtinger gradient: exact formulas") {
  const VectorC g1 = make_gaussian(1).wirtinger_grad(point1(Complex(1, 1)));
  CHECK(std::abs(g1[0] - Complex(1, -1)) < 1e-14);

  const VectorC g2 = make_radial_power(1, 4).wirtinger_grad(point1(1.0));
  CHECK(std::abs(g2[0] - Complex(2, 0)) < 1e-14);
}

TEST_CASE("gradient and Hessian agree with finite differences at random points") {
  check_grad_fd_agreement(make_gaussian(2));
  check_grad_fd_agreement(make_radial_power(1, 4));
  check_grad_fd_agreement(make_radial_power(2, 4));
  check_grad_fd_agreement(make_radial_power(1, 3));
  check_grad_fd_agreement(make_mixed_example());
  check_grad_fd_agreement(make_split_quartic(3, 2));
  check_grad_fd_agreement(make_decoupled_powers({4, 6}).total());

  check_hessian_fd_agreement(make_gaussian(2));
  check_hessian_fd_agreement(make_radial_power(1, 4));
  check_hessian_fd_agreement(make_mixed_example());
  check_hessian_fd_agreement(make_split_quartic(3, 2));
}

TEST_CASE("complex Hessian: exact values") {
  std::mt19937 rng(3);
  const MatrixC h_gauss = make_gaussian(2).complex_hessian(random_point(rng, 2));
  CHECK((h_gauss - MatrixC::Identity(2, 2)).norm() < 1e-14);

  const Weight rp4 = make_radial_power(1, 4);
  const VectorC z = point1(Complex(0.7, -0.4));
  CHECK(std::abs(rp4.complex_hessian(z)(0, 0) - 4.0 * std::norm(z[0])) < 1e-12);

  const Complex w(1.3, 0.2);
  const MatrixC h_mixed = make_mixed_example().complex_hessian(point2(0.0, w));
  CHECK(std::abs(h_mixed(0, 0) - std::norm(w)) < 1e-12);
  CHECK(std::abs(h_mixed(0, 1)) < 1e-14);
  CHECK(std::abs(h_mixed(1, 0)) < 1e-14);
  CHECK(std::abs(h_mixed(1, 1)) < 1e-14);
}

TEST_CASE("Hessian is exactly Hermitian after symmetrization") {
  std::mt19937 rng(5);
  for (const Weight& w : {make_mixed_example(), make_split_quartic(2, 2), make_radial_power(2, 6)}) {
    const MatrixC m = w.complex_hessian(random_point(rng, w.dimension()));
    CHECK((m - m.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("plurisubharmonicity of built-ins at sampled smooth points") {
  std::mt19937 rng(13);
  for (const Weight& w : {make_gaussian(2), make_radial_power(2, 4), make_mixed_example(),
                          make_split_quartic(3, 2), make_decoupled_powers({4, 6}).total()}) {
    for (int i = 0; i < 40; ++i) {
      VectorC z = random_point(rng, w.dimension());
      if (w.singular_distance(z) < 1e-3) continue;
      const VectorR ev = eigvals_ascending(w.complex_hessian(z));
      CHECK(ev[0] >= -1e-10);
    }
  }
}

TEST_CASE("real Laplacian equals 4 tr(M_phi)") {
  std::mt19937 rng(17);
  for (const Weight& w : {make_gaussian(2), make_radial_power(1, 4), make_mixed_example(),
                          make_split_quartic(2, 2)}) {
    for (int i = 0; i < 25; ++i) {
      const VectorC z = random_point(rng, w.dimension());
      const double lap = real_laplacian_fd(w, z);
      const double tr4 = 4.0 * trace_m(w, z);
      CHECK(std::abs(lap - tr4) <= 1e-6 * (1.0 + std::abs(lap)));
    }
  }
}

TEST_CASE("radial_power(4) has Laplacian 16|z|^2") {
  const Weight w = make_radial_power(1, 4);
  for (double x : {0.5, 1.0, 2.0}) {
    CHECK(4.0 * trace_m(w, point1(x)) == doctest::Approx(16.0 * x * x).epsilon(1e-12));
  }
}

TEST_CASE("decoupled weights: value sums exactly, Hessian exactly diagonal") {
  const DecoupledWeight dw = make_decoupled_powers({4, 6});
  const Weight total = dw.total();
  std::mt19937 rng(19);
  for (int i = 0; i < 20; ++i) {
    const VectorC z = random_point(rng, 2);
    const double sum = dw.components[0].value(point1(z[0])) + dw.components[1].value(point1(z[1]));
    CHECK(total.value(z) == sum);
    const MatrixC h = total.complex_hessian(z);
    CHECK(std::abs(h(0, 1)) == 0.0);
    CHECK(std::abs(h(1, 0)) == 0.0);
  }
}

TEST_CASE("builtin factory") {
  const Weight g = make_builtin("gaussian", {.n = 1});
  CHECK(std::abs(g.complex_hessian(point1(Complex(0.3, 0.9)))(0, 0) - 1.0) < 1e-14);

  // split_quartic with singleton blocks coincides with decoupled |z1|^4 + |z2|^4
  const Weight sq = make_builtin("split_quartic", {.n = 2, .q = 2});
  const Weight dq = make_decoupled_powers({4, 4}).total();
  std::mt19937 rng(23);
  for (int i = 0; i < 20; ++i) {
    const VectorC z = random_point(rng, 2);
    CHECK(sq.value(z) == doctest::Approx(dq.value(z)).epsilon(1e-13));
    CHECK((sq.complex_hessian(z) - dq.complex_hessian(z)).norm() < 1e-12);
  }

  CHECK_THROWS_AS(make_builtin("no_such_weight", {}), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("radial_power", {.n = 1, .alpha = {-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin("split_quartic", {.n = 2, .q = 3}), std::invalid_argument);
}

TEST_CASE("singular-locus evaluation raises") {
  const Weight w = make_radial_power(1, 3);
  CHECK(!w.smooth_everywhere());
  CHECK_THROWS_AS(w.wirtinger_grad(point1(0.0)), std::domain_error);
  CHECK_NOTHROW(w.wirtinger_grad(point1(1.0)));
}
