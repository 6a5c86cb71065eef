#include <doctest.h>

#include <random>

#include "dbarn/hessian.hpp"
#include "dbarn/schrodinger.hpp"
#include "dbarn/weights.hpp"

using namespace dbarn;

namespace {

double curl_fd(const MagneticData& data, double x, double y, double h = 1e-5) {
  const double day_dx = (data.vector_potential(x + h, y).y() - data.vector_potential(x - h, y).y()) / (2 * h);
  const double dax_dy = (data.vector_potential(x, y + h).x() - data.vector_potential(x, y - h).x()) / (2 * h);
  return day_dx - dax_dy;
}

MagneticData free_data() {
  MagneticData d;
  d.vector_potential = [](double, double) { return Eigen::Vector2d{0.0, 0.0}; };
  d.electric_potential = [](double, double) { return 0.0; };
  d.degree = FormDegree::Top;
  return d;
}

}  // namespace

TEST_CASE("vector potential of the gaussian weight") {
  const Weight g = make_gaussian(1);
  for (auto [x, y] : {std::pair{0.3, -1.2}, {2.0, 0.5}}) {
    const Eigen::Vector2d a = vector_potential(g, x, y);
    CHECK(a.x() == doctest::Approx(-y).epsilon(1e-12));
    CHECK(a.y() == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK(vector_potential(make_radial_power(1, 4), 0.0, 0.0).norm() == 0.0);
}

TEST_CASE("curl A equals half the Laplacian of the weight") {
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const Weight& w : {make_gaussian(1), make_radial_power(1, 4)}) {
    const MagneticData data = magnetic_data(w, FormDegree::Top);
    for (int i = 0; i < 10; ++i) {
      const double x = u(rng), y = u(rng);
      const double expect = 2.0 * trace_m(w, point1(Complex(x, y)));  // Delta(phi)/2
      CHECK(curl_fd(data, x, y) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("electric potential") {
  CHECK(electric_potential(make_gaussian(1), Complex(0.7, -0.3)) == doctest::Approx(2.0));
  CHECK(electric_potential(make_radial_power(1, 4), Complex(1.0, 0.0)) == doctest::Approx(8.0));
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i)
    CHECK(electric_potential(make_radial_power(1, 6), Complex(u(rng), u(rng))) >= -1e-10);
}

TEST_CASE("free operator reproduces the Dirichlet FD Laplacian spectrum") {
  Grid2D grid{2.0, 4};  // (N-1)^2 = 9 unknowns
  const SparseHermitianOperator op = assemble(free_data(), grid);
  CHECK(is_hermitian(op));

  const SpectrumApprox s = lowest_eigenpairs(op, 8);
  const double h = grid.spacing();
  std::vector<double> expect;
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k)
      expect.push_back(0.25 * (2 - 2 * std::cos(j * kPi / 4) + 2 - 2 * std::cos(k * kPi / 4)) /
                       (h * h));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 8; ++i) CHECK(s.pairs[i].value == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("assembled operators are exactly Hermitian") {
  Grid2D grid{4.0, 24};
  for (const Weight& w : {make_gaussian(1), make_radial_power(1, 4)})
    for (FormDegree d : {FormDegree::Top, FormDegree::Zero}) CHECK(is_hermitian(assemble(w, grid, d)));
}

TEST_CASE("gaussian weight: Landau clusters at top degree") {
  const Weight g = make_gaussian(1);
  Grid2D grid{5.0, 80};
  SpectrumOptions opts;
  opts.k = 60;
  opts.solver.tol = 1e-7;
  const SpectrumApprox s = solve_spectrum(g, grid, FormDegree::Top, opts);

  CHECK(s.pairs.front().value >= -1e-8);  // positivity
  REQUIRE(s.clusters.size() >= 2);
  CHECK(s.clusters[0].value == doctest::Approx(1.0).epsilon(0.015));
  CHECK(s.clusters[1].value == doctest::Approx(2.0).epsilon(0.015));
  CHECK(s.clusters[0].multiplicity >= 10);  // lowest Landau level is massively degenerate
}

TEST_CASE("gaussian weight: zero-degree kernel and gap") {
  const Weight g = make_gaussian(1);
  Grid2D grid{5.0, 80};
  SpectrumOptions opts;
  opts.k = 40;
  opts.solver.tol = 1e-7;
  const SpectrumApprox s = solve_spectrum(g, grid, FormDegree::Zero, opts);

  CHECK(s.kernel_dim >= 3);  // weighted entire functions survive truncation
  REQUIRE(!s.clusters.empty());
  CHECK(std::abs(s.clusters[0].value) < 5e-3);
  // Next cluster sits near 1.
  bool found_one = false;
  for (const auto& c : s.clusters)
    if (std::abs(c.value - 1.0) < 0.03) found_one = true;
  CHECK(found_one);
}

TEST_CASE("kernel multiplicity grows with the box at fixed spacing") {
  const Weight g = make_gaussian(1);
  SpectrumOptions opts;
  opts.k = 40;
  opts.solver.tol = 1e-6;
  Grid2D small{4.0, 32};  // h = 0.25
  Grid2D large{6.0, 48};  // same h
  const int dim_small = solve_spectrum(g, small, FormDegree::Zero, opts).kernel_dim;
  opts.k = 60;
  const int dim_large = solve_spectrum(g, large, FormDegree::Zero, opts).kernel_dim;
  CHECK(dim_small >= 1);
  CHECK(dim_large > dim_small);
}

TEST_CASE("discretization error of the first Landau level shrinks like h^2") {
  const Weight g = make_gaussian(1);
  SpectrumOptions opts;
  opts.k = 1;
  opts.solver.tol = 1e-10;
  double err_coarse = 0, err_fine = 0;
  {
    const SpectrumApprox s = solve_spectrum(g, Grid2D{5.0, 40}, FormDegree::Top, opts);
    err_coarse = std::abs(s.pairs[0].value - 1.0);
  }
  {
    const SpectrumApprox s = solve_spectrum(g, Grid2D{5.0, 80}, FormDegree::Top, opts);
    err_fine = std::abs(s.pairs[0].value - 1.0);
  }
  CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("conjugated-operator application cross-checks the assembled matrix") {
  const Weight g = make_gaussian(1);

  // Zero input stays zero.
  Grid2D tiny{3.0, 12};
  CHECK(apply_conjugated_box(g, VectorC::Zero(tiny.interior_count()), tiny).norm() == 0.0);

  // Difference of the two discretizations of the same operator is O(h^2).
  auto max_diff = [&](const Grid2D& grid) {
    const SparseHermitianOperator op = assemble(g, grid, FormDegree::Top);
    VectorC f(grid.interior_count());
    for (int iy = 1; iy <= grid.interior_side(); ++iy)
      for (int ix = 1; ix <= grid.interior_side(); ++ix) {
        const Complex z(grid.site(ix), grid.site(iy));
        f[grid.index(ix, iy)] = std::exp(-2.0 * std::norm(z)) * (1.0 + 0.3 * z.real());
      }
    const VectorC a = op.mat * f;
    const VectorC b = apply_conjugated_box(g, f, grid);
    return (a - b).cwiseAbs().maxCoeff();
  };
  const double d1 = max_diff(Grid2D{4.0, 32});
  const double d2 = max_diff(Grid2D{4.0, 64});
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("conjugated monomial states are near-eigenfunctions at top degree") {
  const Weight g = make_gaussian(1);
  Grid2D grid{5.0, 160};
  const int m = 2;
  VectorC f(grid.interior_count());
  for (int iy = 1; iy <= grid.interior_side(); ++iy)
    for (int ix = 1; ix <= grid.interior_side(); ++ix) {
      const Complex z(grid.site(ix), grid.site(iy));
      Complex zm = 1.0;
      for (int t = 0; t < m; ++t) zm *= z;
      f[grid.index(ix, iy)] = std::exp(-0.5 * std::norm(z)) * zm;
    }
  const VectorC out = apply_conjugated_box(g, f, grid);
  // tr(M_phi) = 1 for the gaussian, so out should reproduce f where f is not tiny.
  const double fmax = f.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > 0.1 * fmax) CHECK(std::abs(out[i] - f[i]) < 1e-2 * std::abs(f[i]));
}

TEST_CASE("gauge covariance of the Peierls discretization") {
  const Weight g = make_gaussian(1);
  Grid2D grid{4.0, 64};
  const MagneticData base = magnetic_data(g, FormDegree::Top);

  // chi = 0: identical assembly.
  const MagneticData same = gauge_shift(base, [](double, double) {
    return Eigen::Vector2d{0.0, 0.0};
  });
  CHECK((assemble(same, grid).mat - assemble(base, grid).mat).norm() == 0.0);

  LanczosOptions lopts;
  lopts.tol = 1e-9;
  const SpectrumApprox ref = lowest_eigenpairs(assemble(base, grid), 5, lopts);

  // Linear chi: the midpoint rule integrates grad(chi) exactly, eigenvalues move
  // only at roundoff level.
  const MagneticData linear = gauge_shift(base, [](double, double) {
    return Eigen::Vector2d{0.7, -0.4};
  });
  const SpectrumApprox lin = lowest_eigenpairs(assemble(linear, grid), 5, lopts);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(lin.pairs[i].value - ref.pairs[i].value) < 1e-6);

  // Smooth chi: agreement to discretization accuracy.
  const MagneticData smooth = gauge_shift(base, [](double x, double y) {
    return Eigen::Vector2d{0.3 * std::cos(x) * std::cos(y), -0.3 * std::sin(x) * std::sin(y)};
  });
  const SpectrumApprox sm = lowest_eigenpairs(assemble(smooth, grid), 5, lopts);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(sm.pairs[i].value - ref.pairs[i].value) <=
          1e-3 * std::max(1.0, std::abs(ref.pairs[i].value)));
}

TEST_CASE("boundary mass and box suggestion") {
  Grid2D grid{4.0, 32};
  VectorC center = VectorC::Zero(grid.interior_count());
  center[grid.index(16, 16)] = 1.0;
  CHECK(boundary_mass(center, grid, 0.5) == 0.0);
  VectorC corner = VectorC::Zero(grid.interior_count());
  corner[grid.index(1, 1)] = 1.0;
  CHECK(boundary_mass(corner, grid, 0.5) == 1.0);

  // Quartic potential confines; the gaussian never does.
  CHECK(suggest_box_halfwidth(make_radial_power(1, 4), 10.0) <= 4.0);
  CHECK(suggest_box_halfwidth(make_gaussian(1), 10.0) == 16.0);

  const SparseHermitianOperator op = assemble(make_gaussian(1), Grid2D{4.0, 16}, FormDegree::Top, 5.0);
  CHECK(!op.meta.confinement_ok);
  CHECK(!op.meta.warnings.empty());
}
