#pragma once

#include <functional>
#include <string>

#include "dbarn/core.hpp"
#include "dbarn/eigensolve.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

// Uniform grid on [-L, L]^2 with Dirichlet boundary; unknowns live on the
// (N-1)^2 interior sites x = -L + i h, h = 2L/N.
struct Grid2D {
  double box_halfwidth = 8.0;  // L
  int points_per_side = 128;   // N

  double spacing() const { return 2.0 * box_halfwidth / points_per_side; }
  int interior_side() const { return points_per_side - 1; }
  Eigen::Index interior_count() const {
    return static_cast<Eigen::Index>(interior_side()) * interior_side();
  }
  double site(int i) const { return -box_halfwidth + i * spacing(); }
  Eigen::Index index(int ix, int iy) const {
    return static_cast<Eigen::Index>(iy - 1) * interior_side() + (ix - 1);
  }
};

// Pauli sign of the zero-order term: Top is the operator on (0,n)-forms,
// 1/4 (-Lap_A + V); Zero is the companion on functions, 1/4 (-Lap_A - V),
// whose kernel realizes the weighted entire functions.
enum class FormDegree { Zero, Top };
std::string to_string(FormDegree d);

struct MagneticData {
  std::function<Eigen::Vector2d(double, double)> vector_potential;
  std::function<double(double, double)> electric_potential;
  FormDegree degree = FormDegree::Top;
  std::string weight_name = "custom";
};

// A = (-phi_y, phi_x) / 2, from the Wirtinger gradient.
Eigen::Vector2d vector_potential(const Weight& w, double x, double y);

// V = 2 tr(M_phi) = Laplacian(phi) / 2.
double electric_potential(const Weight& w, Complex z);

MagneticData magnetic_data(const Weight& w, FormDegree degree);

// Gauge transform A -> A + grad(chi); assembled spectra agree with the
// original up to discretization error.
MagneticData gauge_shift(const MagneticData& data, std::function<Eigen::Vector2d(double, double)> grad_chi);

// Five-point stencil with Peierls link phases exp(-i h A . d) at bond
// midpoints; Hermitian by construction. When lambda_max > 0 the confinement
// check min_boundary V >= 4 lambda_max is recorded (a warning, not an error).
SparseHermitianOperator assemble(const MagneticData& data, const Grid2D& grid,
                                 double lambda_max = 0.0);
SparseHermitianOperator assemble(const Weight& w, const Grid2D& grid, FormDegree degree,
                                 double lambda_max = 0.0);

// Central-difference application of the conjugated complex Laplacian in its
// first-order complex form; cross-checks assemble to O(h^2) in the interior.
VectorC apply_conjugated_box(const Weight& w, const VectorC& f, const Grid2D& grid);

// Fraction of |psi|^2 within `margin` of the box boundary.
double boundary_mass(const VectorC& psi, const Grid2D& grid, double margin);

// Smallest half-width L in [l_min, l_max] with min V on the boundary >= 4 lambda_max;
// returns l_max when the weight never confines (e.g. bounded potentials).
double suggest_box_halfwidth(const Weight& w, double lambda_max, double l_min = 3.0,
                             double l_max = 16.0);

struct SpectrumOptions {
  int k = 40;
  LanczosOptions solver;
  double kernel_tol = 1e-6;
  double cluster_rel_tol = 1e-3;
  // Eigenvectors with at least this mass within edge_margin_frac * 2L of the
  // boundary are tagged as truncation artifacts and excluded from clusters.
  double edge_margin_frac = 0.10;
  double edge_mass_threshold = 0.05;
  double lambda_max = 0.0;
};

// Assemble + solve + tag boundary-localized states; clusters are built over
// the bulk (non-edge) eigenvalues, the full list stays in pairs.
SpectrumApprox solve_spectrum(const Weight& w, const Grid2D& grid, FormDegree degree,
                              const SpectrumOptions& opts = {});

}  // namespace dbarn
