#pragma once

#include <functional>
#include <random>
#include <vector>

#include "dbarn/core.hpp"
#include "dbarn/quadrature.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

// Increasing multiindices of length q over {0, ..., n-1}, lexicographic.
std::vector<std::vector<int>> increasing_multiindices(int n, int q);
int multiindex_rank(const std::vector<int>& J, int n);

// dzbar_j ^ dzbar_K = sign * dzbar_J with J = sorted(K + {j}); sign is
// (-1)^(number of elements of K below j). Returns {0, -1} when j is in K.
struct IndexInsertion {
  int sign;  // +1, -1, or 0
  int rank;  // rank of the sorted union; -1 when sign is 0
};
IndexInsertion insert_index(int j, const std::vector<int>& K, int n);

// A scalar coefficient with value and Wirtinger-derivative evaluators. Second
// derivatives are optional; operations state what they need.
struct ScalarField {
  std::function<Complex(const VectorC&)> value;
  std::function<VectorC(const VectorC&)> dz;               // (d/dz_j)
  std::function<VectorC(const VectorC&)> dzbar;            // (d/dzbar_j)
  std::function<MatrixC(const VectorC&)> dz_dzbar;         // d^2/dz_j dzbar_k
  std::function<MatrixC(const VectorC&)> dzbar_dzbar;      // d^2/dzbar_j dzbar_k
};

// A compactly supported (0,q)-form: one coefficient per increasing multiindex,
// vanishing (with derivatives) for |z| >= support_radius.
struct TestForm {
  int n = 1;
  int degree = 0;
  std::vector<ScalarField> coeffs;
  double support_radius = kInf;
  double plateau_radius = kInf;  // cutoff is identically 1 inside this radius

  // Knot radii where coefficients are only piecewise smooth.
  std::vector<double> quadrature_knots() const;
};

// Coefficient built as (polynomial in z, zbar) x quintic C^2 radial cutoff,
// with exact derivative formulas throughout.
struct PolyTerm {
  Complex c;
  std::vector<int> z_pow;     // exponents of z_1..z_n
  std::vector<int> zbar_pow;  // exponents of zbar_1..zbar_n
};
ScalarField make_poly_bump(int n, std::vector<PolyTerm> terms, double plateau, double support);

TestForm make_test_form(int n, int q, std::vector<std::vector<PolyTerm>> coefficient_terms,
                        double plateau, double support);

// A seeded random compactly supported form with low-degree polynomial coefficients.
TestForm random_test_form(int n, int q, std::mt19937& rng, double plateau = 1.4,
                          double support = 3.0, int max_degree = 2);

// dbar u: degree q -> q+1; coefficients keep first-derivative evaluators when
// the input carries second derivatives. Rejects q = n.
TestForm dbar_apply(const TestForm& u);

// Formal adjoint dbar^t_phi u = -sum (d/dz_k - dphi/dz_k) u_{kK} dzbar_K,
// degree q -> q-1. Rejects q = 0.
TestForm dbar_adjoint_apply(const Weight& w, const TestForm& u);

// Default quadrature for form norms: radial panels at the cutoff knots.
QuadratureRule form_quadrature(const TestForm& u);

// (u, v)_phi = sum_J int u_J conj(v_J) e^{-phi}.
Complex weighted_inner(const Weight& w, const TestForm& u, const TestForm& v);
double weighted_norm_sq(const Weight& w, const TestForm& u);

// Both sides of the weighted Kohn-Morrey-Hoermander identity for a compactly
// supported (0,q)-form, 1 <= q <= n, accumulated in a single quadrature sweep:
//   lhs = ||dbar u||^2 + ||dbar^t_phi u||^2,
//   rhs = sum_J sum_j ||d u_J / dzbar_j||^2 + Hessian term.
struct KmhSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
KmhSides kmh_sides(const Weight& w, const TestForm& u);

// Multiplication action of the complex Laplacian on forms with holomorphic
// coefficients: returns the output coefficient values at z (increasing order).
// Rejects coefficients with a visible dzbar component.
VectorC box_on_holomorphic(const Weight& w, const TestForm& g, const VectorC& z);

// Top-degree action on the coefficient g of g dzbar_1 ^ ... ^ dzbar_n:
//   -Laplacian(g)/4 + sum_j (dphi/dz_j)(dg/dzbar_j) + (Laplacian(phi)/4) g.
Complex box_top_degree(const Weight& w, const ScalarField& g, const VectorC& z);

}  // namespace dbarn
