#pragma once

#include "dbarn/core.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

// True when ||A - A^*|| <= tol * max(1, ||A||).
bool is_hermitian(const MatrixC& a, double tol = 1e-12);

inline MatrixC symmetrize(const MatrixC& a) { return ((a + a.adjoint()) / 2.0).eval(); }

// Ascending real eigenvalues of a Hermitian matrix; rejects non-Hermitian input.
VectorR eigvals_ascending(const MatrixC& a);

// s_q(z): sum of the q smallest eigenvalues of M_phi(z), 1 <= q <= n.
double s_q(const Weight& w, const VectorC& z, int q);

// tr(M_phi(z)) = Delta(phi)(z) / 4.
double trace_m(const Weight& w, const VectorC& z);

// sum_{jk} |(M_phi)_{jk}|^2 = tr(M_phi^2) for Hermitian M.
double hs_norm_sq(const Weight& w, const VectorC& z);

}  // namespace dbarn
