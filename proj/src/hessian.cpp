#include "dbarn/hessian.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace dbarn {

bool is_hermitian(const MatrixC& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

VectorR eigvals_ascending(const MatrixC& a) {
  if (!is_hermitian(a)) throw std::invalid_argument("eigvals_ascending: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(symmetrize(a), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigvals_ascending: eigensolver failed");
  return es.eigenvalues();  // already ascending
}

double s_q(const Weight& w, const VectorC& z, int q) {
  if (q < 1 || q > w.dimension()) throw std::invalid_argument("s_q: q out of range");
  const VectorR ev = eigvals_ascending(w.complex_hessian(z));
  return ev.head(q).sum();
}

double trace_m(const Weight& w, const VectorC& z) { return w.complex_hessian(z).trace().real(); }

double hs_norm_sq(const Weight& w, const VectorC& z) { return w.complex_hessian(z).squaredNorm(); }

}  // namespace dbarn
