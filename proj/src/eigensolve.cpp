#include "dbarn/eigensolve.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace dbarn {

bool is_hermitian(const SparseHermitianOperator& op, double tol) {
  if (op.mat.rows() != op.mat.cols()) return false;
  const Eigen::SparseMatrix<Complex> diff = Eigen::SparseMatrix<Complex>(op.mat.adjoint()) - op.mat;
  double worst = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, c); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst <= tol;
}

std::vector<double> SpectrumApprox::values() const {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.value);
  return v;
}

namespace {

SpectrumApprox finish_spectrum(const VectorR& values, const std::vector<double>& residuals,
                               const std::vector<bool>& conv, double kernel_tol) {
  SpectrumApprox s;
  s.kernel_tol = kernel_tol;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    EigenPair p;
    p.value = values[i];
    p.residual = residuals[i];
    p.converged = conv[i];
    s.pairs.push_back(p);
    if (p.value < kernel_tol) ++s.kernel_dim;
  }
  s.clusters = cluster_relative(std::vector<double>(values.data(), values.data() + values.size()));
  s.cutoff = values.size() ? values[values.size() - 1] : kInf;
  return s;
}

SpectrumApprox dense_lowest(const SparseHermitianOperator& op, int k, const LanczosOptions& opts,
                            MatrixC* vectors) {
  const MatrixC dense = MatrixC(op.mat);
  Eigen::SelfAdjointEigenSolver<MatrixC> es(dense);
  if (es.info() != Eigen::Success) throw std::runtime_error("lowest_eigenpairs: dense solve failed");
  const VectorR values = es.eigenvalues().head(k);
  std::vector<double> residuals(k);
  std::vector<bool> conv(k, true);
  for (int i = 0; i < k; ++i) {
    const VectorC v = es.eigenvectors().col(i);
    residuals[i] = (dense * v - values[i] * v).norm();
  }
  if (vectors) *vectors = es.eigenvectors().leftCols(k);
  SpectrumApprox s = finish_spectrum(values, residuals, conv, 1e-6);
  if (static_cast<Eigen::Index>(k) < op.dim()) s.cutoff = es.eigenvalues()[k - 1];
  (void)opts;
  return s;
}

}  // namespace

SpectrumApprox lowest_eigenpairs(const SparseHermitianOperator& op, int k,
                                 const LanczosOptions& opts, MatrixC* vectors) {
  const Eigen::Index dim = op.dim();
  if (k < 1 || k >= dim) throw std::invalid_argument("lowest_eigenpairs: need 1 <= k < dim");

  if (dim <= opts.dense_threshold) return dense_lowest(op, k, opts, vectors);

  const int m_max =
      opts.max_basis > 0
          ? std::min<Eigen::Index>(opts.max_basis, dim - 1)
          : std::min<Eigen::Index>(std::max(2 * k + 40, 120), dim - 1);
  if (m_max <= k + 2) throw std::invalid_argument("lowest_eigenpairs: basis too small for k");
  const int n_keep = std::min(k + std::max(10, k / 4), m_max - 10);

  MatrixC basis(dim, m_max + 1);
  MatrixR projected = MatrixR::Zero(m_max + 1, m_max + 1);

  // Deterministic start vector.
  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> gauss;
  VectorC v0(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v0[i] = Complex(gauss(rng), gauss(rng));
  basis.col(0) = v0 / v0.norm();

  const double norm_scale = [&] {
    // Gershgorin-style bound for breakdown thresholds.
    double m = 0.0;
    for (int c = 0; c < op.mat.outerSize(); ++c) {
      double row = 0.0;
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(op.mat, c); it; ++it)
        row += std::abs(it.value());
      m = std::max(m, row);
    }
    return m;
  }();

  int j0 = 0;       // filled basis columns carrying Ritz content
  int restarts = 0;
  VectorC w(dim), h(m_max + 1), h2(m_max + 1);
  bool converged_enough = false;
  VectorR ritz_values;
  MatrixR ritz_coeffs;
  std::vector<double> ritz_residual_est;

  while (true) {
    // Lanczos expansion with full reorthogonalization (CGS with a
    // conditional second pass).
    for (int j = j0; j < m_max; ++j) {
      w.noalias() = op.mat * basis.col(j);
      const double before = w.norm();
      h.head(j + 1).noalias() = basis.leftCols(j + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(j + 1) * h.head(j + 1);
      if (w.norm() < 0.7 * before) {
        h2.head(j + 1).noalias() = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * h2.head(j + 1);
        h.head(j + 1) += h2.head(j + 1);
      }
      for (int i = 0; i <= j; ++i) {
        projected(i, j) = h[i].real();
        projected(j, i) = h[i].real();
      }
      double beta = w.norm();
      if (beta <= 1e-13 * std::max(1.0, norm_scale)) {
        // Invariant subspace: continue with a fresh orthogonalized direction.
        for (Eigen::Index i = 0; i < dim; ++i) w[i] = Complex(gauss(rng), gauss(rng));
        h.head(j + 1).noalias() = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * h.head(j + 1);
        beta = w.norm();
        projected(j + 1, j) = 0.0;
        projected(j, j + 1) = 0.0;
      } else {
        projected(j + 1, j) = beta;
        projected(j, j + 1) = beta;
      }
      basis.col(j + 1) = w / beta;
    }

    // Rayleigh-Ritz on the projected matrix.
    Eigen::SelfAdjointEigenSolver<MatrixR> small(projected.topLeftCorner(m_max, m_max));
    ritz_values = small.eigenvalues();
    ritz_coeffs = small.eigenvectors();
    const double beta_m = projected(m_max, m_max - 1);

    ritz_residual_est.assign(m_max, 0.0);
    int converged = 0;
    for (int i = 0; i < m_max; ++i)
      ritz_residual_est[i] = std::abs(beta_m * ritz_coeffs(m_max - 1, i));
    for (int i = 0; i < k; ++i)
      if (ritz_residual_est[i] <= opts.tol * std::max(1.0, std::abs(ritz_values[i]))) ++converged;

    ++restarts;
    if (converged >= k || restarts >= opts.max_restarts) {
      converged_enough = converged >= k;
      break;
    }

    // Thick restart: keep the n_keep lowest Ritz vectors plus the residual
    // direction, then continue the recurrence from the restart column.
    MatrixC kept(dim, n_keep);
    kept.noalias() = basis.leftCols(m_max) * ritz_coeffs.leftCols(n_keep);
    basis.leftCols(n_keep) = kept;
    basis.col(n_keep) = basis.col(m_max);
    projected.setZero();
    for (int i = 0; i < n_keep; ++i) {
      projected(i, i) = ritz_values[i];
      projected(i, n_keep) = beta_m * ritz_coeffs(m_max - 1, i);
      projected(n_keep, i) = projected(i, n_keep);
    }
    j0 = n_keep;
  }

  // Assemble the k lowest Ritz pairs with explicit residuals.
  VectorR values(k);
  std::vector<double> residuals(k);
  std::vector<bool> conv(k);
  MatrixC x(dim, k);
  x.noalias() = basis.leftCols(m_max) * ritz_coeffs.leftCols(k);
  for (int i = 0; i < k; ++i) {
    values[i] = ritz_values[i];
    const VectorC xi = x.col(i);
    residuals[i] = (op.mat * xi - values[i] * xi).norm() / xi.norm();
    conv[i] = residuals[i] <= 10 * opts.tol * std::max(1.0, std::abs(values[i]));
  }
  if (vectors) *vectors = x;

  SpectrumApprox s = finish_spectrum(values, residuals, conv, 1e-6);
  s.cutoff = values[k - 1];
  if (!converged_enough)
    s.flags.push_back("partial convergence after " + std::to_string(restarts) + " restarts");
  return s;
}

std::vector<Cluster> cluster(const std::vector<double>& values, double tol) {
  std::vector<Cluster> out;
  double sum = 0.0;
  int count = 0;
  double last = 0.0;
  for (double v : values) {
    if (count > 0 && v - last > tol) {
      out.push_back({sum / count, count});
      sum = 0.0;
      count = 0;
    }
    sum += v;
    last = v;
    ++count;
  }
  if (count > 0) out.push_back({sum / count, count});
  return out;
}

std::vector<Cluster> cluster_relative(const std::vector<double>& values, double rel) {
  std::vector<Cluster> out;
  double sum = 0.0;
  int count = 0;
  double last = 0.0;
  for (double v : values) {
    if (count > 0 && v - last > rel * (1.0 + std::abs(v))) {
      out.push_back({sum / count, count});
      sum = 0.0;
      count = 0;
    }
    sum += v;
    last = v;
    ++count;
  }
  if (count > 0) out.push_back({sum / count, count});
  return out;
}

double spectral_gap(const SpectrumApprox& s) {
  for (const auto& c : s.clusters)
    if (c.value > s.kernel_tol) return c.value;
  return kInf;
}

void export_triplets(const SparseHermitianOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_triplets: cannot open " + path);
  out.precision(17);
  for (int c = 0; c < op.mat.outerSize(); ++c)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(op.mat, c); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value().real() << " " << it.value().imag()
          << "\n";
}

}  // namespace dbarn
