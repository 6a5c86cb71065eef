#pragma once

#include <Eigen/SparseCore>

#include <string>
#include <vector>

#include "dbarn/core.hpp"

namespace dbarn {

// Sparse Hermitian operator with assembly metadata.
struct SparseHermitianOperator {
  Eigen::SparseMatrix<Complex> mat;

  struct Meta {
    double box_halfwidth = 0.0;
    int points_per_side = 0;
    double spacing = 0.0;
    std::string weight_name;
    std::string degree;
    bool confinement_ok = true;
    std::vector<std::string> warnings;
  } meta;

  Eigen::Index dim() const { return mat.rows(); }
};

// Structural check: value at (i,j) conjugate of (j,i), real diagonal.
bool is_hermitian(const SparseHermitianOperator& op, double tol = 0.0);

struct EigenPair {
  double value = 0.0;
  double residual = 0.0;       // ||Hx - value x|| / ||x||
  double boundary_mass = 0.0;  // filled by grid-aware callers
  bool converged = true;
};

struct Cluster {
  double value = 0.0;  // mean of the member eigenvalues
  int multiplicity = 0;
};

struct SpectrumApprox {
  std::vector<EigenPair> pairs;   // ascending
  std::vector<Cluster> clusters;  // clusters of the retained values
  int kernel_dim = 0;             // eigenvalues below kernel_tol
  double kernel_tol = 1e-6;
  double cutoff = kInf;  // spectrum certified complete below this value
  std::vector<std::string> flags;

  std::vector<double> values() const;
};

struct LanczosOptions {
  double tol = 1e-8;        // residual target (absolute)
  int max_basis = 0;        // 0: chosen from k
  int max_restarts = 80;
  int dense_threshold = 2000;  // dense eigensolver fallback below this dimension
  unsigned seed = 0;
  bool want_vectors = true;
};

// k lowest eigenpairs by thick-restart Lanczos with full (two-pass)
// reorthogonalization and a deterministic seeded start vector; dense solve
// for small operators. Vectors are written to *vectors (D x k) when requested.
// Non-convergence after max_restarts yields a partial result with flags.
SpectrumApprox lowest_eigenpairs(const SparseHermitianOperator& op, int k,
                                 const LanczosOptions& opts = {}, MatrixC* vectors = nullptr);

// Greedy merge of ascending values within an absolute tolerance; the cluster
// value is the member mean.
std::vector<Cluster> cluster(const std::vector<double>& values, double tol);
// Merge with the scale-aware tolerance rel * (1 + |value|).
std::vector<Cluster> cluster_relative(const std::vector<double>& values, double rel = 1e-3);

// Smallest cluster value above kernel_tol; +infinity when none was found.
double spectral_gap(const SpectrumApprox& s);

// Triplet-format text dump (row, col, re, im), one nonzero per line.
void export_triplets(const SparseHermitianOperator& op, const std::string& path);

}  // namespace dbarn
