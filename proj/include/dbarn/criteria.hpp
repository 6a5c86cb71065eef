#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dbarn/core.hpp"
#include "dbarn/quadrature.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

enum class Classification { Diverges, Bounded, Inconclusive };

std::string to_string(Classification c);

enum class ShellStatMode { Infimum, Supremum, BallMin };

// Discretization of lim_{z -> infinity}: one statistic per radial shell.
struct ShellTrace {
  std::vector<double> radii;  // inner shell radii, strictly increasing
  std::vector<double> stats;
  ShellStatMode mode = ShellStatMode::Infimum;
};

struct CriterionThresholds {
  double t_div = 0.0;        // Diverges requires the last stat above this
  double t_bnd = 0.0;        // Bounded requires all stats at or below this
  int window = 4;            // trailing window length m
  double growth_cap = 1.05;  // max consecutive growth factor inside the window
  double eps0 = 1e-6;        // "bounded away from zero" floor
};

struct CriterionVerdict {
  std::string criterion;
  Classification classification = Classification::Inconclusive;
  bool condition_holds = false;  // the limit condition, per check semantics
  ShellTrace trace;
  CriterionThresholds thresholds;
  std::string note;  // verdicts are numerical evidence, not proof
};

// Geometric radii schedule R_k = 2^(k/2), k = k_min..k_max, with deterministic
// per-shell sample lattices.
struct ShellSchedule {
  int k_min = 2;
  int k_max = 20;
  int samples = 256;       // lattice size for pointwise stats
  int ball_centers = 16;   // centers per shell for ball-integral stats
  double ball_radius = 1.0;
  unsigned seed = 0;
  std::vector<double> radii() const;
};

// Deterministic points spanning the shell r_lo <= |z| <= r_hi; coordinate-axis
// directions always included so axis degeneracies are seen.
std::vector<VectorC> shell_points(int n, double r_lo, double r_hi, int count, unsigned seed = 0);

// Shell statistics of a scalar field. When `avoid` is given, sample points
// within 1e-3 of its singular loci are offset before evaluation. Aborts when
// more than 10% of the samples of a shell fail to evaluate.
ShellTrace shell_trace(const std::function<double(const VectorC&)>& field, int n,
                       const ShellSchedule& schedule, ShellStatMode mode,
                       const Weight* avoid = nullptr);

// Thresholds relative to the first shell: t_div = 1000 v0, t_bnd = 10 v0.
CriterionThresholds default_thresholds(const ShellTrace& trace);

// Diverges when the trailing window increases strictly and ends above t_div;
// Bounded when every stat is at or below t_bnd and the window shows no growth
// beyond the cap; Inconclusive otherwise.
Classification classify_limit(const ShellTrace& trace, const CriterionThresholds& thresholds);

// liminf s_q > 0 (boundedness of N_{0,q}, psh weights).
CriterionVerdict check_boundedness_sufficient(const Weight& w, int q, const ShellSchedule& = {});
// lim s_q = +infinity (compactness of N_{0,q}).
CriterionVerdict check_compactness_sufficient(const Weight& w, int q, const ShellSchedule& = {});
// limsup tr(M_phi) = +infinity (necessary once the Bergman space is infinite dimensional).
CriterionVerdict check_necessary_trace(const Weight& w, const ShellSchedule& = {});
// lim of int_{B(z,1)} tr(M_phi)^2 = +infinity (necessary for compact resolvent).
CriterionVerdict check_necessary_ball_sq(const Weight& w, const ShellSchedule& = {},
                                         const QuadratureRule& = {});
// lim of int_{B(z,1)} tr(M_phi) = +infinity (top-degree characterization input).
CriterionVerdict check_ball_linear(const Weight& w, const ShellSchedule& = {},
                                   const QuadratureRule& = {});
// lim |z|^2 s_1(z) = +infinity (sufficient for an infinite-dimensional Bergman space).
CriterionVerdict check_shigekawa(const Weight& w, const ShellSchedule& = {});

// Empirical doubling constant of the measure Delta(phi) d(lambda) on C.
struct DoublingResult {
  double d_hat = 0.0;          // max of mu(B_2r(z)) / mu(B_r(z)) over samples
  double d_hat_refined = 0.0;  // same on the doubled sample set
  bool nontrivial = false;     // mu(B_Rmax(0)) > 1e-12
  bool consistent = false;     // refined estimate within 5%
  bool subharmonic_ok = true;  // Delta(phi) >= 0 at sampled points
  int skipped_pairs = 0;       // zero-measure denominators
};

DoublingResult doubling_estimate(const Weight& phi_j, const std::vector<Complex>& centers,
                                 const std::vector<double>& radii, const QuadratureRule& = {});
DoublingResult doubling_estimate(const Weight& phi_j, const QuadratureRule& = {});

// (average of tr^r over the ball)^(1/r) divided by the average of tr; >= 1 by Jensen.
double reverse_holder_ratio(const Weight& w, double r_exp, const VectorC& center, double radius,
                            const QuadratureRule& = {});
double reverse_holder_ratio_field(const std::function<double(const VectorC&)>& field, double r_exp,
                                  const VectorC& center, double radius, const QuadratureRule& = {});

// Number of monomial degrees k <= k_max with finite weighted norm; a lower
// bound for the dimension of the weighted space of entire functions.
int bergman_dimension_evidence(const Weight& w, int k_max);

}  // namespace dbarn
