#pragma once

#include <array>
#include <string>
#include <vector>

#include "dbarn/criteria.hpp"
#include "dbarn/eigensolve.hpp"
#include "dbarn/schrodinger.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

// A finite piece of a spectrum: clustered points below an explicit cutoff;
// nothing is claimed about the tail above it.
struct SpectrumList {
  std::vector<Cluster> points;  // ascending values with multiplicities
  double cutoff = kInf;
};

SpectrumList spectrum_list_from(const SpectrumApprox& s);

// All pairwise sums below min(cutoffs): multiplicities multiply, values merge
// within the relative tolerance.
SpectrumList minkowski_sum(const SpectrumList& a, const SpectrumList& b, double merge_rel = 1e-3);

// Numerically evidenced spectral data of one one-variable component.
struct ComponentEvidence {
  std::string name;
  SpectrumList deg0, deg1;  // spectra of the function / top-degree operators
  int kernel_dim_small = 0;
  int kernel_dim_large = 0;   // at box scale factor 1.5
  bool kernel_infinite = false;  // multiplicity grows with the box
  Classification ball_linear = Classification::Inconclusive;
  DoublingResult doubling;
  std::vector<std::string> flags;
};

struct ComponentSpectra {
  std::vector<ComponentEvidence> components;
};

// Union over 0/1 degree vectors summing to q of the component spectrum sums.
SpectrumList compose_spectrum(const ComponentSpectra& cs, int q, double merge_rel = 1e-3);

// Essential-spectrum composition. Component essential spectra enter by rule:
// {0} for degree 0 when the kernel evidence is "infinite"; empty for degree 1
// when the component ball-integral criterion diverges; unknown otherwise.
struct EssentialPoint {
  double value = 0.0;
  int component = 0;          // which j contributed its essential spectrum
  std::vector<int> degrees;   // the 0/1 vector
};
struct EssentialSpectrumEvidence {
  std::vector<EssentialPoint> points;        // certain entries only
  std::vector<std::string> unknown_terms;    // provenance of unknown factors
  double cutoff = kInf;
  bool nonempty_evidence() const { return !points.empty(); }
};
EssentialSpectrumEvidence compose_essential_spectrum(const ComponentSpectra& cs, int q);

// Kernel dimension via the Kuenneth sum of products; products with a zero
// factor vanish even against an infinite partner.
struct DimOrInfinite {
  bool infinite = false;
  long dim = 0;
};
DimOrInfinite kunneth_kernel_dim(const std::vector<std::array<DimOrInfinite, 2>>& component_dims,
                                 int q);
DimOrInfinite kunneth_kernel_dim(const ComponentSpectra& cs, int q);

// Grid solves behind ComponentSpectra; boxes are sized by the confinement
// rule where the potential allows it.
struct ComponentSolveOptions {
  double lambda_max = 6.0;
  int k = 60;
  double h_target = 0.125;
  double box_growth = 1.5;
  double l_min = 3.0;
  double l_max = 5.0;
  LanczosOptions solver;
};
ComponentSpectra component_spectra(const DecoupledWeight& dw,
                                   const ComponentSolveOptions& opts = {});

// Per-degree compactness verdicts for a decoupled weight.
enum class CompactnessVerdict { Compact, NotCompact, Withheld };
std::string to_string(CompactnessVerdict v);

struct DegreeVerdict {
  int q = 0;
  CompactnessVerdict verdict = CompactnessVerdict::Withheld;
  std::string basis;
};

struct HypothesisChecks {
  bool all_subharmonic = false;
  bool all_nontrivial = false;
  bool all_doubling_consistent = false;
  std::vector<DoublingResult> per_component;
  bool hold() const { return all_subharmonic && all_nontrivial && all_doubling_consistent; }
};

struct CompactnessReport {
  HypothesisChecks hypotheses;
  std::vector<DegreeVerdict> verdicts;  // q = 0..n; withheld when hypotheses fail
  CriterionVerdict ball_linear_total;   // trace-average criterion on the full weight
  std::vector<Classification> ball_linear_components;
  DimOrInfinite kernel_q0;
  std::string boundedness_note;
  std::vector<std::string> notes;
};

CompactnessReport compactness_report(const DecoupledWeight& dw, const ShellSchedule& = {},
                                     const QuadratureRule& = {});

// Max over centers of the relative defect in the polydisk trace-integral
// splitting identity.
double polydisk_identity_residual(const DecoupledWeight& dw,
                                  const std::vector<VectorC>& centers = {},
                                  const QuadratureRule& = {});

}  // namespace dbarn
