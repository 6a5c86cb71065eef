#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dbarn/core.hpp"

namespace dbarn {

// A set where the weight fails to be C^2 (e.g. a coordinate axis), with the
// Euclidean distance to it so samplers can steer clear.
struct SingularLocus {
  std::string description;
  std::function<double(const VectorC&)> distance;
};

// Radial profile behind the monomial norms ||z_1^k||^2 of a weight:
//   ||z_1^k||^2 = prefactor * 2*pi * \int_0^inf r^(2k+1+power_shift) exp(-radial_exponent(r)) dr.
// Plain one-variable radial weights have shift 0 and prefactor 1; weights whose
// fibers integrate out to an extra radial factor carry it in (prefactor, power_shift).
struct BergmanProfile {
  std::function<double(double)> radial_exponent;
  double power_shift = 0.0;
  double prefactor = 1.0;
};

// A C^2 weight on C^n, represented behaviorally: a value evaluator plus
// optional exact Wirtinger gradient / complex Hessian evaluators. Missing
// derivatives fall back to central finite differences.
class Weight {
 public:
  using ValueFn = std::function<double(const VectorC&)>;
  using GradFn = std::function<VectorC(const VectorC&)>;
  using HessFn = std::function<MatrixC(const VectorC&)>;

  Weight(int n, ValueFn value) : n_(n), value_(std::move(value)) {}
  Weight(int n, ValueFn value, GradFn grad, HessFn hess)
      : n_(n), value_(std::move(value)), grad_(std::move(grad)), hess_(std::move(hess)) {}

  int dimension() const { return n_; }

  // phi(z); throws std::domain_error on a non-finite result.
  double value(const VectorC& z) const;

  // (d phi / d z_1, ..., d phi / d z_n); exact evaluator when present,
  // otherwise central finite differences. Throws on singular loci.
  VectorC wirtinger_grad(const VectorC& z) const;

  // M_phi(z) = (d^2 phi / d z_j d zbar_k), symmetrized to exact Hermitian.
  MatrixC complex_hessian(const VectorC& z) const;

  bool has_exact_grad() const { return static_cast<bool>(grad_); }
  bool has_exact_hessian() const { return static_cast<bool>(hess_); }

  // Finite-difference paths, available regardless of exact evaluators.
  VectorC wirtinger_grad_fd(const VectorC& z) const;
  MatrixC complex_hessian_fd(const VectorC& z) const;

  bool smooth_everywhere() const { return singular_loci_.empty(); }
  const std::vector<SingularLocus>& singular_loci() const { return singular_loci_; }
  double singular_distance(const VectorC& z) const;

  const std::optional<BergmanProfile>& bergman_profile() const { return bergman_profile_; }

  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }

  Weight& set_name(std::string name) {
    name_ = std::move(name);
    return *this;
  }
  Weight& set_param(const std::string& key, double v) {
    params_[key] = v;
    return *this;
  }
  Weight& add_singular_locus(SingularLocus locus) {
    singular_loci_.push_back(std::move(locus));
    return *this;
  }
  Weight& set_bergman_profile(BergmanProfile profile) {
    bergman_profile_ = std::move(profile);
    return *this;
  }

 private:
  void require_smooth_at(const VectorC& z) const;

  int n_;
  ValueFn value_;
  GradFn grad_;
  HessFn hess_;
  std::vector<SingularLocus> singular_loci_;
  std::optional<BergmanProfile> bergman_profile_;
  std::string name_ = "custom";
  std::map<std::string, double> params_;
};

// phi(z) = phi_1(z_1) + ... + phi_n(z_n) with one-variable components.
struct DecoupledWeight {
  std::vector<Weight> components;

  int dimension() const { return static_cast<int>(components.size()); }
  // The derived total weight: diagonal Hessian, exact component sums.
  Weight total() const;
};

// Built-in weights, addressable by name from the CLI config.
struct BuiltinParams {
  int n = 1;
  std::vector<double> alpha;  // exponents for radial_power / decoupled_powers
  int q = 0;                  // split position for split_quartic
};

Weight make_gaussian(int n);
Weight make_radial_power(int n, double alpha);
Weight make_mixed_example();                  // |z1|^4 + |z1 z2|^2 on C^2
Weight make_split_quartic(int n, int q);      // |(z_1..z_{q-1})|^4 + |(z_q..z_n)|^4
Weight make_harmonic_quadratic();             // Re z^2 on C (Laplacian 0)
DecoupledWeight make_decoupled_powers(const std::vector<double>& alphas);

// Factory by name: gaussian | radial_power | decoupled_powers | mixed_example
// | split_quartic | harmonic. Throws std::invalid_argument on unknown names or
// invalid parameters.
Weight make_builtin(const std::string& name, const BuiltinParams& params);

// Real 2n-dimensional Laplacian by a 5-point (per axis pair) second difference,
// used as an independent check of 4*tr(M_phi).
double real_laplacian_fd(const Weight& w, const VectorC& z, double step = 0.0);

}  // namespace dbarn
