#pragma once

#include <functional>
#include <vector>

#include "dbarn/core.hpp"
#include "dbarn/weights.hpp"

namespace dbarn {

// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
struct GaussLegendre {
  VectorR nodes;
  VectorR weights;
};
GaussLegendre gauss_legendre(int order);

// Halton point (bases 2,3,5,...) for 1-based index; dim <= 16.
VectorR halton_point(long index, int dim);

struct QuadratureRule {
  enum class Scheme { Auto, PolarGauss, SpherePolar, Halton };
  Scheme scheme = Scheme::Auto;

  int radial_order = 64;    // Gauss-Legendre points per radial panel
  int angular_order = 128;  // trapezoid points per angle
  int halton_log2 = 15;     // quasi-random sample count = 2^halton_log2
  unsigned seed = 0;        // offsets the Halton index stream

  // Deterministic C^2-ball rule (n = 2 only): orders of the sphere factors.
  int sphere_psi_order = 24;
  int sphere_theta_order = 24;

  // Tensor rule per polydisk factor; kept modest since cost is (r*a)^n.
  int polydisk_radial_order = 24;
  int polydisk_angular_order = 48;

  // Radii at which the integrand is only piecewise smooth (e.g. cutoff knots);
  // radial panels are split there.
  std::vector<double> radial_knots;
};

// Integral of f over the disk B_radius(center) in C: Gauss-Legendre in the
// radius times trapezoid in the angle; spectral for smooth f.
double disk_integral(const std::function<double(Complex)>& f, Complex center, double radius,
                     const QuadratureRule& rule = {});

// Integral over the Euclidean ball B_radius(center) in C^n. n = 1 uses the
// disk rule; n >= 2 defaults to the seeded Halton scheme. Scheme::SpherePolar
// selects the deterministic polar rule (n = 2 only).
double ball_integral(const std::function<double(const VectorC&)>& f, const VectorC& center,
                     double radius, const QuadratureRule& rule = {});

// Integral over B_radius(c_1) x ... x B_radius(c_n), tensor product of disk rules.
double polydisk_integral(const std::function<double(const VectorC&)>& f, const VectorC& centers,
                         double radius, const QuadratureRule& rule = {});

// Visits the nodes (point, weight) of the deterministic ball rules (disk for
// n = 1, polar for n = 2), so several integrands can share one sweep.
void ball_nodes_foreach(const VectorC& center, double radius, const QuadratureRule& rule,
                        const std::function<void(const VectorC&, double)>& visit);

// ||z^k||^2 = prefactor * 2*pi * int_0^inf r^(2k+1+shift) exp(-E(r)) dr for a
// radial profile. Divergence is detected (at either end) and flagged, never
// silently truncated.
struct RadialMoment {
  double value = 0.0;
  bool divergent = false;
};
RadialMoment radial_moment(const BergmanProfile& profile, int k);

// Convenience: the moment of a plain radial one-variable weight.
RadialMoment radial_moment(const Weight& w, int k);

}  // namespace dbarn
