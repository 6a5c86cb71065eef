#include "dbarn/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbarn {

namespace {

// Radial panels for [0, radius], split at the declared knots.
std::vector<std::pair<double, double>> radial_panels(double radius, const std::vector<double>& knots) {
  std::vector<double> cuts{0.0};
  for (double k : knots)
    if (k > 1e-14 && k < radius - 1e-14) cuts.push_back(k);
  cuts.push_back(radius);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> panels;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > 1e-14) panels.emplace_back(cuts[i], cuts[i + 1]);
  return panels;
}

struct Node1D {
  double x, w;
};

std::vector<Node1D> panel_nodes(double radius, const QuadratureRule& rule, int order) {
  const GaussLegendre gl = gauss_legendre(order);
  std::vector<Node1D> nodes;
  for (auto [a, b] : radial_panels(radius, rule.radial_knots)) {
    const double mid = (a + b) / 2, half = (b - a) / 2;
    for (int i = 0; i < order; ++i) nodes.push_back({mid + half * gl.nodes[i], half * gl.weights[i]});
  }
  return nodes;
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(where) + ": non-finite integrand sample");
}

double ball_volume(int n, double radius) {
  // Unit ball in R^{2n} has volume pi^n / n!.
  double v = 1.0;
  for (int j = 1; j <= n; ++j) v *= kPi / j;
  return v * std::pow(radius, 2 * n);
}

double halton_ball(const std::function<double(const VectorC&)>& f, const VectorC& center,
                   double radius, const QuadratureRule& rule) {
  const int n = static_cast<int>(center.size());
  const long count = 1L << rule.halton_log2;
  const long start = 1 + static_cast<long>(rule.seed) * count;
  const int dim = 2 * n + 1;  // n+1 exponential coordinates + n angles

  double sum = 0.0;
  VectorC z(n);
  for (long i = 0; i < count; ++i) {
    const VectorR u = halton_point(start + i, dim);
    // Dirichlet(1,..,1) map: (|z_j|^2) uniform on the simplex of size radius^2.
    double total = 0.0;
    VectorR e(n + 1);
    for (int j = 0; j <= n; ++j) {
      e[j] = -std::log1p(-std::min(u[j], 1.0 - 1e-16));
      total += e[j];
    }
    for (int j = 0; j < n; ++j) {
      const double rho = radius * std::sqrt(e[j] / total);
      const double theta = 2 * kPi * u[n + 1 + j];
      z[j] = center[j] + Complex(rho * std::cos(theta), rho * std::sin(theta));
    }
    const double v = f(z);
    check_finite(v, "ball_integral");
    sum += v;
  }
  return ball_volume(n, radius) * sum / static_cast<double>(count);
}

// Deterministic rule for C^2 balls: z = c + rho*(cos(psi) e^{i t1}, sin(psi) e^{i t2}),
// dV = rho^3 sin(psi) cos(psi) drho dpsi dt1 dt2. The radius rho is the only
// direction with limited smoothness (cutoff knots), so panels live there.
void sphere_polar_nodes2(const VectorC& center, double radius, const QuadratureRule& rule,
                         const std::function<void(const VectorC&, double)>& visit) {
  const auto rho_nodes = panel_nodes(radius, rule, rule.radial_order);
  const GaussLegendre psi = gauss_legendre(rule.sphere_psi_order);
  const int mt = rule.sphere_theta_order;
  const double wt = 2 * kPi / mt;

  std::vector<double> ct(mt), st(mt);
  for (int i = 0; i < mt; ++i) {
    ct[i] = std::cos(2 * kPi * i / mt);
    st[i] = std::sin(2 * kPi * i / mt);
  }

  VectorC z(2);
  for (const auto& rn : rho_nodes) {
    const double rho3 = rn.x * rn.x * rn.x;
    for (int ip = 0; ip < psi.nodes.size(); ++ip) {
      const double p = kPi / 4 * (psi.nodes[ip] + 1.0);  // [0, pi/2]
      const double wp = kPi / 4 * psi.weights[ip] * std::sin(p) * std::cos(p);
      const double r1 = rn.x * std::cos(p), r2 = rn.x * std::sin(p);
      for (int i1 = 0; i1 < mt; ++i1) {
        z[0] = center[0] + Complex(r1 * ct[i1], r1 * st[i1]);
        for (int i2 = 0; i2 < mt; ++i2) {
          z[1] = center[1] + Complex(r2 * ct[i2], r2 * st[i2]);
          visit(z, rho3 * rn.w * wp * wt * wt);
        }
      }
    }
  }
}

}  // namespace

void ball_nodes_foreach(const VectorC& center, double radius, const QuadratureRule& rule,
                        const std::function<void(const VectorC&, double)>& visit) {
  const int n = static_cast<int>(center.size());
  if (n == 1) {
    const auto rho_nodes = panel_nodes(radius, rule, rule.radial_order);
    const int ma = rule.angular_order;
    const double wa = 2 * kPi / ma;
    for (int i = 0; i < ma; ++i) {
      const double theta = 2 * kPi * i / ma;
      const Complex dir(std::cos(theta), std::sin(theta));
      for (const auto& rn : rho_nodes) visit(point1(center[0] + rn.x * dir), rn.x * rn.w * wa);
    }
    return;
  }
  if (n == 2) {
    sphere_polar_nodes2(center, radius, rule, visit);
    return;
  }
  throw std::invalid_argument("ball_nodes_foreach: deterministic rules cover n <= 2 only");
}

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  MatrixR jacobi = MatrixR::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<MatrixR> es(jacobi);
  GaussLegendre gl;
  gl.nodes = es.eigenvalues();
  gl.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return gl;
}

VectorR halton_point(long index, int dim) {
  static const int primes[16] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (dim < 1 || dim > 16) throw std::invalid_argument("halton_point: dim must be in 1..16");
  VectorR u(dim);
  for (int d = 0; d < dim; ++d) {
    const int base = primes[d];
    double q = 0.0, scale = 1.0 / base;
    for (long i = index; i > 0; i /= base) {
      q += (i % base) * scale;
      scale /= base;
    }
    u[d] = q;
  }
  return u;
}

double disk_integral(const std::function<double(Complex)>& f, Complex center, double radius,
                     const QuadratureRule& rule) {
  if (radius <= 0) throw std::invalid_argument("disk_integral: radius must be positive");
  const auto rho_nodes = panel_nodes(radius, rule, rule.radial_order);
  const int ma = rule.angular_order;
  const double wa = 2 * kPi / ma;

  double sum = 0.0;
  for (int i = 0; i < ma; ++i) {
    const double theta = 2 * kPi * i / ma;
    const Complex dir(std::cos(theta), std::sin(theta));
    for (const auto& rn : rho_nodes) {
      const double v = f(center + rn.x * dir);
      check_finite(v, "disk_integral");
      sum += v * rn.x * rn.w * wa;
    }
  }
  return sum;
}

double ball_integral(const std::function<double(const VectorC&)>& f, const VectorC& center,
                     double radius, const QuadratureRule& rule) {
  const int n = static_cast<int>(center.size());
  if (n == 1) {
    return disk_integral([&](Complex z) { return f(point1(z)); }, center[0], radius, rule);
  }
  if (rule.scheme == QuadratureRule::Scheme::SpherePolar) {
    if (n != 2) throw std::invalid_argument("ball_integral: SpherePolar scheme is for n = 2");
    double sum = 0.0;
    sphere_polar_nodes2(center, radius, rule, [&](const VectorC& z, double w) {
      const double v = f(z);
      check_finite(v, "ball_integral");
      sum += v * w;
    });
    return sum;
  }
  return halton_ball(f, center, radius, rule);
}

double polydisk_integral(const std::function<double(const VectorC&)>& f, const VectorC& centers,
                         double radius, const QuadratureRule& rule) {
  const int n = static_cast<int>(centers.size());
  const auto rho_nodes = panel_nodes(radius, rule, rule.polydisk_radial_order);
  const int ma = rule.polydisk_angular_order;
  const double wa = 2 * kPi / ma;

  const long per_factor = static_cast<long>(rho_nodes.size()) * ma;
  VectorC z(n);
  double sum = 0.0;

  std::function<void(int, double)> recurse = [&](int j, double wacc) {
    if (j == n) {
      const double v = f(z);
      check_finite(v, "polydisk_integral");
      sum += v * wacc;
      return;
    }
    for (long t = 0; t < per_factor; ++t) {
      const auto& rn = rho_nodes[t % rho_nodes.size()];
      const double theta = 2 * kPi * static_cast<double>(t / rho_nodes.size()) / ma;
      z[j] = centers[j] + rn.x * Complex(std::cos(theta), std::sin(theta));
      recurse(j + 1, wacc * rn.x * rn.w * wa);
    }
  };
  recurse(0, 1.0);
  return sum;
}

RadialMoment radial_moment(const BergmanProfile& profile, int k) {
  if (k < 0) throw std::invalid_argument("radial_moment: k must be >= 0");
  const double p = 2.0 * k + 1.0 + profile.power_shift;
  if (p <= -1.0 + 1e-12) return {kInf, true};  // r^p not integrable at 0

  auto log_g = [&](double r) { return p * std::log(r) - profile.radial_exponent(r); };

  // Geometric scan for the peak and the negligible-tail radius.
  const double r_lo = 1e-6, r_hi = 256.0, factor = 1.05;
  double peak_r = r_lo, peak_lg = -kInf;
  std::vector<double> rs, lgs;
  for (double r = r_lo; r <= r_hi; r *= factor) {
    const double lg = log_g(r);
    rs.push_back(r);
    lgs.push_back(lg);
    if (lg > peak_lg) {
      peak_lg = lg;
      peak_r = r;
    }
  }
  if (!std::isfinite(peak_lg)) return {kInf, true};

  double r_cut = 0.0;
  for (size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] > peak_r && lgs[i] < peak_lg + std::log(1e-18)) {
      r_cut = rs[i];
      break;
    }
  }
  if (r_cut == 0.0) {
    // No negligible tail found; declare divergence if the integrand has
    // stopped decreasing at the last nodes.
    if (lgs[lgs.size() - 1] >= lgs[lgs.size() - 2] - 1e-14) return {kInf, true};
    r_cut = r_hi;
  }

  // Composite Gauss-Legendre on [0, r_cut], panels refined around the peak.
  const GaussLegendre gl = gauss_legendre(64);
  std::vector<double> cuts{0.0, peak_r / 2, peak_r, std::min(2 * peak_r, r_cut), r_cut};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());

  double integral = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = (cuts[i] + cuts[i + 1]) / 2, half = (cuts[i + 1] - cuts[i]) / 2;
    if (half <= 0) continue;
    for (int j = 0; j < gl.nodes.size(); ++j) {
      const double r = mid + half * gl.nodes[j];
      if (r <= 0) continue;
      integral += half * gl.weights[j] * std::exp(log_g(r));
    }
  }
  return {profile.prefactor * 2 * kPi * integral, false};
}

RadialMoment radial_moment(const Weight& w, int k) {
  if (!w.bergman_profile())
    throw std::invalid_argument("radial_moment: weight has no radial Bergman profile");
  return radial_moment(*w.bergman_profile(), k);
}

}  // namespace dbarn
