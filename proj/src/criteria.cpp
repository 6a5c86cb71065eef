#include "dbarn/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dbarn/hessian.hpp"

namespace dbarn {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Diverges: return "Diverges";
    case Classification::Bounded: return "Bounded";
    default: return "Inconclusive";
  }
}

std::vector<double> ShellSchedule::radii() const {
  if (k_min >= k_max) throw std::invalid_argument("ShellSchedule: k_min must be < k_max");
  std::vector<double> r;
  for (int k = k_min; k <= k_max; ++k) r.push_back(std::pow(2.0, k / 2.0));
  return r;
}

namespace {

constexpr const char* kEvidenceNote =
    "numerical evidence, not proof; shell statistics over finitely many samples, "
    "thresholds are engineering choices";

VectorC direction_times(double rho, const VectorC& dir) { return (rho * dir).eval(); }

// Deterministic unit directions: coordinate axes first, then low-discrepancy
// fill via Box-Muller on Halton points.
std::vector<VectorC> unit_directions(int n, int count, unsigned seed) {
  std::vector<VectorC> dirs;
  for (int j = 0; j < n; ++j) {
    VectorC e = VectorC::Zero(n);
    e[j] = 1.0;
    dirs.push_back(e);
    if (n > 1) {
      e[j] = Complex(0, 1);
      dirs.push_back(e);
    }
  }
  long index = 1 + 1000L * seed;
  while (static_cast<int>(dirs.size()) < count) {
    const VectorR u = halton_point(index++, 2 * n);
    VectorR g(2 * n);
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt(-2.0 * std::log(std::max(u[2 * i], 1e-16)));
      g[2 * i] = r * std::cos(2 * kPi * u[2 * i + 1]);
      g[2 * i + 1] = r * std::sin(2 * kPi * u[2 * i + 1]);
    }
    if (g.norm() < 1e-8) continue;
    dirs.push_back(complex_from_real(g) / g.norm());
  }
  return dirs;
}

}  // namespace

std::vector<VectorC> shell_points(int n, double r_lo, double r_hi, int count, unsigned seed) {
  std::vector<VectorC> pts;
  const double r_mid = std::sqrt(r_lo * r_hi);

  if (n == 1) {
    const int m = std::max(8, count / 3);
    for (double rho : {r_lo, r_mid, r_hi})
      for (int i = 0; i < m; ++i) {
        const double t = 2 * kPi * i / m;
        pts.push_back(point1(rho * Complex(std::cos(t), std::sin(t))));
      }
    return pts;
  }

  if (n == 2) {
    // Axis directions (psi = 0, pi/2) are sampled explicitly: degeneracies of
    // the smallest Hessian eigenvalue live there.
    const int m = std::max(2, static_cast<int>(std::lround(std::sqrt(count / 4.0))));
    const std::vector<double> psis{0.0, kPi / 8, kPi / 4, 3 * kPi / 8, kPi / 2};
    for (double rho : {r_lo, r_mid})
      for (double psi : psis) {
        const bool on_z1_axis = psi == psis.front(), on_z2_axis = psi == psis.back();
        const double c = on_z2_axis ? 0.0 : std::cos(psi), s = on_z1_axis ? 0.0 : std::sin(psi);
        const int m1 = on_z2_axis ? 1 : m;
        const int m2 = on_z1_axis ? 1 : m;
        for (int i1 = 0; i1 < m1; ++i1)
          for (int i2 = 0; i2 < m2; ++i2) {
            const double t1 = 2 * kPi * i1 / m1, t2 = 2 * kPi * i2 / m2;
            pts.push_back(point2(rho * c * Complex(std::cos(t1), std::sin(t1)),
                                 rho * s * Complex(std::cos(t2), std::sin(t2))));
          }
      }
    return pts;
  }

  const auto dirs = unit_directions(n, std::max(count / 2, 2 * n), seed);
  for (double rho : {r_lo, r_mid})
    for (const auto& d : dirs) pts.push_back(direction_times(rho, d));
  return pts;
}

ShellTrace shell_trace(const std::function<double(const VectorC&)>& field, int n,
                       const ShellSchedule& schedule, ShellStatMode mode, const Weight* avoid) {
  const std::vector<double> radii = schedule.radii();
  const int count = mode == ShellStatMode::BallMin ? schedule.ball_centers : schedule.samples;
  const bool want_sup = mode == ShellStatMode::Supremum;

  ShellTrace trace;
  trace.mode = mode;
  for (size_t k = 0; k + 1 < radii.size(); ++k) {
    auto pts = shell_points(n, radii[k], radii[k + 1], count, schedule.seed);
    double stat = want_sup ? -kInf : kInf;
    int failures = 0;
    for (auto& z : pts) {
      if (avoid && avoid->singular_distance(z) < 1e-3) {
        VectorC off = VectorC::Constant(n, Complex(1, 1) / std::sqrt(2.0 * n));
        z += 1e-3 * off;
      }
      double v;
      try {
        v = field(z);
        if (!std::isfinite(v)) throw std::domain_error("non-finite field sample");
      } catch (const std::exception&) {
        ++failures;
        continue;
      }
      stat = want_sup ? std::max(stat, v) : std::min(stat, v);
    }
    if (failures * 10 > static_cast<int>(pts.size()))
      throw std::runtime_error("shell_trace: more than 10% of samples failed on shell at R = " +
                               std::to_string(radii[k]));
    trace.radii.push_back(radii[k]);
    trace.stats.push_back(stat);
  }
  return trace;
}

CriterionThresholds default_thresholds(const ShellTrace& trace) {
  CriterionThresholds t;
  const double v0 = trace.stats.empty() ? 0.0 : trace.stats.front();
  t.t_div = 1e3 * v0;
  t.t_bnd = 10.0 * v0;
  return t;
}

Classification classify_limit(const ShellTrace& trace, const CriterionThresholds& th) {
  const auto& s = trace.stats;
  const int m = th.window;
  if (static_cast<int>(s.size()) < m + 2)
    throw std::invalid_argument("classify_limit: need at least window + 2 shells");

  bool increasing = true;
  for (size_t i = s.size() - m; i + 1 < s.size(); ++i)
    if (!(s[i + 1] > s[i])) increasing = false;
  if (increasing && s.back() > th.t_div) return Classification::Diverges;

  const double slack = 1e-12 * (1.0 + std::abs(th.t_bnd));
  bool bounded = true;
  for (double v : s)
    if (v > th.t_bnd + slack) bounded = false;
  for (size_t i = s.size() - m; i + 1 < s.size(); ++i)
    if (s[i + 1] > th.growth_cap * s[i] + slack) bounded = false;
  if (bounded) return Classification::Bounded;

  return Classification::Inconclusive;
}

namespace {

CriterionVerdict finish_verdict(std::string name, ShellTrace trace, bool holds_on_diverge = true) {
  CriterionVerdict v;
  v.criterion = std::move(name);
  v.trace = std::move(trace);
  v.thresholds = default_thresholds(v.trace);
  v.classification = classify_limit(v.trace, v.thresholds);
  if (holds_on_diverge) v.condition_holds = v.classification == Classification::Diverges;
  v.note = kEvidenceNote;
  return v;
}

}  // namespace

CriterionVerdict check_boundedness_sufficient(const Weight& w, int q, const ShellSchedule& sched) {
  auto field = [&w, q](const VectorC& z) { return s_q(w, z, q); };
  CriterionVerdict v =
      finish_verdict("boundedness_sufficient[liminf s_" + std::to_string(q) + " > 0]",
                     shell_trace(field, w.dimension(), sched, ShellStatMode::Infimum, &w));
  v.condition_holds = true;
  for (double s : v.trace.stats)
    if (s < v.thresholds.eps0) v.condition_holds = false;
  return v;
}

CriterionVerdict check_compactness_sufficient(const Weight& w, int q, const ShellSchedule& sched) {
  auto field = [&w, q](const VectorC& z) { return s_q(w, z, q); };
  return finish_verdict("compactness_sufficient[lim s_" + std::to_string(q) + " = inf]",
                        shell_trace(field, w.dimension(), sched, ShellStatMode::Infimum, &w));
}

CriterionVerdict check_necessary_trace(const Weight& w, const ShellSchedule& sched) {
  auto field = [&w](const VectorC& z) { return trace_m(w, z); };
  return finish_verdict("necessary_trace[limsup tr(M) = inf]",
                        shell_trace(field, w.dimension(), sched, ShellStatMode::Supremum, &w));
}

CriterionVerdict check_necessary_ball_sq(const Weight& w, const ShellSchedule& sched,
                                         const QuadratureRule& rule) {
  auto field = [&](const VectorC& center) {
    return ball_integral([&w](const VectorC& z) { const double t = trace_m(w, z); return t * t; },
                         center, sched.ball_radius, rule);
  };
  return finish_verdict("necessary_ball_sq[lim int_B tr(M)^2 = inf]",
                        shell_trace(field, w.dimension(), sched, ShellStatMode::BallMin, &w));
}

CriterionVerdict check_ball_linear(const Weight& w, const ShellSchedule& sched,
                                   const QuadratureRule& rule) {
  auto field = [&](const VectorC& center) {
    return ball_integral([&w](const VectorC& z) { return trace_m(w, z); }, center,
                         sched.ball_radius, rule);
  };
  return finish_verdict("ball_linear[lim int_B tr(M) = inf]",
                        shell_trace(field, w.dimension(), sched, ShellStatMode::BallMin, &w));
}

CriterionVerdict check_shigekawa(const Weight& w, const ShellSchedule& sched) {
  auto field = [&w](const VectorC& z) { return z.squaredNorm() * s_q(w, z, 1); };
  return finish_verdict("shigekawa[lim |z|^2 s_1 = inf]",
                        shell_trace(field, w.dimension(), sched, ShellStatMode::Infimum, &w));
}

DoublingResult doubling_estimate(const Weight& phi, const std::vector<Complex>& centers,
                                 const std::vector<double>& radii, const QuadratureRule& rule) {
  if (phi.dimension() != 1)
    throw std::invalid_argument("doubling_estimate: one-variable weights only");

  auto density = [&phi](Complex z) { return 4.0 * phi.complex_hessian(point1(z))(0, 0).real(); };

  DoublingResult res;
  for (Complex c : centers)
    if (density(c) < -1e-10) res.subharmonic_ok = false;

  double r_max = 0.0;
  auto scan = [&](const std::vector<Complex>& cs, const std::vector<double>& rs) {
    double worst = 0.0;
    for (Complex c : cs)
      for (double r : rs) {
        r_max = std::max(r_max, 2 * r);
        const double small = disk_integral(density, c, r, rule);
        if (small <= 1e-14) {
          ++res.skipped_pairs;
          continue;
        }
        worst = std::max(worst, disk_integral(density, c, 2 * r, rule) / small);
      }
    return worst;
  };

  res.d_hat = scan(centers, radii);

  // Refinement pass: denser center ring and a wider radius ladder.
  std::vector<Complex> centers2 = centers;
  std::vector<double> radii2 = radii;
  for (double rr : {0.5, 1.5, 3.0})
    for (int i = 0; i < 16; ++i)
      centers2.push_back(rr * Complex(std::cos(2 * kPi * i / 16), std::sin(2 * kPi * i / 16)));
  for (double r : radii) radii2.push_back(r / 2);
  res.d_hat_refined = scan(centers2, radii2);

  res.nontrivial = disk_integral(density, 0.0, std::max(r_max, 1.0), rule) > 1e-12;
  res.consistent =
      res.d_hat > 0 && std::abs(res.d_hat_refined - res.d_hat) <= 0.05 * res.d_hat_refined;
  return res;
}

DoublingResult doubling_estimate(const Weight& phi, const QuadratureRule& rule) {
  std::vector<Complex> centers{0.0};
  for (double rr : {1.0, 2.0, 4.0})
    for (int i = 0; i < 8; ++i)
      centers.push_back(rr * Complex(std::cos(2 * kPi * i / 8), std::sin(2 * kPi * i / 8)));
  return doubling_estimate(phi, centers, {0.5, 1.0, 2.0}, rule);
}

double reverse_holder_ratio_field(const std::function<double(const VectorC&)>& field, double r_exp,
                                  const VectorC& center, double radius, const QuadratureRule& rule) {
  if (r_exp < 2.0) throw std::invalid_argument("reverse_holder_ratio: exponent must be >= 2");
  const double vol = ball_integral([](const VectorC&) { return 1.0; }, center, radius, rule);
  const double mean1 = ball_integral(field, center, radius, rule) / vol;
  const double meanr =
      ball_integral([&](const VectorC& z) { return std::pow(field(z), r_exp); }, center, radius,
                    rule) /
      vol;
  if (mean1 <= 0.0) return kInf;
  return std::pow(meanr, 1.0 / r_exp) / mean1;
}

double reverse_holder_ratio(const Weight& w, double r_exp, const VectorC& center, double radius,
                            const QuadratureRule& rule) {
  return reverse_holder_ratio_field([&w](const VectorC& z) { return trace_m(w, z); }, r_exp,
                                    center, radius, rule);
}

int bergman_dimension_evidence(const Weight& w, int k_max) {
  if (!w.bergman_profile())
    throw std::invalid_argument(
        "bergman_dimension_evidence: weight carries no radial monomial profile");
  int count = 0;
  for (int k = 0; k <= k_max; ++k)
    if (!radial_moment(w, k).divergent) ++count;
  return count;
}

}  // namespace dbarn
