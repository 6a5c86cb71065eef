#include "dbarn/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace dbarn {

namespace {

// First-derivative step: balances O(h^2) truncation against roundoff.
double fd_step1(const VectorC& z) {
  static const double c = std::cbrt(std::numeric_limits<double>::epsilon());
  return c * (1.0 + z.norm());
}

// Second-derivative step: eps^(1/4) scale; cbrt(eps) would drown second
// differences in roundoff at the 1e-6 agreement level.
double fd_step2(const VectorC& z) {
  static const double c = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  return c * (1.0 + z.norm());
}

VectorC shifted(const VectorC& z, int real_axis, double h) {
  VectorC w = z;
  if (real_axis % 2 == 0)
    w[real_axis / 2] += h;
  else
    w[real_axis / 2] += Complex(0.0, h);
  return w;
}

}  // namespace

double Weight::value(const VectorC& z) const {
  if (z.size() != n_) throw std::invalid_argument("Weight::value: point dimension mismatch");
  const double v = value_(z);
  if (!std::isfinite(v)) throw std::domain_error("Weight::value: non-finite value (invalid weight definition)");
  return v;
}

void Weight::require_smooth_at(const VectorC& z) const {
  if (singular_distance(z) < 1e-12)
    throw std::domain_error("Weight: derivative requested on a singular locus of " + name_);
}

double Weight::singular_distance(const VectorC& z) const {
  double d = kInf;
  for (const auto& locus : singular_loci_) d = std::min(d, locus.distance(z));
  return d;
}

VectorC Weight::wirtinger_grad(const VectorC& z) const {
  require_smooth_at(z);
  if (grad_) return grad_(z);
  return wirtinger_grad_fd(z);
}

MatrixC Weight::complex_hessian(const VectorC& z) const {
  require_smooth_at(z);
  MatrixC m = hess_ ? hess_(z) : complex_hessian_fd(z);
  return ((m + m.adjoint()) / 2.0).eval();
}

VectorC Weight::wirtinger_grad_fd(const VectorC& z) const {
  const double h = fd_step1(z);
  VectorC g(n_);
  for (int j = 0; j < n_; ++j) {
    const double dx = (value(shifted(z, 2 * j, h)) - value(shifted(z, 2 * j, -h))) / (2 * h);
    const double dy = (value(shifted(z, 2 * j + 1, h)) - value(shifted(z, 2 * j + 1, -h))) / (2 * h);
    g[j] = 0.5 * Complex(dx, -dy);  // d/dz = (d/dx - i d/dy)/2
  }
  return g;
}

MatrixC Weight::complex_hessian_fd(const VectorC& z) const {
  const double h = fd_step2(z);
  const double f0 = value(z);
  const int dim = 2 * n_;

  auto second = [&](int a, int b) {
    if (a == b) {
      return (value(shifted(z, a, h)) - 2 * f0 + value(shifted(z, a, -h))) / (h * h);
    }
    if (a > b) std::swap(a, b);  // canonical order keeps mixed partials exactly symmetric
    const double fpp = value(shifted(shifted(z, a, h), b, h));
    const double fpm = value(shifted(shifted(z, a, h), b, -h));
    const double fmp = value(shifted(shifted(z, a, -h), b, h));
    const double fmm = value(shifted(shifted(z, a, -h), b, -h));
    return (fpp - fpm - fmp + fmm) / (4 * h * h);
  };

  MatrixR d2(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) d2(a, b) = d2(b, a) = second(a, b);

  // d^2/dz_j dzbar_k = [ (f_xjxk + f_yjyk) + i (f_xjyk - f_yjxk) ] / 4
  MatrixC m(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k)
      m(j, k) = 0.25 * Complex(d2(2 * j, 2 * k) + d2(2 * j + 1, 2 * k + 1),
                               d2(2 * j, 2 * k + 1) - d2(2 * j + 1, 2 * k));
  return m;
}

double real_laplacian_fd(const Weight& w, const VectorC& z, double step) {
  const double h = step > 0 ? step : 2e-4 * (1.0 + z.norm());
  const double f0 = w.value(z);
  double lap = 0.0;
  for (int a = 0; a < 2 * w.dimension(); ++a)
    lap += (w.value(shifted(z, a, h)) - 2 * f0 + w.value(shifted(z, a, -h))) / (h * h);
  return lap;
}

Weight DecoupledWeight::total() const {
  const int n = dimension();
  std::vector<Weight> comps = components;
  for (const auto& c : comps)
    if (c.dimension() != 1)
      throw std::invalid_argument("DecoupledWeight: components must be one-variable weights");

  auto value = [comps](const VectorC& z) {
    double s = 0.0;
    for (size_t j = 0; j < comps.size(); ++j) s += comps[j].value(point1(z[static_cast<Eigen::Index>(j)]));
    return s;
  };
  auto grad = [comps, n](const VectorC& z) {
    VectorC g(n);
    for (int j = 0; j < n; ++j) g[j] = comps[j].wirtinger_grad(point1(z[j]))[0];
    return g;
  };
  auto hess = [comps, n](const VectorC& z) {
    MatrixC m = MatrixC::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = comps[j].complex_hessian(point1(z[j]))(0, 0);
    return m;
  };

  Weight w(n, value, grad, hess);
  w.set_name("decoupled");
  for (int j = 0; j < n; ++j) {
    for (const auto& locus : comps[j].singular_loci()) {
      const auto dist = locus.distance;
      w.add_singular_locus({"component " + std::to_string(j + 1) + ": " + locus.description,
                            [dist, j](const VectorC& z) { return dist(point1(z[j])); }});
    }
  }
  return w;
}

Weight make_gaussian(int n) {
  if (n < 1) throw std::invalid_argument("gaussian: n must be positive");
  Weight w(
      n, [](const VectorC& z) { return z.squaredNorm(); },
      [](const VectorC& z) { return z.conjugate().eval(); },
      [n = n](const VectorC&) { return MatrixC::Identity(n, n).eval(); });
  w.set_name("gaussian").set_param("n", n);
  w.set_bergman_profile({[](double r) { return r * r; }, 0.0, std::pow(kPi, n - 1)});
  return w;
}

Weight make_radial_power(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("radial_power: n must be positive");
  if (alpha < 0) throw std::invalid_argument("radial_power: alpha must be >= 0");
  const double a = alpha;

  auto value = [a](const VectorC& z) { return std::pow(z.squaredNorm(), a / 2); };
  auto grad = [a](const VectorC& z) {
    const double t = z.squaredNorm();
    if (t == 0.0) return VectorC::Zero(z.size()).eval();  // only reached for smooth exponents
    return ((a / 2) * std::pow(t, a / 2 - 1) * z.conjugate()).eval();
  };
  auto hess = [a](const VectorC& z) {
    const double t = z.squaredNorm();
    MatrixC m = MatrixC::Zero(z.size(), z.size());
    if (t == 0.0) {
      if (a == 2.0) m.setIdentity();
      return m;
    }
    m = (a / 2) * (a / 2 - 1) * std::pow(t, a / 2 - 2) * (z.conjugate() * z.transpose());
    m += (a / 2) * std::pow(t, a / 2 - 1) * MatrixC::Identity(z.size(), z.size());
    return m;
  };

  Weight w(n, value, grad, hess);
  w.set_name("radial_power").set_param("n", n).set_param("alpha", alpha);
  if (alpha < 4.0 && alpha != 2.0 && alpha != 0.0)
    w.add_singular_locus({"origin (|z|^alpha with alpha < 4)", [](const VectorC& z) { return z.norm(); }});
  if (n == 1) w.set_bergman_profile({[a](double r) { return std::pow(r, a); }, 0.0, 1.0});
  return w;
}

Weight make_mixed_example() {
  auto value = [](const VectorC& z) {
    const double a1 = std::norm(z[0]), a2 = std::norm(z[1]);
    return a1 * a1 + a1 * a2;
  };
  auto grad = [](const VectorC& z) {
    VectorC g(2);
    const double a1 = std::norm(z[0]), a2 = std::norm(z[1]);
    g[0] = (2 * a1 + a2) * std::conj(z[0]);
    g[1] = a1 * std::conj(z[1]);
    return g;
  };
  auto hess = [](const VectorC& z) {
    MatrixC m(2, 2);
    const double a1 = std::norm(z[0]), a2 = std::norm(z[1]);
    m(0, 0) = 4 * a1 + a2;
    m(0, 1) = std::conj(z[0]) * z[1];
    m(1, 0) = z[0] * std::conj(z[1]);
    m(1, 1) = a1;
    return m;
  };
  Weight w(2, value, grad, hess);
  w.set_name("mixed_example");
  // Monomials in z1: the z2 fiber integrates to pi/|z1|^2.
  w.set_bergman_profile({[](double r) { return r * r * r * r; }, -2.0, kPi});
  return w;
}

Weight make_split_quartic(int n, int q) {
  if (n < 1 || q < 1 || q > n) throw std::invalid_argument("split_quartic: need 1 <= q <= n");
  const int split = q - 1;  // first block z_1..z_{q-1}, second z_q..z_n

  auto block_norms = [split](const VectorC& z) {
    const double t1 = z.head(split).squaredNorm();
    const double t2 = z.tail(z.size() - split).squaredNorm();
    return std::pair<double, double>(t1, t2);
  };
  auto value = [block_norms](const VectorC& z) {
    auto [t1, t2] = block_norms(z);
    return t1 * t1 + t2 * t2;
  };
  auto grad = [split](const VectorC& z) {
    VectorC g(z.size());
    const double t1 = z.head(split).squaredNorm();
    const double t2 = z.tail(z.size() - split).squaredNorm();
    g.head(split) = 2 * t1 * z.head(split).conjugate();
    g.tail(z.size() - split) = 2 * t2 * z.tail(z.size() - split).conjugate();
    return g;
  };
  auto hess = [split](const VectorC& z) {
    MatrixC m = MatrixC::Zero(z.size(), z.size());
    const auto fill = [&](Eigen::Index lo, Eigen::Index len) {
      if (len == 0) return;
      const VectorC b = z.segment(lo, len);
      m.block(lo, lo, len, len) =
          2 * (b.conjugate() * b.transpose()) + 2 * b.squaredNorm() * MatrixC::Identity(len, len);
    };
    fill(0, split);
    fill(split, z.size() - split);
    return m;
  };

  Weight w(n, value, grad, hess);
  w.set_name("split_quartic").set_param("n", n).set_param("q", q);
  if (n == 1) w.set_bergman_profile({[](double r) { return r * r * r * r; }, 0.0, 1.0});
  return w;
}

Weight make_harmonic_quadratic() {
  Weight w(
      1, [](const VectorC& z) { return (z[0] * z[0]).real(); },
      [](const VectorC& z) { return point1(z[0]); },
      [](const VectorC&) { return MatrixC::Zero(1, 1).eval(); });
  w.set_name("harmonic");
  return w;
}

DecoupledWeight make_decoupled_powers(const std::vector<double>& alphas) {
  if (alphas.empty()) throw std::invalid_argument("decoupled_powers: need at least one exponent");
  DecoupledWeight dw;
  for (double a : alphas) {
    Weight c = a == 2.0 ? make_gaussian(1) : make_radial_power(1, a);
    dw.components.push_back(std::move(c));
  }
  return dw;
}

Weight make_builtin(const std::string& name, const BuiltinParams& p) {
  if (name == "gaussian") return make_gaussian(p.n);
  if (name == "radial_power") {
    if (p.alpha.size() != 1) throw std::invalid_argument("radial_power: exactly one alpha required");
    return make_radial_power(p.n, p.alpha[0]);
  }
  if (name == "decoupled_powers") {
    auto dw = make_decoupled_powers(p.alpha);
    Weight w = dw.total();
    w.set_name("decoupled_powers");
    for (size_t j = 0; j < p.alpha.size(); ++j) w.set_param("alpha" + std::to_string(j + 1), p.alpha[j]);
    return w;
  }
  if (name == "mixed_example") return make_mixed_example();
  if (name == "split_quartic") return make_split_quartic(p.n, p.q);
  if (name == "harmonic") return make_harmonic_quadratic();
  throw std::invalid_argument("unknown builtin weight: " + name);
}

}  // namespace dbarn
