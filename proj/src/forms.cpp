#include "dbarn/forms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace dbarn {

std::vector<std::vector<int>> increasing_multiindices(int n, int q) {
  if (q < 0 || q > n) throw std::invalid_argument("increasing_multiindices: need 0 <= q <= n");
  std::vector<std::vector<int>> out;
  std::vector<int> J(q);
  std::function<void(int, int)> rec = [&](int start, int pos) {
    if (pos == q) {
      out.push_back(J);
      return;
    }
    for (int v = start; v < n; ++v) {
      J[pos] = v;
      rec(v + 1, pos + 1);
    }
  };
  rec(0, 0);
  return out;
}

int multiindex_rank(const std::vector<int>& J, int n) {
  const auto all = increasing_multiindices(n, static_cast<int>(J.size()));
  const auto it = std::find(all.begin(), all.end(), J);
  if (it == all.end()) throw std::invalid_argument("multiindex_rank: not an increasing multiindex");
  return static_cast<int>(it - all.begin());
}

IndexInsertion insert_index(int j, const std::vector<int>& K, int n) {
  int below = 0;
  for (int k : K) {
    if (k == j) return {0, -1};
    if (k < j) ++below;
  }
  std::vector<int> J = K;
  J.push_back(j);
  std::sort(J.begin(), J.end());
  return {below % 2 == 0 ? 1 : -1, multiindex_rank(J, n)};
}

namespace {

// Quintic smoothstep plateau: 1 on [0, r0], 0 beyond r1, C^2 across both knots.
struct Cutoff {
  double r0, r1;

  void eval(double r, double& psi, double& dpsi, double& d2psi) const {
    if (r <= r0) {
      psi = 1.0;
      dpsi = d2psi = 0.0;
      return;
    }
    if (r >= r1) {
      psi = dpsi = d2psi = 0.0;
      return;
    }
    const double s = r1 - r0, t = (r - r0) / s;
    psi = 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    dpsi = -30.0 * t * t * (1.0 - t) * (1.0 - t) / s;
    d2psi = -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (s * s);
  }
};

struct PolyEval {
  Complex value;
  VectorC dz, dzbar;
  MatrixC dz_dzbar, dzbar_dzbar;
};

// order 0: value only; 1: plus first derivatives; 2: plus second derivatives.
PolyEval eval_poly(int n, const std::vector<PolyTerm>& terms, const VectorC& z, int order = 2) {
  PolyEval out;
  out.value = 0.0;
  out.dz = VectorC::Zero(n);
  out.dzbar = VectorC::Zero(n);
  if (order >= 2) {
    out.dz_dzbar = MatrixC::Zero(n, n);
    out.dzbar_dzbar = MatrixC::Zero(n, n);
  }

  auto power = [](Complex base, int e) {
    Complex p = 1.0;
    for (int i = 0; i < e; ++i) p *= base;
    return p;
  };

  for (const auto& term : terms) {
    // Monomial with exponents dropped by (da_j, db_j); zero when any goes negative.
    auto mono = [&](const std::vector<int>& da, const std::vector<int>& db) -> Complex {
      Complex m = term.c;
      for (int j = 0; j < n; ++j) {
        const int a = term.z_pow[j] - da[j], b = term.zbar_pow[j] - db[j];
        if (a < 0 || b < 0) return 0.0;
        m *= power(z[j], a) * power(std::conj(z[j]), b);
      }
      return m;
    };
    std::vector<int> da(n, 0), db(n, 0);
    out.value += mono(da, db);
    if (order < 1) continue;
    for (int j = 0; j < n; ++j) {
      da[j] = 1;
      out.dz[j] += static_cast<double>(term.z_pow[j]) * mono(da, db);
      da[j] = 0;
      db[j] = 1;
      out.dzbar[j] += static_cast<double>(term.zbar_pow[j]) * mono(da, db);
      db[j] = 0;
    }
    if (order < 2) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        da[j] += 1;
        db[k] += 1;
        out.dz_dzbar(j, k) +=
            static_cast<double>(term.z_pow[j]) * static_cast<double>(term.zbar_pow[k]) * mono(da, db);
        da[j] -= 1;
        db[k] -= 1;

        db[j] += 1;
        db[k] += 1;
        const double factor =
            j == k ? static_cast<double>(term.zbar_pow[j]) * (term.zbar_pow[j] - 1)
                   : static_cast<double>(term.zbar_pow[j]) * static_cast<double>(term.zbar_pow[k]);
        out.dzbar_dzbar(j, k) += factor * mono(da, db);
        db[j] -= 1;
        db[k] -= 1;
      }
  }
  return out;
}

}  // namespace

ScalarField make_poly_bump(int n, std::vector<PolyTerm> terms, double plateau, double support) {
  if (!(plateau > 0) || !(support > plateau))
    throw std::invalid_argument("make_poly_bump: need 0 < plateau < support");
  for (auto& t : terms) {
    t.z_pow.resize(n, 0);
    t.zbar_pow.resize(n, 0);
  }
  const Cutoff cut{plateau, support};
  auto shared = std::make_shared<std::vector<PolyTerm>>(std::move(terms));

  // chi(z) = psi(|z|): dz_j chi = psi' zbar_j / (2r), and second derivatives
  // assembled from psi', psi''.
  struct CutoffEval {
    double chi;
    VectorC dz, dzbar;
    MatrixC dz_dzbar, dzbar_dzbar;
  };
  auto eval_cut = [cut, n](const VectorC& z) {
    CutoffEval c;
    const double r = z.norm();
    double psi, dpsi, d2psi;
    cut.eval(r, psi, dpsi, d2psi);
    c.chi = psi;
    c.dz = VectorC::Zero(n);
    c.dzbar = VectorC::Zero(n);
    c.dz_dzbar = MatrixC::Zero(n, n);
    c.dzbar_dzbar = MatrixC::Zero(n, n);
    if (dpsi == 0.0 && d2psi == 0.0) return c;  // plateau or outside support
    c.dz = dpsi * z.conjugate() / (2 * r);
    c.dzbar = dpsi * z / (2 * r);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Complex zj = z[j], zk = z[k];
        c.dz_dzbar(j, k) = d2psi * std::conj(zj) * zk / (4 * r * r) +
                           dpsi * ((j == k ? 1.0 : 0.0) / (2 * r) -
                                   std::conj(zj) * zk / (4 * r * r * r));
        c.dzbar_dzbar(j, k) =
            d2psi * zj * zk / (4 * r * r) - dpsi * zj * zk / (4 * r * r * r);
      }
    return c;
  };

  ScalarField f;
  f.value = [shared, eval_cut, n](const VectorC& z) {
    return eval_poly(n, *shared, z, 0).value * eval_cut(z).chi;
  };
  f.dz = [shared, eval_cut, n](const VectorC& z) {
    const PolyEval p = eval_poly(n, *shared, z, 1);
    const auto c = eval_cut(z);
    return (p.dz * c.chi + p.value * c.dz).eval();
  };
  f.dzbar = [shared, eval_cut, n](const VectorC& z) {
    const PolyEval p = eval_poly(n, *shared, z, 1);
    const auto c = eval_cut(z);
    return (p.dzbar * c.chi + p.value * c.dzbar).eval();
  };
  f.dz_dzbar = [shared, eval_cut, n](const VectorC& z) {
    const PolyEval p = eval_poly(n, *shared, z);
    const auto c = eval_cut(z);
    return (p.dz_dzbar * c.chi + p.dz * c.dzbar.transpose() + c.dz * p.dzbar.transpose() +
            p.value * c.dz_dzbar)
        .eval();
  };
  f.dzbar_dzbar = [shared, eval_cut, n](const VectorC& z) {
    const PolyEval p = eval_poly(n, *shared, z);
    const auto c = eval_cut(z);
    return (p.dzbar_dzbar * c.chi + p.dzbar * c.dzbar.transpose() + c.dzbar * p.dzbar.transpose() +
            p.value * c.dzbar_dzbar)
        .eval();
  };
  return f;
}

std::vector<double> TestForm::quadrature_knots() const {
  std::vector<double> knots;
  if (std::isfinite(plateau_radius)) knots.push_back(plateau_radius);
  if (std::isfinite(support_radius)) knots.push_back(support_radius);
  return knots;
}

TestForm make_test_form(int n, int q, std::vector<std::vector<PolyTerm>> coefficient_terms,
                        double plateau, double support) {
  const auto Js = increasing_multiindices(n, q);
  if (coefficient_terms.size() != Js.size())
    throw std::invalid_argument("make_test_form: expected one coefficient per increasing multiindex");
  TestForm u;
  u.n = n;
  u.degree = q;
  u.plateau_radius = plateau;
  u.support_radius = support;
  for (auto& terms : coefficient_terms)
    u.coeffs.push_back(make_poly_bump(n, std::move(terms), plateau, support));
  return u;
}

TestForm random_test_form(int n, int q, std::mt19937& rng, double plateau, double support,
                          int max_degree) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> nterms(1, 3);

  const auto Js = increasing_multiindices(n, q);
  std::vector<std::vector<PolyTerm>> all_terms;
  for (size_t r = 0; r < Js.size(); ++r) {
    std::vector<PolyTerm> terms;
    const int count = nterms(rng);
    for (int t = 0; t < count; ++t) {
      PolyTerm term;
      term.c = Complex(coef(rng), coef(rng));
      term.z_pow.assign(n, 0);
      term.zbar_pow.assign(n, 0);
      int budget = deg(rng);
      while (budget > 0) {
        std::uniform_int_distribution<int> pick(0, 2 * n - 1);
        const int slot = pick(rng);
        if (slot < n)
          term.z_pow[slot] += 1;
        else
          term.zbar_pow[slot - n] += 1;
        --budget;
      }
      terms.push_back(std::move(term));
    }
    all_terms.push_back(std::move(terms));
  }
  return make_test_form(n, q, std::move(all_terms), plateau, support);
}

namespace {

struct Contribution {
  int input;
  int j;
  double sign;
};

bool all_have_dzbar_dzbar(const TestForm& u) {
  for (const auto& c : u.coeffs)
    if (!c.dzbar_dzbar) return false;
  return true;
}

bool all_have_dz_dzbar(const TestForm& u) {
  for (const auto& c : u.coeffs)
    if (!c.dz_dzbar) return false;
  return true;
}

}  // namespace

TestForm dbar_apply(const TestForm& u) {
  if (u.degree >= u.n) throw std::invalid_argument("dbar_apply: form already has top degree");
  const int n = u.n;
  const auto Js = increasing_multiindices(n, u.degree);
  const auto outs = increasing_multiindices(n, u.degree + 1);

  std::vector<std::vector<Contribution>> plan(outs.size());
  for (size_t r = 0; r < Js.size(); ++r)
    for (int j = 0; j < n; ++j) {
      const IndexInsertion ins = insert_index(j, Js[r], n);
      if (ins.sign != 0) plan[ins.rank].push_back({static_cast<int>(r), j, double(ins.sign)});
    }

  auto in = std::make_shared<std::vector<ScalarField>>(u.coeffs);
  const bool carry_first = all_have_dzbar_dzbar(u);
  const bool carry_dz = all_have_dz_dzbar(u);

  TestForm out;
  out.n = n;
  out.degree = u.degree + 1;
  out.support_radius = u.support_radius;
  out.plateau_radius = u.plateau_radius;
  for (const auto& contribs : plan) {
    ScalarField f;
    f.value = [in, contribs](const VectorC& z) {
      Complex s = 0.0;
      for (const auto& c : contribs) s += c.sign * (*in)[c.input].dzbar(z)[c.j];
      return s;
    };
    if (carry_first)
      f.dzbar = [in, contribs, n](const VectorC& z) {
        VectorC s = VectorC::Zero(n);
        for (const auto& c : contribs) s += c.sign * (*in)[c.input].dzbar_dzbar(z).row(c.j).transpose();
        return s;
      };
    if (carry_dz)
      f.dz = [in, contribs, n](const VectorC& z) {
        VectorC s = VectorC::Zero(n);
        // d/dz_k of du/dzbar_j is entry (k, j) of dz_dzbar.
        for (const auto& c : contribs) s += c.sign * (*in)[c.input].dz_dzbar(z).col(c.j);
        return s;
      };
    out.coeffs.push_back(std::move(f));
  }
  return out;
}

TestForm dbar_adjoint_apply(const Weight& w, const TestForm& u) {
  if (u.degree < 1) throw std::invalid_argument("dbar_adjoint_apply: degree must be >= 1");
  if (w.dimension() != u.n) throw std::invalid_argument("dbar_adjoint_apply: dimension mismatch");
  const int n = u.n;
  const auto Ks = increasing_multiindices(n, u.degree - 1);

  std::vector<std::vector<Contribution>> plan(Ks.size());
  for (size_t r = 0; r < Ks.size(); ++r)
    for (int k = 0; k < n; ++k) {
      const IndexInsertion ins = insert_index(k, Ks[r], n);
      if (ins.sign != 0) plan[r].push_back({ins.rank, k, double(ins.sign)});
    }

  auto in = std::make_shared<std::vector<ScalarField>>(u.coeffs);
  auto weight = std::make_shared<Weight>(w);
  const bool carry_first = all_have_dz_dzbar(u);

  TestForm out;
  out.n = n;
  out.degree = u.degree - 1;
  out.support_radius = u.support_radius;
  out.plateau_radius = u.plateau_radius;
  for (const auto& contribs : plan) {
    ScalarField f;
    f.value = [in, weight, contribs](const VectorC& z) {
      const VectorC grad = weight->wirtinger_grad(z);
      Complex s = 0.0;
      for (const auto& c : contribs)
        s -= c.sign * ((*in)[c.input].dz(z)[c.j] - grad[c.j] * (*in)[c.input].value(z));
      return s;
    };
    if (carry_first)
      f.dzbar = [in, weight, contribs, n](const VectorC& z) {
        const VectorC grad = weight->wirtinger_grad(z);
        const MatrixC hess = weight->complex_hessian(z);
        VectorC s = VectorC::Zero(n);
        for (const auto& c : contribs) {
          const auto& field = (*in)[c.input];
          // d/dzbar_m of (du/dz_k) is entry (k, m); d/dzbar_m of phi_k is M(k, m).
          s -= c.sign * (field.dz_dzbar(z).row(c.j).transpose() -
                         hess.row(c.j).transpose() * field.value(z) - grad[c.j] * field.dzbar(z))
                            .eval();
        }
        return s;
      };
    out.coeffs.push_back(std::move(f));
  }
  return out;
}

QuadratureRule form_quadrature(const TestForm& u) {
  QuadratureRule rule;
  rule.radial_order = 32;
  rule.angular_order = 64;
  rule.sphere_psi_order = 20;
  rule.sphere_theta_order = 16;
  rule.radial_knots = u.quadrature_knots();
  return rule;
}

Complex weighted_inner(const Weight& w, const TestForm& u, const TestForm& v) {
  if (u.n != v.n || u.degree != v.degree)
    throw std::invalid_argument("weighted_inner: mismatched forms");
  const double radius = std::max(u.support_radius, v.support_radius);
  if (!std::isfinite(radius)) throw std::invalid_argument("weighted_inner: forms must be compactly supported");

  QuadratureRule rule = form_quadrature(u);
  for (double k : v.quadrature_knots()) rule.radial_knots.push_back(k);

  Complex acc = 0.0;
  ball_nodes_foreach(VectorC::Zero(u.n), radius, rule, [&](const VectorC& z, double wt) {
    const double e = std::exp(-w.value(z));
    Complex s = 0.0;
    for (size_t r = 0; r < u.coeffs.size(); ++r)
      s += u.coeffs[r].value(z) * std::conj(v.coeffs[r].value(z));
    acc += s * e * wt;
  });
  return acc;
}

double weighted_norm_sq(const Weight& w, const TestForm& u) {
  return weighted_inner(w, u, u).real();
}

KmhSides kmh_sides(const Weight& w, const TestForm& u) {
  const int n = u.n;
  if (u.degree < 1 || u.degree > n)
    throw std::invalid_argument("kmh_sides: need 1 <= degree <= n");
  if (!std::isfinite(u.support_radius))
    throw std::invalid_argument("kmh_sides: form must be compactly supported");

  const auto Js = increasing_multiindices(n, u.degree);
  const auto Ks = increasing_multiindices(n, u.degree - 1);
  const auto outs = u.degree < n ? increasing_multiindices(n, u.degree + 1)
                                 : std::vector<std::vector<int>>{};

  // dbar assembly plan
  std::vector<std::vector<Contribution>> dbar_plan(outs.size());
  if (u.degree < n)
    for (size_t r = 0; r < Js.size(); ++r)
      for (int j = 0; j < n; ++j) {
        const IndexInsertion ins = insert_index(j, Js[r], n);
        if (ins.sign != 0) dbar_plan[ins.rank].push_back({static_cast<int>(r), j, double(ins.sign)});
      }
  // u_{kK} extraction plan per K
  std::vector<std::vector<Contribution>> k_plan(Ks.size());
  for (size_t r = 0; r < Ks.size(); ++r)
    for (int k = 0; k < n; ++k) {
      const IndexInsertion ins = insert_index(k, Ks[r], n);
      if (ins.sign != 0) k_plan[r].push_back({ins.rank, k, double(ins.sign)});
    }

  KmhSides sides;
  const QuadratureRule rule = form_quadrature(u);
  std::vector<Complex> values(Js.size());
  std::vector<VectorC> dzs(Js.size()), dzbars(Js.size());

  ball_nodes_foreach(VectorC::Zero(n), u.support_radius, rule, [&](const VectorC& z, double wt) {
    for (size_t r = 0; r < Js.size(); ++r) {
      values[r] = u.coeffs[r].value(z);
      dzs[r] = u.coeffs[r].dz(z);
      dzbars[r] = u.coeffs[r].dzbar(z);
    }
    const VectorC grad = w.wirtinger_grad(z);
    const MatrixC hess = w.complex_hessian(z);
    const double e = std::exp(-w.value(z));

    double lhs_density = 0.0;
    for (const auto& contribs : dbar_plan) {
      Complex s = 0.0;
      for (const auto& c : contribs) s += c.sign * dzbars[c.input][c.j];
      lhs_density += std::norm(s);
    }
    for (const auto& contribs : k_plan) {
      Complex s = 0.0;
      for (const auto& c : contribs) s -= c.sign * (dzs[c.input][c.j] - grad[c.j] * values[c.input]);
      lhs_density += std::norm(s);
    }

    double rhs_density = 0.0;
    for (size_t r = 0; r < Js.size(); ++r) rhs_density += dzbars[r].squaredNorm();
    for (const auto& contribs : k_plan) {
      VectorC v = VectorC::Zero(n);
      for (const auto& c : contribs) v[c.j] = c.sign * values[c.input];
      Complex h = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) h += hess(j, k) * v[j] * std::conj(v[k]);
      rhs_density += h.real();
    }

    sides.lhs += lhs_density * e * wt;
    sides.rhs += rhs_density * e * wt;
  });
  return sides;
}

VectorC box_on_holomorphic(const Weight& w, const TestForm& g, const VectorC& z) {
  const int n = g.n;
  if (w.dimension() != n) throw std::invalid_argument("box_on_holomorphic: dimension mismatch");
  for (const auto& c : g.coeffs)
    if (c.dzbar(z).norm() > 1e-10)
      throw std::invalid_argument("box_on_holomorphic: coefficients are not holomorphic");

  const auto Js = increasing_multiindices(n, g.degree);
  VectorC out = VectorC::Zero(static_cast<Eigen::Index>(Js.size()));
  if (g.degree == 0) return out;  // multiplication action vanishes on functions

  const auto Ks = increasing_multiindices(n, g.degree - 1);
  const MatrixC hess = w.complex_hessian(z);
  std::vector<Complex> values(Js.size());
  for (size_t r = 0; r < Js.size(); ++r) values[r] = g.coeffs[r].value(z);

  for (const auto& K : Ks) {
    for (int j = 0; j < n; ++j) {
      const IndexInsertion out_ins = insert_index(j, K, n);
      if (out_ins.sign == 0) continue;
      Complex s = 0.0;
      for (int k = 0; k < n; ++k) {
        const IndexInsertion in_ins = insert_index(k, K, n);
        if (in_ins.sign == 0) continue;
        // (d^2 phi / dzbar_j dz_k) g_{kK} = M(k, j) g_{kK}
        s += hess(k, j) * double(in_ins.sign) * values[in_ins.rank];
      }
      out[out_ins.rank] += double(out_ins.sign) * s;
    }
  }
  return out;
}

Complex box_top_degree(const Weight& w, const ScalarField& g, const VectorC& z) {
  if (!g.dz_dzbar)
    throw std::invalid_argument("box_top_degree: coefficient needs mixed second derivatives");
  const Complex quarter_lap = g.dz_dzbar(z).trace();  // Laplacian(g)/4
  const Complex grad_term = w.wirtinger_grad(z).cwiseProduct(g.dzbar(z)).sum();
  const double trace_m = w.complex_hessian(z).trace().real();  // Laplacian(phi)/4
  return -quarter_lap + grad_term + trace_m * g.value(z);
}

}  // namespace dbarn
