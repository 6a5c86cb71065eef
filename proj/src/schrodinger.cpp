#include "dbarn/schrodinger.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dbarn/hessian.hpp"

namespace dbarn {

std::string to_string(FormDegree d) { return d == FormDegree::Top ? "top" : "zero"; }

Eigen::Vector2d vector_potential(const Weight& w, double x, double y) {
  const Complex phi_z = w.wirtinger_grad(point1(Complex(x, y)))[0];
  // phi_z = (phi_x - i phi_y) / 2, so A = (-phi_y/2, phi_x/2) = (Im, Re) phi_z.
  return {phi_z.imag(), phi_z.real()};
}

double electric_potential(const Weight& w, Complex z) {
  return 2.0 * trace_m(w, point1(z));
}

MagneticData magnetic_data(const Weight& w, FormDegree degree) {
  MagneticData data;
  auto weight = std::make_shared<Weight>(w);
  data.vector_potential = [weight](double x, double y) {
    return vector_potential(*weight, x, y);
  };
  data.electric_potential = [weight](double x, double y) {
    return electric_potential(*weight, Complex(x, y));
  };
  data.degree = degree;
  data.weight_name = w.name();
  return data;
}

MagneticData gauge_shift(const MagneticData& data,
                         std::function<Eigen::Vector2d(double, double)> grad_chi) {
  MagneticData shifted = data;
  auto base = data.vector_potential;
  shifted.vector_potential = [base, grad_chi](double x, double y) {
    return (base(x, y) + grad_chi(x, y)).eval();
  };
  return shifted;
}

SparseHermitianOperator assemble(const MagneticData& data, const Grid2D& grid, double lambda_max) {
  const int ns = grid.interior_side();
  if (ns < 1) throw std::invalid_argument("assemble: grid too coarse");
  const double h = grid.spacing();
  const double sign = data.degree == FormDegree::Top ? 1.0 : -1.0;

  SparseHermitianOperator op;
  op.meta.box_halfwidth = grid.box_halfwidth;
  op.meta.points_per_side = grid.points_per_side;
  op.meta.spacing = h;
  op.meta.degree = to_string(data.degree);
  op.meta.weight_name = data.weight_name;

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<size_t>(grid.interior_count()) * 5);

  for (int iy = 1; iy <= ns; ++iy) {
    const double y = grid.site(iy);
    for (int ix = 1; ix <= ns; ++ix) {
      const double x = grid.site(ix);
      const Eigen::Index p = grid.index(ix, iy);
      const double v = data.electric_potential(x, y);
      triplets.emplace_back(p, p, Complex(1.0 / (h * h) + sign * v / 4.0, 0.0));

      // Bond to the +x neighbour with the Peierls phase at the midpoint.
      if (ix + 1 <= ns) {
        const double ax = data.vector_potential(x + h / 2, y).x();
        const Complex u = std::polar(1.0 / (4.0 * h * h), -h * ax);
        const Eigen::Index q = grid.index(ix + 1, iy);
        triplets.emplace_back(p, q, -u);
        triplets.emplace_back(q, p, -std::conj(u));
      }
      if (iy + 1 <= ns) {
        const double ay = data.vector_potential(x, y + h / 2).y();
        const Complex u = std::polar(1.0 / (4.0 * h * h), -h * ay);
        const Eigen::Index q = grid.index(ix, iy + 1);
        triplets.emplace_back(p, q, -u);
        triplets.emplace_back(q, p, -std::conj(u));
      }
    }
  }
  op.mat.resize(grid.interior_count(), grid.interior_count());
  op.mat.setFromTriplets(triplets.begin(), triplets.end());
  op.mat.makeCompressed();

  if (lambda_max > 0.0) {
    double v_min = kInf;
    for (int i = 0; i <= grid.points_per_side; ++i) {
      const double t = grid.site(i), edge = grid.box_halfwidth;
      v_min = std::min({v_min, data.electric_potential(t, -edge), data.electric_potential(t, edge),
                        data.electric_potential(-edge, t), data.electric_potential(edge, t)});
    }
    if (v_min < 4.0 * lambda_max) {
      op.meta.confinement_ok = false;
      op.meta.warnings.push_back(
          "confinement check failed: min boundary potential " + std::to_string(v_min) +
          " < 4 * lambda_max = " + std::to_string(4.0 * lambda_max) +
          "; truncation may distort eigenvalues near lambda_max");
    }
  }
  return op;
}

SparseHermitianOperator assemble(const Weight& w, const Grid2D& grid, FormDegree degree,
                                 double lambda_max) {
  if (w.dimension() != 1)
    throw std::invalid_argument("assemble: grids discretize one-variable weights only");
  return assemble(magnetic_data(w, degree), grid, lambda_max);
}

VectorC apply_conjugated_box(const Weight& w, const VectorC& f, const Grid2D& grid) {
  const int ns = grid.interior_side();
  if (f.size() != grid.interior_count())
    throw std::invalid_argument("apply_conjugated_box: sample vector does not match grid");
  const double h = grid.spacing();

  auto at = [&](int ix, int iy) -> Complex {
    if (ix < 1 || ix > ns || iy < 1 || iy > ns) return 0.0;  // Dirichlet
    return f[grid.index(ix, iy)];
  };

  VectorC out(f.size());
  for (int iy = 1; iy <= ns; ++iy) {
    for (int ix = 1; ix <= ns; ++ix) {
      const Complex z(grid.site(ix), grid.site(iy));
      const Complex fz0 = at(ix, iy);
      const Complex dx = (at(ix + 1, iy) - at(ix - 1, iy)) / (2 * h);
      const Complex dy = (at(ix, iy + 1) - at(ix, iy - 1)) / (2 * h);
      const Complex lap = (at(ix + 1, iy) + at(ix - 1, iy) + at(ix, iy + 1) + at(ix, iy - 1) -
                           4.0 * fz0) /
                          (h * h);
      const Complex f_z = 0.5 * (dx - Complex(0, 1) * dy);
      const Complex f_zbar = 0.5 * (dx + Complex(0, 1) * dy);
      const Complex f_zzbar = 0.25 * lap;

      const Complex phi_z = w.wirtinger_grad(point1(z))[0];
      const Complex phi_zbar = std::conj(phi_z);
      const double phi_zzbar = w.complex_hessian(point1(z))(0, 0).real();

      out[grid.index(ix, iy)] = -f_zzbar - 0.5 * phi_zbar * f_z + 0.5 * phi_z * f_zbar +
                                0.25 * phi_z * phi_zbar * fz0 + 0.5 * phi_zzbar * fz0;
    }
  }
  return out;
}

double boundary_mass(const VectorC& psi, const Grid2D& grid, double margin) {
  const int ns = grid.interior_side();
  if (psi.size() != grid.interior_count())
    throw std::invalid_argument("boundary_mass: vector does not match grid");
  const double cut = grid.box_halfwidth - margin;
  double edge = 0.0, total = 0.0;
  for (int iy = 1; iy <= ns; ++iy)
    for (int ix = 1; ix <= ns; ++ix) {
      const double m = std::norm(psi[grid.index(ix, iy)]);
      total += m;
      if (std::abs(grid.site(ix)) > cut || std::abs(grid.site(iy)) > cut) edge += m;
    }
  return total > 0 ? edge / total : 0.0;
}

double suggest_box_halfwidth(const Weight& w, double lambda_max, double l_min, double l_max) {
  for (double l = l_min; l <= l_max + 1e-9; l += 0.5) {
    double v_min = kInf;
    for (int i = 0; i <= 32; ++i) {
      const double t = -l + 2 * l * i / 32.0;
      v_min = std::min({v_min, electric_potential(w, Complex(t, -l)),
                        electric_potential(w, Complex(t, l)),
                        electric_potential(w, Complex(-l, t)),
                        electric_potential(w, Complex(l, t))});
    }
    if (v_min >= 4.0 * lambda_max) return l;
  }
  return l_max;
}

SpectrumApprox solve_spectrum(const Weight& w, const Grid2D& grid, FormDegree degree,
                              const SpectrumOptions& opts) {
  SparseHermitianOperator op = assemble(w, grid, degree, opts.lambda_max);
  MatrixC vectors;
  SpectrumApprox s = lowest_eigenpairs(op, opts.k, opts.solver, &vectors);
  s.kernel_tol = opts.kernel_tol;
  s.kernel_dim = 0;

  const double margin = opts.edge_margin_frac * 2.0 * grid.box_halfwidth;
  std::vector<double> bulk_values;
  int edge_count = 0;
  for (size_t i = 0; i < s.pairs.size(); ++i) {
    auto& p = s.pairs[i];
    p.boundary_mass = boundary_mass(vectors.col(static_cast<Eigen::Index>(i)), grid, margin);
    if (p.value < opts.kernel_tol) ++s.kernel_dim;
    if (p.boundary_mass >= opts.edge_mass_threshold) {
      ++edge_count;
    } else {
      bulk_values.push_back(p.value);
    }
  }
  s.clusters = cluster_relative(bulk_values, opts.cluster_rel_tol);
  if (edge_count > 0)
    s.flags.push_back(std::to_string(edge_count) +
                      " boundary-localized states excluded from clusters (truncation artifacts)");
  for (const auto& warning : op.meta.warnings) s.flags.push_back(warning);
  return s;
}

}  // namespace dbarn
