#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>

namespace dbarn {

using Complex = std::complex<double>;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// z = x + iy packed as a real 2n-vector (x_1, y_1, ..., x_n, y_n).
inline VectorC complex_from_real(const VectorR& xy) {
  VectorC z(xy.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j)
    z[j] = Complex(xy[2 * j], xy[2 * j + 1]);
  return z;
}

inline VectorR real_from_complex(const VectorC& z) {
  VectorR xy(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    xy[2 * j] = z[j].real();
    xy[2 * j + 1] = z[j].imag();
  }
  return xy;
}

inline VectorC point1(Complex z) {
  VectorC v(1);
  v[0] = z;
  return v;
}

inline VectorC point2(Complex z1, Complex z2) {
  VectorC v(2);
  v[0] = z1;
  v[1] = z2;
  return v;
}

}  // namespace dbarn
