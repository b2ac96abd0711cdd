#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ogt/matrix.hpp"
#include "ogt/objective.hpp"
#include "ogt/rng.hpp"

namespace ogt::test {

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Xoshiro256 gen(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = standard_normal(gen);
  return m;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Quadratics sharing one minimizer c: b_i = A_i c, so grad f_i(c) = 0 for all i.
inline ObjectiveSuite common_minimizer_quadratic(int n, int d, std::uint64_t seed, Point* c_out = nullptr) {
  Xoshiro256 gen(seed);
  Vector c(d);
  for (int j = 0; j < d; ++j) c(j) = standard_normal(gen);
  std::vector<Matrix> a;
  std::vector<Vector> b;
  for (int i = 0; i < n; ++i) {
    Matrix r(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) r(p, q) = standard_normal(gen);
    Matrix ai = r.transpose() * r / d + 0.5 * Matrix::Identity(d, d);
    a.push_back(ai);
    b.push_back(ai * c);
  }
  if (c_out) *c_out = c.transpose();
  return ObjectiveSuite::quadratic(a, b);
}

// Dense random SPD quadratics with distinct minimizers.
inline ObjectiveSuite random_quadratic(int n, int d, std::uint64_t seed) {
  Xoshiro256 gen(seed);
  std::vector<Matrix> a;
  std::vector<Vector> b;
  for (int i = 0; i < n; ++i) {
    Matrix r(d, d);
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q) r(p, q) = standard_normal(gen);
    a.push_back(r.transpose() * r / d + 0.2 * Matrix::Identity(d, d));
    Vector bi(d);
    for (int j = 0; j < d; ++j) bi(j) = standard_normal(gen);
    b.push_back(bi);
  }
  return ObjectiveSuite::quadratic(a, b);
}

}  // namespace ogt::test
