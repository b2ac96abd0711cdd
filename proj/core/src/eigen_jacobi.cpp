#include "ogt/eigen_jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "ogt/errors.hpp"

namespace ogt {

namespace {

double off_diagonal_mass(const Matrix& a) {
  double s = 0.0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

Vector symmetric_eigenvalues(Matrix a, double tol, int max_sweeps) {
  if (a.rows() != a.cols()) throw ShapeError("symmetric_eigenvalues: matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return Vector();

  const double scale = std::max(1.0, a.norm());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_mass(a) < tol * scale) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation angle from the symmetric Schur decomposition of the 2x2 block.
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J^T A J, touching columns then rows p and q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  Vector eig = a.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

}  // namespace ogt
