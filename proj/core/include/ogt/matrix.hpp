#pragma once

#include <Eigen/Dense>

namespace ogt {

/// Row i of an n x d matrix is agent i's local row vector.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-mean as a row vector, i.e. (1/n) 1^T A.
inline Eigen::RowVectorXd row_mean(const Matrix& a) { return a.colwise().mean(); }

/// True when every entry is finite.
inline bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace ogt
