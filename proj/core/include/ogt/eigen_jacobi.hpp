#pragma once

#include "ogt/matrix.hpp"

namespace ogt {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Iterates until the off-diagonal Frobenius mass falls below
/// `tol` (relative to the Frobenius norm of the input, absolute if the input
/// is zero) or `max_sweeps` sweeps have run.
Vector symmetric_eigenvalues(Matrix a, double tol = 1e-14, int max_sweeps = 100);

}  // namespace ogt
