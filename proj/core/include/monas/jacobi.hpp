#ifndef MONAS_JACOBI_HPP
#define MONAS_JACOBI_HPP

#include <vector>

namespace monas {

/// Eigenvalues of a symmetric n x n matrix (row-major, dense) by cyclic
/// Jacobi rotations, returned in descending order. Intended for the
/// batch-sized Gram matrices of this engine (n up to a few hundred).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

} // namespace monas

#endif
