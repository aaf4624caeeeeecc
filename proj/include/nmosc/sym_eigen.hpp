#pragma once

#include <cstddef>
#include <vector>

namespace nmosc {

// Dense symmetric eigendecomposition, eigenvalues ascending.
// vectors is column-major: vectors[i + n*j] is component i of eigenvector j,
// empty when eigenvectors were not requested.
struct SymEigenResult {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<double> vectors;
};

// Householder tridiagonalization followed by implicit-shift QL.
// `matrix` is the full symmetric matrix in row-major order (n*n entries);
// only its lower triangle is read.
SymEigenResult sym_eigen(std::vector<double> matrix, std::size_t n, bool with_vectors);

}  // namespace nmosc
