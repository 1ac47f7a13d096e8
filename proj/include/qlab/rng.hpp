#ifndef QLAB_RNG_HPP
#define QLAB_RNG_HPP

#include <cstdint>

#include "qlab/density.hpp"
#include "qlab/states.hpp"

namespace qlab {

// All generators are deterministic functions of their seed. Unlabeled
// overloads use a single-factor partition named "S".

// Normalized complex-Gaussian vector: Haar-uniform on the unit sphere.
state_vector random_pure_state(const partition& part, std::uint64_t seed);
state_vector random_pure_state(int dim, std::uint64_t seed);

// Normalized Wishart construction G G^dag / tr with G complex-Gaussian of
// shape dim x rank; exactly `rank` nonzero eigenvalues almost surely.
density_matrix random_density_matrix(const partition& part, int rank,
                                     std::uint64_t seed);
density_matrix random_density_matrix(int dim, int rank, std::uint64_t seed);

// QR of a complex-Gaussian matrix with the R-diagonal phase fix, giving a
// Haar-distributed unitary.
cmatrix random_unitary(int dim, std::uint64_t seed);

// Raw i.i.d. standard-complex-Gaussian entries; building block for the
// structured generators above and for random channel construction.
cmatrix random_gaussian_matrix(int rows, int cols, std::uint64_t seed);

}  // namespace qlab

#endif
