#include "qlab/rng.hpp"

#include <random>

namespace qlab {

cmatrix random_gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 gen(splitmix64(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  cmatrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double re = normal(gen);
      const double im = normal(gen);
      g(r, c) = complexd(re, im);
    }
  return g;
}

state_vector random_pure_state(const partition& part, std::uint64_t seed) {
  cvector amps = random_gaussian_matrix(part.total_dim(), 1, seed);
  amps /= amps.norm();
  return state_vector(std::move(amps), part);
}

state_vector random_pure_state(int dim, std::uint64_t seed) {
  return random_pure_state(partition::single("S", dim), seed);
}

density_matrix random_density_matrix(const partition& part, int rank,
                                     std::uint64_t seed) {
  const int dim = part.total_dim();
  if (rank < 1 || rank > dim)
    throw error("random_density_matrix: rank must be between 1 and the dimension");
  const cmatrix g = random_gaussian_matrix(dim, rank, seed);
  cmatrix w = g * g.adjoint();
  w /= w.trace().real();
  return density_matrix(std::move(w), part);
}

density_matrix random_density_matrix(int dim, int rank, std::uint64_t seed) {
  return random_density_matrix(partition::single("S", dim), rank, seed);
}

cmatrix random_unitary(int dim, std::uint64_t seed) {
  const cmatrix g = random_gaussian_matrix(dim, dim, seed);
  Eigen::HouseholderQR<cmatrix> qr(g);
  cmatrix q = qr.householderQ();
  const cmatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const complexd d = r(k, k);
    const double m = std::abs(d);
    q.col(k) *= (m > 0.0) ? d / m : complexd(1.0);
  }
  return q;
}

}  // namespace qlab
