#ifndef QLAB_TRAJECTORY_HPP
#define QLAB_TRAJECTORY_HPP

#include <cstdint>
#include <vector>

#include "qlab/common.hpp"

namespace qlab {

// One sampled realization of the ontic-state index through time.
struct ontic_trajectory {
  std::vector<double> times;
  std::vector<int> indices;
  std::uint64_t seed = 0;  // per-trajectory derived seed
};

struct trajectory_ensemble {
  std::vector<ontic_trajectory> trajectories;
  rmatrix occupation;  // (steps+1) x states empirical frequencies
};

// Draws n trajectories: the initial index from initial_p, then one step per
// column-stochastic matrix in cond_seq. Per-trajectory seeds come from the
// documented split of `seed`, so results do not depend on sampling order.
// `times` must have cond_seq.size() + 1 stamps (defaults to 0, 1, 2, ...).
trajectory_ensemble sample_trajectories(const std::vector<rmatrix>& cond_seq,
                                        const std::vector<double>& initial_p,
                                        int n, std::uint64_t seed,
                                        const std::vector<double>& times = {},
                                        const tolerances& tol = {});

}  // namespace qlab

#endif
