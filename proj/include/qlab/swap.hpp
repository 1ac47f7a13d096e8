#ifndef QLAB_SWAP_HPP
#define QLAB_SWAP_HPP

#include <vector>

#include "qlab/common.hpp"

namespace qlab {

// Near-degenerate 2x2 density-matrix block crossing at t0:
//   [[rho0 + (t - t0)/tau,  rho0 * xi         ],
//    [rho0 * conj(xi),      rho0 - (t - t0)/tau]]
// The small off-diagonal xi turns the crossing into an avoided one; the
// eigenstates exchange character over a window of order dt_swap.
struct swap_block_model {
  double rho0 = 0.5;
  complexd xi{1e-4, 0.0};
  double tau = 1.0;
  double t0 = 0.0;

  cmatrix block(double t) const;
};

struct swap_report {
  std::vector<double> times;
  std::vector<double> lambda_high;     // eigenvalue curves of the raw block
  std::vector<double> lambda_low;
  std::vector<double> overlap_same_label;  // vs eigenvectors at times.front()
  std::vector<double> overlap_swapped;
  double gap_at_t0 = 0.0;       // closed form: 2 rho0 |xi|
  double dt_swap = 0.0;         // rho0 |xi| tau
  rmatrix cross_window_probs;   // p(j; t0+window | i; t0-window), identity map
  double label_follow_prob = 0.0;  // max_i p(i | i) across the window
  double state_follow_prob = 0.0;  // min_i p(swapped(i) | i)
  std::vector<int> matched_labels;  // overlap matching across the window
};

// Tracks the block's eigensystem over `times` and computes the conditional
// probabilities across a window of +-10 dt_swap around the crossing, using
// the whole-system conditional probabilities under the identity channel.
swap_report eigenstate_swap_analysis(const swap_block_model& model,
                                     const std::vector<double>& times);

}  // namespace qlab

#endif
