#include "qlab/swap.hpp"

#include <cmath>
#include <sstream>

#include "qlab/density.hpp"
#include "qlab/matching.hpp"
#include "qlab/tables.hpp"

namespace qlab {

cmatrix swap_block_model::block(double t) const {
  const double drift = (t - t0) / tau;
  cmatrix b(2, 2);
  b(0, 0) = rho0 + drift;
  b(1, 1) = rho0 - drift;
  b(0, 1) = rho0 * xi;
  b(1, 0) = rho0 * std::conj(xi);
  return b;
}

namespace {

void validate(const swap_block_model& m) {
  if (!(m.rho0 > 0.0) || m.rho0 > 1.0)
    throw error("swap_block_model: rho0 must lie in (0, 1]");
  const double mag = std::abs(m.xi);
  if (!(mag > 0.0) || mag >= 1.0)
    throw error("swap_block_model: need 0 < |xi| < 1");
  if (!(m.tau > 0.0)) throw error("swap_block_model: tau must be positive");
}

// the block scaled to unit trace, as a proper density matrix
density_matrix normalized_block(const swap_block_model& m, double t) {
  return density_matrix(m.block(t) / (2.0 * m.rho0), partition::single("B", 2));
}

}  // namespace

swap_report eigenstate_swap_analysis(const swap_block_model& model,
                                     const std::vector<double>& times) {
  validate(model);

  swap_report rep;
  rep.dt_swap = model.rho0 * std::abs(model.xi) * model.tau;

  const double window = 10.0 * rep.dt_swap;
  // the block must stay PSD across the probed window
  const double reach = std::hypot(window / model.tau,
                                  model.rho0 * std::abs(model.xi));
  if (reach > model.rho0) {
    std::ostringstream msg;
    msg << "eigenstate_swap_analysis: |xi| = " << std::abs(model.xi)
        << " is too large for the near-degenerate block to stay positive "
           "across the swap window";
    throw error(msg.str());
  }

  // eigenvalue and overlap curves
  const double t_ref = times.empty() ? model.t0 - window : times.front();
  const epistemic_state ref = spectral_decompose(normalized_block(model, t_ref));
  for (double t : times) {
    Eigen::SelfAdjointEigenSolver<cmatrix> solver(model.block(t));
    rep.times.push_back(t);
    rep.lambda_high.push_back(solver.eigenvalues()(1));
    rep.lambda_low.push_back(solver.eigenvalues()(0));

    const epistemic_state now = spectral_decompose(normalized_block(model, t));
    rep.overlap_same_label.push_back(
        std::norm(now.states[0].amps.dot(ref.states[0].amps)));
    rep.overlap_swapped.push_back(
        std::norm(now.states[1].amps.dot(ref.states[0].amps)));
  }

  Eigen::SelfAdjointEigenSolver<cmatrix> at_t0(model.block(model.t0));
  rep.gap_at_t0 = at_t0.eigenvalues()(1) - at_t0.eigenvalues()(0);

  // conditional probabilities straight across the crossing: the state does
  // not move (identity channel), but the eigenbases at the two times differ,
  // so the consistency precondition is deliberately waived
  const epistemic_state before = spectral_decompose(
      normalized_block(model, model.t0 - window));
  const epistemic_state after = spectral_decompose(
      normalized_block(model, model.t0 + window));
  rep.cross_window_probs = dynamical_cond_probs(
      identity_channel(partition::single("B", 2)), before, after, false);

  rep.label_follow_prob = std::max(rep.cross_window_probs(0, 0),
                                   rep.cross_window_probs(1, 1));
  rep.state_follow_prob = std::min(rep.cross_window_probs(1, 0),
                                   rep.cross_window_probs(0, 1));
  rep.matched_labels = match_eigenstates(before, after);
  return rep;
}

}  // namespace qlab
