#ifndef QLAB_TABLES_HPP
#define QLAB_TABLES_HPP

#include <string>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/kraus.hpp"

namespace qlab {

// One child subsystem (or grouped set of factors) in a conditional table.
struct table_axis {
  std::string label;   // group labels joined with '+'
  int outcomes = 0;    // number of ontic states = group dimension
};

// p(i_1,...,i_n | w): joint child outcomes conditioned on a parent ontic
// index. Columns are parents and sum to one; the joint child index packs the
// axes with the first axis varying slowest.
struct cond_prob_table {
  std::vector<table_axis> axes;
  int parent_count = 0;
  rmatrix values;                    // (joint child outcomes) x parent_count
  std::vector<double> parent_probs;  // parent eigenvalues, for reporting

  int joint_outcomes() const { return static_cast<int>(values.rows()); }
  int pack(const std::vector<int>& outcome) const;
  double at(const std::vector<int>& outcome, int parent) const;
};

// Conditional probabilities for subsystem outcomes at t' given the parent's
// ontic state at t, for a parent evolving under `ch`:
//   p(i_1,...; t' | w; t) = Tr[ (P_{1,i_1} x ... x P_{n,i_n})(t')  E[P_w(t)] ]
// with every projector family drawn from the tie-broken eigenbases of the
// respective (reduced) densities. `groups` partitions the parent's factors.
cond_prob_table general_cond_probs(const kraus_channel& ch,
                                   const density_matrix& rho_w,
                                   const std::vector<std::vector<std::string>>& groups,
                                   const tolerances& tol = {});

// Same-time special case (identity channel): instantaneous correlations
// between subsystem ontic states and the parent's.
cond_prob_table kinematical_cond_probs(const density_matrix& rho_w,
                                       const std::vector<std::vector<std::string>>& groups,
                                       const tolerances& tol = {});

// Whole-system transition matrix p(j; t' | i; t) = Tr[P_j(t') E[P_i(t)]],
// column-stochastic. The two epistemic states must be consistent with the
// channel (epi_t2 from the evolved rebuild of epi_t); set check_consistency
// to false only when deliberately comparing eigenbases across a crossing.
rmatrix dynamical_cond_probs(const kraus_channel& ch, const epistemic_state& epi_t,
                             const epistemic_state& epi_t2,
                             bool check_consistency = true,
                             const tolerances& tol = {});

// p'_j = sum_i p(j|i) p_i for a column-stochastic matrix.
std::vector<double> propagate_epistemic(const std::vector<double>& p,
                                        const rmatrix& cond,
                                        const tolerances& tol = {});

// W(j|i) = (p(j; t+dt | i; t) - delta_ji) / dt for the channel advancing one
// dt; columns sum to zero.
rmatrix transition_rates(const kraus_channel& ch_dt, const epistemic_state& epi,
                         double dt, const tolerances& tol = {});

// Effective subsystem transition probabilities through the assignment map:
//   p(j|i) = Tr[ (P_Q(j; t') x 1_E)  E_W[ A[P_Q(i; t)] ] ].
// Columns whose parent eigenvalue lies outside the support of rho_Q are
// marked unsupported and left zero (the assignment is ill-posed there).
struct coarse_grained_result {
  rmatrix probs;
  std::vector<bool> supported;
  std::vector<double> parent_probs;  // eigenvalues of rho_Q at t
};

coarse_grained_result coarse_grained_cond_probs(const kraus_channel& ch_w,
                                                const density_matrix& rho_w,
                                                const std::vector<std::string>& q_labels,
                                                const tolerances& tol = {});

}  // namespace qlab

#endif
