#ifndef QLAB_METRIC_HPP
#define QLAB_METRIC_HPP

#include <string>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/kraus.hpp"
#include "qlab/states.hpp"

namespace qlab {

// Permutation unitary sending the canonical order (q_labels..., the rest...)
// into the factor order of `whole`; the standard embedding matrix for
// subsystem vectors.
cmatrix label_embedding(const partition& whole,
                        const std::vector<std::string>& q_labels);

// Hermitian inner product on subsystem spaces induced by the parent density:
//   h(psi, chi) = Tr_W[ rho_W U_psi (|psi><psi| x 1) U_psi^dag
//                              U_chi (|chi><chi| x 1) U_chi^dag ]
// where each embedding unitary maps (subsystem x complement) into W.
// Conjugate-symmetric under simultaneous swap of (psi, U_psi) and (chi, U_chi).
complexd subsystem_inner_product(const density_matrix& rho_w,
                                 const state_vector& psi, const cmatrix& u_psi,
                                 const state_vector& chi, const cmatrix& u_chi,
                                 const tolerances& tol = {});

// Both vectors sit on the same labeled factors of rho_w.
complexd subsystem_inner_product(const density_matrix& rho_w,
                                 const std::vector<std::string>& q_labels,
                                 const state_vector& psi, const state_vector& chi,
                                 const tolerances& tol = {});

// Dual-path evaluation of the transition probabilities: the conditional
// probabilities computed from projector traces must equal the diagonal matrix
// elements of the channel's causal conditional state in the product
// eigenbasis. Optionally also exercises the coarse-grained conditional state
// for the subsystem picked out by q_labels: its propagation rule must
// reproduce the reduced evolved density.
struct leifer_spekkens_report {
  double dynamical_deviation = 0.0;
  bool coarse_checked = false;
  double coarse_propagation_residual = 0.0;
};

leifer_spekkens_report leifer_spekkens_check(
    const kraus_channel& ch, const epistemic_state& epi_t,
    const epistemic_state& epi_t2,
    const std::vector<std::string>& q_labels = {}, const tolerances& tol = {});

}  // namespace qlab

#endif
