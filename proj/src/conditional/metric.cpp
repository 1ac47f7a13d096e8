#include "qlab/metric.hpp"

#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "qlab/matfun.hpp"
#include "qlab/tables.hpp"

namespace qlab {

cmatrix label_embedding(const partition& whole,
                        const std::vector<std::string>& q_labels) {
  std::vector<std::string> order = q_labels;
  for (const std::string& label : whole.labels) {
    bool picked = false;
    for (const std::string& q : q_labels) picked |= (q == label);
    if (!picked) order.push_back(label);
  }
  std::vector<int> dims;
  for (const std::string& label : order) dims.push_back(whole.dim_of(label));
  const partition canonical(order, dims);
  if (canonical.total_dim() != whole.total_dim())
    throw error("label_embedding: labels do not belong to the partition");

  const int dim = whole.total_dim();
  cmatrix u = cmatrix::Zero(dim, dim);
  std::vector<int> whole_idx(whole.factors());
  for (int c = 0; c < dim; ++c) {
    const std::vector<int> cidx = canonical.unpack(c);
    for (int k = 0; k < canonical.factors(); ++k)
      whole_idx[whole.position(canonical.labels[k])] = cidx[k];
    u(whole.pack(whole_idx), c) = 1.0;
  }
  return u;
}

namespace {

cmatrix embedded_projector(const state_vector& psi, const cmatrix& u,
                           int whole_dim, const tolerances& tol) {
  if (u.rows() != whole_dim || u.cols() != whole_dim)
    throw error("subsystem_inner_product: embedding has the wrong dimension");
  if (whole_dim % psi.dim() != 0)
    throw error("subsystem_inner_product: subsystem does not divide the space");
  if (max_abs(u.adjoint() * u - cmatrix::Identity(whole_dim, whole_dim)) > tol.tp)
    throw error("subsystem_inner_product: embedding is not unitary");
  const int rest = whole_dim / psi.dim();
  const cmatrix proj = psi.amps * psi.amps.adjoint();
  const cmatrix padded =
      Eigen::kroneckerProduct(proj, cmatrix::Identity(rest, rest));
  return u * padded * u.adjoint();
}

}  // namespace

complexd subsystem_inner_product(const density_matrix& rho_w,
                                 const state_vector& psi, const cmatrix& u_psi,
                                 const state_vector& chi, const cmatrix& u_chi,
                                 const tolerances& tol) {
  const int dim = rho_w.dim();
  const cmatrix m_psi = embedded_projector(psi, u_psi, dim, tol);
  const cmatrix m_chi = embedded_projector(chi, u_chi, dim, tol);
  return (rho_w.mat * m_psi * m_chi).trace();
}

complexd subsystem_inner_product(const density_matrix& rho_w,
                                 const std::vector<std::string>& q_labels,
                                 const state_vector& psi, const state_vector& chi,
                                 const tolerances& tol) {
  const cmatrix u = label_embedding(rho_w.part, q_labels);
  return subsystem_inner_product(rho_w, psi, u, chi, u, tol);
}

leifer_spekkens_report leifer_spekkens_check(
    const kraus_channel& ch, const epistemic_state& epi_t,
    const epistemic_state& epi_t2, const std::vector<std::string>& q_labels,
    const tolerances& tol) {
  leifer_spekkens_report rep;

  // path 1: projector traces; path 2: diagonal elements of the causal
  // conditional state in the product eigenbasis
  const rmatrix p = dynamical_cond_probs(ch, epi_t, epi_t2, true, tol);
  const choi_matrix j = conditional_state(ch);
  for (int i = 0; i < epi_t.size(); ++i)
    for (int jj = 0; jj < epi_t2.size(); ++jj) {
      const cvector w =
          Eigen::kroneckerProduct(epi_t2.states[jj].amps, epi_t.states[i].amps);
      const double diag = (w.adjoint() * j.mat * w)(0, 0).real();
      rep.dynamical_deviation =
          std::max(rep.dynamical_deviation, std::abs(p(jj, i) - diag));
    }

  if (q_labels.empty()) return rep;

  // coarse-grained conditional state for Q inside W, checked against its
  // propagation rule
  const density_matrix rho_w = rebuild(epi_t, tol);
  const partition q_part = rho_w.part.sub(q_labels);
  const int dq = q_part.total_dim();
  const int dim = rho_w.dim();
  const int de = dim / dq;

  // reorder so Q leads; everything below lives in the canonical order
  const cmatrix v = label_embedding(rho_w.part, q_part.labels);
  const cmatrix rho_c = v.adjoint() * rho_w.mat * v;
  std::vector<cmatrix> ops_c;
  for (const cmatrix& e : ch.kraus_ops) ops_c.push_back(v.adjoint() * e * v);
  const partition flat_qe({"Q", "E"}, {dq, de});
  const kraus_channel ch_c = kraus_channel::unchecked(ops_c, flat_qe, flat_qe);

  const choi_matrix j_w = conditional_state(ch_c);
  const cmatrix root_w = sqrt_psd(rho_c, tol.psd);
  const cmatrix pad_root =
      Eigen::kroneckerProduct(cmatrix::Identity(dim, dim), root_w);
  const cmatrix sandwich = pad_root * j_w.mat * pad_root;

  const partition doubled({"Qp", "Ep", "Q", "E"}, {dq, de, dq, de});
  const cmatrix traced = partial_trace_raw(sandwich, doubled, {"Qp", "Q"});

  const cmatrix rho_q = partial_trace_raw(rho_c, flat_qe, {"Q"});
  const cmatrix pad_inv = Eigen::kroneckerProduct(cmatrix::Identity(dq, dq),
                                                  inv_sqrt_psd(rho_q, tol.psd));
  const choi_matrix coarse{pad_inv * traced * pad_inv, dq, dq};

  const cmatrix predicted = propagate_with_conditional_state(coarse, rho_q);
  const cmatrix actual =
      partial_trace_raw(apply_raw(ch_c, rho_c), flat_qe, {"Q"});
  rep.coarse_checked = true;
  rep.coarse_propagation_residual = max_abs(predicted - actual);
  return rep;
}

}  // namespace qlab
