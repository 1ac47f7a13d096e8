#include "qlab/tables.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "qlab/assignment.hpp"

namespace qlab {

namespace {

constexpr double clip_floor = -1e-12;   // entries below this are genuine negativity
constexpr double column_slack = 1e-6;   // per-parent sums must be this close to 1

void check_groups(const partition& part,
                  const std::vector<std::vector<std::string>>& groups) {
  if (groups.empty()) throw error("cond_probs: no subsystem groups given");
  std::set<std::string> seen;
  for (const auto& g : groups) {
    if (g.empty()) throw error("cond_probs: empty subsystem group");
    for (const auto& label : g) {
      if (!part.has_label(label))
        throw error("cond_probs: unknown factor '" + label + "'");
      if (!seen.insert(label).second)
        throw error("cond_probs: factor '" + label + "' appears in two groups");
    }
  }
  if (static_cast<int>(seen.size()) != part.factors())
    throw error("cond_probs: groups do not cover every factor");
}

std::string group_name(const std::vector<std::string>& g) {
  std::string name = g.front();
  for (std::size_t k = 1; k < g.size(); ++k) name += "+" + g[k];
  return name;
}

// Product vector (x)_g |psi_g> routed into the full space by label.
cvector grouped_product_vector(const partition& whole,
                               const std::vector<partition>& group_parts,
                               const std::vector<std::vector<int>>& group_positions,
                               const std::vector<const cvector*>& amps) {
  const int dim = whole.total_dim();
  cvector v(dim);
  std::vector<int> sub;
  for (int flat = 0; flat < dim; ++flat) {
    const std::vector<int> idx = whole.unpack(flat);
    complexd a = 1.0;
    for (std::size_t g = 0; g < group_parts.size(); ++g) {
      sub.assign(group_positions[g].size(), 0);
      for (std::size_t k = 0; k < group_positions[g].size(); ++k)
        sub[k] = idx[group_positions[g][k]];
      a *= (*amps[g])(group_parts[g].pack(sub));
      if (a == complexd(0.0)) break;
    }
    v(flat) = a;
  }
  return v;
}

void clip_and_normalize_columns(rmatrix& m) {
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r < m.rows(); ++r) {
      if (m(r, c) < 0.0) {
        if (m(r, c) < clip_floor) {
          std::ostringstream msg;
          msg << "cond_probs: negative probability " << m(r, c);
          throw error(msg.str());
        }
        m(r, c) = 0.0;
      }
    }
    const double sum = m.col(c).sum();
    if (std::abs(sum - 1.0) > column_slack) {
      std::ostringstream msg;
      msg << "cond_probs: parent column sums to " << sum;
      throw error(msg.str());
    }
    m.col(c) /= sum;
  }
}

}  // namespace

int cond_prob_table::pack(const std::vector<int>& outcome) const {
  if (outcome.size() != axes.size())
    throw error("cond_prob_table: outcome tuple has the wrong length");
  int flat = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (outcome[k] < 0 || outcome[k] >= axes[k].outcomes)
      throw error("cond_prob_table: outcome index out of range");
    flat = flat * axes[k].outcomes + outcome[k];
  }
  return flat;
}

double cond_prob_table::at(const std::vector<int>& outcome, int parent) const {
  if (parent < 0 || parent >= parent_count)
    throw error("cond_prob_table: parent index out of range");
  return values(pack(outcome), parent);
}

cond_prob_table general_cond_probs(const kraus_channel& ch,
                                   const density_matrix& rho_w,
                                   const std::vector<std::vector<std::string>>& groups,
                                   const tolerances& tol) {
  check_groups(rho_w.part, groups);
  if (ch.dim_in() != rho_w.dim() || ch.dim_out() != rho_w.dim())
    throw error("general_cond_probs: channel does not act on the parent space");

  const epistemic_state parent = spectral_decompose(rho_w);
  const density_matrix evolved = apply(ch, rho_w);

  // subsystem eigenbases at the later time
  std::vector<partition> group_parts;
  std::vector<std::vector<int>> group_positions;
  std::vector<epistemic_state> group_bases;
  for (const auto& g : groups) {
    density_matrix reduced = partial_trace(evolved, g);
    group_parts.push_back(reduced.part);
    std::vector<int> pos;
    for (const auto& label : reduced.part.labels)
      pos.push_back(rho_w.part.position(label));
    group_positions.push_back(std::move(pos));
    group_bases.push_back(spectral_decompose(reduced));
  }

  cond_prob_table table;
  table.parent_count = parent.size();
  int joint = 1;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    table.axes.push_back({group_name(groups[g]), group_bases[g].size()});
    joint *= group_bases[g].size();
  }
  table.parent_probs = parent.probs;
  table.values.resize(joint, table.parent_count);

  // evolved parent projectors E[P_w]
  std::vector<cmatrix> evolved_parents;
  evolved_parents.reserve(parent.size());
  for (int w = 0; w < parent.size(); ++w) {
    const cvector& psi = parent.states[w].amps;
    evolved_parents.push_back(apply_raw(ch, psi * psi.adjoint()));
  }

  std::vector<int> tuple(groups.size(), 0);
  std::vector<const cvector*> amps(groups.size());
  for (int row = 0; row < joint; ++row) {
    // unpack the joint child index (first axis slowest)
    int rest = row;
    for (int g = static_cast<int>(groups.size()) - 1; g >= 0; --g) {
      tuple[g] = rest % table.axes[g].outcomes;
      rest /= table.axes[g].outcomes;
    }
    for (std::size_t g = 0; g < groups.size(); ++g)
      amps[g] = &group_bases[g].states[tuple[g]].amps;
    const cvector phi =
        grouped_product_vector(rho_w.part, group_parts, group_positions, amps);
    for (int w = 0; w < table.parent_count; ++w)
      table.values(row, w) = (phi.adjoint() * evolved_parents[w] * phi)(0, 0).real();
  }

  clip_and_normalize_columns(table.values);
  (void)tol;
  return table;
}

cond_prob_table kinematical_cond_probs(const density_matrix& rho_w,
                                       const std::vector<std::vector<std::string>>& groups,
                                       const tolerances& tol) {
  return general_cond_probs(identity_channel(rho_w.part), rho_w, groups, tol);
}

rmatrix dynamical_cond_probs(const kraus_channel& ch, const epistemic_state& epi_t,
                             const epistemic_state& epi_t2, bool check_consistency,
                             const tolerances& tol) {
  if (epi_t.states.empty() || epi_t2.states.empty())
    throw error("dynamical_cond_probs: empty epistemic state");
  if (epi_t.states.front().dim() != ch.dim_in() ||
      epi_t2.states.front().dim() != ch.dim_out())
    throw error("dynamical_cond_probs: dimensions do not match the channel");

  if (check_consistency) {
    const density_matrix evolved = apply(ch, rebuild(epi_t, tol));
    const double residual = max_abs(rebuild(epi_t2, tol).mat - evolved.mat);
    if (residual > tol.orth) {
      std::ostringstream msg;
      msg << "dynamical_cond_probs: later epistemic state is not the evolved "
             "earlier one (residual "
          << residual << ")";
      throw error(msg.str());
    }
  }

  rmatrix p(epi_t2.size(), epi_t.size());
  for (int i = 0; i < epi_t.size(); ++i)
    for (int j = 0; j < epi_t2.size(); ++j) {
      double sum = 0.0;
      for (const cmatrix& e : ch.kraus_ops) {
        const complexd amp = epi_t2.states[j].amps.dot(e * epi_t.states[i].amps);
        sum += std::norm(amp);
      }
      p(j, i) = sum;
    }
  clip_and_normalize_columns(p);
  return p;
}

std::vector<double> propagate_epistemic(const std::vector<double>& p,
                                        const rmatrix& cond,
                                        const tolerances& tol) {
  if (static_cast<int>(p.size()) != cond.cols())
    throw error("propagate_epistemic: size mismatch");
  for (int c = 0; c < cond.cols(); ++c) {
    if (std::abs(cond.col(c).sum() - 1.0) > column_slack)
      throw error("propagate_epistemic: matrix is not column-stochastic");
    for (int r = 0; r < cond.rows(); ++r)
      if (cond(r, c) < clip_floor)
        throw error("propagate_epistemic: negative conditional probability");
  }
  (void)tol;
  std::vector<double> out(cond.rows(), 0.0);
  for (int r = 0; r < cond.rows(); ++r)
    for (int c = 0; c < cond.cols(); ++c)
      out[r] += std::max(0.0, cond(r, c)) * p[c];
  return out;
}

rmatrix transition_rates(const kraus_channel& ch_dt, const epistemic_state& epi,
                         double dt, const tolerances& tol) {
  if (dt <= 0.0) throw error("transition_rates: dt must be positive");
  const epistemic_state epi2 = spectral_decompose(apply(ch_dt, rebuild(epi, tol)));
  const rmatrix p = dynamical_cond_probs(ch_dt, epi, epi2, true, tol);
  return (p - rmatrix::Identity(p.rows(), p.cols())) / dt;
}

coarse_grained_result coarse_grained_cond_probs(const kraus_channel& ch_w,
                                                const density_matrix& rho_w,
                                                const std::vector<std::string>& q_labels,
                                                const tolerances& tol) {
  if (ch_w.dim_in() != rho_w.dim() || ch_w.dim_out() != rho_w.dim())
    throw error("coarse_grained_cond_probs: channel does not act on the parent");
  const partition q_part = rho_w.part.sub(q_labels);

  const density_matrix rho_q = partial_trace(rho_w, q_labels);
  const epistemic_state basis_t = spectral_decompose(rho_q);

  const density_matrix evolved = apply(ch_w, rho_w);
  const epistemic_state basis_t2 =
      spectral_decompose(partial_trace(evolved, q_labels));

  const int dq = rho_q.dim();
  coarse_grained_result result;
  result.probs = rmatrix::Zero(dq, dq);
  result.supported.assign(dq, false);
  result.parent_probs = basis_t.probs;

  for (int i = 0; i < dq; ++i) {
    if (basis_t.probs[i] <= tol.psd) continue;  // outside the support of rho_Q
    result.supported[i] = true;

    const cvector& psi = basis_t.states[i].amps;
    const op p_i(psi * psi.adjoint(), q_part);
    const op lifted = assignment_map(rho_w, q_labels, p_i, tol);
    const cmatrix moved = apply_raw(ch_w, lifted.mat);
    const cmatrix reduced = partial_trace_raw(moved, rho_w.part, q_labels);

    for (int j = 0; j < dq; ++j) {
      const cvector& chi = basis_t2.states[j].amps;
      result.probs(j, i) = (chi.adjoint() * reduced * chi)(0, 0).real();
    }
  }

  // clip and renormalize only the supported columns
  for (int i = 0; i < dq; ++i) {
    if (!result.supported[i]) continue;
    for (int j = 0; j < dq; ++j) {
      if (result.probs(j, i) < 0.0) {
        if (result.probs(j, i) < clip_floor) {
          std::ostringstream msg;
          msg << "coarse_grained_cond_probs: negative probability "
              << result.probs(j, i);
          throw error(msg.str());
        }
        result.probs(j, i) = 0.0;
      }
    }
    const double sum = result.probs.col(i).sum();
    if (std::abs(sum - 1.0) > column_slack) {
      std::ostringstream msg;
      msg << "coarse_grained_cond_probs: column sums to " << sum;
      throw error(msg.str());
    }
    result.probs.col(i) /= sum;
  }
  return result;
}

}  // namespace qlab
