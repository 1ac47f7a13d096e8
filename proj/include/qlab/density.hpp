#ifndef QLAB_DENSITY_HPP
#define QLAB_DENSITY_HPP

#include <string>
#include <vector>

#include "qlab/common.hpp"
#include "qlab/partition.hpp"
#include "qlab/states.hpp"

namespace qlab {

// Hermitian, positive semi-definite matrix with trace in (0, 1]. A trace
// below 1 is allowed; the gap is kept as `trace_deficit` (read as the
// probability that the system has left the modeled levels, e.g. by decay)
// rather than silently renormalized away.
struct density_matrix {
  cmatrix mat;
  partition part;
  double trace_deficit = 0.0;

  density_matrix() = default;

  // Validates hermiticity and positivity, symmetrizes, clips eigenvalues in
  // (-tol.psd, 0) to zero, and derives trace_deficit from the trace.
  density_matrix(cmatrix mat_, partition part_, const tolerances& tol = {});

  // Skips validation; for internal use where the result is PSD by
  // construction (partial traces, Kraus application on valid inputs).
  static density_matrix without_checks(cmatrix mat_, partition part_,
                                       double trace_deficit_ = 0.0);

  static density_matrix pure(const state_vector& psi);

  int dim() const { return static_cast<int>(mat.rows()); }
};

// Spectral ontology of a density matrix: the full eigensystem, eigenvalues
// descending, vectors gauge-fixed. Zero eigenvalues are kept so callers see
// the whole basis; sum of probs tracks the trace.
struct epistemic_state {
  std::vector<double> probs;
  std::vector<state_vector> states;
  double trace_deficit = 0.0;

  int size() const { return static_cast<int>(probs.size()); }
};

struct density_diagnostics {
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double decay_probability = 0.0;
  bool hermitian_ok = false;
  bool psd_ok = false;
  bool trace_ok = false;
  bool ok = false;
  std::string message;
};

// Index-summation partial trace on a raw matrix (no density validation);
// result carries the kept factors in their original order.
cmatrix partial_trace_raw(const cmatrix& m, const partition& part,
                          const std::vector<std::string>& keep);

density_matrix partial_trace(const density_matrix& rho,
                             const std::vector<std::string>& keep);

// Eigendecomposition with the reporting conventions: descending eigenvalues,
// each vector's first component of modulus > 1e-12 made real positive, and
// near-degenerate groups (gap < 1e-10) ordered lexicographically by the
// gauge-fixed components.
epistemic_state spectral_decompose(const density_matrix& rho);

// Sum of p |psi><psi|; inverse of spectral_decompose up to roundoff.
density_matrix rebuild(const epistemic_state& es, const tolerances& tol = {});

// -sum p ln p over the spectrum, in nats, with 0 ln 0 := 0.
double von_neumann_entropy(const density_matrix& rho);

// Reports residuals instead of throwing; use to probe arbitrary matrices.
density_diagnostics validate_density_matrix(const op& candidate,
                                            const tolerances& tol = {});

}  // namespace qlab

#endif
