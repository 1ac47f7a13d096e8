#ifndef QLAB_KRAUS_HPP
#define QLAB_KRAUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/states.hpp"

namespace qlab {

// Dynamical map in operator-sum form: rho -> sum_a E_a rho E_a^dag. Kraus
// matrices are dim_out x dim_in; square maps inherit the input state's
// partition on application, rectangular ones impose out_part.
struct kraus_channel {
  std::vector<cmatrix> kraus_ops;
  partition in_part;
  partition out_part;

  int dim_in() const { return in_part.total_dim(); }
  int dim_out() const { return out_part.total_dim(); }

  // Validates shape agreement and completeness sum E^dag E = 1 within tol.tp.
  static kraus_channel checked(std::vector<cmatrix> ops, partition in_part,
                               partition out_part, const tolerances& tol = {});
  static kraus_channel checked(std::vector<cmatrix> ops, partition part,
                               const tolerances& tol = {});

  // Shape checks only; for deliberately non-TP or non-CP maps under study.
  static kraus_channel unchecked(std::vector<cmatrix> ops, partition in_part,
                                 partition out_part);
};

kraus_channel identity_channel(const partition& part);
kraus_channel unitary_channel(const cmatrix& u, const partition& part,
                              const tolerances& tol = {});

// Non-selective projection: rho -> sum_l P_l rho P_l. Projectors must be
// orthogonal and sum to the identity.
kraus_channel luders_channel(const std::vector<op>& projectors,
                             const tolerances& tol = {});

// Haar-flavored random CPT channel with n_kraus operators (shape-normalized
// Gaussian construction); deterministic per seed.
kraus_channel random_channel(const partition& part, int n_kraus,
                             std::uint64_t seed);
kraus_channel random_channel(int dim, int n_kraus, std::uint64_t seed);

density_matrix apply(const kraus_channel& ch, const density_matrix& rho);
cmatrix apply_raw(const kraus_channel& ch, const cmatrix& m);

struct cpt_diagnostics {
  double tp_residual = 0.0;       // max-norm of sum E^dag E - 1
  double choi_min_eigenvalue = 0.0;
  bool tp_ok = false;
  bool cp_ok = false;
  bool ok = false;
};

cpt_diagnostics verify_cpt(const kraus_channel& ch, const tolerances& tol = {});

// Operator on the doubled space out (x) in. `mat` is Hermitian for any
// Hermitian-preserving map; PSD iff the map is completely positive.
struct choi_matrix {
  cmatrix mat;
  int dim_in = 0;
  int dim_out = 0;
};

// Channel-state duality: C = sum_{mn} E[|m><n|] (x) |m><n|.
choi_matrix choi(const kraus_channel& ch);

// Inverse duality: eigendecomposition of a PSD Choi matrix, keeping
// eigenvalues above tol.psd, ordered descending. Throws on negative
// eigenvalues below -tol.psd (map not completely positive).
kraus_channel kraus_from_choi(const choi_matrix& c, const tolerances& tol = {});
kraus_channel kraus_from_choi(const choi_matrix& c, partition in_part,
                              partition out_part, const tolerances& tol = {});

// Causal conditional state: the doubled-space operator J with
// rho(t') = Tr_in[J (1_out (x) rho(t))] for every input rho. Hermitian but
// generally indefinite; reuses the choi_matrix carrier type.
choi_matrix conditional_state(const kraus_channel& ch);

// Evaluates the propagation rule above for a given input state.
cmatrix propagate_with_conditional_state(const choi_matrix& j, const cmatrix& rho);

}  // namespace qlab

#endif
