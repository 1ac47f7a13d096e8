#ifndef QLAB_STATES_HPP
#define QLAB_STATES_HPP

#include <vector>

#include "qlab/common.hpp"
#include "qlab/partition.hpp"

namespace qlab {

// Unit vector over a partitioned tensor-product space (phase not fixed here;
// spectral decomposition gauge-fixes where it matters).
struct state_vector {
  cvector amps;
  partition part;

  state_vector() = default;
  state_vector(cvector amps_, partition part_, const tolerances& tol = {});

  int dim() const { return static_cast<int>(amps.size()); }
};

// Square matrix over a partitioned space: projectors, Hamiltonians, Pauli
// products, Kraus operators all live here.
struct op {
  cmatrix mat;
  partition part;

  op() = default;
  op(cmatrix mat_, partition part_);

  int dim() const { return static_cast<int>(mat.rows()); }
};

// Kronecker products with concatenated partitions. Norm/trace are
// multiplicative; total dimension is capped.
state_vector tensor(const state_vector& a, const state_vector& b,
                    int dim_cap = default_dim_cap);
op tensor(const op& a, const op& b, int dim_cap = default_dim_cap);

// Basis vector |index> in the given space.
state_vector basis_state(const partition& part, int index);

op identity_op(const partition& part);

// Place an operator living on a subset of factors into the full space,
// acting as the identity elsewhere. The sub-operator's own factor order may
// differ from the enclosing order; indices are routed per label.
op embed(const op& sub, const partition& whole);

// Product of per-group operators covering the whole space exactly (each group
// is a label subset; groups are disjoint and their union is every label).
// Entry ((x),(y)) = prod_g group_op[g][(x_g),(y_g)].
op embed_product(const std::vector<op>& group_ops, const partition& whole);

// Reorder tensor factors of a state/operator to a new label order.
state_vector permute_factors(const state_vector& v,
                             const std::vector<std::string>& order);
op permute_factors(const op& a, const std::vector<std::string>& order);

// Pauli matrices and friends (dimensionless spin-1/2 conventions).
cmatrix pauli_x();
cmatrix pauli_y();
cmatrix pauli_z();
cmatrix hadamard();

// n-dot-sigma for a real 3-vector (unit length not enforced here).
cmatrix dot_sigma(double nx, double ny, double nz);

}  // namespace qlab

#endif
