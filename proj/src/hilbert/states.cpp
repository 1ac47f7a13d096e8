#include "qlab/states.hpp"

#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <set>
#include <sstream>

namespace qlab {

state_vector::state_vector(cvector amps_, partition part_, const tolerances& tol)
    : amps(std::move(amps_)), part(std::move(part_)) {
  if (amps.size() != part.total_dim()) {
    std::ostringstream msg;
    msg << "state_vector: " << amps.size() << " amplitudes for a dimension-"
        << part.total_dim() << " space";
    throw error(msg.str());
  }
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > tol.norm) {
    std::ostringstream msg;
    msg << "state_vector: norm " << norm << " is not 1 within " << tol.norm;
    throw error(msg.str());
  }
}

op::op(cmatrix mat_, partition part_) : mat(std::move(mat_)), part(std::move(part_)) {
  if (mat.rows() != mat.cols())
    throw error("op: matrix is not square");
  if (mat.rows() != part.total_dim()) {
    std::ostringstream msg;
    msg << "op: " << mat.rows() << "x" << mat.cols() << " matrix for a dimension-"
        << part.total_dim() << " space";
    throw error(msg.str());
  }
}

state_vector tensor(const state_vector& a, const state_vector& b, int dim_cap) {
  partition joined = a.part.concat(b.part, dim_cap);
  cvector amps = Eigen::kroneckerProduct(a.amps, b.amps);
  return state_vector(std::move(amps), std::move(joined));
}

op tensor(const op& a, const op& b, int dim_cap) {
  partition joined = a.part.concat(b.part, dim_cap);
  cmatrix mat = Eigen::kroneckerProduct(a.mat, b.mat);
  return op(std::move(mat), std::move(joined));
}

state_vector basis_state(const partition& part, int index) {
  const int dim = part.total_dim();
  if (index < 0 || index >= dim)
    throw error("basis_state: index out of range");
  cvector amps = cvector::Zero(dim);
  amps(index) = 1.0;
  return state_vector(std::move(amps), part);
}

op identity_op(const partition& part) {
  return op(cmatrix::Identity(part.total_dim(), part.total_dim()), part);
}

namespace {

// Positions (in `whole`) of each factor of `sub`, in sub's own order.
std::vector<int> factor_positions(const partition& sub, const partition& whole) {
  std::vector<int> pos;
  pos.reserve(sub.labels.size());
  for (std::size_t k = 0; k < sub.labels.size(); ++k) {
    const int p = whole.position(sub.labels[k]);
    if (whole.dims[p] != sub.dims[k]) {
      std::ostringstream msg;
      msg << "embed: factor '" << sub.labels[k] << "' has dimension " << sub.dims[k]
          << " but the enclosing space gives it " << whole.dims[p];
      throw error(msg.str());
    }
    pos.push_back(p);
  }
  return pos;
}

}  // namespace

op embed(const op& sub, const partition& whole) {
  const std::vector<int> pos = factor_positions(sub.part, whole);
  std::set<int> covered(pos.begin(), pos.end());

  const int dim = whole.total_dim();
  cmatrix out = cmatrix::Zero(dim, dim);
  std::vector<int> sub_row(pos.size()), sub_col(pos.size());
  for (int r = 0; r < dim; ++r) {
    const std::vector<int> ridx = whole.unpack(r);
    for (int c = 0; c < dim; ++c) {
      const std::vector<int> cidx = whole.unpack(c);
      bool spectator_match = true;
      for (int f = 0; f < whole.factors(); ++f) {
        if (!covered.count(f) && ridx[f] != cidx[f]) {
          spectator_match = false;
          break;
        }
      }
      if (!spectator_match) continue;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        sub_row[k] = ridx[pos[k]];
        sub_col[k] = cidx[pos[k]];
      }
      out(r, c) = sub.mat(sub.part.pack(sub_row), sub.part.pack(sub_col));
    }
  }
  return op(std::move(out), whole);
}

op embed_product(const std::vector<op>& group_ops, const partition& whole) {
  std::vector<std::vector<int>> positions;
  std::set<int> covered;
  for (const op& g : group_ops) {
    std::vector<int> pos = factor_positions(g.part, whole);
    for (int p : pos) {
      if (!covered.insert(p).second)
        throw error("embed_product: factor '" + whole.labels[p] +
                    "' appears in more than one group");
    }
    positions.push_back(std::move(pos));
  }
  if (static_cast<int>(covered.size()) != whole.factors())
    throw error("embed_product: groups do not cover every factor");

  const int dim = whole.total_dim();
  cmatrix out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const std::vector<int> ridx = whole.unpack(r);
    for (int c = 0; c < dim; ++c) {
      const std::vector<int> cidx = whole.unpack(c);
      complexd value = 1.0;
      for (std::size_t g = 0; g < group_ops.size(); ++g) {
        const std::vector<int>& pos = positions[g];
        std::vector<int> gr(pos.size()), gc(pos.size());
        for (std::size_t k = 0; k < pos.size(); ++k) {
          gr[k] = ridx[pos[k]];
          gc[k] = cidx[pos[k]];
        }
        value *= group_ops[g].mat(group_ops[g].part.pack(gr),
                                  group_ops[g].part.pack(gc));
        if (value == complexd(0.0)) break;
      }
      out(r, c) = value;
    }
  }
  return op(std::move(out), whole);
}

namespace {

// Map each flat index of the reordered space back to the original one.
std::vector<int> reindex_table(const partition& from,
                               const std::vector<std::string>& order,
                               partition& to) {
  std::vector<int> dims;
  std::vector<int> source;  // position in `from` of each reordered factor
  for (const std::string& label : order) {
    const int p = from.position(label);
    dims.push_back(from.dims[p]);
    source.push_back(p);
  }
  if (order.size() != from.labels.size())
    throw error("permute_factors: order must list every factor exactly once");
  to = partition(order, dims);

  const int dim = to.total_dim();
  std::vector<int> table(dim);
  std::vector<int> old_idx(from.factors());
  for (int i = 0; i < dim; ++i) {
    const std::vector<int> new_idx = to.unpack(i);
    for (std::size_t k = 0; k < source.size(); ++k) old_idx[source[k]] = new_idx[k];
    table[i] = from.pack(old_idx);
  }
  return table;
}

}  // namespace

state_vector permute_factors(const state_vector& v,
                             const std::vector<std::string>& order) {
  partition to;
  const std::vector<int> table = reindex_table(v.part, order, to);
  cvector amps(v.amps.size());
  for (int i = 0; i < amps.size(); ++i) amps(i) = v.amps(table[i]);
  return state_vector(std::move(amps), std::move(to));
}

op permute_factors(const op& a, const std::vector<std::string>& order) {
  partition to;
  const std::vector<int> table = reindex_table(a.part, order, to);
  cmatrix mat(a.mat.rows(), a.mat.cols());
  for (int r = 0; r < mat.rows(); ++r)
    for (int c = 0; c < mat.cols(); ++c) mat(r, c) = a.mat(table[r], table[c]);
  return op(std::move(mat), std::move(to));
}

cmatrix pauli_x() {
  cmatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

cmatrix pauli_y() {
  cmatrix m(2, 2);
  m << 0, complexd(0, -1), complexd(0, 1), 0;
  return m;
}

cmatrix pauli_z() {
  cmatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

cmatrix hadamard() {
  cmatrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

cmatrix dot_sigma(double nx, double ny, double nz) {
  return nx * pauli_x() + ny * pauli_y() + nz * pauli_z();
}

}  // namespace qlab
