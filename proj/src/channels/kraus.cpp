#include "qlab/kraus.hpp"

#include <cmath>
#include <sstream>

#include "qlab/matfun.hpp"
#include "qlab/rng.hpp"

namespace qlab {

namespace {

void check_shapes(const std::vector<cmatrix>& ops, int rows, int cols) {
  if (ops.empty()) throw error("kraus_channel: no Kraus operators");
  for (const cmatrix& e : ops)
    if (e.rows() != rows || e.cols() != cols) {
      std::ostringstream msg;
      msg << "kraus_channel: operator shape " << e.rows() << "x" << e.cols()
          << " does not match " << rows << "x" << cols;
      throw error(msg.str());
    }
}

cmatrix completeness_sum(const std::vector<cmatrix>& ops) {
  cmatrix sum = cmatrix::Zero(ops.front().cols(), ops.front().cols());
  for (const cmatrix& e : ops) sum += e.adjoint() * e;
  return sum;
}

}  // namespace

kraus_channel kraus_channel::checked(std::vector<cmatrix> ops, partition in_part,
                                     partition out_part, const tolerances& tol) {
  check_shapes(ops, out_part.total_dim(), in_part.total_dim());
  const cmatrix sum = completeness_sum(ops);
  const double residual =
      max_abs(sum - cmatrix::Identity(sum.rows(), sum.cols()));
  if (residual > tol.tp) {
    std::ostringstream msg;
    msg << "kraus_channel: completeness residual " << residual << " exceeds "
        << tol.tp;
    throw error(msg.str());
  }
  kraus_channel ch;
  ch.kraus_ops = std::move(ops);
  ch.in_part = std::move(in_part);
  ch.out_part = std::move(out_part);
  return ch;
}

kraus_channel kraus_channel::checked(std::vector<cmatrix> ops, partition part,
                                     const tolerances& tol) {
  partition copy = part;
  return checked(std::move(ops), std::move(part), std::move(copy), tol);
}

kraus_channel kraus_channel::unchecked(std::vector<cmatrix> ops, partition in_part,
                                       partition out_part) {
  check_shapes(ops, out_part.total_dim(), in_part.total_dim());
  kraus_channel ch;
  ch.kraus_ops = std::move(ops);
  ch.in_part = std::move(in_part);
  ch.out_part = std::move(out_part);
  return ch;
}

kraus_channel identity_channel(const partition& part) {
  const int d = part.total_dim();
  return kraus_channel::checked({cmatrix::Identity(d, d)}, part);
}

kraus_channel unitary_channel(const cmatrix& u, const partition& part,
                              const tolerances& tol) {
  const int d = part.total_dim();
  if (u.rows() != d || u.cols() != d)
    throw error("unitary_channel: dimension mismatch");
  const double residual = max_abs(u.adjoint() * u - cmatrix::Identity(d, d));
  if (residual > tol.tp) {
    std::ostringstream msg;
    msg << "unitary_channel: unitarity residual " << residual;
    throw error(msg.str());
  }
  return kraus_channel::checked({u}, part, tol);
}

kraus_channel luders_channel(const std::vector<op>& projectors,
                             const tolerances& tol) {
  if (projectors.empty()) throw error("luders_channel: no projectors");
  const partition& part = projectors.front().part;
  const int d = part.total_dim();
  cmatrix sum = cmatrix::Zero(d, d);
  for (const op& p : projectors) {
    if (!(p.part == part))
      throw error("luders_channel: projectors on different spaces");
    sum += p.mat;
  }
  if (max_abs(sum - cmatrix::Identity(d, d)) > tol.tp)
    throw error("luders_channel: projectors do not sum to the identity");
  for (std::size_t i = 0; i < projectors.size(); ++i)
    for (std::size_t j = 0; j < projectors.size(); ++j) {
      const cmatrix prod = projectors[i].mat * projectors[j].mat;
      const cmatrix expected = (i == j) ? projectors[i].mat
                                        : cmatrix::Zero(d, d).eval();
      if (max_abs(prod - expected) > tol.tp)
        throw error("luders_channel: projectors not orthogonal/idempotent");
    }
  std::vector<cmatrix> ops;
  ops.reserve(projectors.size());
  for (const op& p : projectors) ops.push_back(p.mat);
  return kraus_channel::checked(std::move(ops), part, tol);
}

kraus_channel random_channel(const partition& part, int n_kraus,
                             std::uint64_t seed) {
  if (n_kraus < 1) throw error("random_channel: need at least one Kraus operator");
  const int d = part.total_dim();
  std::vector<cmatrix> raw;
  raw.reserve(n_kraus);
  cmatrix gram = cmatrix::Zero(d, d);
  for (int a = 0; a < n_kraus; ++a) {
    raw.push_back(random_gaussian_matrix(d, d, split_seed(seed, a)));
    gram += raw.back().adjoint() * raw.back();
  }
  // right-normalize so the completeness sum is exactly the identity
  const cmatrix fix = inv_sqrt_psd(gram, 0.0);
  for (cmatrix& e : raw) e = e * fix;
  return kraus_channel::checked(std::move(raw), part);
}

kraus_channel random_channel(int dim, int n_kraus, std::uint64_t seed) {
  return random_channel(partition::single("S", dim), n_kraus, seed);
}

cmatrix apply_raw(const kraus_channel& ch, const cmatrix& m) {
  if (m.rows() != ch.dim_in() || m.cols() != ch.dim_in())
    throw error("apply: state dimension does not match channel input");
  cmatrix out = cmatrix::Zero(ch.dim_out(), ch.dim_out());
  for (const cmatrix& e : ch.kraus_ops) out += e * m * e.adjoint();
  return out;
}

density_matrix apply(const kraus_channel& ch, const density_matrix& rho) {
  cmatrix out = apply_raw(ch, rho.mat);
  out = 0.5 * (out + out.adjoint().eval());
  // square maps keep the caller's factor structure
  partition out_part =
      (ch.dim_out() == rho.part.total_dim()) ? rho.part : ch.out_part;
  return density_matrix::without_checks(std::move(out), std::move(out_part),
                                        rho.trace_deficit);
}

cpt_diagnostics verify_cpt(const kraus_channel& ch, const tolerances& tol) {
  cpt_diagnostics d;
  const cmatrix sum = completeness_sum(ch.kraus_ops);
  d.tp_residual = max_abs(sum - cmatrix::Identity(sum.rows(), sum.cols()));
  d.tp_ok = d.tp_residual <= tol.tp;

  const choi_matrix c = choi(ch);
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(c.mat, Eigen::EigenvaluesOnly);
  d.choi_min_eigenvalue = solver.eigenvalues().minCoeff();
  d.cp_ok = d.choi_min_eigenvalue >= -tol.psd;
  d.ok = d.tp_ok && d.cp_ok;
  return d;
}

choi_matrix choi(const kraus_channel& ch) {
  const int din = ch.dim_in();
  const int dout = ch.dim_out();
  choi_matrix c;
  c.dim_in = din;
  c.dim_out = dout;
  c.mat = cmatrix::Zero(dout * din, dout * din);
  for (const cmatrix& e : ch.kraus_ops) {
    // stack E row-major: w[(o,i)] = E(o,i); then C += w w^dag
    cvector w(dout * din);
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i) w(o * din + i) = e(o, i);
    c.mat += w * w.adjoint();
  }
  return c;
}

kraus_channel kraus_from_choi(const choi_matrix& c, partition in_part,
                              partition out_part, const tolerances& tol) {
  const int din = c.dim_in;
  const int dout = c.dim_out;
  if (in_part.total_dim() != din || out_part.total_dim() != dout)
    throw error("kraus_from_choi: partition dimensions do not match");
  if (c.mat.rows() != dout * din)
    throw error("kraus_from_choi: matrix does not match the declared dimensions");
  if (hermiticity_residual(c.mat) > tol.herm)
    throw error("kraus_from_choi: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<cmatrix> solver(
      (0.5 * (c.mat + c.mat.adjoint())).eval());
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    std::ostringstream msg;
    msg << "kraus_from_choi: minimum eigenvalue " << min_eig
        << "; the map is not completely positive";
    throw error(msg.str());
  }

  std::vector<cmatrix> ops;
  for (int k = solver.eigenvalues().size() - 1; k >= 0; --k) {  // descending
    const double lambda = solver.eigenvalues()(k);
    if (lambda <= tol.psd) continue;
    const cvector w = std::sqrt(lambda) * solver.eigenvectors().col(k);
    cmatrix e(dout, din);
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i) e(o, i) = w(o * din + i);
    ops.push_back(std::move(e));
  }
  if (ops.empty()) throw error("kraus_from_choi: zero map");
  return kraus_channel::unchecked(std::move(ops), std::move(in_part),
                                  std::move(out_part));
}

kraus_channel kraus_from_choi(const choi_matrix& c, const tolerances& tol) {
  return kraus_from_choi(c, partition::single("in", c.dim_in),
                         partition::single("out", c.dim_out), tol);
}

choi_matrix conditional_state(const kraus_channel& ch) {
  const int din = ch.dim_in();
  const int dout = ch.dim_out();
  choi_matrix j;
  j.dim_in = din;
  j.dim_out = dout;
  j.mat = cmatrix::Zero(dout * din, dout * din);
  // J = sum_{mn} E[|m><n|] (x) |n><m| : entrywise
  // J[(o,i),(o',i')] = sum_a E_a(o, i') conj(E_a(o', i))
  for (const cmatrix& e : ch.kraus_ops)
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i)
        for (int o2 = 0; o2 < dout; ++o2)
          for (int i2 = 0; i2 < din; ++i2)
            j.mat(o * din + i, o2 * din + i2) += e(o, i2) * std::conj(e(o2, i));
  return j;
}

cmatrix propagate_with_conditional_state(const choi_matrix& j, const cmatrix& rho) {
  const int din = j.dim_in;
  const int dout = j.dim_out;
  if (rho.rows() != din || rho.cols() != din)
    throw error("propagate_with_conditional_state: dimension mismatch");
  // Tr_in[J (1_out (x) rho)]
  cmatrix out = cmatrix::Zero(dout, dout);
  for (int o = 0; o < dout; ++o)
    for (int o2 = 0; o2 < dout; ++o2) {
      complexd sum = 0.0;
      for (int i = 0; i < din; ++i)
        for (int i2 = 0; i2 < din; ++i2)
          sum += j.mat(o * din + i, o2 * din + i2) * rho(i2, i);
      out(o, o2) = sum;
    }
  return out;
}

}  // namespace qlab
