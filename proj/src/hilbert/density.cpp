#include "qlab/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qlab {

namespace {

constexpr double gauge_floor = 1e-12;   // smallest component used to fix phase
constexpr double tie_gap = 1e-10;       // eigenvalues closer than this count as tied

void gauge_fix(cvector& v) {
  for (int k = 0; k < v.size(); ++k) {
    const double m = std::abs(v(k));
    if (m > gauge_floor) {
      v *= std::conj(v(k)) / m;
      return;
    }
  }
}

bool lex_less(const cvector& a, const cvector& b) {
  for (int k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

}  // namespace

density_matrix::density_matrix(cmatrix mat_, partition part_, const tolerances& tol)
    : mat(std::move(mat_)), part(std::move(part_)) {
  if (mat.rows() != mat.cols() || mat.rows() != part.total_dim()) {
    std::ostringstream msg;
    msg << "density_matrix: " << mat.rows() << "x" << mat.cols()
        << " matrix for a dimension-" << part.total_dim() << " space";
    throw error(msg.str());
  }
  const double herm = hermiticity_residual(mat);
  if (herm > tol.herm) {
    std::ostringstream msg;
    msg << "density_matrix: hermiticity residual " << herm << " exceeds " << tol.herm;
    throw error(msg.str());
  }
  mat = 0.5 * (mat + mat.adjoint().eval());

  Eigen::SelfAdjointEigenSolver<cmatrix> solver(mat);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    std::ostringstream msg;
    msg << "density_matrix: minimum eigenvalue " << min_eig << " is below -" << tol.psd;
    throw error(msg.str());
  }
  if (min_eig < 0.0) {
    rvector clipped = solver.eigenvalues().cwiseMax(0.0);
    mat = solver.eigenvectors() * clipped.asDiagonal() *
          solver.eigenvectors().adjoint();
  }

  const double tr = mat.trace().real();
  if (tr > 1.0 + tol.trace) {
    std::ostringstream msg;
    msg << "density_matrix: trace " << tr << " exceeds 1 by more than " << tol.trace;
    throw error(msg.str());
  }
  if (tr <= tol.trace)
    throw error("density_matrix: trace must be positive");
  trace_deficit = std::max(0.0, 1.0 - tr);
}

density_matrix density_matrix::without_checks(cmatrix mat_, partition part_,
                                              double trace_deficit_) {
  density_matrix rho;
  rho.mat = std::move(mat_);
  rho.part = std::move(part_);
  rho.trace_deficit = trace_deficit_;
  return rho;
}

density_matrix density_matrix::pure(const state_vector& psi) {
  return without_checks(psi.amps * psi.amps.adjoint(), psi.part);
}

cmatrix partial_trace_raw(const cmatrix& m, const partition& part,
                          const std::vector<std::string>& keep) {
  const partition kept = part.sub(keep);
  std::vector<std::string> drop_labels;
  for (const std::string& label : part.labels)
    if (!kept.has_label(label)) drop_labels.push_back(label);

  if (drop_labels.empty()) return m;  // nothing traced out

  const partition dropped = part.sub(drop_labels);
  std::vector<int> keep_pos, drop_pos;
  for (const std::string& label : kept.labels) keep_pos.push_back(part.position(label));
  for (const std::string& label : dropped.labels) drop_pos.push_back(part.position(label));

  const int kd = kept.total_dim();
  const int dd = dropped.total_dim();
  cmatrix out = cmatrix::Zero(kd, kd);
  std::vector<int> row_idx(part.factors()), col_idx(part.factors());
  for (int kr = 0; kr < kd; ++kr) {
    const std::vector<int> kr_idx = kept.unpack(kr);
    for (int kc = 0; kc < kd; ++kc) {
      const std::vector<int> kc_idx = kept.unpack(kc);
      complexd sum = 0.0;
      for (int dz = 0; dz < dd; ++dz) {
        const std::vector<int> dz_idx = dropped.unpack(dz);
        for (std::size_t k = 0; k < keep_pos.size(); ++k) {
          row_idx[keep_pos[k]] = kr_idx[k];
          col_idx[keep_pos[k]] = kc_idx[k];
        }
        for (std::size_t k = 0; k < drop_pos.size(); ++k) {
          row_idx[drop_pos[k]] = dz_idx[k];
          col_idx[drop_pos[k]] = dz_idx[k];
        }
        sum += m(part.pack(row_idx), part.pack(col_idx));
      }
      out(kr, kc) = sum;
    }
  }
  return out;
}

density_matrix partial_trace(const density_matrix& rho,
                             const std::vector<std::string>& keep) {
  cmatrix reduced = partial_trace_raw(rho.mat, rho.part, keep);
  reduced = 0.5 * (reduced + reduced.adjoint().eval());
  return density_matrix::without_checks(std::move(reduced), rho.part.sub(keep),
                                        rho.trace_deficit);
}

epistemic_state spectral_decompose(const density_matrix& rho) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(rho.mat);
  const int dim = rho.dim();

  std::vector<double> probs(dim);
  std::vector<cvector> vecs(dim);
  for (int i = 0; i < dim; ++i) {
    // solver returns ascending order; flip to descending
    const int src = dim - 1 - i;
    probs[i] = std::max(0.0, solver.eigenvalues()(src));
    vecs[i] = solver.eigenvectors().col(src);
    gauge_fix(vecs[i]);
  }

  // deterministic order inside (near-)degenerate clusters
  int lo = 0;
  while (lo < dim) {
    int hi = lo + 1;
    while (hi < dim && probs[hi - 1] - probs[hi] < tie_gap) ++hi;
    if (hi - lo > 1) {
      std::vector<int> idx(hi - lo);
      std::iota(idx.begin(), idx.end(), lo);
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return lex_less(vecs[a], vecs[b]); });
      std::vector<double> ps;
      std::vector<cvector> vs;
      for (int j : idx) {
        ps.push_back(probs[j]);
        vs.push_back(vecs[j]);
      }
      std::sort(ps.begin(), ps.end(), std::greater<>());
      for (int j = lo; j < hi; ++j) {
        probs[j] = ps[j - lo];
        vecs[j] = vs[j - lo];
      }
    }
    lo = hi;
  }

  epistemic_state es;
  es.trace_deficit = rho.trace_deficit;
  for (int i = 0; i < dim; ++i) {
    es.probs.push_back(probs[i]);
    es.states.emplace_back(std::move(vecs[i]), rho.part);
  }
  return es;
}

density_matrix rebuild(const epistemic_state& es, const tolerances& tol) {
  if (es.states.empty()) throw error("rebuild: empty epistemic state");
  const int dim = es.states.front().dim();
  cmatrix sum = cmatrix::Zero(dim, dim);
  for (int i = 0; i < es.size(); ++i)
    sum += es.probs[i] * (es.states[i].amps * es.states[i].amps.adjoint());
  return density_matrix(std::move(sum), es.states.front().part, tol);
}

double von_neumann_entropy(const density_matrix& rho) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(rho.mat, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

density_diagnostics validate_density_matrix(const op& candidate,
                                            const tolerances& tol) {
  density_diagnostics d;
  d.hermiticity_residual = hermiticity_residual(candidate.mat);
  d.hermitian_ok = d.hermiticity_residual <= tol.herm;

  const cmatrix sym = 0.5 * (candidate.mat + candidate.mat.adjoint());
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(sym, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  d.psd_ok = d.min_eigenvalue >= -tol.psd;

  d.trace = sym.trace().real();
  double prob_sum = 0.0;
  for (int i = 0; i < solver.eigenvalues().size(); ++i)
    prob_sum += std::max(0.0, solver.eigenvalues()(i));
  d.decay_probability = 1.0 - prob_sum;
  d.trace_ok = d.trace > tol.trace && d.trace <= 1.0 + tol.trace;

  d.ok = d.hermitian_ok && d.psd_ok && d.trace_ok;
  std::ostringstream msg;
  if (!d.hermitian_ok) msg << "hermiticity residual " << d.hermiticity_residual << "; ";
  if (!d.psd_ok) msg << "minimum eigenvalue " << d.min_eigenvalue << "; ";
  if (!d.trace_ok) msg << "trace " << d.trace << "; ";
  d.message = d.ok ? "ok" : msg.str();
  return d;
}

}  // namespace qlab
