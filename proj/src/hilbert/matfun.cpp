#include "qlab/matfun.hpp"

#include <cmath>
#include <sstream>

namespace qlab {

namespace {

Eigen::SelfAdjointEigenSolver<cmatrix> solve_hermitian(const cmatrix& m,
                                                       const char* who) {
  if (m.rows() != m.cols()) throw error(std::string(who) + ": matrix is not square");
  const double herm = hermiticity_residual(m);
  if (herm > 1e-9) {
    std::ostringstream msg;
    msg << who << ": hermiticity residual " << herm;
    throw error(msg.str());
  }
  return Eigen::SelfAdjointEigenSolver<cmatrix>(0.5 * (m + m.adjoint().eval()));
}

}  // namespace

cmatrix sqrt_psd(const cmatrix& m, double clip) {
  auto solver = solve_hermitian(m, "sqrt_psd");
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -clip) {
    std::ostringstream msg;
    msg << "sqrt_psd: minimum eigenvalue " << min_eig << " is below -" << clip;
    throw error(msg.str());
  }
  rvector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

cmatrix inv_sqrt_psd(const cmatrix& m, double threshold) {
  auto solver = solve_hermitian(m, "inv_sqrt_psd");
  rvector inv = rvector::Zero(solver.eigenvalues().size());
  for (int i = 0; i < inv.size(); ++i) {
    const double v = solver.eigenvalues()(i);
    if (v > threshold) inv(i) = 1.0 / std::sqrt(v);
  }
  return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

cmatrix support_projector(const cmatrix& m, double threshold) {
  auto solver = solve_hermitian(m, "support_projector");
  rvector mask = rvector::Zero(solver.eigenvalues().size());
  for (int i = 0; i < mask.size(); ++i)
    if (solver.eigenvalues()(i) > threshold) mask(i) = 1.0;
  return solver.eigenvectors() * mask.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace qlab
