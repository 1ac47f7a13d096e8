#include "qlab/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace qlab {

lindblad_generator::lindblad_generator(op hamiltonian_, std::vector<op> jump_ops_,
                                       std::vector<double> rates_,
                                       const tolerances& tol)
    : hamiltonian(std::move(hamiltonian_)),
      jump_ops(std::move(jump_ops_)),
      rates(std::move(rates_)) {
  const double herm = hermiticity_residual(hamiltonian.mat);
  if (herm > tol.herm) {
    std::ostringstream msg;
    msg << "lindblad_generator: Hamiltonian hermiticity residual " << herm;
    throw error(msg.str());
  }
  if (jump_ops.size() != rates.size())
    throw error("lindblad_generator: one rate per jump operator required");
  for (double g : rates)
    if (g < 0.0) throw error("lindblad_generator: negative rate");
  for (const op& a : jump_ops)
    if (a.dim() != hamiltonian.dim())
      throw error("lindblad_generator: jump operator dimension mismatch");
}

cmatrix lindblad_generator::derivative(const cmatrix& rho) const {
  const complexd i_unit(0.0, 1.0);
  cmatrix d = -i_unit * (hamiltonian.mat * rho - rho * hamiltonian.mat);
  for (std::size_t k = 0; k < jump_ops.size(); ++k) {
    const cmatrix& a = jump_ops[k].mat;
    const cmatrix ada = a.adjoint() * a;
    d += rates[k] * (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  return d;
}

density_matrix lindblad_evolve(const lindblad_generator& gen,
                               const density_matrix& rho, double t, double step,
                               const tolerances& tol) {
  if (t < 0.0) throw error("lindblad_evolve: negative time");
  if (step <= 0.0) throw error("lindblad_evolve: step must be positive");
  if (rho.dim() != gen.hamiltonian.dim())
    throw error("lindblad_evolve: state dimension does not match generator");

  const double target_trace = rho.mat.trace().real();
  cmatrix state = rho.mat;
  double remaining = t;
  while (remaining > 1e-15) {
    const double h = std::min(step, remaining);
    const cmatrix k1 = gen.derivative(state);
    const cmatrix k2 = gen.derivative(state + 0.5 * h * k1);
    const cmatrix k3 = gen.derivative(state + 0.5 * h * k2);
    const cmatrix k4 = gen.derivative(state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    state = 0.5 * (state + state.adjoint().eval());
    const double tr = state.trace().real();
    if (tr <= 0.0) throw error("lindblad_evolve: trace collapsed");
    state *= target_trace / tr;

    Eigen::SelfAdjointEigenSolver<cmatrix> solver(state, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol.psd) {
      std::ostringstream msg;
      msg << "lindblad_evolve: positivity violated (eigenvalue " << min_eig
          << "); reduce the step size";
      throw error(msg.str());
    }
    remaining -= h;
  }
  return density_matrix::without_checks(std::move(state), rho.part,
                                        rho.trace_deficit);
}

}  // namespace qlab
