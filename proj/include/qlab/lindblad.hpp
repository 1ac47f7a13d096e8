#ifndef QLAB_LINDBLAD_HPP
#define QLAB_LINDBLAD_HPP

#include <vector>

#include "qlab/density.hpp"
#include "qlab/states.hpp"

namespace qlab {

// Diagonal-form Markovian generator (hbar = 1):
//   drho/dt = -i[H, rho] + sum_k gamma_k (A_k rho A_k^dag
//                                         - 1/2 {A_k^dag A_k, rho}).
struct lindblad_generator {
  op hamiltonian;
  std::vector<op> jump_ops;
  std::vector<double> rates;

  lindblad_generator(op hamiltonian_, std::vector<op> jump_ops_,
                     std::vector<double> rates_, const tolerances& tol = {});

  const partition& part() const { return hamiltonian.part; }
  cmatrix derivative(const cmatrix& rho) const;
};

// Fixed-step RK4 integration to time t. Each step re-symmetrizes, renormalizes
// the trace to its initial value, and checks positivity; a minimum eigenvalue
// below -tol.psd aborts (step too large for this generator).
density_matrix lindblad_evolve(const lindblad_generator& gen,
                               const density_matrix& rho, double t,
                               double step = 1e-3, const tolerances& tol = {});

}  // namespace qlab

#endif
