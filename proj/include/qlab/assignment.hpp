#ifndef QLAB_ASSIGNMENT_HPP
#define QLAB_ASSIGNMENT_HPP

#include <string>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/states.hpp"

namespace qlab {

// Nonlinear assignment mapping lifting an operator X on the subsystem picked
// out by q_labels to the full space of rho_w:
//   A[X] = rho_W^{1/2} (rho_Q^{-1/2} (x) 1) (X (x) 1) (rho_Q^{-1/2} (x) 1)
//          rho_W^{1/2}
// with the inverse square root taken on the support of rho_Q. Satisfies
// A[rho_Q] = rho_W identically. Throws when X leaks outside the support of
// rho_Q (relative residual above tol.orth), where the formula is ill-posed.
op assignment_map(const density_matrix& rho_w,
                  const std::vector<std::string>& q_labels, const op& x,
                  const tolerances& tol = {});

}  // namespace qlab

#endif
