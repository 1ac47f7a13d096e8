#include "qlab/assignment.hpp"

#include <sstream>

#include "qlab/matfun.hpp"

namespace qlab {

op assignment_map(const density_matrix& rho_w,
                  const std::vector<std::string>& q_labels, const op& x,
                  const tolerances& tol) {
  const partition q_part = rho_w.part.sub(q_labels);
  if (!(x.part == q_part))
    throw error("assignment_map: operand partition does not match the Q factors");

  const cmatrix rho_q = partial_trace_raw(rho_w.mat, rho_w.part, q_labels);
  const cmatrix support = support_projector(rho_q, tol.psd);
  const double leak = max_abs(x.mat - support * x.mat * support);
  const double scale = std::max(1.0, max_abs(x.mat));
  if (leak > tol.orth * scale) {
    std::ostringstream msg;
    msg << "assignment_map: operand leaks outside the support of the reduced "
           "density (residual "
        << leak << ")";
    throw error(msg.str());
  }

  const cmatrix inv_root_q =
      embed(op(inv_sqrt_psd(rho_q, tol.psd), q_part), rho_w.part).mat;
  const cmatrix x_full = embed(op(x.mat, q_part), rho_w.part).mat;
  const cmatrix root_w = sqrt_psd(rho_w.mat, tol.psd);

  cmatrix lifted = root_w * inv_root_q * x_full * inv_root_q * root_w;
  return op(std::move(lifted), rho_w.part);
}

}  // namespace qlab
