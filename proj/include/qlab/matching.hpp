#ifndef QLAB_MATCHING_HPP
#define QLAB_MATCHING_HPP

#include <vector>

#include "qlab/common.hpp"
#include "qlab/density.hpp"

namespace qlab {

// Maximum-total-weight assignment on a square weight matrix (Hungarian
// method); returns the column matched to each row. Used to decide which
// later-time eigenstate "is" which earlier-time one when labels cross.
std::vector<int> max_weight_assignment(const rmatrix& weights);

// Convenience: match the states of two epistemic decompositions by
// |<a_i|b_j>|^2 overlap weight; result[i] is the index in `b` assigned to
// a's i-th state.
std::vector<int> match_eigenstates(const epistemic_state& a,
                                   const epistemic_state& b);

}  // namespace qlab

#endif
