#ifndef QLAB_MATFUN_HPP
#define QLAB_MATFUN_HPP

#include "qlab/common.hpp"

namespace qlab {

// Square root of a Hermitian PSD matrix via eigendecomposition; eigenvalues
// in (-clip, 0) are treated as zero, anything lower throws.
cmatrix sqrt_psd(const cmatrix& m, double clip = 1e-10);

// Pseudo-inverse square root on the support: eigenvalues <= threshold map to
// zero instead of blowing up, so rank-deficient densities stay usable.
cmatrix inv_sqrt_psd(const cmatrix& m, double threshold = 1e-10);

// Projector onto the span of eigenvectors with eigenvalue > threshold.
cmatrix support_projector(const cmatrix& m, double threshold = 1e-10);

}  // namespace qlab

#endif
