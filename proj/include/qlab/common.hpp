#ifndef QLAB_COMMON_HPP
#define QLAB_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <eigen3/Eigen/Dense>

namespace qlab {

using complexd = std::complex<double>;
using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using rvector = Eigen::VectorXd;
using rmatrix = Eigen::MatrixXd;

// Thrown for contract violations (bad dimensions, invalid states, unsupported
// inputs). The CLI maps these to the usage/config exit code.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical tolerances. All checks in the library take these as an explicit
// argument (default-constructed unless the caller overrides), so there is no
// global mutable state to fight over between threads.
struct tolerances {
  double norm = 1e-9;   // state-vector normalization
  double herm = 1e-9;   // Hermiticity residual (max-norm)
  double trace = 1e-9;  // trace deviation
  double psd = 1e-10;   // eigenvalue clip threshold; below -psd is an error
  double orth = 1e-8;   // eigenvector orthogonality
  double tp = 1e-9;     // Kraus completeness residual
  double prob = 1e-10;  // probability normalization residual

  // Uniformly loosen (or tighten) every tolerance; used by --tolerance-scale.
  tolerances scaled(double factor) const {
    tolerances t = *this;
    t.norm *= factor;
    t.herm *= factor;
    t.trace *= factor;
    t.psd *= factor;
    t.orth *= factor;
    t.tp *= factor;
    t.prob *= factor;
    return t;
  }
};

// Desk-scale guard: tensor products that would exceed this total dimension are
// rejected rather than allowed to allocate quadratic memory by accident.
inline constexpr int default_dim_cap = 256;

// Max-norm of a matrix (largest absolute entry); the residual measure used
// throughout for "agrees with" checks.
inline double max_abs(const cmatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const cmatrix& m) {
  return max_abs(m - m.adjoint());
}

// splitmix64: the documented stream-split function. Deriving per-stream seeds
// as split(seed, stream) keeps parallel sampling reproducible regardless of
// scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x51ab5e512ULL));
}

}  // namespace qlab

#endif
