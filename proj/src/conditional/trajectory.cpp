#include "qlab/trajectory.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qlab {

namespace {

void check_stochastic(const rmatrix& m, std::size_t step, const tolerances& tol) {
  for (int c = 0; c < m.cols(); ++c) {
    double sum = 0.0;
    for (int r = 0; r < m.rows(); ++r) {
      if (m(r, c) < -tol.prob) {
        std::ostringstream msg;
        msg << "sample_trajectories: negative entry " << m(r, c) << " at step "
            << step;
        throw error(msg.str());
      }
      sum += std::max(0.0, m(r, c));
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "sample_trajectories: column " << c << " of step " << step
          << " sums to " << sum;
      throw error(msg.str());
    }
  }
}

int draw(std::mt19937_64& gen, const rvector& weights) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total = weights.sum();
  double u = unit(gen) * total;
  for (int k = 0; k < weights.size(); ++k) {
    u -= std::max(0.0, weights(k));
    if (u <= 0.0) return k;
  }
  return static_cast<int>(weights.size()) - 1;  // guard against roundoff
}

}  // namespace

trajectory_ensemble sample_trajectories(const std::vector<rmatrix>& cond_seq,
                                        const std::vector<double>& initial_p,
                                        int n, std::uint64_t seed,
                                        const std::vector<double>& times,
                                        const tolerances& tol) {
  if (n < 1) throw error("sample_trajectories: need at least one trajectory");
  const int states = static_cast<int>(initial_p.size());
  if (states == 0) throw error("sample_trajectories: empty initial distribution");

  for (std::size_t s = 0; s < cond_seq.size(); ++s) {
    if (cond_seq[s].rows() != states || cond_seq[s].cols() != states)
      throw error("sample_trajectories: matrix size does not match state count");
    check_stochastic(cond_seq[s], s, tol);
  }

  const std::size_t steps = cond_seq.size();
  std::vector<double> stamps = times;
  if (stamps.empty())
    for (std::size_t t = 0; t <= steps; ++t) stamps.push_back(static_cast<double>(t));
  if (stamps.size() != steps + 1)
    throw error("sample_trajectories: need one time stamp per step plus one");

  rvector p0(states);
  for (int k = 0; k < states; ++k) p0(k) = initial_p[k];

  trajectory_ensemble ens;
  ens.trajectories.reserve(n);
  ens.occupation = rmatrix::Zero(static_cast<int>(steps) + 1, states);

  for (int traj = 0; traj < n; ++traj) {
    const std::uint64_t sub_seed = split_seed(seed, traj);
    std::mt19937_64 gen(sub_seed);

    ontic_trajectory t;
    t.seed = sub_seed;
    t.times = stamps;
    t.indices.reserve(steps + 1);

    int current = draw(gen, p0);
    t.indices.push_back(current);
    ens.occupation(0, current) += 1.0;
    for (std::size_t s = 0; s < steps; ++s) {
      current = draw(gen, cond_seq[s].col(current));
      t.indices.push_back(current);
      ens.occupation(static_cast<int>(s) + 1, current) += 1.0;
    }
    ens.trajectories.push_back(std::move(t));
  }
  ens.occupation /= static_cast<double>(n);
  return ens;
}

}  // namespace qlab
