#include "qlab/matching.hpp"

#include <cmath>
#include <limits>

namespace qlab {

std::vector<int> max_weight_assignment(const rmatrix& weights) {
  if (weights.rows() != weights.cols())
    throw error("max_weight_assignment: weight matrix must be square");
  const int n = static_cast<int>(weights.rows());
  if (n == 0) return {};

  // classic potentials formulation on the cost matrix (top - weight)
  const double top = weights.maxCoeff();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weights(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) result[p[j] - 1] = j - 1;
  return result;
}

std::vector<int> match_eigenstates(const epistemic_state& a,
                                   const epistemic_state& b) {
  if (a.size() != b.size())
    throw error("match_eigenstates: state counts differ");
  const int n = a.size();
  rmatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w(i, j) = std::norm(a.states[i].amps.dot(b.states[j].amps));
  return max_weight_assignment(w);
}

}  // namespace qlab
