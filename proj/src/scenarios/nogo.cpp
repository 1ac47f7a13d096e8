#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <eigen3/Eigen/Dense>
#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include "qlab/density.hpp"
#include "qlab/scenario.hpp"
#include "qlab/states.hpp"

namespace qlab {

namespace {

// Hadamard on the recorded qubit-detector subspace {|+, '+'>, |-, '-'>},
// fixing the empty detector position and the unrecorded combinations.
// detector basis: 0 = empty, 1 = '+', 2 = '-'; qubit basis: 0 = +, 1 = -
cmatrix recorded_hadamard() {
  partition qd({"q", "d"}, {2, 3});
  const int plus = qd.pack({0, 1});
  const int minus = qd.pack({1, 2});
  cmatrix u = cmatrix::Identity(6, 6);
  const double r = 1.0 / std::sqrt(2.0);
  u(plus, plus) = r;
  u(plus, minus) = r;
  u(minus, plus) = r;
  u(minus, minus) = -r;
  return u;
}

std::vector<double> sorted_probs(const density_matrix& rho) {
  return spectral_decompose(rho).probs;
}

double max_list_dev(const std::vector<double>& got,
                    const std::vector<double>& want) {
  double dev = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i)
    dev = std::max(dev, std::abs(got[i] - want[i]));
  return dev;
}

}  // namespace

scenario_report myrvold(const scenario_config& cfg) {
  scenario_report rep;
  rep.name = "myrvold";
  rep.inputs = cfg.parameters;
  const double tol = 1e-12 * cfg.tolerance_scale;

  // two far-apart qubits, each continuously read by a three-state detector
  partition whole({"1", "A", "2", "B"}, {2, 3, 2, 3});
  const double r12 = 1.0 / std::sqrt(12.0);
  cvector alpha = cvector::Zero(whole.total_dim());
  alpha(whole.pack({0, 1, 0, 1})) = r12;
  alpha(whole.pack({0, 1, 1, 2})) = -r12;
  alpha(whole.pack({1, 2, 0, 1})) = -r12;
  alpha(whole.pack({1, 2, 1, 2})) = -3.0 * r12;
  state_vector psi_alpha(alpha, whole);

  cvector beta = cvector::Zero(whole.total_dim());
  const double r3 = 1.0 / std::sqrt(3.0);
  beta(whole.pack({0, 1, 0, 1})) = -r3;
  beta(whole.pack({0, 1, 1, 2})) = r3;
  beta(whole.pack({1, 2, 0, 1})) = r3;
  state_vector psi_beta(beta, whole);

  // local evolution: one Hadamard per qubit-detector pair, with the sign the
  // printed fourth line drops restored so the map is unitary
  const cmatrix h6 = recorded_hadamard();
  rep.check_abs("recorded_hadamard_unitarity",
                max_abs((h6 * h6.adjoint() - cmatrix::Identity(6, 6)).eval()),
                tol);
  partition left({"1", "A"}, {2, 3});
  partition right({"2", "B"}, {2, 3});
  const cmatrix u = embed(op(h6, left), whole).mat * embed(op(h6, right), whole).mat;

  const double transport = (u * psi_alpha.amps - psi_beta.amps).norm();
  rep.outputs["hadamard_sign_corrected"] = true;
  rep.outputs["transport_residual"] = transport;
  rep.check_abs("hadamard_transport_residual", transport, tol);

  density_matrix rho_alpha = density_matrix::pure(psi_alpha);
  density_matrix rho_beta = density_matrix::pure(psi_beta);
  std::vector<double> spec_alpha =
      sorted_probs(partial_trace(rho_alpha, {"1", "2"}));
  std::vector<double> spec_beta =
      sorted_probs(partial_trace(rho_beta, {"1", "2"}));
  rep.outputs["qubit_pair_spectrum_alpha"] = spec_alpha;
  rep.outputs["qubit_pair_spectrum_beta"] = spec_beta;
  rep.check_abs("alpha_slice_spectrum",
                max_list_dev(spec_alpha, {9.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12}),
                tol);
  rep.check_abs("beta_slice_spectrum",
                max_list_dev(spec_beta, {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}), tol);
  return rep;
}

scenario_report kochen_specker(const scenario_config& cfg) {
  scenario_report rep;
  rep.name = "kochen_specker";
  rep.inputs = cfg.parameters;
  const double tol = 1e-12 * cfg.tolerance_scale;

  const cmatrix id2 = cmatrix::Identity(2, 2);
  auto two = [&](const cmatrix& first, const cmatrix& second) {
    return Eigen::kroneckerProduct(first, second).eval();
  };
  // the 3x3 observable square: rows and columns are mutually commuting triples
  const std::array<std::array<cmatrix, 3>, 3> square = {{
      {two(id2, pauli_z()), two(pauli_z(), id2), two(pauli_z(), pauli_z())},
      {two(pauli_x(), id2), two(id2, pauli_x()), two(pauli_x(), pauli_x())},
      {two(pauli_x(), pauli_z()), two(pauli_z(), pauli_x()),
       two(pauli_y(), pauli_y())},
  }};

  double worst_commutator = 0.0;
  for (int line = 0; line < 3; ++line)
    for (int u = 0; u < 3; ++u)
      for (int v = u + 1; v < 3; ++v) {
        const cmatrix row_c = square[line][u] * square[line][v] -
                              square[line][v] * square[line][u];
        const cmatrix col_c = square[u][line] * square[v][line] -
                              square[v][line] * square[u][line];
        worst_commutator = std::max({worst_commutator, max_abs(row_c), max_abs(col_c)});
      }
  rep.outputs["worst_commutator"] = worst_commutator;
  rep.check_abs("within_line_commutators", worst_commutator, tol);

  const cmatrix id4 = cmatrix::Identity(4, 4);
  double worst_line_product = 0.0;
  std::vector<int> row_signs, col_signs;
  for (int line = 0; line < 3; ++line) {
    const cmatrix row_p = square[line][0] * square[line][1] * square[line][2];
    const cmatrix col_p = square[0][line] * square[1][line] * square[2][line];
    const int rs = row_p(0, 0).real() > 0 ? 1 : -1;
    const int cs = col_p(0, 0).real() > 0 ? 1 : -1;
    row_signs.push_back(rs);
    col_signs.push_back(cs);
    worst_line_product = std::max({worst_line_product,
                                   max_abs((row_p - double(rs) * id4).eval()),
                                   max_abs((col_p - double(cs) * id4).eval())});
  }
  rep.outputs["row_product_signs"] = row_signs;
  rep.outputs["column_product_signs"] = col_signs;
  rep.check_abs("line_products_proportional_to_identity", worst_line_product, tol);
  const bool signs_ok = row_signs == std::vector<int>{1, 1, 1} &&
                        col_signs == std::vector<int>{1, 1, -1};
  rep.check_abs("line_product_sign_pattern", signs_ok ? 0.0 : 1.0, 0.0);

  // every +-1 assignment to the nine observables against the six constraints
  int consistent = 0;
  for (int mask = 0; mask < 512; ++mask) {
    int v[3][3];
    for (int cell = 0; cell < 9; ++cell)
      v[cell / 3][cell % 3] = (mask >> cell) & 1 ? 1 : -1;
    bool ok = true;
    for (int line = 0; line < 3 && ok; ++line) {
      if (v[line][0] * v[line][1] * v[line][2] != row_signs[static_cast<std::size_t>(line)])
        ok = false;
      if (v[0][line] * v[1][line] * v[2][line] != col_signs[static_cast<std::size_t>(line)])
        ok = false;
    }
    if (ok) ++consistent;
  }
  rep.outputs["consistent_assignments"] = consistent;
  rep.outputs["assignments_total"] = 512;
  rep.check_abs("no_consistent_value_assignment", static_cast<double>(consistent),
                0.0);

  // projector sums per line: computed spectra reported beside the published
  // lists, which disagree on multiplicities; recorded, not asserted
  auto projector = [&](const cmatrix& sigma) {
    return ((id4 - sigma) / 2.0).eval();
  };
  const std::vector<std::vector<double>> published = {
      {2, 2, 0, 0}, {2, 2, 0, 0}, {3, 3, 1, 1},
      {2, 2, 0, 0}, {2, 2, 0, 0}, {2, 2, 0, 0}};
  nlohmann::ordered_json sums = nlohmann::ordered_json::array();
  for (int line = 0; line < 6; ++line) {
    cmatrix total = cmatrix::Zero(4, 4);
    for (int cell = 0; cell < 3; ++cell)
      total += line < 3 ? projector(square[cell][line])   // column sums
                        : projector(square[line - 3][cell]);  // row sums
    Eigen::SelfAdjointEigenSolver<cmatrix> solver(total);
    std::vector<double> eig(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + 4);
    std::reverse(eig.begin(), eig.end());
    const auto& want = published[static_cast<std::size_t>(line)];
    bool match = true;
    for (int i = 0; i < 4; ++i)
      if (std::abs(eig[static_cast<std::size_t>(i)] - want[static_cast<std::size_t>(i)]) > 1e-9)
        match = false;
    nlohmann::ordered_json entry;
    entry["name"] = (line < 3 ? "A" : "B") + std::to_string(line % 3 + 1);
    entry["computed_eigenvalues"] = eig;
    entry["published_eigenvalues"] = want;
    entry["matches_published"] = match;
    sums.push_back(entry);
  }
  rep.outputs["projector_line_sums"] = sums;
  return rep;
}

scenario_report pbr(const scenario_config& cfg) {
  scenario_report rep;
  rep.name = "pbr";
  rep.inputs = cfg.parameters;
  const double tol = 1e-12 * cfg.tolerance_scale;

  cvector zero(2), one(2), plus(2), minus(2);
  zero << 1, 0;
  one << 0, 1;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  auto prod = [](const cvector& a, const cvector& b) {
    return Eigen::kroneckerProduct(a, b).eval();
  };

  std::vector<cvector> xi = {
      (prod(zero, one) + prod(one, zero)) / std::sqrt(2.0),
      (prod(zero, minus) + prod(one, plus)) / std::sqrt(2.0),
      (prod(plus, one) + prod(minus, zero)) / std::sqrt(2.0),
      (prod(plus, minus) + prod(minus, plus)) / std::sqrt(2.0)};
  const std::vector<cvector> preparations = {prod(zero, zero), prod(zero, plus),
                                             prod(plus, zero), prod(plus, plus)};

  double gram_dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const complexd g = xi[static_cast<std::size_t>(i)].dot(xi[static_cast<std::size_t>(j)]);
      gram_dev = std::max(gram_dev, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  rep.outputs["gram_deviation"] = gram_dev;
  rep.check_abs("measurement_basis_orthonormal", gram_dev, tol);

  // Born weights b(i, j) = |<xi_i | preparation_j>|^2; outcome i is forbidden
  // for preparation i
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  double diag_dev = 0.0;
  int zero_counts_ok = 0;
  for (int j = 0; j < 4; ++j) {
    std::vector<double> col;
    int zeros = 0;
    for (int i = 0; i < 4; ++i) {
      const double w = std::norm(
          xi[static_cast<std::size_t>(i)].dot(preparations[static_cast<std::size_t>(j)]));
      col.push_back(w);
      if (w <= 1e-12) ++zeros;
    }
    diag_dev = std::max(diag_dev, col[static_cast<std::size_t>(j)]);
    if (zeros == 1) ++zero_counts_ok;
    table.push_back(col);
  }
  rep.outputs["born_weights_by_preparation"] = table;
  rep.check_abs("designated_overlaps_vanish", diag_dev, tol);
  rep.check_abs("one_forbidden_outcome_per_preparation",
                static_cast<double>(zero_counts_ok - 4), 0.0);
  return rep;
}

}  // namespace qlab
