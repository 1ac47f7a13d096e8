#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <eigen3/Eigen/Dense>
#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include "qlab/density.hpp"
#include "qlab/kraus.hpp"
#include "qlab/lindblad.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"
#include "qlab/states.hpp"

namespace qlab {

namespace {

cmatrix evolution_operator(const cmatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(h);
  cvector phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases(i) = std::exp(complexd(0.0, -solver.eigenvalues()(i) * t));
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

// survival probability of |0> under N unitary intervals with a projective
// reset after each one; the reset makes the chain a simple product
double zeno_survival(const cmatrix& h, double total_time, int n) {
  const cmatrix u = evolution_operator(h, total_time / n);
  cmatrix p = cmatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  cmatrix rho = p;
  double survival = 1.0;
  for (int step = 0; step < n; ++step) {
    const cmatrix moved = u * rho * u.adjoint();
    const cmatrix kept = p * moved * p;
    const double weight = kept.trace().real();
    if (weight <= 0.0) return 0.0;
    survival *= weight;
    rho = kept / weight;
  }
  return survival;
}

}  // namespace

scenario_report quantum_zeno(const scenario_config& cfg) {
  nlohmann::ordered_json params = scenario_registry()[5].default_parameters;
  for (const auto& [key, value] : cfg.parameters.items()) params[key] = value;
  const double beta = params.value("beta", 1.0);
  const double t = params.value("t", 1.0);
  const double alpha = params.value("alpha", 0.5);
  std::vector<int> n_list = params.value("n_list", std::vector<int>{});
  if (beta <= 0.0 || t <= 0.0) throw error("quantum_zeno: beta and t must be positive");
  if (alpha <= 0.0) throw error("quantum_zeno: alpha must be positive");
  if (n_list.empty()) throw error("quantum_zeno: n_list must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw error("quantum_zeno: counts must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw error("quantum_zeno: n_list must be strictly increasing");
  }
  if (beta * t / n_list.front() >= std::acos(-1.0) / 2.0)
    throw error("quantum_zeno: beta * t / N must stay below pi/2");

  scenario_report rep;
  rep.name = "quantum_zeno";
  rep.inputs = params;

  // two-level Hamiltonian whose energy spread in |0> is exactly beta
  const cmatrix h = beta * pauli_x();

  // short-interval survival against the quadratic law
  const double dt_quad = 0.01 / beta;
  const double single = zeno_survival(h, dt_quad, 1);
  const double quadratic = 1.0 - beta * beta * dt_quad * dt_quad;
  rep.outputs["single_interval_survival"] = single;
  rep.outputs["quadratic_law_value"] = quadratic;
  rep.check_abs("short_interval_quadratic_survival",
                (single - quadratic) / quadratic, 1e-6 * cfg.tolerance_scale);

  curve survival{"survival_vs_resets", "resets [count]",
                 "survival_probability [dimensionless]", {}, {}};
  curve decay{"discrete_exponential_vs_resets", "resets [count]",
              "survival_probability [dimensionless]", {}, {}};
  bool monotone = true;
  double prev = -1.0;
  for (int n : n_list) {
    const double s = zeno_survival(h, t, n);
    if (prev >= 0.0 && s < prev - 1e-12) monotone = false;
    prev = s;
    survival.x.push_back(n);
    survival.y.push_back(s);
    decay.x.push_back(n);
    decay.y.push_back(std::pow(1.0 - alpha * t / n, n));
  }
  rep.curves.push_back(survival);
  rep.curves.push_back(decay);
  rep.outputs["final_survival"] = survival.y.back();
  rep.check_abs("survival_monotone_in_resets", monotone ? 0.0 : 1.0, 0.0);
  rep.check_at_least("frequent_resets_approach_unity", survival.y.back(),
                     1.0 - 2.0 * beta * beta * t * t / n_list.back());

  // linear regime: the discrete product converges to the exponential law
  const double discrete = std::pow(1.0 - alpha * t / 1000.0, 1000);
  const double exponential = std::exp(-alpha * t);
  rep.outputs["discrete_decay_n1000"] = discrete;
  rep.outputs["exponential_law"] = exponential;
  rep.check_abs("linear_regime_matches_exponential",
                (discrete - exponential) / exponential, 0.01);
  return rep;
}

scenario_report no_communication(const scenario_config& cfg) {
  nlohmann::ordered_json params = scenario_registry()[8].default_parameters;
  for (const auto& [key, value] : cfg.parameters.items()) params[key] = value;
  const std::string operation = params.value("operation", "all");
  const double gamma = params.value("gamma", 0.8);
  const double time = params.value("time", 0.5);
  if (gamma < 0.0 || time <= 0.0)
    throw error("no_communication: gamma must be >= 0 and time positive");
  const bool run_unitary = operation == "all" || operation == "unitary";
  const bool run_dephasing = operation == "all" || operation == "dephasing";
  const bool run_lindblad = operation == "all" || operation == "lindblad";
  if (!run_unitary && !run_dephasing && !run_lindblad)
    throw error("no_communication: operation must be one of all, unitary, "
                "dephasing, lindblad");

  scenario_report rep;
  rep.name = "no_communication";
  rep.inputs = params;

  partition ab({"A", "B"}, {2, 2});
  partition b = partition::single("B", 2);
  cvector bell = cvector::Zero(4);
  bell(ab.pack({0, 0})) = 1.0 / std::sqrt(2.0);
  bell(ab.pack({1, 1})) = 1.0 / std::sqrt(2.0);
  density_matrix rho = density_matrix::pure(state_vector(bell, ab));
  const density_matrix rho_a = partial_trace(rho, {"A"});

  const double kraus_tol = 1e-12 * cfg.tolerance_scale;
  auto local_deviation = [&](const kraus_channel& local) {
    std::vector<cmatrix> lifted;
    for (const cmatrix& e : local.kraus_ops)
      lifted.push_back(Eigen::kroneckerProduct(cmatrix::Identity(2, 2), e).eval());
    density_matrix moved = apply(kraus_channel::checked(lifted, ab), rho);
    return max_abs((partial_trace(moved, {"A"}).mat - rho_a.mat).eval());
  };

  if (run_unitary) {
    const double dev = local_deviation(
        unitary_channel(random_unitary(2, cfg.seed + 1), b));
    rep.outputs["unitary_deviation"] = dev;
    rep.check_abs("local_unitary_leaves_remote_state", dev, kraus_tol);
  }
  if (run_dephasing) {
    std::vector<cmatrix> ops = {std::sqrt(0.5) * cmatrix::Identity(2, 2),
                                std::sqrt(0.5) * pauli_z()};
    const double dev = local_deviation(kraus_channel::checked(ops, b));
    rep.outputs["dephasing_deviation"] = dev;
    rep.check_abs("local_dephasing_leaves_remote_state", dev, kraus_tol);
  }
  if (run_lindblad) {
    // separable Hamiltonian plus a jump operator confined to B: the joint
    // reduction must track the standalone evolution of A
    const cmatrix h_a = 0.9 * pauli_z() + 0.4 * pauli_x();
    const cmatrix h_b = 0.7 * pauli_x() + 0.2 * pauli_y();
    const cmatrix h_joint =
        Eigen::kroneckerProduct(h_a, cmatrix::Identity(2, 2)).eval() +
        Eigen::kroneckerProduct(cmatrix::Identity(2, 2), h_b).eval();
    cmatrix lower = cmatrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    lindblad_generator joint(
        op(h_joint, ab),
        {op(Eigen::kroneckerProduct(cmatrix::Identity(2, 2), lower).eval(), ab)},
        {gamma});
    density_matrix evolved = lindblad_evolve(joint, rho, time);

    partition a = partition::single("A", 2);
    lindblad_generator alone(op(h_a, a), {}, {});
    density_matrix reference = lindblad_evolve(alone, rho_a, time);

    const double dev =
        max_abs((partial_trace(evolved, {"A"}).mat - reference.mat).eval());
    rep.outputs["lindblad_deviation"] = dev;
    // fourth-order integrator with the default step: allow accumulated error
    rep.check_abs("separable_lindblad_tracks_standalone", dev,
                  1e-8 * cfg.tolerance_scale);
  }
  return rep;
}

}  // namespace qlab
