#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include "qlab/density.hpp"
#include "qlab/kraus.hpp"
#include "qlab/scenario.hpp"
#include "qlab/states.hpp"
#include "qlab/swap.hpp"
#include "qlab/tables.hpp"

namespace qlab {

namespace {

std::array<double, 3> parse_unit_vector(const nlohmann::ordered_json& j,
                                        const std::string& who) {
  if (!j.is_array() || j.size() != 3)
    throw error(who + " must be a 3-component vector");
  std::array<double, 3> v{j[0].get<double>(), j[1].get<double>(),
                          j[2].get<double>()};
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (norm < 1e-12) throw error(who + " must be nonzero");
  if (std::abs(norm - 1.0) > 1e-9)
    throw error(who + " must be a unit vector");
  return v;
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// the spin-pair state with explicit degeneracy-breaking perturbations:
// (1/sqrt(N)) ((1+eps)|ud> - (1-eps)|du> + (eps/2)|uu> + (eps/2)|dd>)
state_vector perturbed_singlet(double eps, const partition& pair) {
  cvector amps = cvector::Zero(4);
  amps(pair.pack({0, 1})) = 1.0 + eps;
  amps(pair.pack({1, 0})) = -(1.0 - eps);
  amps(pair.pack({0, 0})) = eps / 2.0;
  amps(pair.pack({1, 1})) = eps / 2.0;
  amps /= amps.norm();
  return state_vector(amps, pair);
}

double spin_correlation(const density_matrix& rho,
                        const std::array<double, 3>& a,
                        const std::array<double, 3>& b) {
  const cmatrix sa = dot_sigma(a[0], a[1], a[2]);
  const cmatrix sb = dot_sigma(b[0], b[1], b[2]);
  return (rho.mat * Eigen::kroneckerProduct(sa, sb)).trace().real();
}

}  // namespace

scenario_report epr_bohm(const scenario_config& cfg) {
  nlohmann::ordered_json params = scenario_registry()[1].default_parameters;
  for (const auto& [key, value] : cfg.parameters.items()) params[key] = value;
  const auto a = parse_unit_vector(params["a"], "epr_bohm: a");
  const auto b = parse_unit_vector(params["b"], "epr_bohm: b");
  const double eps = params.value("eps", 1e-6);
  if (eps < 0.0 || eps >= 0.1)
    throw error("epr_bohm: eps must lie in [0, 0.1)");

  const tolerances tol = tolerances{}.scaled(cfg.tolerance_scale);
  scenario_report rep;
  rep.name = "epr_bohm";
  rep.inputs = params;

  partition pair({"1", "2"}, {2, 2});
  state_vector psi = perturbed_singlet(eps, pair);
  density_matrix rho = density_matrix::pure(psi);

  const double corr = spin_correlation(rho, a, b);
  const double corr_tol = std::max(1e-9, 10.0 * eps) * cfg.tolerance_scale;
  rep.outputs["correlation"] = corr;
  rep.outputs["expected_correlation"] = -dot3(a, b);
  rep.check_abs("correlation_matches_minus_a_dot_b", corr + dot3(a, b), corr_tol);

  // epistemic states before any measurement
  epistemic_state before_pair = spectral_decompose(rho);
  epistemic_state before_1 = spectral_decompose(partial_trace(rho, {"1"}));
  epistemic_state before_2 = spectral_decompose(partial_trace(rho, {"2"}));
  rep.outputs["before"] = {{"pair_spectrum", before_pair.probs},
                           {"wing_1_spectrum", before_1.probs},
                           {"wing_2_spectrum", before_2.probs}};
  rep.check_abs("before_parent_is_pure", before_pair.probs[0] - 1.0,
                1e-12 * cfg.tolerance_scale);
  rep.check_abs("before_wing_1_is_even", before_1.probs[0] - 0.5, corr_tol);
  rep.check_abs("before_wing_2_is_even", before_2.probs[0] - 0.5, corr_tol);

  // joint outcomes of the two wings conditioned on the pair's ontic state
  cond_prob_table joint = kinematical_cond_probs(rho, {{"1"}, {"2"}}, tol);
  auto up_index = [](const epistemic_state& es) {
    return std::abs(es.states[0].amps(0)) > std::abs(es.states[0].amps(1)) ? 0 : 1;
  };
  const int up1 = up_index(before_1);
  const int up2 = up_index(before_2);
  const double anti = joint.at({up1, 1 - up2}, 0) + joint.at({1 - up1, up2}, 0);
  rep.outputs["joint_anticorrelated_probability"] = anti;
  rep.check_at_least("joint_outcomes_anticorrelated", anti,
                     1.0 - 10.0 * eps - 1e-9);

  // after a local spin-z measurement: non-selective projection on wing 1
  partition wing = partition::single("1", 2);
  std::vector<op> projectors;
  for (int s = 0; s < 2; ++s) {
    cmatrix p = cmatrix::Zero(2, 2);
    p(s, s) = 1.0;
    projectors.push_back(embed(op(p, wing), pair));
  }
  density_matrix after = apply(luders_channel(projectors, tol), rho);
  epistemic_state after_pair = spectral_decompose(after);
  rep.outputs["after"] = {{"pair_spectrum", after_pair.probs}};
  rep.check_abs("after_top_states_are_even",
                std::max(std::abs(after_pair.probs[0] - 0.5),
                         std::abs(after_pair.probs[1] - 0.5)),
                corr_tol);
  rep.check_abs("after_residual_weight", after_pair.probs[2] + after_pair.probs[3],
                std::max(1e-12, eps * eps) * cfg.tolerance_scale);

  // the degeneracy-breaking scale doubles as a swap-block model: track the
  // near-crossing eigenvalue curves over the +-10 dt_swap window
  if (eps > 0.0) {
    swap_block_model model;
    model.rho0 = 0.5;
    model.xi = complexd(eps, 0.0);
    model.tau = 1.0;
    std::vector<double> times;
    for (int s = -10; s <= 10; ++s)
      times.push_back(s * model.rho0 * eps * model.tau);
    swap_report sw = eigenstate_swap_analysis(model, times);
    curve high{"swap_lambda_high", "time [tau]", "eigenvalue [dimensionless]",
               sw.times, sw.lambda_high};
    curve low{"swap_lambda_low", "time [tau]", "eigenvalue [dimensionless]",
              sw.times, sw.lambda_low};
    rep.curves.push_back(high);
    rep.curves.push_back(low);
    rep.outputs["swap"] = {{"dt_swap", sw.dt_swap},
                           {"gap_at_crossing", sw.gap_at_t0},
                           {"label_follow_probability", sw.label_follow_prob},
                           {"state_follow_probability", sw.state_follow_prob}};
  }
  return rep;
}

scenario_report bell_check(const scenario_config& cfg) {
  nlohmann::ordered_json params = scenario_registry()[2].default_parameters;
  for (const auto& [key, value] : cfg.parameters.items()) params[key] = value;
  const auto a = parse_unit_vector(params["a"], "bell_check: a");
  const auto b = parse_unit_vector(params["b"], "bell_check: b");
  const auto c = parse_unit_vector(params["c"], "bell_check: c");

  scenario_report rep;
  rep.name = "bell_check";
  rep.inputs = params;

  partition pair({"1", "2"}, {2, 2});
  density_matrix rho = density_matrix::pure(perturbed_singlet(0.0, pair));

  const double e_ab = spin_correlation(rho, a, b);
  const double e_ac = spin_correlation(rho, a, c);
  const double e_bc = spin_correlation(rho, b, c);
  const double lhs = std::abs(e_ab - e_ac);
  const double rhs = 1.0 + e_bc;
  rep.outputs["lhs"] = lhs;
  rep.outputs["rhs"] = rhs;
  rep.outputs["correlations"] = {{"ab", e_ab}, {"ac", e_ac}, {"bc", e_bc}};
  rep.outputs["quantum_violation"] = lhs > rhs;
  rep.check_abs("lhs_matches_analytic", lhs - std::abs(dot3(a, b) - dot3(a, c)),
                1e-12 * cfg.tolerance_scale);
  rep.check_abs("rhs_matches_analytic", rhs - (1.0 - dot3(b, c)),
                1e-12 * cfg.tolerance_scale);

  // all deterministic anti-correlated strategies: A(n) in {+1, -1} per
  // direction, with B = -A; mixtures inherit the inequality by convexity
  int satisfied = 0;
  for (int mask = 0; mask < 8; ++mask) {
    const double aa = (mask & 1) ? 1.0 : -1.0;
    const double ab2 = (mask & 2) ? 1.0 : -1.0;
    const double ac2 = (mask & 4) ? 1.0 : -1.0;
    const double lhv_lhs = std::abs(-aa * ab2 + aa * ac2);
    const double lhv_rhs = 1.0 - ab2 * ac2;
    if (lhv_lhs <= lhv_rhs + 1e-12) ++satisfied;
  }
  rep.outputs["lhv_strategies_satisfying"] = satisfied;
  rep.check_abs("all_lhv_strategies_satisfy_inequality",
                static_cast<double>(satisfied - 8), 0.0);

  // sweep the third direction from a toward b inside their plane
  std::array<double, 3> b_perp{};
  const double ab_dot = dot3(a, b);
  double perp_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    b_perp[static_cast<std::size_t>(i)] =
        b[static_cast<std::size_t>(i)] - ab_dot * a[static_cast<std::size_t>(i)];
    perp_norm += b_perp[static_cast<std::size_t>(i)] * b_perp[static_cast<std::size_t>(i)];
  }
  perp_norm = std::sqrt(perp_norm);
  if (perp_norm > 1e-9) {
    curve lhs_curve{"bell_lhs_vs_angle", "angle [rad]", "lhs [dimensionless]", {}, {}};
    curve rhs_curve{"bell_rhs_vs_angle", "angle [rad]", "rhs [dimensionless]", {}, {}};
    const int samples = 65;
    for (int s = 0; s < samples; ++s) {
      const double phi = (std::acos(-1.0) / 2.0) * s / (samples - 1);
      std::array<double, 3> cs{};
      for (int i = 0; i < 3; ++i)
        cs[static_cast<std::size_t>(i)] =
            std::cos(phi) * a[static_cast<std::size_t>(i)] +
            std::sin(phi) * b_perp[static_cast<std::size_t>(i)] / perp_norm;
      const double se_ac = spin_correlation(rho, a, cs);
      const double se_bc = spin_correlation(rho, b, cs);
      lhs_curve.x.push_back(phi);
      lhs_curve.y.push_back(std::abs(e_ab - se_ac));
      rhs_curve.x.push_back(phi);
      rhs_curve.y.push_back(1.0 + se_bc);
    }
    rep.curves.push_back(lhs_curve);
    rep.curves.push_back(rhs_curve);
  }
  return rep;
}

scenario_report ghz_mermin(const scenario_config& cfg) {
  scenario_report rep;
  rep.name = "ghz_mermin";
  rep.inputs = cfg.parameters;

  partition three({"1", "2", "3"}, {2, 2, 2});
  cvector amps = cvector::Zero(8);
  amps(three.pack({0, 0, 0})) = 1.0 / std::sqrt(2.0);
  amps(three.pack({1, 1, 1})) = -1.0 / std::sqrt(2.0);
  state_vector ghz(amps, three);

  auto spin_product = [&](const std::array<char, 3>& axes) {
    cmatrix m = cmatrix::Identity(8, 8);
    for (int q = 0; q < 3; ++q) {
      const cmatrix s = axes[static_cast<std::size_t>(q)] == 'x' ? pauli_x()
                                                                 : pauli_y();
      partition single = partition::single(std::to_string(q + 1), 2);
      m = embed(op(s, single), three).mat * m;
    }
    return m;
  };

  const double r_xyy = (spin_product({'x', 'y', 'y'}) * ghz.amps - ghz.amps).norm();
  const double r_yxy = (spin_product({'y', 'x', 'y'}) * ghz.amps - ghz.amps).norm();
  const double r_yyx = (spin_product({'y', 'y', 'x'}) * ghz.amps - ghz.amps).norm();
  const double r_xxx = (spin_product({'x', 'x', 'x'}) * ghz.amps + ghz.amps).norm();

  const double tol = 1e-12 * cfg.tolerance_scale;
  rep.check_abs("xyy_eigenvalue_plus_one", r_xyy, tol);
  rep.check_abs("yxy_eigenvalue_plus_one", r_yxy, tol);
  rep.check_abs("yyx_eigenvalue_plus_one", r_yyx, tol);
  rep.check_abs("xxx_eigenvalue_minus_one", r_xxx, tol);

  // every local instruction set (m_x, m_y per spin) against the four products
  int consistent = 0;
  for (int mask = 0; mask < 64; ++mask) {
    int m[6];
    for (int bit = 0; bit < 6; ++bit) m[bit] = (mask >> bit) & 1 ? 1 : -1;
    const int* mx = m;      // m[0..2]: x instructions
    const int* my = m + 3;  // m[3..5]: y instructions
    const bool ok = mx[0] * my[1] * my[2] == 1 && my[0] * mx[1] * my[2] == 1 &&
                    my[0] * my[1] * mx[2] == 1 && mx[0] * mx[1] * mx[2] == -1;
    if (ok) ++consistent;
  }
  rep.outputs["consistent_instruction_sets"] = consistent;
  rep.outputs["instruction_sets_total"] = 64;
  rep.check_abs("no_consistent_local_instructions",
                static_cast<double>(consistent), 0.0);
  return rep;
}

}  // namespace qlab
