// Final acceptance gate: every release criterion timed and reported on one
// line with its computed values and tolerances. Exits nonzero if any line
// fails its checks or its runtime cap.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/cli.hpp"
#include "qlab/density.hpp"
#include "qlab/kraus.hpp"
#include "qlab/metric.hpp"
#include "qlab/rng.hpp"
#include "qlab/scenario.hpp"
#include "qlab/swap.hpp"
#include "qlab/tables.hpp"
#include "qlab/trajectory.hpp"

using namespace qlab;

namespace {

struct outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void require(outcome& o, bool ok, const std::string& label, double value,
             double tolerance) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += ", ";
  o.detail += label + " = " + num(value) + " (tol " + num(tolerance) + ")" +
              (ok ? "" : " <-- FAIL");
}

void require_abs(outcome& o, const std::string& label, double value,
                 double tolerance) {
  require(o, std::abs(value) <= tolerance, label, value, tolerance);
}

scenario_config config(const std::string& name) {
  scenario_config cfg;
  cfg.name = name;
  cfg.parameters = nlohmann::ordered_json::object();
  return cfg;
}

double check_value(const scenario_report& rep, const std::string& name) {
  for (const check_result& c : rep.checks)
    if (c.name == name) return c.value;
  return std::numeric_limits<double>::quiet_NaN();
}

const property_result& property(const suite_result& suite,
                                const std::string& name) {
  for (const property_result& p : suite.properties)
    if (p.name == name) return p;
  static property_result missing;
  return missing;
}

void require_property(outcome& o, const suite_result& suite,
                      const std::string& name) {
  const property_result& p = property(suite, name);
  require(o, p.trials > 0 && p.passed(), name + " worst", p.worst_residual,
          p.threshold);
}

// 1. spin correlation of the parallel-spin-zero pair equals -a.b
outcome epr_correlation() {
  outcome o;
  std::mt19937_64 gen(2026);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double a[3], b[3], na = 0.0, nb = 0.0, dot = 0.0;
    for (int i = 0; i < 3; ++i) {
      a[i] = normal(gen);
      b[i] = normal(gen);
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    na = std::sqrt(na);
    nb = std::sqrt(nb);
    scenario_config cfg = config("epr_bohm");
    cfg.parameters["eps"] = 0.0;
    cfg.parameters["a"] = {a[0] / na, a[1] / na, a[2] / na};
    cfg.parameters["b"] = {b[0] / nb, b[1] / nb, b[2] / nb};
    for (int i = 0; i < 3; ++i) dot += (a[i] / na) * (b[i] / nb);
    const double corr =
        run_scenario(cfg).outputs["correlation"].get<double>();
    worst = std::max(worst, std::abs(corr + dot));
  }
  require_abs(o, "worst |corr + a.b| over 100 pairs", worst, 1e-9);

  scenario_config aligned = config("epr_bohm");
  aligned.parameters["eps"] = 0.0;
  const double corr = run_scenario(aligned).outputs["correlation"].get<double>();
  require_abs(o, "aligned-axis corr + 1", corr + 1.0, 1e-12);
  return o;
}

// 2. quantum side violates the inequality the hidden strategies satisfy
outcome bell_violation() {
  outcome o;
  scenario_report rep = run_scenario(config("bell_check"));
  require_abs(o, "lhs - 0.7071", rep.outputs["lhs"].get<double>() - 0.7071, 1e-3);
  require_abs(o, "rhs - 0.2929", rep.outputs["rhs"].get<double>() - 0.2929, 1e-3);
  require(o, rep.outputs["quantum_violation"].get<bool>(), "violation flag", 1.0,
          1.0);
  const int lhv = rep.outputs["lhv_strategies_satisfying"].get<int>();
  require(o, lhv == 8, "strategies satisfying (of 8)", lhv, 8);
  return o;
}

// 3. eigenvalue equations and the exhaustive instruction-set search
outcome ghz_contradiction() {
  outcome o;
  scenario_report rep = run_scenario(config("ghz_mermin"));
  for (const char* name :
       {"xyy_eigenvalue_plus_one", "yxy_eigenvalue_plus_one",
        "yyx_eigenvalue_plus_one", "xxx_eigenvalue_minus_one"})
    require_abs(o, name, check_value(rep, name), 1e-12);
  const int sets = rep.outputs["consistent_instruction_sets"].get<int>();
  require(o, sets == 0, "consistent sets (of 64)", sets, 0);
  return o;
}

// 4. two-slice spectra and the sign-corrected local transport
outcome myrvold_slices() {
  outcome o;
  scenario_report rep = run_scenario(config("myrvold"));
  require_abs(o, "slice 1 spectrum dev", check_value(rep, "alpha_slice_spectrum"),
              1e-12);
  require_abs(o, "slice 2 spectrum dev", check_value(rep, "beta_slice_spectrum"),
              1e-12);
  require_abs(o, "transport residual",
              rep.outputs["transport_residual"].get<double>(), 1e-12);
  return o;
}

// 5. observable square: commutators, line products, assignment search
outcome kochen_specker_square() {
  outcome o;
  scenario_report rep = run_scenario(config("kochen_specker"));
  require_abs(o, "worst commutator",
              rep.outputs["worst_commutator"].get<double>(), 1e-12);
  require_abs(o, "line products vs signed identity",
              check_value(rep, "line_products_proportional_to_identity"), 1e-12);
  const bool signs =
      rep.outputs["row_product_signs"] == nlohmann::ordered_json({1, 1, 1}) &&
      rep.outputs["column_product_signs"] == nlohmann::ordered_json({1, 1, -1});
  require(o, signs, "sign pattern (+++/++-)", signs ? 0.0 : 1.0, 0.0);
  const int assignments = rep.outputs["consistent_assignments"].get<int>();
  require(o, assignments == 0, "consistent assignments (of 512)", assignments, 0);
  return o;
}

// 6. orthonormal entangled basis with one forbidden outcome per preparation
outcome pbr_overlaps() {
  outcome o;
  scenario_report rep = run_scenario(config("pbr"));
  require_abs(o, "gram deviation", rep.outputs["gram_deviation"].get<double>(),
              1e-12);
  require_abs(o, "designated overlaps",
              check_value(rep, "designated_overlaps_vanish"), 1e-12);
  return o;
}

// 7. randomized conditional-probability laws
outcome conditional_probability_suite() {
  outcome o;
  suite_result suite = run_verify_suite("conditional_probs", 200, 71);
  require_property(o, suite, "non_negativity_floor");
  require_property(o, suite, "per_parent_normalization_residual");
  require_property(o, suite, "marginalization_residual");
  require_property(o, suite, "unitary_trivialization_residual");
  require_property(o, suite, "global_unitary_invariance_residual");
  return o;
}

// 8. randomized reduction laws
outcome partial_trace_suite() {
  outcome o;
  suite_result suite = run_verify_suite("partial_trace", 200, 72);
  require_property(o, suite, "diagram_commutation_residual");
  require_property(o, suite, "classical_partial_sum_residual");
  return o;
}

// 9. randomized channel laws plus the two closed-form integrator limits
outcome channel_suite() {
  outcome o;
  suite_result suite = run_verify_suite("channels", 200, 73);
  require_property(o, suite, "trace_preservation_residual");
  require_property(o, suite, "complete_positivity_residual");
  require_property(o, suite, "choi_roundtrip_action_deviation");
  require_property(o, suite, "dephasing_closed_form_deviation");
  require_property(o, suite, "zero_rate_unitary_deviation");
  return o;
}

// 10. pointer statistics converge on the squared amplitudes as the record
// grows; off-diagonals shrink monotonically at 4 -> 8 -> 12 record qubits
outcome born_rule_emergence() {
  outcome o;
  scenario_config cfg = config("von_neumann_measurement");
  cfg.parameters["amplitudes"] = {std::sqrt(0.3), std::sqrt(0.7)};
  cfg.parameters["env_qubits"] = 12;
  scenario_report rep = run_scenario(cfg);
  const auto pointer = rep.outputs["pointer_probabilities"].get<std::vector<double>>();
  require_abs(o, "pointer p(1) - 0.3", pointer[1] - 0.3, 1e-6);
  require_abs(o, "pointer p(2) - 0.7", pointer[2] - 0.7, 1e-6);

  double off4 = -1.0, off8 = -1.0, off12 = -1.0;
  for (const curve& c : rep.curves)
    if (c.name == "off_diagonal_vs_env_qubits")
      for (std::size_t i = 0; i < c.x.size(); ++i) {
        if (c.x[i] == 4) off4 = c.y[i];
        if (c.x[i] == 8) off8 = c.y[i];
        if (c.x[i] == 12) off12 = c.y[i];
      }
  const bool monotone = off4 > off8 && off8 > off12 && off12 >= 0.0;
  require(o, monotone, "off-diagonal decreasing (4/8/12 qubits)",
          off4 - off12, 0.0);
  o.detail += " [" + num(off4) + " > " + num(off8) + " > " + num(off12) + "]";
  return o;
}

// 11. near-degenerate crossing: labels detach from the physical states
outcome eigenstate_swap_window() {
  outcome o;
  swap_block_model model;
  model.rho0 = 0.5;
  model.xi = complexd(1e-4, 0.0);
  model.tau = 1.0;
  swap_report rep = eigenstate_swap_analysis(
      model, {-10.0 * 0.5e-4, 0.0, 10.0 * 0.5e-4});
  require(o, rep.label_follow_prob <= 0.05, "label-follow probability",
          rep.label_follow_prob, 0.05);
  require(o, rep.state_follow_prob >= 0.95, "state-follow probability",
          rep.state_follow_prob, 0.95);
  return o;
}

// 12. big sampled ensemble against exact epistemic propagation
outcome trajectory_ensemble_statistics() {
  outcome o;
  const int samples = 100000;
  partition part = partition::single("S", 3);
  density_matrix rho = random_density_matrix(part, 3, 901);
  kraus_channel ch = random_channel(part, 2, 902);

  std::vector<rmatrix> cond_seq;
  std::vector<std::vector<double>> expected;
  epistemic_state epi = spectral_decompose(rho);
  expected.push_back(epi.probs);
  density_matrix current = rho;
  for (int step = 0; step < 3; ++step) {
    density_matrix next = apply(ch, current);
    epistemic_state epi_next = spectral_decompose(next);
    cond_seq.push_back(dynamical_cond_probs(ch, epi, epi_next));
    expected.push_back(propagate_epistemic(expected.back(), cond_seq.back()));
    current = next;
    epi = epi_next;
  }

  trajectory_ensemble ens =
      sample_trajectories(cond_seq, expected.front(), samples, 903);
  double worst_z = 0.0;
  for (std::size_t step = 0; step < expected.size(); ++step)
    for (int i = 0; i < 3; ++i) {
      const double p = expected[step][static_cast<std::size_t>(i)];
      const double se = std::sqrt(p * (1.0 - p) / samples);
      const double dev =
          std::abs(ens.occupation(static_cast<int>(step), i) - p);
      if (se == 0.0) {
        if (dev > 0.0) worst_z = std::max(worst_z, 1e9);
      } else {
        worst_z = std::max(worst_z, dev / se);
      }
    }
  require(o, worst_z <= 3.0, "worst cell z-score (1e5 trajectories)", worst_z,
          3.0);
  return o;
}

// 13. projector traces equal conditional-state matrix elements
outcome conditional_state_equivalence() {
  outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t s = split_seed(501, static_cast<std::uint64_t>(trial));
    const int dim = 2 + trial % 2;
    partition part = partition::single("S", dim);
    density_matrix rho = random_density_matrix(part, dim, s);
    kraus_channel ch = random_channel(part, 1 + trial % 3, split_seed(s, 1));
    epistemic_state epi = spectral_decompose(rho);
    epistemic_state epi2 = spectral_decompose(apply(ch, rho));
    worst = std::max(
        worst, leifer_spekkens_check(ch, epi, epi2).dynamical_deviation);
  }
  require_abs(o, "worst dual-path deviation over 50 channels", worst, 1e-10);
  return o;
}

// 14. nothing a local operation does is visible from the other wing
outcome no_communication_check() {
  outcome o;
  scenario_report rep = run_scenario(config("no_communication"));
  require_abs(o, "unitary deviation",
              rep.outputs["unitary_deviation"].get<double>(), 1e-12);
  require_abs(o, "kraus dephasing deviation",
              rep.outputs["dephasing_deviation"].get<double>(), 1e-12);
  require_abs(o, "lindblad deviation (integrator bound)",
              rep.outputs["lindblad_deviation"].get<double>(), 1e-8);
  return o;
}

}  // namespace

int main() {
  struct criterion {
    const char* name;
    double cap_seconds;
    outcome (*fn)();
  };
  const std::vector<criterion> criteria = {
      {"epr correlation law", 1.0, epr_correlation},
      {"bell inequality violation", 1.0, bell_violation},
      {"ghz contradiction", 1.0, ghz_contradiction},
      {"two-slice spectra and transport", 1.0, myrvold_slices},
      {"observable-square contextuality", 1.0, kochen_specker_square},
      {"preparation-overlap exclusion", 1.0, pbr_overlaps},
      {"conditional-probability suite", 30.0, conditional_probability_suite},
      {"partial-trace suite", 10.0, partial_trace_suite},
      {"channel suite", 30.0, channel_suite},
      {"born-rule emergence", 5.0, born_rule_emergence},
      {"eigenstate-swap window", 1.0, eigenstate_swap_window},
      {"trajectory ensemble statistics", 30.0, trajectory_ensemble_statistics},
      {"conditional-state equivalence", 10.0, conditional_state_equivalence},
      {"no-communication", 5.0, no_communication_check},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const criterion& c = criteria[static_cast<std::size_t>(i)];
    const auto start = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = seconds < c.cap_seconds;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %2zu %-33s %s; runtime %.3fs (cap %.0fs)%s\n",
                ok ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), seconds,
                c.cap_seconds, in_time ? "" : " <-- OVER TIME");
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
