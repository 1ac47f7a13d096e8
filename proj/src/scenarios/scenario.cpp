#include "qlab/scenario.hpp"

namespace qlab {

bool scenario_report::passed() const {
  for (const check_result& c : checks)
    if (!c.pass) return false;
  return true;
}

void scenario_report::check_abs(const std::string& name, double value,
                                double tolerance) {
  checks.push_back({name, value, tolerance, std::abs(value) <= tolerance});
}

void scenario_report::check_at_least(const std::string& name, double value,
                                     double bound) {
  checks.push_back({name, value, bound, value >= bound});
}

nlohmann::ordered_json report_to_json(const scenario_report& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["scenario"] = rep.name;
  j["inputs"] = rep.inputs;
  j["outputs"] = rep.outputs;
  j["checks"] = nlohmann::ordered_json::array();
  for (const check_result& c : rep.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["value"] = c.value;
    jc["tolerance"] = c.tolerance;
    jc["pass"] = c.pass;
    j["checks"].push_back(jc);
  }
  j["curves"] = nlohmann::ordered_json::array();
  for (const curve& c : rep.curves) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["x_label"] = c.x_label;
    jc["y_label"] = c.y_label;
    jc["x"] = c.x;
    jc["y"] = c.y;
    j["curves"].push_back(jc);
  }
  j["passed"] = rep.passed();
  return j;
}

scenario_report run_scenario(const scenario_config& cfg) {
  for (const scenario_entry& entry : scenario_registry())
    if (entry.name == cfg.name) return entry.runner(cfg);
  throw error("unknown scenario '" + cfg.name + "'");
}

const std::vector<scenario_entry>& scenario_registry() {
  static const std::vector<scenario_entry> registry = {
      {"von_neumann_measurement",
       "measurement chain with pointer shift and environment records; Born "
       "weights and decoherence off-diagonals",
       nlohmann::ordered_json{{"amplitudes", {0.7071067811865476, 0.7071067811865476}},
                              {"apparatus_dim", 3},
                              {"env_qubits", 12},
                              {"env_angle", 0.7853981633974483},
                              {"preset", ""}},
       von_neumann_measurement},
      {"epr_bohm",
       "perturbed singlet pair: spin correlation, epistemic states before and "
       "after local measurement, near-degeneracy swap curves",
       nlohmann::ordered_json{{"a", {0.0, 0.0, 1.0}},
                              {"b", {0.0, 0.0, 1.0}},
                              {"eps", 1e-6}},
       epr_bohm},
      {"bell_check",
       "Bell inequality on the singlet versus all deterministic "
       "anti-correlated hidden-variable strategies",
       nlohmann::ordered_json{{"a", {1.0, 0.0, 0.0}},
                              {"b", {0.0, 1.0, 0.0}},
                              {"c", {0.7071067811865476, 0.7071067811865476, 0.0}}},
       bell_check},
      {"ghz_mermin",
       "three-spin GHZ eigenvalue equations and exhaustive local-instruction "
       "enumeration",
       nlohmann::ordered_json::object(), ghz_mermin},
      {"myrvold",
       "two qubit-detector pairs on two time slices related by local Hadamard "
       "evolution",
       nlohmann::ordered_json::object(), myrvold},
      {"quantum_zeno",
       "repeated projective resets of a two-level system: quadratic short-time "
       "survival versus the exponential decay law",
       nlohmann::ordered_json{{"beta", 1.0},
                              {"t", 1.0},
                              {"n_list", {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000}},
                              {"alpha", 0.5}},
       quantum_zeno},
      {"kochen_specker",
       "Peres-Mermin square of two-qubit observables: commutators, line "
       "products, and the 512-case value-assignment search",
       nlohmann::ordered_json::object(), kochen_specker},
      {"pbr",
       "entangled four-outcome measurement excluding overlapping "
       "hidden-variable distributions for product preparations",
       nlohmann::ordered_json::object(), pbr},
      {"no_communication",
       "local operations on one half of an entangled pair leave the other "
       "half's density matrix unchanged",
       nlohmann::ordered_json{{"operation", "all"},
                              {"gamma", 0.8},
                              {"time", 0.5}},
       no_communication},
  };
  return registry;
}

}  // namespace qlab
