#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/common.hpp"

namespace qlab {

// one physics experiment driver, configured by named parameters
struct scenario_config {
  std::string name;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  double tolerance_scale = 1.0;
};

// a single pass/fail quantity: the computed value and the bound it was held to
struct check_result {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// sampled curve for tabular export
struct curve {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
};

struct scenario_report {
  std::string name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  std::vector<check_result> checks;
  std::vector<curve> curves;

  bool passed() const;
  // |value| <= tolerance
  void check_abs(const std::string& name, double value, double tolerance);
  // value >= bound
  void check_at_least(const std::string& name, double value, double bound);
};

struct scenario_entry {
  std::string name;
  std::string description;
  nlohmann::ordered_json default_parameters;
  std::function<scenario_report(const scenario_config&)> runner;
};

// fixed-order registry of every available scenario
const std::vector<scenario_entry>& scenario_registry();

// dispatch by config name; throws qlab::error for unknown names or bad parameters
scenario_report run_scenario(const scenario_config& cfg);

// versioned structured form of a report (schema_version field included)
nlohmann::ordered_json report_to_json(const scenario_report& rep);

// individual drivers (also reachable through the registry)
scenario_report von_neumann_measurement(const scenario_config& cfg);
scenario_report epr_bohm(const scenario_config& cfg);
scenario_report bell_check(const scenario_config& cfg);
scenario_report ghz_mermin(const scenario_config& cfg);
scenario_report myrvold(const scenario_config& cfg);
scenario_report quantum_zeno(const scenario_config& cfg);
scenario_report kochen_specker(const scenario_config& cfg);
scenario_report pbr(const scenario_config& cfg);
scenario_report no_communication(const scenario_config& cfg);

}  // namespace qlab
