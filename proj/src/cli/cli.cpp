#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlab/cli.hpp"
#include "qlab/common.hpp"
#include "qlab/scenario.hpp"

namespace qlab {

namespace {

// locale-proof double formatting for the CSV files: shortest representation
// that round-trips, always with a "." separator
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string default_out_dir() {
  const char* env = std::getenv("QLAB_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : ".";
}

nlohmann::ordered_json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open config file '" + path + "'");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw error("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw error("config file '" + path + "' must hold a single object");
  return j;
}

// a config object carries reserved keys next to plain scenario parameters;
// "description" and "name" are accepted so `list --format json` entries can
// be fed straight back in
void merge_config(const nlohmann::ordered_json& file, scenario_config& cfg,
                  bool scenario_from_flag, bool seed_from_flag,
                  bool scale_from_flag) {
  for (const auto& [key, value] : file.items()) {
    if (key == "scenario") {
      if (!scenario_from_flag) cfg.name = value.get<std::string>();
    } else if (key == "seed") {
      if (!seed_from_flag) cfg.seed = value.get<std::uint64_t>();
    } else if (key == "tolerance_scale") {
      if (!scale_from_flag) cfg.tolerance_scale = value.get<double>();
    } else if (key == "parameters") {
      if (!value.is_object())
        throw error("config key 'parameters' must be an object");
      for (const auto& [pkey, pvalue] : value.items())
        cfg.parameters[pkey] = pvalue;
    } else if (key == "description" || key == "name") {
      // informational keys from list output; ignored
    } else {
      cfg.parameters[key] = value;
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw error("cannot write '" + path.string() + "'");
  out << body;
}

std::filesystem::path write_report_files(const scenario_report& rep,
                                         const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  std::filesystem::path report_path = dir / (rep.name + "_report.json");
  write_text_file(report_path, report_to_json(rep).dump(2) + "\n");
  for (const curve& c : rep.curves) {
    std::string body = c.x_label + "," + c.y_label + "\n";
    for (std::size_t i = 0; i < c.x.size(); ++i)
      body += format_double(c.x[i]) + "," + format_double(c.y[i]) + "\n";
    write_text_file(dir / (rep.name + "_" + c.name + ".csv"), body);
  }
  return report_path;
}

int command_run(const scenario_config& cfg, const std::string& out_dir,
                const std::string& format) {
  scenario_report rep = run_scenario(cfg);
  std::filesystem::path report_path = write_report_files(rep, out_dir);
  std::cerr << "wrote " << report_path.string() << " and " << rep.curves.size()
            << " curve file(s)\n";

  if (format == "csv") {
    std::cout << "check,value,tolerance,pass\n";
    for (const check_result& c : rep.checks)
      std::cout << c.name << "," << format_double(c.value) << ","
                << format_double(c.tolerance) << "," << (c.pass ? "1" : "0")
                << "\n";
  } else {
    std::cout << report_to_json(rep).dump(2) << "\n";
  }
  return rep.passed() ? 0 : 1;
}

nlohmann::ordered_json suite_to_json(const suite_result& result) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["suite"] = result.suite;
  j["trials"] = result.trials;
  j["seed"] = result.seed;
  j["passed"] = result.passed();
  j["properties"] = nlohmann::ordered_json::array();
  for (const property_result& p : result.properties) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["passes"] = p.passes;
    pj["trials"] = p.trials;
    pj["worst_residual"] = p.worst_residual;
    pj["threshold"] = p.threshold;
    pj["counterexamples"] = nlohmann::ordered_json::array();
    for (const std::string& c : p.counterexamples)
      pj["counterexamples"].push_back(nlohmann::ordered_json::parse(c));
    j["properties"].push_back(pj);
  }
  return j;
}

int command_verify(const std::string& suite, int trials, std::uint64_t seed,
                   const std::string& format) {
  suite_result result = run_verify_suite(suite, trials, seed);
  if (format == "json") {
    std::cout << suite_to_json(result).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "property,passes,trials,worst_residual,threshold\n";
    for (const property_result& p : result.properties)
      std::cout << p.name << "," << p.passes << "," << p.trials << ","
                << format_double(p.worst_residual) << ","
                << format_double(p.threshold) << "\n";
    for (const property_result& p : result.properties)
      for (const std::string& c : p.counterexamples)
        std::cerr << "counterexample (" << p.name << "): " << c << "\n";
  } else {
    for (const property_result& p : result.properties) {
      std::cout << p.name << ": " << p.passes << "/" << p.trials
                << " trials, worst residual " << format_double(p.worst_residual)
                << " (threshold " << format_double(p.threshold) << ")"
                << (p.passed() ? "" : "  FAILED") << "\n";
      for (const std::string& c : p.counterexamples)
        std::cout << "  counterexample: " << c << "\n";
    }
  }
  return result.passed() ? 0 : 1;
}

int command_list(const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const scenario_entry& e : scenario_registry()) {
      nlohmann::ordered_json entry;
      entry["scenario"] = e.name;
      entry["description"] = e.description;
      entry["parameters"] = e.default_parameters;
      out.push_back(entry);
    }
    std::cout << out.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "scenario,description\n";
    for (const scenario_entry& e : scenario_registry())
      std::cout << e.name << ",\"" << e.description << "\"\n";
  } else {
    for (const scenario_entry& e : scenario_registry()) {
      std::cout << e.name << ": " << e.description << "\n";
      if (!e.default_parameters.empty()) {
        std::cout << "  defaults:";
        for (const auto& [key, value] : e.default_parameters.items())
          std::cout << " " << key << "=" << value.dump();
        std::cout << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int run_main(const std::vector<std::string>& args) {
  CLI::App app{"modal quantum mechanics workbench"};
  app.require_subcommand(1);

  std::string scenario, config_path, format, suite = "all";
  std::string out_dir = default_out_dir();
  std::uint64_t seed = 0;
  double tolerance_scale = 1.0;
  int trials = 200;

  CLI::App* run = app.add_subcommand("run", "execute one scenario");
  run->add_option("--scenario", scenario, "registered scenario name");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--seed", seed, "base seed for any sampling")
      ->capture_default_str();
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--format", format, "stdout format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--tolerance-scale", tolerance_scale,
                  "scale factor on every check tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "randomized property suites");
  verify->add_option("--suite", suite, "property suite")
      ->check(CLI::IsMember({"channels", "conditional_probs", "partial_trace",
                             "trajectories", "all"}))
      ->capture_default_str();
  verify->add_option("--trials", trials, "instances per property")
      ->capture_default_str();
  verify->add_option("--seed", seed, "base seed")->capture_default_str();
  verify->add_option("--format", format, "stdout format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* list = app.add_subcommand("list", "registered scenarios");
  list->add_option("--format", format, "stdout format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // CLI11 wants argc/argv ordering; it parses back to front
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      scenario_config cfg;
      cfg.name = scenario;
      cfg.seed = seed;
      cfg.tolerance_scale = tolerance_scale;
      if (!config_path.empty())
        merge_config(load_config_file(config_path), cfg,
                     run->count("--scenario") > 0, run->count("--seed") > 0,
                     run->count("--tolerance-scale") > 0);
      if (cfg.name.empty())
        throw error("no scenario given (use --scenario or a config file)");
      return command_run(cfg, out_dir, format.empty() ? "json" : format);
    }
    if (verify->parsed())
      return command_verify(suite, trials, seed,
                            format.empty() ? "text" : format);
    return command_list(format.empty() ? "text" : format);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_main(args);
}

}  // namespace qlab
