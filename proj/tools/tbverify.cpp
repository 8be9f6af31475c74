// tbverify: run verification suites from a JSON run-config.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tbgeom/errors.hpp"
#include "tbgeom/verify.hpp"

namespace {

constexpr int kConfigError = 2;

std::string stem_of(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".json" || p.extension() == ".csv") p.replace_extension();
  return p.string();
}

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path);
  if (!f) throw tbgeom::ConfigError("output: cannot write '" + path + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of tangent-bundle geometry"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run suites from a run-config and write a report");
  verify->set_help_flag("--help", "Print this help message and exit");
  std::string config_path, out, format = "both";
  std::vector<std::string> suites;
  int samples = 0;
  long long seed = -1;
  double h = 0.0;
  bool no_timing = false, quiet = false;
  verify->add_option("--config", config_path, "Run-config JSON")->required();
  verify->add_option("--suite", suites, "Suite to run (repeatable; overrides the config list)");
  verify->add_option("--samples", samples, "Sample count override")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed override")->check(CLI::NonNegativeNumber);
  verify->add_option("--h", h, "Finite-difference step override")->check(CLI::PositiveNumber);
  verify->add_option("--out", out, "Report path stem (.json/.csv appended)");
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv", "both"}));
  verify->add_flag("--no-timing", no_timing, "Omit wall-time fields from the JSON report");
  verify->add_flag("--quiet", quiet, "Do not print the summary");

  auto* list = app.add_subcommand("list-suites", "Print the suite catalogue");
  bool list_json = false;
  list->add_flag("--json", list_json, "Print as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  if (*list) {
    if (list_json) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& s : tbgeom::suite_catalogue())
        j.push_back({{"name", s.name}, {"anchor", s.anchor}, {"tolerance", s.default_tolerance}, {"checks", s.checks}});
      std::cout << j.dump(2) << '\n';
    } else {
      for (const auto& s : tbgeom::suite_catalogue())
        std::cout << s.name << " → " << s.anchor << " (tolerance " << s.default_tolerance << ")\n    " << s.checks
                  << '\n';
    }
    return 0;
  }

  tbgeom::RunConfig config;
  try {
    std::ifstream f(config_path);
    if (!f) throw tbgeom::ConfigError("--config: cannot open '" + config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw tbgeom::ConfigError("--config: invalid JSON: " + std::string(e.what()));
    }
    if (!suites.empty()) j["suites"] = suites;
    if (samples > 0) j["samples"] = samples;
    if (seed >= 0) j["seed"] = seed;
    if (h > 0.0) j["h"] = h;
    if (!out.empty()) j["output"] = out;
    config = tbgeom::RunConfig::from_json(j);
  } catch (const tbgeom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const tbgeom::GeometryError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const tbgeom::Report report = tbgeom::run(config);
  const std::string stem = stem_of(config.output);
  try {
    if (format != "csv") write_file(stem + ".json", report.to_json(!no_timing).dump(2) + "\n");
    if (format != "json") write_file(stem + ".csv", report.to_csv());
  } catch (const tbgeom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (!quiet) std::cout << report.summary();
  return tbgeom::exit_status(report);
}
