#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "freqstab/pipeline.hpp"

#ifndef FREQSTAB_SCENARIO_DIR
#define FREQSTAB_SCENARIO_DIR "scenarios"
#endif

int main(int argc, char** argv) {
  freqstab::RunConfig cfg;
  cfg.scenario_dir = FREQSTAB_SCENARIO_DIR;
  std::string responses;
  std::string what = "tables";

  CLI::App app{"Response-based frequency stability assessment"};
  app.set_version_flag("--version", std::string(freqstab::version()));
  app.require_subcommand(1);

  const std::map<std::string, freqstab::ReportFormat> formats{
      {"json", freqstab::ReportFormat::Json}, {"csv", freqstab::ReportFormat::Csv}};

  auto common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", cfg.scenario_path,
                                "Scenario JSON file");
    if (needs_scenario) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.output_dir, "Output directory");
    sub->add_option("--format", cfg.format, "Report format: json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--seed", cfg.seed, "Seed for measurement noise");
    sub->add_option("--noise-sigma", cfg.noise_sigma,
                    "Noise on the summed power, MW")
        ->check(CLI::NonNegativeNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Run the time-domain model");
  common(simulate, true);

  for (const char* name : {"classify", "assess", "pipeline"}) {
    auto* sub = app.add_subcommand(
        name, std::string(name) == "pipeline"
                  ? "Classify measurements, assess, and emit plot data"
                  : std::string(name) == "assess" ? "Assess a disturbance"
                                                  : "Classify a disturbance");
    common(sub, true);
    sub->add_option("--responses", responses,
                    "Measured responses CSV; simulated from the scenario when "
                    "omitted")
        ->check(CLI::ExistingFile);
  }

  auto* reproduce = app.add_subcommand(
      "reproduce", "Recompute the benchmark tables from the bundled scenarios");
  common(reproduce, false);
  reproduce->add_option("what", what, "Only 'tables' is available")
      ->check(CLI::IsMember({"tables"}));
  reproduce->add_option("--scenario-dir", cfg.scenario_dir,
                        "Directory holding the bundled scenarios")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (!responses.empty()) cfg.responses_path = responses;

  try {
    return freqstab::run_command(cfg, std::cout);
  } catch (const freqstab::AmbiguousClassificationError& e) {
    std::cerr << "error: " << e.what() << " (candidates:";
    for (const auto& c : e.candidates()) std::cerr << ' ' << c;
    std::cerr << ")\n";
    return freqstab::exit_code_for(e);
  } catch (const freqstab::Error& e) {
    std::cerr << "error [" << freqstab::to_string(e.code()) << "]: " << e.what()
              << '\n';
    return freqstab::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
