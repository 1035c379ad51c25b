#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freqstab/assessor.hpp"
#include "freqstab/classifier.hpp"
#include "freqstab/errors.hpp"
#include "freqstab/io.hpp"

namespace freqstab {

const char* version();

enum class ReportFormat { Json, Csv };

struct RunConfig {
  std::string command;  // simulate, classify, assess, pipeline, reproduce
  std::filesystem::path scenario_path;
  std::optional<std::filesystem::path> responses_path;
  std::filesystem::path output_dir = ".";
  ReportFormat format = ReportFormat::Json;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;  // MW on the summed power
  std::filesystem::path scenario_dir;  // bundled scenarios, for reproduce
};

/// Process exit status for an error: 2 config/parse, 3 no onset,
/// 4 ambiguous, 1 anything else.
int exit_code_for(const Error& e);

/// Simulated measurements for a scenario: the trace resampled to the
/// scenario's sample period and split over its generators (one generator
/// when the scenario lists none).
ResponseSet synthesize_measurements(const ScenarioFile& s, const SimTrace& trace,
                                    double noise_sigma, std::uint64_t seed);

struct PipelineResult {
  std::optional<DisturbanceEstimate> estimate;  // empty: no disturbance
  std::optional<Assessment> assessment;
  TimeSeries measured_df;   // Hz, inertial centre
  std::vector<double> predicted_df;  // NaN where no closed form applies
};

/// Classify and assess one set of measurements.
PipelineResult run_analysis(const ScenarioFile& s, const ResponseSet& r);

/// Assess the disturbance declared in the scenario without measurements.
Assessment assess_declared(const ScenarioFile& s);

struct ShortTermRow {
  double fault_duration = 0.0;
  double critical_power = 0.0;
  double residual_pu = 0.0;
};

struct StepRow {
  double dP0 = 0.0;
  Assessment assessment;
  double analytic_nadir = 0.0;   // Hz, unsaturated closed form
  double simulated_nadir = 0.0;  // Hz, full model
  double simulated_final = 0.0;  // Hz at the end of the horizon
};

struct OverLimitRow {
  std::string scenario;
  double slope = 0.0;   // MW/s as measured by the classifier
  std::optional<double> t1;  // minute level only, s after inception
  double analytic_t_m = 0.0;   // s after inception
  double simulated_t_m = 0.0;  // s after inception
  double relative_error = 0.0;
};

struct Tables {
  std::vector<ShortTermRow> short_term;
  std::vector<StepRow> step;
  OverLimitRow second_slope;
  OverLimitRow minute_slope;
};

Tables reproduce_tables(const std::filesystem::path& scenario_dir);
std::string tables_to_json(const Tables& t);
void write_tables_csv(std::ostream& out, const Tables& t);

/// Runs one CLI command, writing its files under cfg.output_dir. Returns the
/// exit status; errors propagate as exceptions.
int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace freqstab
