#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "freqstab/estimator.hpp"
#include "freqstab/model.hpp"
#include "freqstab/simulator.hpp"

namespace freqstab {

/// Everything one scenario document carries.
struct ScenarioFile {
  std::string name;
  std::string description;
  std::string calibration;  // free text on where the operating point came from
  Scenario scenario;        // deadband copied from the thresholds
  ThresholdConfig threshold_config;
  Thresholds thresholds;    // resolved against the parameters
  double sample_period = 0.01;  // s, spacing of synthesized measurements
  std::optional<NetworkSnapshot> snapshot;
};

/// Throws ParseError on malformed JSON and Error(SchemaError) on missing or
/// mistyped fields.
ScenarioFile parse_scenario(const std::string& text,
                            const std::string& origin = "<string>");
ScenarioFile load_scenario(const std::filesystem::path& path);

/// The scenario as a JSON document that parse_scenario accepts.
std::string scenario_to_json(const ScenarioFile& s, int indent = 2);

/// Response CSV: header "time,<id>...[,freq:<id>...]", one row per sample.
/// Power columns in MW, frequency columns in Hz.
ResponseSet read_responses_csv(std::istream& in);
ResponseSet load_responses_csv(const std::filesystem::path& path);
void write_responses_csv(std::ostream& out, const ResponseSet& r);

/// time,df,p_mech,p_dist,p_load_damp
void write_trace_csv(std::ostream& out, const SimTrace& trace);

/// Keep every n-th sample of a trace (n >= 1), always including the first.
SimTrace decimate(const SimTrace& trace, std::size_t every);

}  // namespace freqstab
