#pragma once

#include <span>
#include <vector>

#include "freqstab/simulator.hpp"

namespace freqstab {

// Scenario batches. Each *_serial function is the reference the parallel
// version is tested against; results are identical element for element.

std::vector<SimTrace> simulate_all(std::span<const Scenario> scenarios);
std::vector<SimTrace> simulate_all_serial(std::span<const Scenario> scenarios);

/// Largest |closed form - simulated| (Hz) over the trace of one step or ramp
/// scenario. The comparison is only meaningful with the clamp and deadband
/// off and no new-energy lag; other scenarios are rejected.
double sfr_oracle_deviation(const Scenario& s);

std::vector<double> sfr_oracle_deviations(std::span<const Scenario> scenarios);
std::vector<double> sfr_oracle_deviations_serial(
    std::span<const Scenario> scenarios);

}  // namespace freqstab
