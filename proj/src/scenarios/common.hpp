#pragma once

#include <string>
#include <vector>

#include "bhsi/scenarios.hpp"

namespace bhsi::detail {

std::vector<std::string> label_names(const std::vector<BasisLabel>& basis);

FrequencySection outcome_section(std::string name, std::vector<std::string> labels,
                                 const std::vector<std::size_t>& counts, std::vector<double> expected = {});

// Samples index k with probability weights[k] (weights summing to ~1).
std::size_t sample_index(const std::vector<double>& weights, Rng& rng);

StateVector system_state(const std::string& id, const std::vector<Complex>& amplitudes);

// Outcome counts as doubles, one bin per outcome.
std::vector<double> histogram(const std::vector<MeasurementRecord>& records, std::size_t bins);

}  // namespace bhsi::detail

namespace bhsi::detail {

ScenarioTrace single_trace(std::size_t env_qubits);
ScenarioTrace qubit_trace(std::size_t env_qubits);
ScenarioTrace double_slit_trace(const DoubleSlitConfig& cfg, std::size_t env_qubits);
ScenarioTrace bell_trace();
ScenarioTrace wigner_trace();
ScenarioTrace eraser_trace(const DoubleSlitConfig& cfg, std::size_t env_qubits);
ScenarioTrace relocation_trace(std::size_t outcomes, std::size_t env_qubits);

}  // namespace bhsi::detail
