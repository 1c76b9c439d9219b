#pragma once

// End-to-end experiments and the interpretation ledger.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bhsi/observer.hpp"
#include "bhsi/statistics.hpp"

namespace bhsi {

using Json = nlohmann::ordered_json;

enum class Interpretation { CI, MWI, BHSI, BM };
std::string_view to_string(Interpretation i);

struct LedgerRow {
  Interpretation interpretation = Interpretation::CI;
  std::size_t collapses = 0;
  std::size_t worlds = 1;
  // MWI only, when the world count depends on whether synchronized branches
  // are identified with the ones they follow.
  std::optional<std::size_t> alternate_worlds;
  std::size_t observer_copies = 0;
  std::size_t environment_dimension = 0;
  bool unitary = false;
  bool information_preserved = false;
};

struct BranchEvent {
  std::string label;
  std::size_t branches = 1;
  std::size_t local_env_dim = 2;
  // Reads an already-branched pointer instead of creating new branches.
  bool synchronized = false;
};

struct ScenarioTrace {
  std::vector<BranchEvent> events;
  std::size_t observers = 1;
  // Dimension of the joint space the measurement chain acts on.
  std::size_t world_dimension = 1;
};

std::vector<LedgerRow> interpretation_ledger(std::string_view scenario, const ScenarioTrace& trace);

struct FrequencySection {
  std::string name;
  std::vector<std::string> labels;
  FrequencyTable table;
  // Born weights the counts should follow; empty when not applicable.
  std::vector<double> expected;
};

struct RecordSection {
  std::string name;
  std::vector<MeasurementRecord> records;
};

struct StageSnapshot {
  std::string stage;
  StateVector state;
};

struct ScenarioReport {
  std::string scenario;
  std::uint64_t seed = 0;
  Json config = Json::object();
  std::vector<FrequencySection> frequencies;
  // Flat map of scalar statistics (numbers, booleans, strings).
  Json statistics = Json::object();
  std::vector<LedgerRow> ledger;
  std::vector<StageSnapshot> stages;
  std::vector<RecordSection> records;

  const FrequencySection& frequency(std::string_view name) const;
  const RecordSection& record_section(std::string_view name) const;
  double stat(std::string_view key) const;
};

struct RunOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

ScenarioReport scenario_single_outcome(const RunOptions& run, std::size_t env_qubits = 1, double overlap = 0.0);

ScenarioReport scenario_qubit(Amplitude a0, Amplitude a1, const RunOptions& run, std::size_t env_qubits = 1,
                              double overlap = 0.0);

struct DoubleSlitConfig {
  std::size_t bins = 256;
  double x_min = -10.0;
  double x_max = 10.0;
  double separation = 5.0;
  double width = 1.0;
  double wavelength = 1.0;
  double screen_distance = 8.5;
  bool marking = false;
  double marker_overlap = 0.0;
  // 0 closes the first slit, 1 the second.
  std::optional<std::size_t> closed_slit;

  void validate() const;
  double bin_width() const { return (x_max - x_min) / static_cast<double>(bins); }
  std::vector<double> positions() const;
  // Spatial frequency of the two-path fringes.
  double fringe_frequency() const;
  // Ψ_I and Ψ_II at the bin midpoints, closed slits zeroed.
  std::array<std::vector<Complex>, 2> path_amplitudes() const;
  // Normalized bin probabilities: coherent sum, or the marked mixture with
  // pointer overlap ε (ε = 0 gives |Ψ_I|² + |Ψ_II|²).
  std::vector<double> target() const;
};

ScenarioReport scenario_double_slit(const DoubleSlitConfig& cfg, const RunOptions& run);

struct BellAngles {
  double a = 0.0;
  double a_prime = 0.78539816339744828;  // π/4
  double b = 0.39269908169872414;        // π/8
  double b_prime = 1.1780972450961724;   // 3π/8
};

// Analytic singlet correlation −cos 2(a − b).
double singlet_correlation(double a, double b);

ScenarioReport scenario_bell(const BellAngles& angles, const RunOptions& run);

ScenarioReport scenario_wigners_friend(const RunOptions& run);

ScenarioReport scenario_eraser(bool erase, const RunOptions& run, const DoubleSlitConfig& screen = {});

ScenarioReport scenario_relocation(std::size_t outcomes, const RunOptions& run, std::size_t env_qubits = 0,
                                   double overlap = 0.0);

// Trace of the named scenario at its default configuration.
ScenarioTrace canonical_trace(std::string_view scenario);
ScenarioReport ledger_report(std::string_view scenario, std::uint64_t seed);

}  // namespace bhsi
