#include "bhsi/scenarios.hpp"

namespace bhsi {

std::string_view to_string(Interpretation i) {
  switch (i) {
    case Interpretation::CI:
      return "CI";
    case Interpretation::MWI:
      return "MWI";
    case Interpretation::BHSI:
      return "BHSI";
    case Interpretation::BM:
      return "BM";
  }
  return "unknown";
}

std::vector<LedgerRow> interpretation_ledger(std::string_view scenario, const ScenarioTrace& trace) {
  if (trace.events.empty()) {
    throw ArgumentError("scenario '" + std::string(scenario) + "' has no measurement events");
  }
  std::size_t independent = 0;
  std::size_t worlds = 1;
  std::size_t worlds_all = 1;
  std::size_t local_branches = 0;
  std::size_t env_dim = 0;
  for (const auto& e : trace.events) {
    worlds_all *= e.branches;
    env_dim += e.local_env_dim;
    if (!e.synchronized) {
      ++independent;
      worlds *= e.branches;
      local_branches += e.branches;
    }
  }

  LedgerRow ci{Interpretation::CI, independent, 1, std::nullopt, trace.observers, 0, false, false};

  LedgerRow mwi{Interpretation::MWI, 0, worlds, std::nullopt, worlds * trace.observers, trace.world_dimension,
                true, true};
  if (worlds_all != worlds) {
    mwi.alternate_worlds = worlds_all;
  }

  LedgerRow bhsi{Interpretation::BHSI, 0, local_branches, std::nullopt, trace.observers, env_dim, true, true};

  // No trajectories are simulated; these are fixed properties.
  LedgerRow bm{Interpretation::BM, 0, 1, std::nullopt, trace.observers, 0, true, true};

  return {ci, mwi, bhsi, bm};
}

const FrequencySection& ScenarioReport::frequency(std::string_view name) const {
  for (const auto& f : frequencies) {
    if (f.name == name) {
      return f;
    }
  }
  throw ArgumentError("report has no frequency section '" + std::string(name) + "'");
}

const RecordSection& ScenarioReport::record_section(std::string_view name) const {
  for (const auto& r : records) {
    if (r.name == name) {
      return r;
    }
  }
  throw ArgumentError("report has no record section '" + std::string(name) + "'");
}

double ScenarioReport::stat(std::string_view key) const {
  const auto it = statistics.find(std::string(key));
  if (it == statistics.end() || !it->is_number()) {
    throw ArgumentError("report has no numeric statistic '" + std::string(key) + "'");
  }
  return it->get<double>();
}

}  // namespace bhsi
