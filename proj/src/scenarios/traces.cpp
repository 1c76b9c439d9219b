#include "common.hpp"

namespace bhsi::detail {

namespace {

std::size_t env_dim(std::size_t qubits) { return std::size_t{1} << qubits; }

}  // namespace

// world_dimension counts system, spectators, observer registers (D+1 levels)
// and every environment the chain touches.

ScenarioTrace single_trace(std::size_t env_qubits) {
  return {{{"measure", 1, env_dim(env_qubits), false}}, 1, 1 * 2 * env_dim(env_qubits)};
}

ScenarioTrace qubit_trace(std::size_t env_qubits) {
  return {{{"Bob", 2, env_dim(env_qubits), false}}, 1, 2 * 3 * env_dim(env_qubits)};
}

ScenarioTrace double_slit_trace(const DoubleSlitConfig& cfg, std::size_t env_qubits) {
  ScenarioTrace t;
  std::size_t dim = cfg.bins * (cfg.bins + 1) * env_dim(env_qubits);
  if (cfg.marking && !cfg.closed_slit) {
    t.events.push_back({"which-way", 2, 2, false});
    dim *= 2 * 2;
  }
  t.events.push_back({"screen", cfg.bins, env_dim(env_qubits), false});
  t.observers = 1;
  t.world_dimension = dim;
  return t;
}

ScenarioTrace bell_trace() {
  // A, B, their environments and two registers of three levels.
  return {{{"Alice", 2, 2, false}, {"Bob", 2, 2, false}}, 2, 2 * 2 * 2 * 2 * 3 * 3};
}

ScenarioTrace wigner_trace() {
  return {{{"Friend", 2, 2, false}, {"Wigner", 2, 2, true}}, 2, 2 * 2 * 2 * 3 * 3};
}

ScenarioTrace eraser_trace(const DoubleSlitConfig& cfg, std::size_t env_qubits) {
  return {{{"screen", cfg.bins, env_dim(env_qubits), false}, {"idler", 2, 2, false}},
          1,
          cfg.bins * 2 * (cfg.bins + 1) * env_dim(env_qubits) * 3 * 2};
}

ScenarioTrace relocation_trace(std::size_t outcomes, std::size_t env_qubits) {
  return {{{"branch", outcomes, env_dim(env_qubits), false}}, 1, outcomes * (outcomes + 1) * env_dim(env_qubits)};
}

}  // namespace bhsi::detail

namespace bhsi {

ScenarioTrace canonical_trace(std::string_view scenario) {
  if (scenario == "single") {
    return detail::single_trace(1);
  }
  if (scenario == "qubit") {
    return detail::qubit_trace(1);
  }
  if (scenario == "double-slit") {
    const DoubleSlitConfig cfg;
    return detail::double_slit_trace(cfg, minimal_qubits(cfg.bins));
  }
  if (scenario == "bell") {
    return detail::bell_trace();
  }
  if (scenario == "wigner") {
    return detail::wigner_trace();
  }
  if (scenario == "eraser") {
    const DoubleSlitConfig cfg;
    return detail::eraser_trace(cfg, minimal_qubits(cfg.bins));
  }
  if (scenario == "relocate") {
    return detail::relocation_trace(2, 1);
  }
  throw ConfigError("unknown scenario '" + std::string(scenario) + "'");
}

ScenarioReport ledger_report(std::string_view scenario, std::uint64_t seed) {
  const ScenarioTrace trace = canonical_trace(scenario);
  ScenarioReport r;
  r.scenario = "ledger";
  r.seed = seed;
  r.config["scenario"] = std::string(scenario);
  std::size_t i = 0;
  for (const auto& e : trace.events) {
    const std::string prefix = "event" + std::to_string(i++) + ".";
    r.statistics[prefix + "label"] = e.label;
    r.statistics[prefix + "branches"] = e.branches;
    r.statistics[prefix + "local_env_dim"] = e.local_env_dim;
    r.statistics[prefix + "synchronized"] = e.synchronized;
  }
  r.statistics["observers"] = trace.observers;
  r.statistics["world_dimension"] = trace.world_dimension;
  r.ledger = interpretation_ledger(scenario, trace);
  return r;
}

}  // namespace bhsi
