#include <cmath>

#include "common.hpp"

namespace bhsi {

namespace {

// Runs the repeated-measurement harness on `psi` and cross-checks trial 0
// against the full unitary pipeline with an explicit observer register.
struct PipelineRun {
  TrialRun trials;
  Measurement first;
};

PipelineRun run_pipeline(const StateVector& psi, const BranchingOperator& b, const RunOptions& run) {
  const EnvironmentModel& env = b.environment();
  const StateVector prepared = tensor(psi, env.ready);
  TrialOptions opts;
  opts.seed = run.seed;
  opts.jobs = run.jobs;
  TrialRun trials = run_trials(prepared, b, run.trials, opts);

  const StateVector with_register =
      tensor(tensor(psi, ObserverState::ready(b.outcomes()).register_state()), env.ready);
  Rng rng = Rng::for_trial(run.seed, 0, 0);
  Measurement first = measure(with_register, b, rng, "O", 0);
  if (first.record.outcome != trials.records.front().outcome) {
    throw InvariantError("full pipeline and trial harness disagree on trial 0");
  }
  return {std::move(trials), std::move(first)};
}

void add_pipeline_stats(ScenarioReport& r, const PipelineRun& p, const StateVector& psi) {
  const BranchedState& bs = *p.trials.branched;
  const EntropyLedger ent = entropy_ledger(psi, bs.weights());
  r.statistics["branch_count"] = bs.branches().size();
  r.statistics["entropy_local"] = ent.local;
  r.statistics["entropy_global"] = ent.global;
  r.statistics["trial0_outcome"] = p.first.record.outcome;
  r.statistics["pipeline_drift"] = max_abs_diff(p.first.stages.after, p.first.stages.branched);
  r.statistics["observer_final"] = p.first.observer.describe();
  const StageTrace& st = p.first.stages;
  r.stages.push_back(StageSnapshot{"before", st.before});
  r.stages.push_back(StageSnapshot{"branched", st.branched});
  r.stages.push_back(StageSnapshot{"engaged", st.engaged});
  r.stages.push_back(StageSnapshot{"after", st.after});
  r.records.push_back(RecordSection{"outcomes", p.trials.records});
}

}  // namespace

ScenarioReport scenario_single_outcome(const RunOptions& run, std::size_t env_qubits, double overlap) {
  const EnvironmentModel env = make_environment(1, env_qubits, overlap);
  const BranchingOperator b = make_branching_operator(Subsystem{"S", 1, Role::System}, env);
  const StateVector psi = detail::system_state("S", {Complex(1.0)});
  const PipelineRun p = run_pipeline(psi, b, run);

  ScenarioReport r;
  r.scenario = "single";
  r.seed = run.seed;
  r.config["trials"] = run.trials;
  r.config["env_qubits"] = env_qubits;
  r.config["epsilon"] = overlap;
  r.frequencies.push_back(
      detail::outcome_section("outcomes", detail::label_names(b.basis()), p.trials.counts, p.trials.branched->weights()));
  std::size_t distinct = 0;
  for (std::size_t c : p.trials.counts) {
    distinct += c > 0 ? 1 : 0;
  }
  r.statistics["distinct_outcomes"] = distinct;
  r.statistics["frequency_0"] = r.frequencies.front().table.frequency(0);
  r.statistics["record_weight_0"] = p.first.record.weight;
  add_pipeline_stats(r, p, psi);
  r.ledger = interpretation_ledger("single", detail::single_trace(env_qubits));
  return r;
}

ScenarioReport scenario_qubit(Amplitude a0, Amplitude a1, const RunOptions& run, std::size_t env_qubits,
                              double overlap) {
  const double norm2 = std::norm(a0) + std::norm(a1);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kStructuralTol) {
    throw ArgumentError("|a0|^2 + |a1|^2 must equal 1 (got " + std::to_string(norm2) + ")");
  }
  const EnvironmentModel env = make_environment(2, env_qubits, overlap);
  const BranchingOperator b = make_branching_operator(Subsystem{"S", 2, Role::System}, env);
  const StateVector psi = detail::system_state("S", {a0, a1});
  const PipelineRun p = run_pipeline(psi, b, run);
  const BranchedState& bs = *p.trials.branched;

  ScenarioReport r;
  r.scenario = "qubit";
  r.seed = run.seed;
  r.config["trials"] = run.trials;
  r.config["a0_re"] = a0.real();
  r.config["a0_im"] = a0.imag();
  r.config["a1_re"] = a1.real();
  r.config["a1_im"] = a1.imag();
  r.config["env_qubits"] = env_qubits;
  r.config["epsilon"] = overlap;
  r.frequencies.push_back(detail::outcome_section("outcomes", detail::label_names(b.basis()), p.trials.counts, bs.weights()));

  const FrequencyTable& table = r.frequencies.front().table;
  const auto n = static_cast<double>(run.trials);
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string suffix = "_" + std::to_string(k);
    const double w = bs.weights()[k];
    const double sigma = std::sqrt(w * (1.0 - w) / n);
    r.statistics["weight" + suffix] = w;
    r.statistics["frequency" + suffix] = table.frequency(k);
    r.statistics["sigma" + suffix] = sigma;
  }

  // Branched state against Σ a_k |k⟩|E_k⟩ built directly from the pointers.
  Vector expected(static_cast<Eigen::Index>(2 * env.dimension()));
  expected << a0 * env.pointers[0].amplitudes(), a1 * env.pointers[1].amplitudes();
  r.statistics["branched_state_residual"] = (bs.joint().amplitudes() - expected).cwiseAbs().maxCoeff();

  const std::vector<std::string> sys{"S"};
  const DensityMatrix rho = reduced_density(bs.joint(), sys);
  r.statistics["system_coherence"] = std::abs(rho.matrix()(0, 1));
  r.statistics["pointer_overlap"] = decoherence_gram(bs)(0, 1);
  add_pipeline_stats(r, p, psi);
  r.ledger = interpretation_ledger("qubit", detail::qubit_trace(env_qubits));
  return r;
}

}  // namespace bhsi
