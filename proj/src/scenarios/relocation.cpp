#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace bhsi {

ScenarioReport scenario_relocation(std::size_t outcomes, const RunOptions& run, std::size_t env_qubits,
                                   double overlap) {
  if (outcomes < 1 || outcomes > 8) {
    throw ConfigError("relocation dimension must be in [1, 8]");
  }
  if (run.trials == 0) {
    throw ArgumentError("trials must be at least 1");
  }
  const std::size_t m = env_qubits == 0 ? minimal_qubits(outcomes) : env_qubits;
  const EnvironmentModel env = make_environment(outcomes, m, overlap);
  const BranchingOperator b = make_branching_operator(Subsystem{"S", outcomes, Role::System}, env);
  const SpaceDescription sys_space = single_space("S", outcomes);

  constexpr std::size_t kInputs = 20;
  const std::vector<std::string> original{"S", env.id};
  const std::vector<std::string> bath_image{"bath.S"};

  std::optional<Matrix> first_marginal;
  double spread = 0.0;
  double fiducial = 0.0;
  double spectrum_error = 0.0;
  double purity_error = 0.0;
  std::optional<StateVector> first_input;
  for (std::size_t i = 0; i < kInputs; ++i) {
    Rng rng = Rng::for_trial(run.seed, i, 2);
    const StateVector psi = random_state(sys_space, rng);
    if (!first_input) {
      first_input = psi;
    }
    const BranchedState bs = branch(tensor(psi, env.ready), b);
    const StateVector moved = relocate(bs, make_bath(bs));

    const Matrix marginal = reduced_density(moved, original).matrix();
    Matrix expected = Matrix::Zero(marginal.rows(), marginal.cols());
    expected(0, 0) = 1.0;
    fiducial = std::max(fiducial, (marginal - expected).cwiseAbs().maxCoeff());
    if (!first_marginal) {
      first_marginal = marginal;
    }
    spread = std::max(spread, (marginal - *first_marginal).cwiseAbs().maxCoeff());

    Eigen::VectorXd spectrum = reduced_density(moved, bath_image).eigenvalues();
    std::vector<double> lambda(spectrum.data(), spectrum.data() + spectrum.size());
    std::vector<double> weights = bs.weights();
    std::sort(lambda.begin(), lambda.end());
    std::sort(weights.begin(), weights.end());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      spectrum_error = std::max(spectrum_error, std::abs(lambda[k] - weights[k]));
    }

    // Tr ρ² of the global state; dense only while |ψ⟩⟨ψ| stays small.
    const double purity = moved.dimension() <= 256 ? DensityMatrix::pure(moved).purity()
                                                   : std::pow(moved.amplitudes().squaredNorm(), 2);
    purity_error = std::max(purity_error, std::abs(purity - 1.0));
  }

  TrialOptions opts;
  opts.seed = run.seed;
  opts.jobs = run.jobs;
  const TrialRun trials = run_trials(tensor(*first_input, env.ready), b, run.trials, opts);

  ScenarioReport r;
  r.scenario = "relocate";
  r.seed = run.seed;
  r.config["trials"] = run.trials;
  r.config["dim"] = outcomes;
  r.config["env_qubits"] = m;
  r.config["epsilon"] = overlap;
  r.frequencies.push_back(
      detail::outcome_section("outcomes", detail::label_names(b.basis()), trials.counts, trials.branched->weights()));
  r.statistics["inputs"] = kInputs;
  r.statistics["marginal_spread"] = spread;
  r.statistics["fiducial_deviation"] = fiducial;
  r.statistics["bath_spectrum_error"] = spectrum_error;
  r.statistics["purity_error"] = purity_error;
  r.records.push_back(RecordSection{"outcomes", trials.records});
  r.ledger = interpretation_ledger("relocate", detail::relocation_trace(outcomes, m));
  return r;
}

}  // namespace bhsi
