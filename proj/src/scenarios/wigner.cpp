#include <cmath>
#include <numbers>

#include "common.hpp"

namespace bhsi {

ScenarioReport scenario_wigners_friend(const RunOptions& run) {
  if (run.trials == 0) {
    throw ArgumentError("trials must be at least 1");
  }
  // Friend branches the qubit against LF; Wigner then branches LF itself
  // against LW, so his pointer can only follow Friend's.
  const EnvironmentModel env_f = make_environment(2, 1, 0.0, "LF");
  const EnvironmentModel env_w = make_environment(2, 1, 0.0, "LW");
  const BranchingOperator friend_op = make_branching_operator(Subsystem{"Q", 2, Role::System}, env_f);
  const BranchingOperator wigner_op = make_branching_operator(env_f.subsystem(), env_w);

  const double h = std::numbers::sqrt2 / 2.0;
  const StateVector q = detail::system_state("Q", {Complex(h), Complex(h)});
  const StateVector prepared = tensor(tensor(q, env_f.ready), env_w.ready);

  auto after_friend = std::make_shared<const BranchedState>(branch(prepared, friend_op));
  auto after_wigner = std::make_shared<const BranchedState>(branch(after_friend->joint(), wigner_op));
  const std::array<std::vector<double>, 2> wigner_given{conditional_weights(*after_wigner, {{"Q", 0}}),
                                                       conditional_weights(*after_wigner, {{"Q", 1}})};

  const std::size_t n = run.trials;
  RecordSection friend_records{"friend", {}};
  RecordSection wigner_records{"wigner", {}};
  friend_records.records.reserve(n);
  wigner_records.records.reserve(n);
  std::vector<std::size_t> friend_counts(2, 0);
  std::vector<std::size_t> wigner_counts(2, 0);
  std::size_t agree = 0;

  for (std::size_t t = 0; t < n; ++t) {
    Rng rng = Rng::for_trial(run.seed, t, 0);
    const std::size_t f = sample_branch(*after_friend, rng);
    disengage(engage(after_friend, f, "OF"));

    // No draw for Wigner: the conditional distribution must be a point mass.
    const std::vector<double>& given = wigner_given[f];
    const std::size_t w = given[0] >= given[1] ? 0 : 1;
    if (given[w] < 1.0 - kOracleTol) {
      throw InvariantError("Wigner's record is not fixed by Friend's branch");
    }
    disengage(engage(after_wigner, w, "OW"));

    friend_records.records.push_back({f, after_friend->weights()[f], t, run.seed, 2 * t});
    wigner_records.records.push_back({w, given[w], t, run.seed, 2 * t + 1});
    ++friend_counts[f];
    ++wigner_counts[w];
    agree += f == w ? 1 : 0;
  }

  ScenarioReport r;
  r.scenario = "wigner";
  r.seed = run.seed;
  r.config["trials"] = n;
  r.frequencies.push_back(detail::outcome_section("friend", detail::label_names(friend_op.basis()), friend_counts,
                                                  after_friend->weights()));
  r.frequencies.push_back(detail::outcome_section("wigner", detail::label_names(wigner_op.basis()), wigner_counts,
                                                  after_wigner->weights()));
  const auto dn = static_cast<double>(n);
  r.statistics["agreement_rate"] = static_cast<double>(agree) / dn;
  r.statistics["friend_frequency_0"] = static_cast<double>(friend_counts[0]) / dn;
  r.statistics["friend_frequency_1"] = static_cast<double>(friend_counts[1]) / dn;
  r.statistics["sigma"] = std::sqrt(0.25 / dn);
  r.statistics["branch_count"] = after_friend->branches().size();
  r.statistics["wigner_branch_count"] = after_wigner->branches().size();

  const ScenarioTrace trace = detail::wigner_trace();
  std::size_t dominant = 0;
  for (const auto& e : trace.events) {
    dominant += e.synchronized ? 0 : 1;
  }
  r.statistics["dominant_events"] = dominant;
  r.records.push_back(std::move(friend_records));
  r.records.push_back(std::move(wigner_records));
  r.ledger = interpretation_ledger("wigner", trace);
  return r;
}

}  // namespace bhsi
