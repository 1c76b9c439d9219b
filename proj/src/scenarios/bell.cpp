#include <cmath>
#include <numbers>

#include "common.hpp"

namespace bhsi {

double singlet_correlation(double a, double b) { return -std::cos(2.0 * (a - b)); }

namespace {

// Analyzer at angle θ: measuring in the rotated basis is R(θ)† followed by
// a computational-basis branching.
LinearOperator analyzer(const std::string& id, double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return LinearOperator(single_space(id, 2), std::move(r), true);
}

constexpr std::array<const char*, 4> kSettingNames{"a_b", "a_bp", "ap_b", "ap_bp"};

}  // namespace

ScenarioReport scenario_bell(const BellAngles& angles, const RunOptions& run) {
  if (run.trials == 0) {
    throw ArgumentError("trials must be at least 1");
  }
  const EnvironmentModel env_a = make_environment(2, 1, 0.0, "LA");
  const EnvironmentModel env_b = make_environment(2, 1, 0.0, "LB");
  const BranchingOperator alice = make_branching_operator(Subsystem{"A", 2, Role::System}, env_a);
  const BranchingOperator bob = make_branching_operator(Subsystem{"B", 2, Role::System}, env_b);

  // (|HV⟩ − |VH⟩)/√2 with H = 0, V = 1.
  Vector singlet = Vector::Zero(4);
  singlet[1] = std::numbers::sqrt2 / 2.0;
  singlet[2] = -std::numbers::sqrt2 / 2.0;
  const StateVector pair(SpaceDescription({{"A", 2, Role::System}, {"B", 2, Role::System}}), singlet);

  const std::array<std::pair<double, double>, 4> settings{
      {{angles.a, angles.b}, {angles.a, angles.b_prime}, {angles.a_prime, angles.b}, {angles.a_prime, angles.b_prime}}};

  ScenarioReport r;
  r.scenario = "bell";
  r.seed = run.seed;
  r.config["trials"] = run.trials;
  r.config["a"] = angles.a;
  r.config["a_prime"] = angles.a_prime;
  r.config["b"] = angles.b;
  r.config["b_prime"] = angles.b_prime;

  CorrelationSettings corr{angles.a, angles.a_prime, angles.b, angles.b_prime, {}};
  const std::size_t n = run.trials;
  std::size_t local_branches = 0;
  double s_analytic = 0.0;

  for (std::size_t s = 0; s < settings.size(); ++s) {
    const auto [theta_a, theta_b] = settings[s];
    const StateVector rotated = apply_local(analyzer("B", theta_b), apply_local(analyzer("A", theta_a), pair));
    const StateVector prepared = tensor(tensor(rotated, env_a.ready), env_b.ready);

    auto after_alice = std::make_shared<const BranchedState>(branch(prepared, alice));
    auto after_bob = std::make_shared<const BranchedState>(branch(after_alice->joint(), bob));
    const std::array<std::vector<double>, 2> bob_given{conditional_weights(*after_bob, {{"A", 0}}),
                                                      conditional_weights(*after_bob, {{"A", 1}})};
    if (s == 0) {
      local_branches = after_alice->branches().size() + after_bob->branches().size();
    }

    RecordSection alice_records{std::string("alice.") + kSettingNames[s], {}};
    RecordSection bob_records{std::string("bob.") + kSettingNames[s], {}};
    alice_records.records.reserve(n);
    bob_records.records.reserve(n);
    std::array<std::size_t, 4> joint{};
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint64_t trial = s * n + t;
      Rng rng_a = Rng::for_trial(run.seed, trial, 0);
      const std::size_t oa = sample_branch(*after_alice, rng_a);
      disengage(engage(after_alice, oa, "OA"));

      // Bob reads his own branch; the branch he lands in is fixed by the
      // joint weights given Alice's record.
      Rng rng_b = Rng::for_trial(run.seed, trial, 1);
      const std::size_t ob = detail::sample_index(bob_given[oa], rng_b);
      disengage(engage(after_bob, ob, "OB"));

      alice_records.records.push_back({oa, after_alice->weights()[oa], trial, run.seed, 2 * trial});
      bob_records.records.push_back({ob, bob_given[oa][ob], trial, run.seed, 2 * trial + 1});
      ++joint[oa * 2 + ob];
    }

    PairCounts& pc = corr.counts[s];
    pc.pp = joint[0];
    pc.pm = joint[1];
    pc.mp = joint[2];
    pc.mm = joint[3];

    const std::vector<std::string> ab{"A", "B"};
    const std::string name = kSettingNames[s];
    r.frequencies.push_back(detail::outcome_section("pairs." + name, {"++", "+-", "-+", "--"},
                                                    {joint.begin(), joint.end()},
                                                    marginal_probabilities(after_bob->joint(), ab)));
    const double e = correlation(pc);
    const double e_analytic = singlet_correlation(theta_a, theta_b);
    r.statistics["E_" + name] = e;
    r.statistics["E_" + name + "_analytic"] = e_analytic;
    r.statistics["sigma_" + name] = std::sqrt((1.0 - e_analytic * e_analytic) / static_cast<double>(n));
    r.statistics["alice_p0_" + name] = static_cast<double>(joint[0] + joint[1]) / static_cast<double>(n);
    r.statistics["bob_p0_" + name] = static_cast<double>(joint[0] + joint[2]) / static_cast<double>(n);
    s_analytic += (s == 1 ? -e_analytic : e_analytic);
    r.records.push_back(std::move(alice_records));
    r.records.push_back(std::move(bob_records));
  }

  const double s_value = chsh(corr);
  r.statistics["S"] = s_value;
  r.statistics["S_analytic"] = std::abs(s_analytic);
  r.statistics["tsirelson_gap"] = std::abs(s_value - 2.0 * std::numbers::sqrt2);
  r.statistics["local_branches_per_pair"] = local_branches;
  r.ledger = interpretation_ledger("bell", detail::bell_trace());
  return r;
}

}  // namespace bhsi
