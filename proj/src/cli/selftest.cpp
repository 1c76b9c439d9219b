#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "bhsi/cli.hpp"

namespace bhsi::cli {

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Outcome bound(double value, double limit) { return {value <= limit, fmt(value) + " <= " + fmt(limit)}; }

Outcome measurement_unitarity(double tol) {
  double worst = 0.0;
  for (std::size_t d = 1; d <= 4; ++d) {
    for (double eps : {0.0, 0.5}) {
      const EnvironmentModel env = make_environment(d, minimal_qubits(d), eps);
      const BranchingOperator b = make_branching_operator(Subsystem{"S", d, Role::System}, env);
      const SpaceDescription space(
          {Subsystem{"S", d, Role::System}, ObserverState::ready(d).subsystem(), env.subsystem()});
      for (std::size_t beta = 0; beta < d; ++beta) {
        worst = std::max(worst, unitarity_defect(measurement_operator(space, b, "O", beta).matrix()));
      }
    }
  }
  return bound(worst, tol);
}

Outcome debranch_round_trip(double tol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    Rng rng = Rng::for_trial(kSeed, i, 7);
    const std::size_t d = 1 + i % 6;
    const EnvironmentModel env = make_environment(d, 3, 0.1 * static_cast<double>(i % 3));
    const BranchingOperator b = make_branching_operator(Subsystem{"S", d, Role::System}, env);
    const StateVector s = tensor(random_state(single_space("S", d), rng), env.ready);
    worst = std::max(worst, max_abs_diff(debranch(branch(s, b), b), s));
  }
  return bound(worst, tol);
}

Outcome lifted_evolution(double tol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    Rng rng = Rng::for_trial(kSeed, i, 8);
    const std::size_t d = 2 + i % 3;
    const EnvironmentModel env = make_environment(d, 2, 0.0);
    const BranchingOperator b = make_branching_operator(Subsystem{"S", d, Role::System}, env);
    const SpaceDescription sys = single_space("S", d);
    const LinearOperator u(sys, random_unitary(d, rng), true);
    const StateVector psi = random_state(sys, rng);
    const StateVector lhs = b.apply(tensor(apply(u, psi), env.ready));
    const StateVector rhs = apply(lift(u, b), b.apply(tensor(psi, env.ready)));
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  return bound(worst, tol);
}

Outcome born_rule() {
  RunOptions run;
  run.trials = 20000;
  run.seed = kSeed;
  const ScenarioReport r = scenario_qubit(Complex(0.6), Complex(0.8), run);
  const double dev = std::abs(r.stat("frequency_1") - 0.64);
  return bound(dev, 5.0 * std::sqrt(0.64 * 0.36 / 20000.0));
}

Outcome entropy(double tol) {
  const std::vector<double> w{0.36, 0.64};
  const double expected = -0.36 * std::log(0.36) - 0.64 * std::log(0.64);
  RunOptions run;
  run.trials = 10;
  run.seed = kSeed;
  const ScenarioReport r = scenario_qubit(Complex(0.6), Complex(0.8), run);
  const double err = std::max(std::abs(shannon_entropy(w) - expected), std::abs(r.stat("entropy_local") - expected));
  return bound(std::max(err, std::abs(r.stat("entropy_global"))), tol);
}

Outcome local_strategies(double tol) {
  double worst = 0.0;
  for (int s = 0; s < 16; ++s) {
    const double a = (s & 1) ? 1 : -1;
    const double ap = (s & 2) ? 1 : -1;
    const double b = (s & 4) ? 1 : -1;
    const double bp = (s & 8) ? 1 : -1;
    worst = std::max(worst, std::abs(a * b - a * bp + ap * b + ap * bp));
  }
  return bound(worst, 2.0 + tol);
}

Outcome chsh_violation() {
  RunOptions run;
  run.trials = 20000;
  run.seed = kSeed;
  const ScenarioReport r = scenario_bell(BellAngles{}, run);
  return bound(std::abs(r.stat("S") - 2.0 * std::numbers::sqrt2), 0.08);
}

Outcome wigner_agreement() {
  RunOptions run;
  run.trials = 2000;
  run.seed = kSeed;
  const double rate = scenario_wigners_friend(run).stat("agreement_rate");
  return {rate == 1.0, "agreement " + fmt(rate)};
}

Outcome eraser_records() {
  RunOptions run;
  run.trials = 2000;
  run.seed = kSeed;
  const auto on = scenario_eraser(true, run);
  const auto off = scenario_eraser(false, run);
  const bool same = on.record_section("screen").records == off.record_section("screen").records;
  return {same, same ? "screen records identical" : "screen records differ"};
}

Outcome relocation(double tol) {
  double worst = 0.0;
  for (std::size_t d = 2; d <= 4; ++d) {
    RunOptions run;
    run.trials = 10;
    run.seed = kSeed + d;
    const ScenarioReport r = scenario_relocation(d, run);
    worst = std::max({worst, r.stat("marginal_spread"), r.stat("bath_spectrum_error"), r.stat("purity_error")});
  }
  return bound(worst, tol);
}

Outcome ledger_counts() {
  const auto qubit = interpretation_ledger("qubit", canonical_trace("qubit"));
  const auto bell = interpretation_ledger("bell", canonical_trace("bell"));
  const bool ok = qubit[0].collapses == 1 && qubit[1].worlds == 2 && qubit[1].observer_copies == 2 &&
                  qubit[2].worlds == 2 && qubit[2].observer_copies == 1 && bell[1].worlds == 4 &&
                  bell[2].worlds == 4;
  return {ok, ok ? "qubit and bell rows match" : "ledger rows differ"};
}

Outcome jobs_invariance() {
  RunOptions one;
  one.trials = 3000;
  one.seed = kSeed;
  RunOptions many = one;
  many.jobs = 4;
  const bool same = serialize(scenario_double_slit({}, one), {Format::Json, true}) ==
                    serialize(scenario_double_slit({}, many), {Format::Json, true});
  return {same, same ? "identical reports" : "reports differ"};
}

}  // namespace

std::vector<SelftestCheck> selftest(double tol) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"measurement-unitarity", [tol] { return measurement_unitarity(tol); }},
      {"debranch-round-trip", [tol] { return debranch_round_trip(tol); }},
      {"lifted-evolution", [tol] { return lifted_evolution(tol); }},
      {"born-rule", born_rule},
      {"entropy", [tol] { return entropy(tol); }},
      {"local-strategies", [tol] { return local_strategies(tol); }},
      {"chsh-violation", chsh_violation},
      {"wigner-agreement", wigner_agreement},
      {"eraser-screen-records", eraser_records},
      {"relocation", [tol] { return relocation(tol); }},
      {"ledger", ledger_counts},
      {"jobs-invariance", jobs_invariance},
  };
  std::vector<SelftestCheck> results;
  for (const auto& [name, fn] : checks) {
    try {
      const Outcome o = fn();
      results.push_back({name, o.pass, o.detail});
    } catch (const std::exception& e) {
      results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return results;
}

}  // namespace bhsi::cli
