#include <cmath>
#include <cstdio>
#include <numbers>

#include "common.hpp"

namespace bhsi {

namespace {

double safe_visibility(const std::vector<double>& h) {
  double total = 0.0;
  for (double v : h) {
    total += v;
  }
  return total > 0.0 ? visibility(h) : 0.0;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a;
}

// FNV-1a over (outcome, order) pairs.
std::uint64_t record_digest(const std::vector<MeasurementRecord>& records) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& r : records) {
    mix(r.outcome);
    mix(r.order);
  }
  return h;
}

}  // namespace

ScenarioReport scenario_eraser(bool erase, const RunOptions& run, const DoubleSlitConfig& screen) {
  screen.validate();
  if (run.trials == 0) {
    throw ArgumentError("trials must be at least 1");
  }
  const std::size_t bins = screen.bins;
  const std::size_t m = minimal_qubits(bins);
  const EnvironmentModel env = make_environment(bins, m, 0.0);
  const BranchingOperator screen_op = make_branching_operator(Subsystem{"X", bins, Role::System}, env);

  // Slit identity held by the idler in its computational basis.
  const auto psi = screen.path_amplitudes();
  const auto l = static_cast<Eigen::Index>(env.dimension());
  Vector v = Vector::Zero(static_cast<Eigen::Index>(bins) * 2 * l);
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::size_t j = 0; j < 2; ++j) {
      v[static_cast<Eigen::Index>(k * 2 + j) * l] = psi[j][k];
    }
  }
  const StateVector prepared = StateVector::normalized(
      SpaceDescription({{"X", bins, Role::System}, {"I", 2, Role::Ancilla}, env.subsystem()}), std::move(v));

  // Screen records come first and never see the erase flag.
  TrialOptions opts;
  opts.seed = run.seed;
  opts.stream = 0;
  opts.jobs = run.jobs;
  const TrialRun hits = run_trials(prepared, screen_op, run.trials, opts);

  StateVector joint = hits.branched->joint();
  if (erase) {
    const double h = std::numbers::sqrt2 / 2.0;
    Matrix hadamard(2, 2);
    hadamard << h, h, h, -h;
    joint = apply_local(LinearOperator(single_space("I", 2, Role::Ancilla), std::move(hadamard), true), joint);
  }
  const EnvironmentModel env_i = make_environment(2, 1, 0.0, "LI");
  const BranchingOperator idler_op = make_branching_operator(Subsystem{"I", 2, Role::Ancilla}, env_i);
  auto idler_state = std::make_shared<const BranchedState>(branch(tensor(joint, env_i.ready), idler_op));

  // P(idler | screen bin) from the joint Born table.
  const std::vector<std::string> xi{"X", "I"};
  const std::vector<double> table = marginal_probabilities(idler_state->joint(), xi);
  std::vector<std::array<double, 2>> given(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double total = table[2 * k] + table[2 * k + 1];
    given[k] = total > 0.0 ? std::array<double, 2>{table[2 * k] / total, table[2 * k + 1] / total}
                           : std::array<double, 2>{0.5, 0.5};
  }

  const std::size_t n = run.trials;
  RecordSection idler_records{"idler", {}};
  idler_records.records.reserve(n);
  std::array<std::vector<double>, 2> sub{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
  std::array<std::vector<std::size_t>, 2> sub_counts{std::vector<std::size_t>(bins, 0),
                                                     std::vector<std::size_t>(bins, 0)};
  std::vector<std::size_t> idler_counts(2, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t k = hits.records[t].outcome;
    Rng rng = Rng::for_trial(run.seed, t, 1);
    const std::vector<double> w{given[k][0], given[k][1]};
    const std::size_t i = detail::sample_index(w, rng);
    disengage(engage(idler_state, i, "OI"));
    idler_records.records.push_back({i, w[i], t, run.seed, n + t});
    sub[i][k] += 1.0;
    ++sub_counts[i][k];
    ++idler_counts[i];
  }

  const std::vector<double> x = screen.positions();
  const double q = screen.fringe_frequency();
  const std::vector<double> pooled = detail::histogram(hits.records, bins);

  ScenarioReport r;
  r.scenario = "eraser";
  r.seed = run.seed;
  r.config["trials"] = n;
  r.config["erase"] = erase;
  r.config["bins"] = bins;
  r.config["separation"] = screen.separation;
  r.config["width"] = screen.width;
  r.config["wavelength"] = screen.wavelength;
  r.config["screen_distance"] = screen.screen_distance;

  const std::vector<std::string> screen_labels = detail::label_names(screen_op.basis());
  r.frequencies.push_back(detail::outcome_section("screen", screen_labels, hits.counts, hits.branched->weights()));
  const std::vector<std::string> i_only{"I"};
  r.frequencies.push_back(detail::outcome_section("idler", detail::label_names(idler_op.basis()), idler_counts,
                                                  marginal_probabilities(idler_state->joint(), i_only)));
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> expected(bins);
    double total = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      expected[k] = table[2 * k + i];
      total += expected[k];
    }
    for (double& e : expected) {
      e = total > 0.0 ? e / total : 0.0;
    }
    r.frequencies.push_back(
        detail::outcome_section("screen.idler_" + std::to_string(i), screen_labels, sub_counts[i], std::move(expected)));
  }

  const double phase0 = fringe_phase(sub[0], x, q);
  const double phase1 = fringe_phase(sub[1], x, q);
  r.statistics["visibility_idler_0"] = safe_visibility(sub[0]);
  r.statistics["visibility_idler_1"] = safe_visibility(sub[1]);
  r.statistics["visibility_pooled"] = safe_visibility(pooled);
  r.statistics["fringe_phase_0"] = phase0;
  r.statistics["fringe_phase_1"] = phase1;
  r.statistics["fringe_phase_difference"] = std::abs(wrap_angle(phase0 - phase1));
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(record_digest(hits.records)));
  r.statistics["screen_record_digest"] = std::string(digest);
  r.records.push_back(RecordSection{"screen", hits.records});
  r.records.push_back(std::move(idler_records));
  r.ledger = interpretation_ledger("eraser", detail::eraser_trace(screen, m));
  return r;
}

}  // namespace bhsi
