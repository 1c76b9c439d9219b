#include <cmath>
#include <numbers>

#include "common.hpp"

namespace bhsi {

namespace {

// Far-field envelope width is λL/(κ w); κ sets how many fringes sit under it.
constexpr double kEnvelopeConstant = 8.0;
constexpr std::size_t kMaxBins = 1024;

}  // namespace

void DoubleSlitConfig::validate() const {
  if (bins < 16 || bins > kMaxBins) {
    throw ConfigError("bins must be in [16, " + std::to_string(kMaxBins) + "]");
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("screen range must satisfy x-min < x-max");
  }
  if (!(width > 0.0) || !(separation > width)) {
    throw ConfigError("slit geometry must satisfy separation > width > 0");
  }
  if (!(wavelength > 0.0) || !(screen_distance > 0.0)) {
    throw ConfigError("wavelength and screen distance must be positive");
  }
  if (!(marker_overlap >= 0.0 && marker_overlap < 1.0)) {
    throw ConfigError("marker overlap must lie in [0, 1)");
  }
  if (closed_slit && *closed_slit > 1) {
    throw ConfigError("closed slit must be 0 or 1");
  }
}

std::vector<double> DoubleSlitConfig::positions() const {
  std::vector<double> x(bins);
  const double dx = bin_width();
  for (std::size_t k = 0; k < bins; ++k) {
    x[k] = x_min + (static_cast<double>(k) + 0.5) * dx;
  }
  return x;
}

double DoubleSlitConfig::fringe_frequency() const {
  return 2.0 * std::numbers::pi * separation / (wavelength * screen_distance);
}

std::array<std::vector<Complex>, 2> DoubleSlitConfig::path_amplitudes() const {
  const double sigma = wavelength * screen_distance / (kEnvelopeConstant * width);
  const double k_path = 2.0 * std::numbers::pi / (wavelength * screen_distance);
  const std::array<double, 2> offsets{0.5 * separation, -0.5 * separation};
  const std::vector<double> x = positions();
  std::array<std::vector<Complex>, 2> psi;
  for (std::size_t j = 0; j < 2; ++j) {
    psi[j].resize(bins);
    const bool open = !closed_slit || *closed_slit != j;
    for (std::size_t k = 0; k < bins; ++k) {
      const double envelope = std::exp(-x[k] * x[k] / (2.0 * sigma * sigma));
      psi[j][k] = open ? std::polar(envelope, k_path * offsets[j] * x[k]) : Complex(0.0);
    }
  }
  return psi;
}

std::vector<double> DoubleSlitConfig::target() const {
  const auto psi = path_amplitudes();
  const bool marked = marking && !closed_slit;
  std::vector<double> p(bins);
  double total = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const Complex a = psi[0][k];
    const Complex b = psi[1][k];
    p[k] = marked ? std::norm(a) + std::norm(b) + 2.0 * marker_overlap * (std::conj(a) * b).real() : std::norm(a + b);
    p[k] *= bin_width();
    total += p[k];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ConfigError("screen distribution cannot be normalized");
  }
  for (double& v : p) {
    v /= total;
  }
  return p;
}

namespace {

// System ⊗ (which-way pointer) ⊗ ready screen environment.
StateVector prepare_screen(const DoubleSlitConfig& cfg, const EnvironmentModel& env) {
  const auto psi = cfg.path_amplitudes();
  const double root_dx = std::sqrt(cfg.bin_width());
  const Subsystem screen{"X", cfg.bins, Role::System};
  const Subsystem local = env.subsystem();
  const auto n = static_cast<Eigen::Index>(cfg.bins);
  const auto l = static_cast<Eigen::Index>(env.dimension());

  if (!cfg.marking || cfg.closed_slit) {
    Vector v = Vector::Zero(n * l);
    for (Eigen::Index k = 0; k < n; ++k) {
      v[k * l] = (psi[0][static_cast<std::size_t>(k)] + psi[1][static_cast<std::size_t>(k)]) * root_dx;
    }
    return StateVector::normalized(SpaceDescription({screen, local}), std::move(v));
  }

  const EnvironmentModel marker = make_environment(2, 1, cfg.marker_overlap, "W");
  Vector v = Vector::Zero(n * 2 * l);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index w = 0; w < 2; ++w) {
      Complex a = 0.0;
      for (std::size_t j = 0; j < 2; ++j) {
        a += psi[j][static_cast<std::size_t>(k)] * marker.pointers[j].amplitudes()[w];
      }
      v[(k * 2 + w) * l] = a * root_dx;
    }
  }
  return StateVector::normalized(SpaceDescription({screen, marker.subsystem(), local}), std::move(v));
}

}  // namespace

ScenarioReport scenario_double_slit(const DoubleSlitConfig& cfg, const RunOptions& run) {
  cfg.validate();
  const std::size_t m = minimal_qubits(cfg.bins);
  const EnvironmentModel env = make_environment(cfg.bins, m, 0.0);
  const BranchingOperator b = make_branching_operator(Subsystem{"X", cfg.bins, Role::System}, env);
  const StateVector prepared = prepare_screen(cfg, env);

  TrialOptions opts;
  opts.seed = run.seed;
  opts.jobs = run.jobs;
  const TrialRun trials = run_trials(prepared, b, run.trials, opts);
  const BranchedState& bs = *trials.branched;

  const std::vector<double> target = cfg.target();
  const FrequencyTable table(trials.counts);
  const std::vector<double> freq = table.frequencies();
  const std::vector<double> x = cfg.positions();

  ScenarioReport r;
  r.scenario = "double-slit";
  r.seed = run.seed;
  r.config["trials"] = run.trials;
  r.config["bins"] = cfg.bins;
  r.config["x_min"] = cfg.x_min;
  r.config["x_max"] = cfg.x_max;
  r.config["separation"] = cfg.separation;
  r.config["width"] = cfg.width;
  r.config["wavelength"] = cfg.wavelength;
  r.config["screen_distance"] = cfg.screen_distance;
  r.config["marking"] = cfg.marking;
  r.config["marker_overlap"] = cfg.marker_overlap;
  r.config["closed_slit"] = cfg.closed_slit ? Json(*cfg.closed_slit) : Json(nullptr);
  r.frequencies.push_back(detail::outcome_section("screen", detail::label_names(b.basis()), trials.counts, target));

  double weight_gap = 0.0;
  for (std::size_t k = 0; k < cfg.bins; ++k) {
    weight_gap = std::max(weight_gap, std::abs(bs.weights()[k] - target[k]));
  }
  r.statistics["bin_width"] = cfg.bin_width();
  r.statistics["env_qubits"] = m;
  r.statistics["fringe_frequency"] = cfg.fringe_frequency();
  r.statistics["branch_count"] = bs.branches().size();
  r.statistics["weights_vs_target"] = weight_gap;
  r.statistics["l1_to_target"] = l1_distance(freq, target);
  r.statistics["visibility"] = visibility(freq);
  r.statistics["visibility_target"] = visibility(target);
  r.statistics["fringe_phase"] = fringe_phase(freq, x, cfg.fringe_frequency());
  const EntropyLedger ent = entropy_ledger(prepared, bs.weights());
  r.statistics["entropy_local"] = ent.local;
  r.statistics["entropy_global"] = ent.global;
  r.records.push_back(RecordSection{"screen", trials.records});
  r.ledger = interpretation_ledger("double-slit", detail::double_slit_trace(cfg, m));
  return r;
}

}  // namespace bhsi
