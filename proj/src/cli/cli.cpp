#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "bhsi/cli.hpp"

namespace bhsi::cli {

namespace {

// "0.6", "0.6+0.8i", "-0.8j"
std::optional<Complex> parse_amplitude(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double first = std::strtod(begin, &end);
  if (end == begin) {
    return std::nullopt;
  }
  std::string rest(end);
  if (rest.empty()) {
    return Complex(first, 0.0);
  }
  if (rest == "i" || rest == "j") {
    return Complex(0.0, first);
  }
  const char* tail = end;
  const double second = std::strtod(tail, &end);
  if (end == tail || (*tail != '+' && *tail != '-')) {
    return std::nullopt;
  }
  rest = end;
  if (rest != "i" && rest != "j") {
    return std::nullopt;
  }
  return Complex(first, second);
}

struct Common {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
  bool records = false;
  unsigned jobs = 1;
  int digits = 17;
};

void add_common(CLI::App* sub, Common& c, bool with_trials) {
  if (with_trials) {
    sub->add_option("--trials", c.trials, "number of trials (per setting for bell)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}))
        ->capture_default_str();
  }
  sub->add_option("--seed", c.seed, "RNG seed (required)")->required();
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--output", c.output, "write the report here instead of stdout");
  sub->add_flag("--records", c.records, "include raw measurement records");
  if (with_trials) {
    sub->add_option("--jobs", c.jobs, "worker threads for trials")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
  }
  sub->add_option("--tol-digits", c.digits, "significant digits written for reals")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
}

struct Environment {
  double epsilon = 0.0;
  std::size_t qubits = 0;
};

void add_environment(CLI::App* sub, Environment& e) {
  sub->add_option("--epsilon", e.epsilon, "pointer-state overlap in [0, 1)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--env-qubits", e.qubits, "local environment qubits (0 = minimal)")
      ->check(CLI::Range(std::size_t{0}, std::size_t{20}))
      ->capture_default_str();
}

void add_screen(CLI::App* sub, DoubleSlitConfig& cfg) {
  sub->add_option("--bins", cfg.bins, "screen bins")->check(CLI::Range(16, 1024))->capture_default_str();
  sub->add_option("--x-min", cfg.x_min, "left screen edge")->capture_default_str();
  sub->add_option("--x-max", cfg.x_max, "right screen edge")->capture_default_str();
  sub->add_option("--separation", cfg.separation, "slit separation")->capture_default_str();
  sub->add_option("--width", cfg.width, "slit width")->capture_default_str();
  sub->add_option("--wavelength", cfg.wavelength, "wavelength")->capture_default_str();
  sub->add_option("--screen-distance", cfg.screen_distance, "slit-to-screen distance")->capture_default_str();
}

RunOptions run_options(const Common& c) {
  RunOptions r;
  r.trials = c.trials;
  r.seed = c.seed;
  r.jobs = c.jobs;
  return r;
}

int emit(const ScenarioReport& report, const Common& c, std::ostream& out, std::ostream& err) {
  const SerializeOptions opts{c.format == "csv" ? Format::Csv : Format::Json, c.records, c.digits};
  const std::string text = serialize(report, opts);
  if (c.output.empty()) {
    out << text;
    return 0;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file || !(file << text)) {
    err << "error: cannot write " << c.output << "\n";
    return 1;
  }
  return 0;
}

int run_selftest(std::ostream& out, std::ostream& err) {
  double tol = kStructuralTol;
  if (const char* env = std::getenv("BHSI_TOL_DIGITS")) {
    char* end = nullptr;
    const long digits = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || digits < 1 || digits > 15) {
      err << "error: BHSI_TOL_DIGITS must be an integer in [1, 15]\n";
      return 1;
    }
    tol = std::pow(10.0, -static_cast<double>(digits));
  }
  std::size_t passed = 0;
  const auto checks = selftest(tol);
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
    passed += c.pass ? 1 : 0;
  }
  out << "selftest: " << passed << "/" << checks.size() << " passed\n";
  return passed == checks.size() ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Branched Hilbert subspace measurement simulator", "bhsi"};
  app.require_subcommand(1);

  Common common;
  Environment environment;
  std::string a0_text = "0.70710678118654752";
  std::string a1_text = "0.70710678118654752";
  DoubleSlitConfig slit;
  std::optional<std::size_t> close_slit;
  std::vector<double> angles;
  bool erase = false;
  std::size_t dim = 2;
  std::string ledger_scenario = "qubit";

  auto* single = app.add_subcommand("single", "one-outcome measurement");
  add_common(single, common, true);
  add_environment(single, environment);

  auto* qubit = app.add_subcommand("qubit", "qubit measurement a0|0> + a1|1>");
  add_common(qubit, common, true);
  add_environment(qubit, environment);
  qubit->add_option("--a0", a0_text, "amplitude of |0>, e.g. 0.6 or 0.6+0.1i")->capture_default_str();
  qubit->add_option("--a1", a1_text, "amplitude of |1>")->capture_default_str();

  auto* double_slit = app.add_subcommand("double-slit", "two-slit screen histogram");
  add_common(double_slit, common, true);
  add_screen(double_slit, slit);
  double_slit->add_flag("--marking", slit.marking, "record which-way information");
  double_slit->add_option("--marker-overlap", slit.marker_overlap, "which-way pointer overlap in [0, 1)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  double_slit->add_option("--close-slit", close_slit, "close slit 0 or 1")->check(CLI::Range(0, 1));

  auto* bell = app.add_subcommand("bell", "CHSH test on singlet pairs");
  add_common(bell, common, true);
  bell->add_option("--angles", angles, "a,a',b,b' in radians")->delimiter(',')->expected(4);

  auto* wigner = app.add_subcommand("wigner", "Wigner's friend");
  add_common(wigner, common, true);

  auto* eraser = app.add_subcommand("eraser", "delayed-choice quantum eraser");
  add_common(eraser, common, true);
  add_screen(eraser, slit);
  eraser->add_flag("--erase", erase, "measure the idler in the diagonal basis");

  auto* relocate = app.add_subcommand("relocate", "move a branched state into a bath");
  add_common(relocate, common, true);
  add_environment(relocate, environment);
  relocate->add_option("--dim", dim, "system dimension")->check(CLI::Range(1, 8))->capture_default_str();

  auto* ledger = app.add_subcommand("ledger", "interpretation ledger of a scenario");
  add_common(ledger, common, false);
  ledger->add_option("--scenario", ledger_scenario, "scenario name")
      ->check(CLI::IsMember({"single", "qubit", "double-slit", "bell", "wigner", "eraser", "relocate"}))
      ->capture_default_str();

  auto* self = app.add_subcommand("selftest", "run the invariant checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 1;
  }

  try {
    if (self->parsed()) {
      return run_selftest(out, err);
    }
    const RunOptions run = run_options(common);
    if (single->parsed()) {
      return emit(scenario_single_outcome(run, environment.qubits == 0 ? 1 : environment.qubits, environment.epsilon),
                  common, out, err);
    }
    if (qubit->parsed()) {
      const auto a0 = parse_amplitude(a0_text);
      const auto a1 = parse_amplitude(a1_text);
      if (!a0 || !a1) {
        err << "error: --" << (a0 ? "a1" : "a0") << ": not a number or complex literal\n";
        return 1;
      }
      return emit(scenario_qubit(*a0, *a1, run, environment.qubits == 0 ? 1 : environment.qubits,
                                 environment.epsilon),
                  common, out, err);
    }
    if (double_slit->parsed()) {
      slit.closed_slit = close_slit;
      return emit(scenario_double_slit(slit, run), common, out, err);
    }
    if (bell->parsed()) {
      BellAngles a;
      if (!angles.empty()) {
        a = {angles[0], angles[1], angles[2], angles[3]};
      }
      return emit(scenario_bell(a, run), common, out, err);
    }
    if (wigner->parsed()) {
      return emit(scenario_wigners_friend(run), common, out, err);
    }
    if (eraser->parsed()) {
      return emit(scenario_eraser(erase, run, slit), common, out, err);
    }
    if (relocate->parsed()) {
      return emit(scenario_relocation(dim, run, environment.qubits, environment.epsilon), common, out, err);
    }
    return emit(ledger_report(ledger_scenario, common.seed), common, out, err);
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const StateError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bhsi::cli
