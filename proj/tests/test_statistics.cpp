#include <gtest/gtest.h>

#include <numbers>

#include "bhsi/branching.hpp"
#include "bhsi/rng.hpp"
#include "bhsi/statistics.hpp"
#include "support.hpp"

namespace bhsi {
namespace {

std::vector<BasisLabel> labels(std::size_t d) { return basis_labels(Subsystem{"S", d, Role::System}); }

double formula_entropy(const std::vector<double>& w) {
  double s = 0.0;
  for (double p : w) {
    if (p > 0.0) {
      s -= p * std::log(p);
    }
  }
  return s;
}

TEST(FrequencyTable, CountsAndFrequencies) {
  const std::vector<std::size_t> outcomes{0, 2, 2, 1, 2, 0, 2};
  const auto t = FrequencyTable::from_outcomes(outcomes, 4);
  EXPECT_EQ(t.total(), 7u);
  EXPECT_EQ(t.counts(), (std::vector<std::size_t>{2, 1, 4, 0}));
  EXPECT_EQ(t.frequency(2), 4.0 / 7.0);
  std::size_t sum = 0;
  for (std::size_t c : t.counts()) {
    sum += c;
  }
  EXPECT_EQ(sum, t.total());
  const std::vector<std::size_t> bad{5};
  EXPECT_THROW(FrequencyTable::from_outcomes(bad, 4), ArgumentError);
  EXPECT_EQ(FrequencyTable({0, 0}).frequency(0), 0.0);
}

TEST(FrequencyTable, FrequenciesSumToOne) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> counts(1 + static_cast<std::size_t>(trial) % 9);
    for (auto& c : counts) {
      c = rng.next_u64() % 100000;
    }
    counts[0] += 1;
    const FrequencyTable t(counts);
    double total = 0.0;
    for (double f : t.frequencies()) {
      total += f;
    }
    EXPECT_NEAR(total, 1.0, 1e-15 * static_cast<double>(counts.size()));
  }
}

TEST(MixedDensity, Examples) {
  const std::vector<double> one{1.0};
  const Matrix rho1 = mixed_density(one, labels(1)).matrix();
  EXPECT_LT(test::max_diff(rho1 * rho1, rho1), kOracleTol);

  const std::vector<double> half{0.5, 0.5};
  const Matrix rho2 = mixed_density(half, labels(2)).matrix();
  EXPECT_EQ(rho2(0, 0), Complex(0.5));
  EXPECT_EQ(rho2(1, 1), Complex(0.5));
  EXPECT_EQ(rho2(0, 1), Complex(0.0));

  const std::vector<double> w{0.36, 0.64};
  const Matrix rho3 = mixed_density(w, labels(2)).matrix();
  Matrix oracle = Matrix::Zero(2, 2);
  oracle(0, 0) = 0.36;
  oracle(1, 1) = 0.64;
  EXPECT_LT(test::max_diff(rho3, oracle), kOracleTol);
  EXPECT_NEAR(rho3.trace().real(), 1.0, kOracleTol);
}

TEST(MixedDensity, Validation) {
  const std::vector<double> neg{1.2, -0.2};
  EXPECT_THROW(mixed_density(neg, labels(2)), ArgumentError);
  const std::vector<double> short_w{1.0};
  EXPECT_THROW(mixed_density(short_w, labels(2)), ArgumentError);
  const std::vector<double> unnormalized{0.5, 0.6};
  EXPECT_THROW(mixed_density(unnormalized, labels(2)), ArgumentError);
}

TEST(Entropy, PureStateIsZero) {
  std::mt19937_64 gen(2);
  const auto psi = test::random_on(single_space("S", 6), gen);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(psi)), 0.0, kOracleTol);
  EXPECT_NEAR(von_neumann_entropy(psi), 0.0, kOracleTol);
}

TEST(Entropy, UniformQubitIsLnTwo) {
  const std::vector<double> w{0.5, 0.5};
  EXPECT_NEAR(von_neumann_entropy(mixed_density(w, labels(2))), std::numbers::ln2, kStructuralTol);
}

TEST(Entropy, SixTenthsEightTenths) {
  const std::vector<double> w{0.36, 0.64};
  const double oracle = -0.36 * std::log(0.36) - 0.64 * std::log(0.64);
  EXPECT_NEAR(von_neumann_entropy(mixed_density(w, labels(2))), oracle, kStructuralTol);
  EXPECT_NEAR(oracle, 0.6534, 1e-4);
}

TEST(Entropy, NonUnitTraceRejected) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.7;
  EXPECT_THROW(von_neumann_entropy(DensityMatrix(single_space("S", 2), m)), ArgumentError);
}

TEST(Entropy, BoundsAndConcavity) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial) % 7;
    auto random_weights = [&] {
      std::vector<double> w(d);
      double total = 0.0;
      for (auto& x : w) {
        x = rng.uniform();
        total += x;
      }
      for (auto& x : w) {
        x /= total;
      }
      return w;
    };
    const auto w1 = random_weights();
    const auto w2 = random_weights();
    std::vector<double> mid(d);
    for (std::size_t k = 0; k < d; ++k) {
      mid[k] = 0.5 * (w1[k] + w2[k]);
    }
    const double s1 = von_neumann_entropy(mixed_density(w1, labels(d)));
    const double s2 = von_neumann_entropy(mixed_density(w2, labels(d)));
    const double sm = von_neumann_entropy(mixed_density(mid, labels(d)));
    const double ln_d = std::log(static_cast<double>(d));
    EXPECT_GE(s1, -kStructuralTol);
    EXPECT_LE(s1, ln_d + kStructuralTol);
    EXPECT_NEAR(s1, formula_entropy(w1), kStructuralTol);
    EXPECT_GE(sm, 0.5 * s1 + 0.5 * s2 - kStructuralTol);

    const std::vector<double> uniform(d, 1.0 / static_cast<double>(d));
    EXPECT_NEAR(von_neumann_entropy(mixed_density(uniform, labels(d))), ln_d, kStructuralTol);
  }
}

TEST(EntropyLedger, GlobalZeroLocalFormula) {
  Rng rng(4);
  for (std::size_t d = 1; d <= 6; ++d) {
    const auto env = make_environment(d, 3, 0.0);
    const auto b = make_branching_operator(Subsystem{"S", d, Role::System}, env);
    const auto before = tensor(random_state(single_space("S", d), rng), env.ready);
    const auto bs = branch(before, b);
    const auto ledger = entropy_ledger(bs.joint(), bs.weights());
    EXPECT_NEAR(ledger.global, 0.0, kOracleTol);
    EXPECT_NEAR(ledger.local, formula_entropy(bs.weights()), kStructuralTol);
  }
  const std::vector<double> one{1.0};
  EXPECT_EQ(entropy_ledger(StateVector::basis(single_space("S", 1), std::size_t{0}), one).local, 0.0);
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(entropy_ledger(StateVector::basis(single_space("S", 2), std::size_t{0}), half).local,
              std::numbers::ln2, kStructuralTol);
}

PairCounts deterministic_counts(int a, int b) {
  PairCounts c;
  if (a == 1 && b == 1) {
    c.pp = 10;
  } else if (a == 1) {
    c.pm = 10;
  } else if (b == 1) {
    c.mp = 10;
  } else {
    c.mm = 10;
  }
  return c;
}

TEST(Chsh, DeterministicLocalStrategiesAtMostTwo) {
  for (int s = 0; s < 16; ++s) {
    const int a = (s & 1) ? 1 : -1;
    const int ap = (s & 2) ? 1 : -1;
    const int b = (s & 4) ? 1 : -1;
    const int bp = (s & 8) ? 1 : -1;
    CorrelationSettings cs;
    cs.counts = {deterministic_counts(a, b), deterministic_counts(a, bp), deterministic_counts(ap, b),
                 deterministic_counts(ap, bp)};
    EXPECT_LE(chsh(cs), 2.0 + 1e-12);
  }
}

TEST(Chsh, SingletAnalyticLimit) {
  const double a = 0.0;
  const double ap = std::numbers::pi / 4.0;
  const double b = std::numbers::pi / 8.0;
  const double bp = 3.0 * std::numbers::pi / 8.0;
  auto e = [](double x, double y) { return -std::cos(2.0 * (x - y)); };
  // Cell counts from P(same) = (1 + E)/2 on a large virtual sample.
  const double n = 1e12;
  auto counts = [&](double x, double y) {
    PairCounts c;
    const double same = (1.0 + e(x, y)) / 4.0 * n;
    const double diff = (1.0 - e(x, y)) / 4.0 * n;
    c.pp = c.mm = static_cast<std::size_t>(std::llround(same));
    c.pm = c.mp = static_cast<std::size_t>(std::llround(diff));
    return c;
  };
  CorrelationSettings cs{a, ap, b, bp, {counts(a, b), counts(a, bp), counts(ap, b), counts(ap, bp)}};
  const double analytic = std::abs(e(a, b) - e(a, bp) + e(ap, b) + e(ap, bp));
  EXPECT_NEAR(analytic, 2.0 * std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(chsh(cs), analytic, 1e-9);
}

TEST(Chsh, EmptyCellRejected) {
  CorrelationSettings cs;
  cs.counts[0].pp = 5;
  cs.counts[1].pp = 5;
  cs.counts[2].pp = 5;
  EXPECT_THROW(chsh(cs), ArgumentError);
}

std::vector<double> grid(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = -10.0 + 20.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  }
  return x;
}

TEST(Visibility, IdealCosineFringes) {
  const auto x = grid(256);
  const double q = 2.0 * std::numbers::pi * 4.0 / 20.0;
  std::vector<double> h(256);
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] = std::norm(std::polar(1.0, 0.5 * q * x[k]) + std::polar(1.0, -0.5 * q * x[k]));
  }
  EXPECT_NEAR(visibility(h), 1.0, 0.02);
}

TEST(Visibility, EnvelopeOnly) {
  const auto x = grid(256);
  std::vector<double> h(256);
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] = std::exp(-x[k] * x[k] / 2.0);
  }
  EXPECT_LT(visibility(h), 0.05);
}

TEST(Visibility, PartialContrastUnderEnvelope) {
  // 1 + V cos(qx) under a broad Gaussian recovers V.
  const auto x = grid(512);
  const double q = 2.0 * std::numbers::pi / 2.5;
  for (double v : {0.3, 0.6, 0.9}) {
    std::vector<double> h(512);
    for (std::size_t k = 0; k < h.size(); ++k) {
      h[k] = std::exp(-x[k] * x[k] / 50.0) * (1.0 + v * std::cos(q * x[k]));
    }
    EXPECT_NEAR(visibility(h), v, 0.05) << v;
  }
}

TEST(Visibility, Validation) {
  EXPECT_THROW(visibility(std::vector<double>(64, 0.0)), ArgumentError);
  EXPECT_THROW(visibility(std::vector<double>{}), ArgumentError);
  EXPECT_THROW(visibility(std::vector<double>{1.0, -1.0, 2.0}), ArgumentError);
  EXPECT_EQ(visibility_window(256), 4u);
  EXPECT_EQ(visibility_window(64), 3u);
}

TEST(FringePhase, ShiftedPatternDiffersByPi) {
  const auto x = grid(256);
  const double q = 3.0;
  std::vector<double> fringes(256);
  std::vector<double> anti(256);
  for (std::size_t k = 0; k < 256; ++k) {
    const double env = std::exp(-x[k] * x[k] / 8.0);
    fringes[k] = env * (1.0 + std::cos(q * x[k]));
    anti[k] = env * (1.0 - std::cos(q * x[k]));
  }
  const double d = std::remainder(fringe_phase(fringes, x, q) - fringe_phase(anti, x, q), 2.0 * std::numbers::pi);
  EXPECT_NEAR(std::abs(d), std::numbers::pi, 1e-9);
}

TEST(L1Distance, Basic) {
  const std::vector<double> a{0.5, 0.5, 0.0};
  const std::vector<double> b{0.25, 0.25, 0.5};
  EXPECT_DOUBLE_EQ(l1_distance(a, b), 1.0);
  EXPECT_THROW(l1_distance(a, std::vector<double>{1.0}), ArgumentError);
}

}  // namespace
}  // namespace bhsi
