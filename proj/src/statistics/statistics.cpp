#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "bhsi/statistics.hpp"

namespace bhsi {

FrequencyTable::FrequencyTable(std::vector<std::size_t> counts) : counts_(std::move(counts)) {
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

FrequencyTable FrequencyTable::from_outcomes(std::span<const std::size_t> outcomes, std::size_t outcome_count) {
  std::vector<std::size_t> counts(outcome_count, 0);
  for (std::size_t k : outcomes) {
    if (k >= outcome_count) {
      throw ArgumentError("outcome " + std::to_string(k) + " out of range");
    }
    ++counts[k];
  }
  return FrequencyTable(std::move(counts));
}

double FrequencyTable::frequency(std::size_t k) const {
  if (total_ == 0) {
    return 0.0;
  }
  return static_cast<double>(counts_.at(k)) / static_cast<double>(total_);
}

std::vector<double> FrequencyTable::frequencies() const {
  std::vector<double> f(counts_.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = frequency(k);
  }
  return f;
}

DensityMatrix mixed_density(std::span<const double> weights, std::span<const BasisLabel> basis) {
  if (weights.size() != basis.size() || basis.empty()) {
    throw ArgumentError("need one weight per basis label");
  }
  for (const auto& label : basis) {
    if (label.subsystem != basis.front().subsystem) {
      throw ArgumentError("basis labels must belong to one subsystem");
    }
  }
  const auto n = static_cast<Eigen::Index>(weights.size());
  Matrix rho = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = weights[static_cast<std::size_t>(k)];
    if (!(w >= 0.0)) {
      throw ArgumentError("negative weight in mixture");
    }
    rho(k, k) = w;
  }
  return DensityMatrix(single_space(basis.front().subsystem, basis.size()), std::move(rho));
}

namespace {

double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  if (std::abs(rho.matrix().trace() - Complex(1.0)) > kStructuralTol) {
    throw ArgumentError("density matrix trace is not 1");
  }
  const Eigen::VectorXd lambda = rho.eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    s += entropy_term(lambda[i]);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const StateVector& psi) { return std::max(0.0, entropy_term(psi.amplitudes().squaredNorm())); }

double shannon_entropy(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) {
    if (w < 0.0) {
      throw ArgumentError("negative weight in mixture");
    }
    s += entropy_term(w);
  }
  return s;
}

EntropyLedger entropy_ledger(const StateVector& before, std::span<const double> after_weights) {
  // Small states go through the full eigenvalue route; large ones use the
  // pure-state spectrum directly.
  const double global = before.dimension() <= 256 ? von_neumann_entropy(DensityMatrix::pure(before))
                                                  : von_neumann_entropy(before);
  return {shannon_entropy(after_weights), global};
}

double correlation(const PairCounts& c) {
  if (c.total() == 0) {
    throw ArgumentError("correlation needs at least one pair");
  }
  const auto agree = static_cast<double>(c.pp + c.mm);
  const auto disagree = static_cast<double>(c.pm + c.mp);
  return (agree - disagree) / static_cast<double>(c.total());
}

double chsh(const CorrelationSettings& settings) {
  const auto& c = settings.counts;
  return std::abs(correlation(c[0]) - correlation(c[1]) + correlation(c[2]) + correlation(c[3]));
}

std::size_t visibility_window(std::size_t bins) { return std::max<std::size_t>(3, bins / 64); }

// Moving average, then from the global maximum p look on each side for the
// local maximum M (at least 10% of the peak) separated from p by the deepest
// dip. The envelope at the dip is interpolated between p and M, which keeps
// the contrast honest on a sloped envelope. Sides without such a maximum
// contribute nothing; none at all means no fringes.
double visibility(std::span<const double> histogram) {
  const std::size_t n = histogram.size();
  if (n == 0) {
    throw ArgumentError("empty histogram");
  }
  double sum = 0.0;
  for (double h : histogram) {
    if (!std::isfinite(h) || h < 0.0) {
      throw ArgumentError("histogram entries must be finite and non-negative");
    }
    sum += h;
  }
  if (sum <= 0.0) {
    throw ArgumentError("all-zero histogram");
  }

  const std::size_t w = visibility_window(n);
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(w / 2);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - half);
    const std::ptrdiff_t hi =
        std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(i) - half +
                                                                     static_cast<std::ptrdiff_t>(w));
    double acc = 0.0;
    for (std::ptrdiff_t j = lo; j < hi; ++j) {
      acc += histogram[static_cast<std::size_t>(j)];
    }
    s[i] = acc / static_cast<double>(hi - lo);
  }

  constexpr double kPeakFraction = 0.1;
  const std::size_t p = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
  const double peak = s[p];

  auto side = [&](int dir) -> std::optional<double> {
    std::optional<double> best_v;
    double best_persistence = -1.0;
    double dip = peak;
    std::size_t dip_at = p;
    for (std::ptrdiff_t m = static_cast<std::ptrdiff_t>(p) + dir; m >= 1 && m + 1 < static_cast<std::ptrdiff_t>(n);
         m += dir) {
      const auto mi = static_cast<std::size_t>(m);
      const bool is_max = s[mi] > s[mi - 1] && s[mi] >= s[mi + 1];
      if (is_max && s[mi] >= kPeakFraction * peak && s[mi] - dip > best_persistence) {
        best_persistence = s[mi] - dip;
        const double t = static_cast<double>(dip_at > p ? dip_at - p : p - dip_at) /
                         static_cast<double>(mi > p ? mi - p : p - mi);
        const double envelope = peak + (s[mi] - peak) * t;
        best_v = envelope + dip > 0.0 ? (envelope - dip) / (envelope + dip) : 0.0;
      }
      if (s[mi] < dip) {
        dip = s[mi];
        dip_at = mi;
      }
    }
    return best_v;
  };

  double total = 0.0;
  int found = 0;
  for (int dir : {-1, 1}) {
    if (const auto v = side(dir)) {
      total += *v;
      ++found;
    }
  }
  return found == 0 ? 0.0 : std::clamp(total / found, 0.0, 1.0);
}

double fringe_phase(std::span<const double> histogram, std::span<const double> positions, double q) {
  if (histogram.size() != positions.size()) {
    throw ArgumentError("histogram and positions differ in length");
  }
  Complex acc = 0.0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    acc += histogram[k] * std::polar(1.0, -q * positions[k]);
  }
  return std::arg(acc);
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("distributions differ in length");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += std::abs(a[i] - b[i]);
  }
  return d;
}

}  // namespace bhsi
