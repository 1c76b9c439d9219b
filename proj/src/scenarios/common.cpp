#include "common.hpp"

namespace bhsi::detail {

std::vector<std::string> label_names(const std::vector<BasisLabel>& basis) {
  std::vector<std::string> names;
  names.reserve(basis.size());
  for (const auto& b : basis) {
    names.push_back(b.name);
  }
  return names;
}

FrequencySection outcome_section(std::string name, std::vector<std::string> labels,
                                 const std::vector<std::size_t>& counts, std::vector<double> expected) {
  return FrequencySection{std::move(name), std::move(labels), FrequencyTable(counts), std::move(expected)};
}

std::size_t sample_index(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) {
      continue;
    }
    last = k;
    cumulative += weights[k];
    if (u < cumulative) {
      return k;
    }
  }
  return last;
}

StateVector system_state(const std::string& id, const std::vector<Complex>& amplitudes) {
  Vector v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = amplitudes[i];
  }
  return StateVector(single_space(id, amplitudes.size()), std::move(v));
}

std::vector<double> histogram(const std::vector<MeasurementRecord>& records, std::size_t bins) {
  std::vector<double> h(bins, 0.0);
  for (const auto& r : records) {
    h.at(r.outcome) += 1.0;
  }
  return h;
}

}  // namespace bhsi::detail
