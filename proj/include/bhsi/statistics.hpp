#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bhsi/hilbert.hpp"

namespace bhsi {

class FrequencyTable {
 public:
  explicit FrequencyTable(std::vector<std::size_t> counts);
  static FrequencyTable from_outcomes(std::span<const std::size_t> outcomes, std::size_t outcome_count);

  std::size_t size() const { return counts_.size(); }
  std::size_t total() const { return total_; }
  std::size_t count(std::size_t k) const { return counts_.at(k); }
  // count / total; 0 for an empty table.
  double frequency(std::size_t k) const;
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::vector<double> frequencies() const;

 private:
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

// diag(weights) in the given basis.
DensityMatrix mixed_density(std::span<const double> weights, std::span<const BasisLabel> basis);

// -Tr ρ ln ρ in nats.
double von_neumann_entropy(const DensityMatrix& rho);
// Pure state: the only nonzero eigenvalue of |ψ⟩⟨ψ| is ‖ψ‖² = 1.
double von_neumann_entropy(const StateVector& psi);
double shannon_entropy(std::span<const double> weights);

struct EntropyLedger {
  double local = 0.0;
  double global = 0.0;
};
// local: entropy of the branch mixture; global: entropy of the full pure
// state, which unitary branching leaves at its initial value of 0.
EntropyLedger entropy_ledger(const StateVector& before, std::span<const double> after_weights);

struct PairCounts {
  std::size_t pp = 0;
  std::size_t pm = 0;
  std::size_t mp = 0;
  std::size_t mm = 0;

  std::size_t total() const { return pp + pm + mp + mm; }
};

// (N++ + N-- - N+- - N-+) / N; ArgumentError on an empty cell.
double correlation(const PairCounts& c);

struct CorrelationSettings {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;
  // (a,b), (a,b'), (a',b), (a',b')
  std::array<PairCounts, 4> counts{};
};

// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|
double chsh(const CorrelationSettings& settings);

// Moving-average window used by visibility().
std::size_t visibility_window(std::size_t bins);
// (I_max - I_min)/(I_max + I_min) of the central fringe structure of a
// smoothed histogram; see the implementation for the extremum rule.
double visibility(std::span<const double> histogram);
// arg Σ_k h_k exp(-i q x_k)
double fringe_phase(std::span<const double> histogram, std::span<const double> positions, double q);
double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace bhsi
