#pragma once

// Observer register, the engage / record-flip / disengage kernels and the
// trial harness.
//
// With P = |g_β E_β⟩⟨g_β E_β| and X swapping register levels 0 and β+1:
//   Λ_β = P⊗X + (1−P)⊗I      engage
//   T_β = I⊗X                record flip
//   Γ_β = (1−P)⊗X + P⊗I      disengage
// so Γ_β T_β Λ_β = I and M_β = Γ_β T_β Λ_β B reduces to B on the joint space.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bhsi/branching.hpp"
#include "bhsi/rng.hpp"

namespace bhsi {

enum class ObserverMode { Ready, Reads };

// Register of D+1 levels: 0 is ready, k+1 reads outcome k.
class ObserverState {
 public:
  static ObserverState ready(std::size_t outcomes, std::string id = "O");
  static ObserverState reads(std::size_t outcomes, std::size_t beta, std::string id = "O");

  ObserverMode mode() const { return beta_ ? ObserverMode::Reads : ObserverMode::Ready; }
  bool is_ready() const { return !beta_; }
  std::optional<std::size_t> reading() const { return beta_; }
  std::size_t outcomes() const { return outcomes_; }
  const std::string& id() const { return id_; }
  Subsystem subsystem() const { return {id_, outcomes_ + 1, Role::Observer}; }
  std::size_t level() const { return beta_ ? *beta_ + 1 : 0; }
  StateVector register_state() const;
  std::string describe() const;

  bool operator==(const ObserverState&) const = default;

 private:
  ObserverState(std::size_t outcomes, std::optional<std::size_t> beta, std::string id);

  std::size_t outcomes_;
  std::optional<std::size_t> beta_;
  std::string id_;
};

struct MeasurementRecord {
  std::size_t outcome = 0;
  double weight = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t order = 0;

  bool operator==(const MeasurementRecord&) const = default;
};

// Branched state with the observer engaged on branch β. The joint vector
// with the register is only materialized on request.
class EngagedState {
 public:
  EngagedState(std::shared_ptr<const BranchedState> branched, ObserverState observer);

  const BranchedState& branched() const { return *branched_; }
  std::shared_ptr<const BranchedState> branched_ptr() const { return branched_; }
  const ObserverState& observer() const { return observer_; }
  // branched ⊗ register with Λ_β applied; the register is the last subsystem.
  StateVector joint() const;

 private:
  std::shared_ptr<const BranchedState> branched_;
  ObserverState observer_;
};

// In-place kernels on any space containing the system, environment and
// observer subsystems.
void apply_engage(const SpaceDescription& space, Vector& amplitudes, const BranchingOperator& b,
                  const std::string& observer_id, std::size_t beta);
void apply_record_flip(const SpaceDescription& space, Vector& amplitudes, const std::string& observer_id,
                       std::size_t beta);
void apply_disengage(const SpaceDescription& space, Vector& amplitudes, const BranchingOperator& b,
                     const std::string& observer_id, std::size_t beta);

// Dense forms of the kernels over `space` (column by column).
LinearOperator engage_operator(const SpaceDescription& space, const BranchingOperator& b,
                               const std::string& observer_id, std::size_t beta);
LinearOperator record_flip_operator(const SpaceDescription& space, const std::string& observer_id, std::size_t beta);
LinearOperator disengage_operator(const SpaceDescription& space, const BranchingOperator& b,
                                  const std::string& observer_id, std::size_t beta);
// Γ_β T_β Λ_β B over `space`.
LinearOperator measurement_operator(const SpaceDescription& space, const BranchingOperator& b,
                                    const std::string& observer_id, std::size_t beta);

// Inverse CDF over live branch weights. StateError on an empty branch list.
std::size_t sample_branch(const BranchedState& bs, Rng& rng);
// Samples the system outcome conditioned on spectator subsystems already
// having read `given` (id, level) pairs.
std::size_t sample_branch_given(const BranchedState& bs, const std::vector<std::pair<std::string, std::size_t>>& given,
                                Rng& rng);
// P(system = k | given) for every k.
std::vector<double> conditional_weights(const BranchedState& bs,
                                        const std::vector<std::pair<std::string, std::size_t>>& given);

EngagedState engage(std::shared_ptr<const BranchedState> bs, std::size_t beta, std::string observer_id = "O");
EngagedState engage(const BranchedState& bs, std::size_t beta, std::string observer_id = "O");

struct Disengaged {
  std::shared_ptr<const BranchedState> branched;
  ObserverState observer;
};
// StateError if the observer is already ready.
Disengaged disengage(const EngagedState& es);

struct StageTrace {
  StateVector before;
  StateVector branched;
  StateVector engaged;
  StateVector after;
};

struct Measurement {
  MeasurementRecord record;
  std::shared_ptr<const BranchedState> branched;
  ObserverState observer;
  StageTrace stages;
};

// Full unitary pipeline on a state containing system, ready observer
// register and ready environment. Throws InvariantError if the final state
// differs from the branch-only state by more than kStructuralTol.
Measurement measure(const StateVector& s, const BranchingOperator& b, Rng& rng, const std::string& observer_id = "O",
                    std::uint64_t trial = 0);

struct TrialOptions {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t order_offset = 0;
  unsigned jobs = 1;
  std::string observer_id = "O";
};

struct TrialRun {
  std::shared_ptr<const BranchedState> branched;
  std::vector<std::size_t> counts;
  std::vector<MeasurementRecord> records;
};

// N trials on `prepared` (system, spectators and ready environment; no
// register). Preparation is deterministic, so the state is branched once and
// each trial samples, engages, records and disengages with its own
// sub-generator. Output does not depend on `jobs`.
TrialRun run_trials(const StateVector& prepared, const BranchingOperator& b, std::size_t n, const TrialOptions& opts);

}  // namespace bhsi
