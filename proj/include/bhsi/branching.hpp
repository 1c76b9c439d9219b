#pragma once

// Branching of a system against a minimal local environment, plus the
// inverse (debranching), relocation into a bath and lifted evolution.

#include <memory>
#include <string>
#include <vector>

#include "bhsi/hilbert.hpp"

namespace bhsi {

// Pointer-state recipe for D outcomes on m environment qubits. Pointers are
// rows of the Cholesky factor of the Gram matrix (1 on the diagonal, ε off
// it), so E_0 coincides with the ready state |0…0⟩.
struct EnvironmentModel {
  std::size_t outcomes = 1;
  std::size_t qubits = 1;
  double overlap = 0.0;
  std::string id = "L";
  StateVector ready;
  std::vector<StateVector> pointers;

  std::size_t dimension() const { return std::size_t{1} << qubits; }
  Subsystem subsystem() const { return {id, dimension(), Role::LocalEnvironment}; }
  bool same_model(const EnvironmentModel& other) const;
};

// max(1, ceil(log2 D)).
std::size_t minimal_qubits(std::size_t outcomes);

// Throws ArgumentError for D = 0, m = 0, m > 20 or ε outside [0, 1) and
// CapacityError when D > 2^m (a full-rank Gram matrix needs D dimensions).
EnvironmentModel make_environment(std::size_t outcomes, std::size_t qubits, double overlap, std::string id = "L");

// B = Σ_k |g_k⟩⟨g_k| ⊗ V_k with V_k|E⟩ = |E_k⟩. Each V_k is a phased
// Householder reflector, so B is unitary on the whole joint space and can be
// applied in O(dim) without forming the matrix.
class BranchingOperator {
 public:
  BranchingOperator(std::vector<BasisLabel> basis, std::shared_ptr<const EnvironmentModel> env);

  const std::vector<BasisLabel>& basis() const { return basis_; }
  const EnvironmentModel& environment() const { return *env_; }
  std::shared_ptr<const EnvironmentModel> environment_ptr() const { return env_; }
  const std::string& system_id() const { return basis_.front().subsystem; }
  std::size_t outcomes() const { return basis_.size(); }
  Subsystem system() const { return {system_id(), outcomes(), Role::System}; }
  // system ⊗ environment
  SpaceDescription space() const;

  // Act on any state whose space contains the system and environment
  // subsystems; other subsystems are spectators.
  StateVector apply(const StateVector& s) const;
  StateVector apply_adjoint(const StateVector& s) const;
  void apply_in_place(const SpaceDescription& space, Vector& amplitudes, bool adjoint) const;

  // V_k as a dense matrix on the environment.
  Matrix environment_unitary(std::size_t k) const;
  // Dense B over space(); CapacityError past kMaxDenseDimension.
  LinearOperator matrix() const;

 private:
  std::vector<BasisLabel> basis_;
  std::shared_ptr<const EnvironmentModel> env_;
  std::vector<Vector> reflectors_;
  std::vector<Complex> phases_;
};

BranchingOperator make_branching_operator(std::vector<BasisLabel> basis, const EnvironmentModel& env);
BranchingOperator make_branching_operator(const Subsystem& system, const EnvironmentModel& env);

// Branches with weight below this stay in the joint vector but are not listed.
inline constexpr double kPruneThreshold = 1e-14;

struct Branch {
  std::size_t index = 0;
  BasisLabel label;
  Amplitude amplitude;
  double weight = 0.0;
};

class BranchedState {
 public:
  BranchedState(StateVector joint, std::vector<Branch> branches, std::vector<double> weights,
                std::vector<BasisLabel> basis, std::shared_ptr<const EnvironmentModel> env);

  const StateVector& joint() const { return joint_; }
  const std::vector<Branch>& branches() const { return branches_; }
  // Weights for every outcome, pruned ones included.
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }
  const EnvironmentModel& environment() const { return *env_; }
  const std::string& system_id() const { return basis_.front().subsystem; }
  std::size_t outcomes() const { return basis_.size(); }
  bool is_live(std::size_t k) const;
  const Branch& branch(std::size_t k) const;

 private:
  StateVector joint_;
  std::vector<Branch> branches_;
  std::vector<double> weights_;
  std::vector<BasisLabel> basis_;
  std::shared_ptr<const EnvironmentModel> env_;
};

// PreconditionError unless the environment subsystem of `s` is in |E⟩.
BranchedState branch(const StateVector& s, const BranchingOperator& b);
// Re-derives the branch list of an arbitrary joint vector (no precondition).
BranchedState branched_view(StateVector joint, const BranchingOperator& b);

// |⟨E_i|E_k⟩| for the state's pointer states.
Eigen::MatrixXd decoherence_gram(const BranchedState& bs);

StateVector debranch(const BranchedState& bs, const BranchingOperator& b);

// Fresh bath in |0…0⟩ mirroring each joint subsystem as "<prefix>.<id>".
StateVector make_bath(const BranchedState& bs, const std::string& prefix = "bath");
// Swap of the joint register into the bath. The result lives on
// joint-space ⊗ bath-space; the original factor ends in |0…0⟩.
StateVector relocate(const BranchedState& bs, const StateVector& bath);
// The same swap as a dense permutation operator.
LinearOperator relocation_operator(const SpaceDescription& joint, const SpaceDescription& bath);

// B (U ⊗ I) B†, dense.
LinearOperator lift(const LinearOperator& u_sys, const BranchingOperator& b);

}  // namespace bhsi
