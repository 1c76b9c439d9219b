#include <algorithm>
#include <cmath>

#include "bhsi/branching.hpp"

namespace bhsi {

BranchedState::BranchedState(StateVector joint, std::vector<Branch> branches, std::vector<double> weights,
                             std::vector<BasisLabel> basis, std::shared_ptr<const EnvironmentModel> env)
    : joint_(std::move(joint)),
      branches_(std::move(branches)),
      weights_(std::move(weights)),
      basis_(std::move(basis)),
      env_(std::move(env)) {
  if (basis_.empty() || weights_.size() != basis_.size()) {
    throw ArgumentError("branched state needs one weight per basis label");
  }
}

bool BranchedState::is_live(std::size_t k) const {
  return std::any_of(branches_.begin(), branches_.end(), [k](const Branch& b) { return b.index == k; });
}

const Branch& BranchedState::branch(std::size_t k) const {
  for (const auto& b : branches_) {
    if (b.index == k) {
      return b;
    }
  }
  throw ArgumentError("outcome " + std::to_string(k) + " is not a live branch");
}

BranchedState branched_view(StateVector joint, const BranchingOperator& b) {
  const SpaceDescription& space = joint.space();
  const std::string& sys_id = b.system_id();
  const EnvironmentModel& env = b.environment();
  const std::size_t d = b.outcomes();

  std::vector<Amplitude> amps(d);
  std::vector<double> weights(d);
  if (space.size() == 2) {
    // ⟨g_k E_k|Ψ⟩ read straight off the joint vector.
    const std::size_t sys_stride = space.stride(sys_id);
    const std::size_t env_stride = space.stride(env.id);
    for (std::size_t k = 0; k < d; ++k) {
      const Vector& e = env.pointers[k].amplitudes();
      Complex c = 0.0;
      for (std::size_t l = 0; l < env.dimension(); ++l) {
        c += std::conj(e[static_cast<Eigen::Index>(l)]) * joint[k * sys_stride + l * env_stride];
      }
      amps[k] = c;
      weights[k] = std::norm(c);
    }
  } else {
    // Spectators present: the branch amplitude is only defined up to the
    // spectator state, so report the marginal weight with a real amplitude.
    const std::vector<std::string> ids{sys_id};
    weights = marginal_probabilities(joint, ids);
    for (std::size_t k = 0; k < d; ++k) {
      amps[k] = std::sqrt(weights[k]);
    }
  }

  std::vector<Branch> branches;
  for (std::size_t k = 0; k < d; ++k) {
    if (weights[k] >= kPruneThreshold) {
      branches.push_back(Branch{k, b.basis()[k], amps[k], weights[k]});
    }
  }
  return BranchedState(std::move(joint), std::move(branches), std::move(weights), b.basis(), b.environment_ptr());
}

BranchedState branch(const StateVector& s, const BranchingOperator& b) {
  const EnvironmentModel& env = b.environment();
  const SpaceDescription& space = s.space();
  const Subsystem& env_sub = space.subsystem(env.id);
  const std::size_t stride = space.stride(env.id);
  double excited = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    if ((i / stride) % env_sub.dim != 0) {
      excited += std::norm(s[i]);
    }
  }
  if (std::sqrt(excited) > kStructuralTol) {
    throw PreconditionError("environment '" + env.id + "' is not in its ready state");
  }
  return branched_view(b.apply(s), b);
}

Eigen::MatrixXd decoherence_gram(const BranchedState& bs) {
  const auto& pointers = bs.environment().pointers;
  const auto d = static_cast<Eigen::Index>(pointers.size());
  Eigen::MatrixXd gram(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      gram(i, k) = std::abs(inner(pointers[static_cast<std::size_t>(i)], pointers[static_cast<std::size_t>(k)]));
    }
  }
  return gram;
}

StateVector debranch(const BranchedState& bs, const BranchingOperator& b) {
  if (!bs.environment().same_model(b.environment()) || bs.basis() != b.basis()) {
    throw ArgumentError("branched state was not produced by this branching operator");
  }
  return b.apply_adjoint(bs.joint());
}

StateVector make_bath(const BranchedState& bs, const std::string& prefix) {
  std::vector<Subsystem> subs;
  for (const auto& s : bs.joint().space().subsystems()) {
    subs.push_back(Subsystem{prefix + "." + s.id, s.dim, Role::Ancilla});
  }
  return StateVector::basis(SpaceDescription(std::move(subs)), std::size_t{0});
}

namespace {

// Index map of the swap |j⟩|b⟩ ↦ |b⟩|j⟩ for b < dim_j; identity elsewhere.
std::size_t swapped(std::size_t index, std::size_t dim_j, std::size_t dim_b) {
  const std::size_t j = index / dim_b;
  const std::size_t b = index % dim_b;
  if (b < dim_j) {
    return b * dim_b + j;
  }
  return index;
}

void check_bath_size(std::size_t dim_j, std::size_t dim_b) {
  if (dim_b < dim_j) {
    throw CapacityError("bath dimension " + std::to_string(dim_b) + " is smaller than joint dimension " +
                        std::to_string(dim_j));
  }
}

}  // namespace

StateVector relocate(const BranchedState& bs, const StateVector& bath) {
  const std::size_t dim_j = bs.joint().dimension();
  const std::size_t dim_b = bath.dimension();
  check_bath_size(dim_j, dim_b);
  if (std::abs(std::norm(bath[0]) - 1.0) > kStructuralTol) {
    throw PreconditionError("bath is not in its fiducial state |0…0⟩");
  }
  const StateVector product = tensor(bs.joint(), bath);
  Vector out(static_cast<Eigen::Index>(product.dimension()));
  for (std::size_t i = 0; i < product.dimension(); ++i) {
    out[static_cast<Eigen::Index>(swapped(i, dim_j, dim_b))] = product[i];
  }
  return StateVector(product.space(), std::move(out));
}

LinearOperator relocation_operator(const SpaceDescription& joint, const SpaceDescription& bath) {
  check_bath_size(joint.dimension(), bath.dimension());
  SpaceDescription space = concat(joint, bath);
  if (space.dimension() > kMaxDenseDimension) {
    throw CapacityError("relocation operator too large for a dense matrix");
  }
  const auto n = static_cast<Eigen::Index>(space.dimension());
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    p(static_cast<Eigen::Index>(swapped(i, joint.dimension(), bath.dimension())), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return LinearOperator(std::move(space), std::move(p), true);
}

LinearOperator lift(const LinearOperator& u_sys, const BranchingOperator& b) {
  if (!(u_sys.space() == SpaceDescription({b.system()}))) {
    throw CompositionError("lifted operator must act on the branched system alone");
  }
  if (!u_sys.is_unitary() && !check_unitary(u_sys)) {
    throw ArgumentError("only unitary evolution can be lifted onto branches");
  }
  const LinearOperator bm = b.matrix();
  const LinearOperator u = expand(u_sys, bm.space());
  Matrix lifted = bm.matrix() * u.matrix() * bm.matrix().adjoint();
  return LinearOperator(bm.space(), std::move(lifted), true);
}

}  // namespace bhsi
