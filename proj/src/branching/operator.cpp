#include <cmath>

#include "bhsi/branching.hpp"

namespace bhsi {

BranchingOperator::BranchingOperator(std::vector<BasisLabel> basis, std::shared_ptr<const EnvironmentModel> env)
    : basis_(std::move(basis)), env_(std::move(env)) {
  if (!env_) {
    throw ArgumentError("branching operator needs an environment");
  }
  if (basis_.empty()) {
    throw ArgumentError("branching operator needs a non-empty basis");
  }
  if (basis_.size() != env_->outcomes) {
    throw ArgumentError("basis size " + std::to_string(basis_.size()) + " does not match environment outcome count " +
                        std::to_string(env_->outcomes));
  }
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (basis_[k].subsystem != basis_.front().subsystem || basis_[k].index != k) {
      throw ArgumentError("basis labels must enumerate one subsystem in index order");
    }
  }
  if (basis_.front().subsystem == env_->id) {
    throw CompositionError("system and environment share the id '" + env_->id + "'");
  }

  const auto n = static_cast<Eigen::Index>(env_->dimension());
  reflectors_.reserve(basis_.size());
  phases_.reserve(basis_.size());
  for (const auto& pointer : env_->pointers) {
    const Vector& e = pointer.amplitudes();
    const double phi = std::arg(e[0]);
    const Complex phase = std::polar(1.0, phi);
    Vector w = -std::conj(phase) * e;
    w[0] += 1.0;
    const double norm = w.norm();
    if (norm < 1e-15) {
      reflectors_.push_back(Vector::Zero(n));
    } else {
      reflectors_.push_back(w / norm);
    }
    phases_.push_back(phase);
  }
}

SpaceDescription BranchingOperator::space() const { return SpaceDescription({system(), env_->subsystem()}); }

void BranchingOperator::apply_in_place(const SpaceDescription& space, Vector& amplitudes, bool adjoint) const {
  const Subsystem& sys = space.subsystem(system_id());
  const Subsystem& env = space.subsystem(env_->id);
  if (sys.dim != outcomes() || env.dim != env_->dimension()) {
    throw CompositionError("state does not match the branching operator's subsystem dimensions");
  }
  if (static_cast<std::size_t>(amplitudes.size()) != space.dimension()) {
    throw CompositionError("amplitude count does not match space dimension");
  }
  const std::size_t sys_stride = space.stride(sys.id);
  const std::size_t env_stride = space.stride(env.id);
  const std::size_t env_dim = env.dim;
  const std::size_t total = space.dimension();

  Vector fiber(static_cast<Eigen::Index>(env_dim));
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / env_stride) % env_dim != 0) {
      continue;
    }
    const std::size_t k = (base / sys_stride) % outcomes();
    const Vector& v = reflectors_[k];
    const Complex phase = adjoint ? std::conj(phases_[k]) : phases_[k];
    for (std::size_t l = 0; l < env_dim; ++l) {
      fiber[static_cast<Eigen::Index>(l)] = amplitudes[static_cast<Eigen::Index>(base + l * env_stride)];
    }
    const Complex proj = v.dot(fiber);
    fiber = phase * (fiber - 2.0 * proj * v);
    for (std::size_t l = 0; l < env_dim; ++l) {
      amplitudes[static_cast<Eigen::Index>(base + l * env_stride)] = fiber[static_cast<Eigen::Index>(l)];
    }
  }
}

StateVector BranchingOperator::apply(const StateVector& s) const {
  Vector out = s.amplitudes();
  apply_in_place(s.space(), out, false);
  return StateVector(s.space(), std::move(out));
}

StateVector BranchingOperator::apply_adjoint(const StateVector& s) const {
  Vector out = s.amplitudes();
  apply_in_place(s.space(), out, true);
  return StateVector(s.space(), std::move(out));
}

Matrix BranchingOperator::environment_unitary(std::size_t k) const {
  const Vector& v = reflectors_.at(k);
  const auto n = v.size();
  return phases_[k] * (Matrix::Identity(n, n) - 2.0 * v * v.adjoint());
}

LinearOperator BranchingOperator::matrix() const {
  const SpaceDescription sp = space();
  if (sp.dimension() > kMaxDenseDimension) {
    throw CapacityError("branching operator too large for a dense matrix");
  }
  const auto n = static_cast<Eigen::Index>(sp.dimension());
  Matrix m = Matrix::Identity(n, n);
  Vector column(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    column = m.col(j);
    apply_in_place(sp, column, false);
    m.col(j) = column;
  }
  return LinearOperator(sp, std::move(m), true);
}

BranchingOperator make_branching_operator(std::vector<BasisLabel> basis, const EnvironmentModel& env) {
  return BranchingOperator(std::move(basis), std::make_shared<const EnvironmentModel>(env));
}

BranchingOperator make_branching_operator(const Subsystem& system, const EnvironmentModel& env) {
  return make_branching_operator(basis_labels(system), env);
}

}  // namespace bhsi
