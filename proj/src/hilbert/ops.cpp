#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bhsi/hilbert.hpp"

namespace bhsi {

namespace {

// Joint-index offsets of every basis state of `sub` (row-major over `sub`'s
// own order) inside `full`.
std::vector<std::size_t> offsets_within(const SpaceDescription& full, const SpaceDescription& sub) {
  std::vector<std::size_t> strides;
  strides.reserve(sub.size());
  for (const auto& s : sub.subsystems()) {
    const Subsystem& match = full.subsystem(s.id);
    if (match.dim != s.dim) {
      throw CompositionError("subsystem '" + s.id + "' has dimension " + std::to_string(s.dim) + " but " +
                             std::to_string(match.dim) + " in the target space");
    }
    strides.push_back(full.stride(s.id));
  }
  std::vector<std::size_t> offsets(sub.dimension());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const auto digits = sub.decompose(i);
    std::size_t off = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      off += digits[k] * strides[k];
    }
    offsets[i] = off;
  }
  return offsets;
}

void require_same_space(const StateVector& a, const StateVector& b) {
  if (!(a.space() == b.space())) {
    throw CompositionError("states live on different spaces");
  }
}

void require_dense_size(std::size_t n) {
  if (n > kMaxDenseDimension) {
    throw CapacityError("dense operator of side " + std::to_string(n) + " exceeds limit " +
                        std::to_string(kMaxDenseDimension));
  }
}

}  // namespace

StateVector tensor(const StateVector& a, const StateVector& b) {
  SpaceDescription space = concat(a.space(), b.space());
  Vector out(static_cast<Eigen::Index>(space.dimension()));
  const auto nb = static_cast<Eigen::Index>(b.dimension());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dimension()); ++i) {
    out.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
  }
  return StateVector::normalized(std::move(space), std::move(out));
}

LinearOperator tensor(const LinearOperator& a, const LinearOperator& b) {
  SpaceDescription space = concat(a.space(), b.space());
  require_dense_size(space.dimension());
  const auto na = a.matrix().rows();
  const auto nb = b.matrix().rows();
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
    }
  }
  return LinearOperator(std::move(space), std::move(out), a.is_unitary() && b.is_unitary());
}

StateVector apply(const LinearOperator& op, const StateVector& state) {
  if (!(op.space() == state.space())) {
    throw CompositionError("operator and state live on different spaces");
  }
  Vector out = op.matrix() * state.amplitudes();
  if (op.is_unitary()) {
    return StateVector(state.space(), std::move(out));
  }
  return StateVector::normalized(state.space(), std::move(out));
}

StateVector apply_local(const LinearOperator& op, const StateVector& state) {
  const SpaceDescription& full = state.space();
  const auto local = offsets_within(full, op.space());
  const auto rest = offsets_within(full, full.complement(op.space().ids()));
  const auto nl = static_cast<Eigen::Index>(local.size());
  const auto nr = static_cast<Eigen::Index>(rest.size());

  Matrix gathered(nl, nr);
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index j = 0; j < nl; ++j) {
      gathered(j, r) = state[rest[static_cast<std::size_t>(r)] + local[static_cast<std::size_t>(j)]];
    }
  }
  const Matrix mapped = op.matrix() * gathered;
  Vector out(static_cast<Eigen::Index>(full.dimension()));
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index j = 0; j < nl; ++j) {
      out[static_cast<Eigen::Index>(rest[static_cast<std::size_t>(r)] + local[static_cast<std::size_t>(j)])] =
          mapped(j, r);
    }
  }
  if (op.is_unitary()) {
    return StateVector(full, std::move(out));
  }
  return StateVector::normalized(full, std::move(out));
}

LinearOperator expand(const LinearOperator& op, const SpaceDescription& space) {
  require_dense_size(space.dimension());
  const auto local = offsets_within(space, op.space());
  const auto rest = offsets_within(space, space.complement(op.space().ids()));
  const auto n = static_cast<Eigen::Index>(space.dimension());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t r : rest) {
    for (std::size_t i = 0; i < local.size(); ++i) {
      for (std::size_t j = 0; j < local.size(); ++j) {
        out(static_cast<Eigen::Index>(r + local[i]), static_cast<Eigen::Index>(r + local[j])) =
            op.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return LinearOperator(space, std::move(out), op.is_unitary());
}

Amplitude inner(const StateVector& a, const StateVector& b) {
  require_same_space(a, b);
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

double max_abs_diff(const StateVector& a, const StateVector& b) {
  require_same_space(a, b);
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  if (keep.empty()) {
    throw ArgumentError("partial_trace needs at least one subsystem to keep");
  }
  const SpaceDescription kept = rho.space().select(keep);
  const auto koff = offsets_within(rho.space(), kept);
  const auto toff = offsets_within(rho.space(), rho.space().complement(kept.ids()));
  const auto nk = static_cast<Eigen::Index>(koff.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) {
      Complex acc = 0.0;
      for (std::size_t t : toff) {
        acc += rho.matrix()(static_cast<Eigen::Index>(koff[static_cast<std::size_t>(i)] + t),
                            static_cast<Eigen::Index>(koff[static_cast<std::size_t>(j)] + t));
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(kept, std::move(out));
}

DensityMatrix reduced_density(const StateVector& state, std::span<const std::string> keep) {
  if (keep.empty()) {
    throw ArgumentError("reduced_density needs at least one subsystem to keep");
  }
  const SpaceDescription kept = state.space().select(keep);
  const auto koff = offsets_within(state.space(), kept);
  const auto toff = offsets_within(state.space(), state.space().complement(kept.ids()));
  Matrix psi(static_cast<Eigen::Index>(koff.size()), static_cast<Eigen::Index>(toff.size()));
  for (std::size_t i = 0; i < koff.size(); ++i) {
    for (std::size_t t = 0; t < toff.size(); ++t) {
      psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = state[koff[i] + toff[t]];
    }
  }
  return DensityMatrix(kept, psi * psi.adjoint());
}

std::vector<double> marginal_probabilities(const StateVector& state, std::span<const std::string> ids) {
  const SpaceDescription kept = state.space().select(ids);
  const auto koff = offsets_within(state.space(), kept);
  const auto toff = offsets_within(state.space(), state.space().complement(kept.ids()));
  std::vector<double> probs(koff.size(), 0.0);
  for (std::size_t i = 0; i < koff.size(); ++i) {
    double acc = 0.0;
    for (std::size_t t : toff) {
      acc += std::norm(state[koff[i] + t]);
    }
    probs[i] = acc;
  }
  return probs;
}

StateVector reorder(const StateVector& state, std::span<const std::string> order) {
  if (order.size() != state.space().size()) {
    throw CompositionError("reorder needs a permutation of all subsystem ids");
  }
  std::vector<Subsystem> subs;
  subs.reserve(order.size());
  for (const auto& id : order) {
    subs.push_back(state.space().subsystem(id));
  }
  SpaceDescription target(std::move(subs));
  const auto offsets = offsets_within(state.space(), target);
  Vector out(static_cast<Eigen::Index>(target.dimension()));
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = state[offsets[i]];
  }
  return StateVector(std::move(target), std::move(out));
}

StateVector factor_out(const StateVector& state, std::string_view id, std::size_t level) {
  const Subsystem& sub = state.space().subsystem(id);
  if (level >= sub.dim) {
    throw ArgumentError("level out of range for '" + sub.id + "'");
  }
  const std::vector<std::string> ids{sub.id};
  const SpaceDescription rest = state.space().complement(ids);
  const auto roff = offsets_within(state.space(), rest);
  const std::size_t stride = state.space().stride(id);
  Vector out(static_cast<Eigen::Index>(roff.size()));
  double leaked = 0.0;
  for (std::size_t r = 0; r < roff.size(); ++r) {
    for (std::size_t l = 0; l < sub.dim; ++l) {
      const Complex a = state[roff[r] + l * stride];
      if (l == level) {
        out[static_cast<Eigen::Index>(r)] = a;
      } else {
        leaked += std::norm(a);
      }
    }
  }
  if (std::sqrt(leaked) > kStructuralTol) {
    throw StateError("subsystem '" + sub.id + "' is not in level " + std::to_string(level));
  }
  return StateVector::normalized(rest, std::move(out));
}

LinearOperator propagator(const LinearOperator& hamiltonian, double t) {
  if (!is_hermitian(hamiltonian.matrix(), kStructuralTol)) {
    throw ArgumentError("propagator needs a Hermitian generator");
  }
  const Matrix herm = 0.5 * (hamiltonian.matrix() + hamiltonian.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -lambda[k] * t));
  }
  const Matrix& v = solver.eigenvectors();
  Matrix u = v * phases.asDiagonal() * v.adjoint();
  return LinearOperator(hamiltonian.space(), std::move(u), true);
}

}  // namespace bhsi
