#include <cmath>

#include <Eigen/Cholesky>

#include "bhsi/branching.hpp"

namespace bhsi {

bool EnvironmentModel::same_model(const EnvironmentModel& other) const {
  return outcomes == other.outcomes && qubits == other.qubits && overlap == other.overlap && id == other.id;
}

std::size_t minimal_qubits(std::size_t outcomes) {
  std::size_t m = 1;
  while ((std::size_t{1} << m) < outcomes) {
    ++m;
  }
  return m;
}

EnvironmentModel make_environment(std::size_t outcomes, std::size_t qubits, double overlap, std::string id) {
  if (outcomes == 0) {
    throw ArgumentError("environment needs at least one outcome");
  }
  if (qubits == 0 || qubits > 20) {
    throw ArgumentError("environment qubit count must be in [1, 20]");
  }
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw ArgumentError("pointer overlap must lie in [0, 1)");
  }
  const std::size_t dim = std::size_t{1} << qubits;
  if (outcomes > dim) {
    throw CapacityError(std::to_string(outcomes) + " pointer states do not fit in " + std::to_string(qubits) +
                        " qubits");
  }

  const auto d = static_cast<Eigen::Index>(outcomes);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Constant(d, d, overlap);
  gram.diagonal().setOnes();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw ConstructionError("pointer Gram matrix is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  const SpaceDescription space = single_space(id, dim, Role::LocalEnvironment);
  std::vector<StateVector> pointers;
  pointers.reserve(outcomes);
  for (Eigen::Index k = 0; k < d; ++k) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j <= k; ++j) {
      v[j] = lower(k, j);
    }
    // Rows of L are unit vectors up to rounding; renormalize to keep the
    // StateVector invariant tight.
    pointers.push_back(StateVector::normalized(space, std::move(v)));
  }
  return EnvironmentModel{outcomes, qubits, overlap, std::move(id), StateVector::basis(space, std::size_t{0}),
                          std::move(pointers)};
}

}  // namespace bhsi
