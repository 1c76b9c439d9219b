#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "bhsi/hilbert.hpp"

namespace bhsi {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

StateVector::StateVector(SpaceDescription space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != space_.dimension()) {
    throw CompositionError("amplitude count " + std::to_string(amplitudes_.size()) + " does not match dimension " +
                           std::to_string(space_.dimension()));
  }
  if (!all_finite(amplitudes_)) {
    throw ArgumentError("state has non-finite amplitudes");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kStructuralTol) {
    throw ArgumentError("state is not normalized (norm^2 = " + std::to_string(amplitudes_.squaredNorm()) + ")");
  }
}

StateVector StateVector::basis(SpaceDescription space, std::span<const std::size_t> digits) {
  const std::size_t index = space.compose(digits);
  return basis(std::move(space), index);
}

StateVector StateVector::basis(SpaceDescription space, std::size_t index) {
  if (index >= space.dimension()) {
    throw ArgumentError("basis index out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(space), std::move(v));
}

StateVector StateVector::normalized(SpaceDescription space, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ArgumentError("cannot normalize a zero or non-finite vector");
  }
  amplitudes /= n;
  return StateVector(std::move(space), std::move(amplitudes));
}

LinearOperator::LinearOperator(SpaceDescription space, Matrix matrix, bool unitary)
    : space_(std::move(space)), matrix_(std::move(matrix)), unitary_(unitary) {
  const auto n = static_cast<Eigen::Index>(space_.dimension());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw CompositionError("operator matrix is not square of side " + std::to_string(n));
  }
  if (!matrix_.allFinite()) {
    throw ArgumentError("operator has non-finite entries");
  }
  if (unitary_ && !check_unitary(matrix_, kStructuralTol)) {
    throw ArgumentError("operator flagged unitary fails U^dagger U = I (defect " +
                        std::to_string(unitarity_defect(matrix_)) + ")");
  }
}

LinearOperator LinearOperator::identity(SpaceDescription space) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  return LinearOperator(std::move(space), Matrix::Identity(n, n), true);
}

LinearOperator LinearOperator::adjoint() const { return LinearOperator(space_, matrix_.adjoint(), unitary_); }

LinearOperator compose(const LinearOperator& a, const LinearOperator& b) {
  if (!(a.space() == b.space())) {
    throw CompositionError("cannot compose operators on different spaces");
  }
  Matrix product = a.matrix() * b.matrix();
  const bool unitary = a.is_unitary() && b.is_unitary();
  return LinearOperator(a.space(), std::move(product), unitary);
}

DensityMatrix::DensityMatrix(SpaceDescription space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(space_.dimension());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw CompositionError("density matrix is not square of side " + std::to_string(n));
  }
  if (!matrix_.allFinite()) {
    throw ArgumentError("density matrix has non-finite entries");
  }
  if (!is_hermitian(matrix_, kStructuralTol)) {
    throw ArgumentError("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex(1.0)) > kStructuralTol) {
    throw ArgumentError("density matrix trace is not 1");
  }
  if (eigenvalues().minCoeff() < -kStructuralTol) {
    throw ArgumentError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  const Vector& v = state.amplitudes();
  return DensityMatrix(state.space(), v * v.adjoint());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

double unitarity_defect(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::Index n = matrix.rows();
  const Eigen::Index nnz = (matrix.array() != Complex(0.0)).count();
  // Composed measurement operators are mostly exact zeros; skipping them
  // changes nothing but the cost.
  if (n >= 64 && nnz * 8 < n * n) {
    const Eigen::SparseMatrix<Complex> sparse = matrix.sparseView(Complex(0.0), 0.0);
    const Eigen::SparseMatrix<Complex> gram = Eigen::SparseMatrix<Complex>(sparse.adjoint()) * sparse;
    double worst = 0.0;
    Eigen::Index diagonal_seen = 0;
    for (Eigen::Index k = 0; k < gram.outerSize(); ++k) {
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(gram, k); it; ++it) {
        const bool diag = it.row() == it.col();
        diagonal_seen += diag ? 1 : 0;
        worst = std::max(worst, std::abs(it.value() - (diag ? Complex(1.0) : Complex(0.0))));
      }
    }
    return diagonal_seen == n ? worst : std::max(worst, 1.0);
  }
  const Matrix gram = matrix.adjoint() * matrix;
  return (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

bool check_unitary(const Matrix& matrix, double tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    return false;
  }
  return unitarity_defect(matrix) < tol;
}

bool check_unitary(const LinearOperator& op, double tol) { return check_unitary(op.matrix(), tol); }

bool is_hermitian(const Matrix& matrix, double tol) {
  if (matrix.rows() != matrix.cols()) {
    return false;
  }
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace bhsi
