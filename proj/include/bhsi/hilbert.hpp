#pragma once

// Dense complex linear algebra over labeled tensor-product spaces.
//
// Amplitudes are stored row-major over the subsystem list: the first
// subsystem is the most significant digit of the joint index. Every type in
// this header is an immutable value once constructed.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bhsi/errors.hpp"

namespace bhsi {

using Complex = std::complex<double>;
using Amplitude = Complex;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Structural identities (normalization, unitarity, hermiticity).
inline constexpr double kStructuralTol = 1e-10;
// Agreement between an implementation and an independent oracle.
inline constexpr double kOracleTol = 1e-12;
// Dense operators larger than this side length are refused.
inline constexpr std::size_t kMaxDenseDimension = 4096;

enum class Role { System, LocalEnvironment, Observer, Ancilla };

std::string_view to_string(Role role);

struct Subsystem {
  std::string id;
  std::size_t dim = 1;
  Role role = Role::System;

  bool operator==(const Subsystem&) const = default;
};

struct BasisLabel {
  std::string subsystem;
  std::size_t index = 0;
  std::string name;

  bool operator==(const BasisLabel&) const = default;
};

// Ordered list of subsystems making up a joint Hilbert space.
class SpaceDescription {
 public:
  SpaceDescription() = default;
  explicit SpaceDescription(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  std::size_t dimension() const { return dimension_; }

  bool contains(std::string_view id) const;
  // Position of `id` in the subsystem list; throws CompositionError if absent.
  std::size_t position(std::string_view id) const;
  const Subsystem& subsystem(std::string_view id) const;
  // Joint-index step between consecutive levels of `id`.
  std::size_t stride(std::string_view id) const;

  std::vector<std::size_t> decompose(std::size_t index) const;
  std::size_t compose(std::span<const std::size_t> digits) const;

  // Subsystems of `ids`, kept in this space's order.
  SpaceDescription select(std::span<const std::string> ids) const;
  // Subsystems not in `ids`, kept in this space's order.
  SpaceDescription complement(std::span<const std::string> ids) const;
  std::vector<std::string> ids() const;

  bool operator==(const SpaceDescription& other) const { return subsystems_ == other.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

SpaceDescription concat(const SpaceDescription& a, const SpaceDescription& b);

// One-subsystem space with computational basis labels "<id>_<k>".
SpaceDescription single_space(std::string id, std::size_t dim, Role role = Role::System);
std::vector<BasisLabel> basis_labels(const Subsystem& subsystem);

class StateVector {
 public:
  // Throws ArgumentError unless finite and normalized within kStructuralTol.
  StateVector(SpaceDescription space, Vector amplitudes);

  static StateVector basis(SpaceDescription space, std::span<const std::size_t> digits);
  static StateVector basis(SpaceDescription space, std::size_t index);
  // Rescales `amplitudes` to unit norm; throws ArgumentError on a zero vector.
  static StateVector normalized(SpaceDescription space, Vector amplitudes);

  const SpaceDescription& space() const { return space_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Amplitude operator[](std::size_t index) const { return amplitudes_[static_cast<Eigen::Index>(index)]; }
  double norm() const { return amplitudes_.norm(); }

 private:
  SpaceDescription space_;
  Vector amplitudes_;
};

class LinearOperator {
 public:
  // With `unitary` set, construction fails unless check_unitary passes at
  // kStructuralTol.
  LinearOperator(SpaceDescription space, Matrix matrix, bool unitary = false);

  static LinearOperator identity(SpaceDescription space);

  const SpaceDescription& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  bool is_unitary() const { return unitary_; }

  LinearOperator adjoint() const;

 private:
  SpaceDescription space_;
  Matrix matrix_;
  bool unitary_ = false;
};

// Operator product a·b (b acts first).
LinearOperator compose(const LinearOperator& a, const LinearOperator& b);

class DensityMatrix {
 public:
  // Throws ArgumentError unless Hermitian, unit trace and positive
  // semidefinite, each within kStructuralTol.
  DensityMatrix(SpaceDescription space, Matrix matrix);

  static DensityMatrix pure(const StateVector& state);

  const SpaceDescription& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  Eigen::VectorXd eigenvalues() const;
  double purity() const;

 private:
  SpaceDescription space_;
  Matrix matrix_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
LinearOperator tensor(const LinearOperator& a, const LinearOperator& b);

StateVector apply(const LinearOperator& op, const StateVector& state);
// Applies an operator defined on a subset of `state`'s subsystems, acting as
// identity on the rest. Never forms the full matrix.
StateVector apply_local(const LinearOperator& op, const StateVector& state);
// Dense embedding of `op` into `space` (identity on the other subsystems).
LinearOperator expand(const LinearOperator& op, const SpaceDescription& space);

Amplitude inner(const StateVector& a, const StateVector& b);
// |<a|b>|: equality up to global phase.
double fidelity(const StateVector& a, const StateVector& b);
// max_i |a_i - b_i| over states on the same space.
double max_abs_diff(const StateVector& a, const StateVector& b);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
// Reduced density matrix of a pure state without forming |psi><psi|.
DensityMatrix reduced_density(const StateVector& state, std::span<const std::string> keep);

// Joint Born distribution over the computational bases of `ids`, indexed
// row-major in this space's order of those subsystems.
std::vector<double> marginal_probabilities(const StateVector& state, std::span<const std::string> ids);

// Same amplitudes with subsystems permuted into `order`.
StateVector reorder(const StateVector& state, std::span<const std::string> order);
// For state = rest ⊗ |level>_id returns rest; throws StateError if `id` is
// not in that product form.
StateVector factor_out(const StateVector& state, std::string_view id, std::size_t level);

// exp(-i H t) via eigendecomposition of the Hermitian generator.
LinearOperator propagator(const LinearOperator& hamiltonian, double t);

bool check_unitary(const LinearOperator& op, double tol = kStructuralTol);
bool check_unitary(const Matrix& matrix, double tol = kStructuralTol);
bool is_hermitian(const Matrix& matrix, double tol = kStructuralTol);
// ‖U†U − I‖_max.
double unitarity_defect(const Matrix& matrix);

}  // namespace bhsi
