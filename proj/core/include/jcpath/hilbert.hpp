#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jcpath {

using Complex = std::complex<double>;

// Thrown when a Fock cutoff cannot hold a state to the requested accuracy.
// Carries the smallest cutoff that would.
class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& what, int required_n_max)
      : std::runtime_error(what), required_n_max_(required_n_max) {}
  int required_n_max() const noexcept { return required_n_max_; }

private:
  int required_n_max_;
};

// Subsystem order is fixed everywhere: control qubit, atom, field 0, field 1.
enum Subsystem : int { kControl = 0, kAtom = 1, kField0 = 2, kField1 = 3 };

// Basis conventions: control {|0>,|1>}; atom {|e>,|g>} so sigma_z = diag(+1,-1);
// each field {|0>,...,|n_max>}. Flattening is row-major in that order.
class SpaceShape {
public:
  explicit SpaceShape(int n_max);

  int n_max() const noexcept { return n_max_; }
  int field_dim() const noexcept { return n_max_ + 1; }
  Eigen::Index dim() const noexcept {
    return 4ll * field_dim() * field_dim();
  }
  std::array<int, 4> dims() const noexcept {
    return {2, 2, field_dim(), field_dim()};
  }
  Eigen::Index index(int control, int atom, int n0, int n1) const;

  bool operator==(const SpaceShape&) const = default;

private:
  int n_max_;
};

// Dense square operator with finite entries. Hermiticity/unitarity are
// measured, not trusted: defects are max-norm residuals.
class OperatorMatrix {
public:
  explicit OperatorMatrix(Eigen::MatrixXcd m);

  Eigen::Index dim() const noexcept { return mat_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return mat_; }
  Eigen::MatrixXcd& matrix() noexcept { return mat_; }

  OperatorMatrix adjoint() const { return OperatorMatrix(mat_.adjoint()); }
  double hermiticity_defect() const;        // max |A - A^dagger|
  double unitarity_defect() const;          // max |A^dagger A - 1|, O(dim^3)
  bool is_diagonal() const;                 // exact zero off the diagonal

private:
  Eigen::MatrixXcd mat_;
};

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

// Pure state of the four-part composite system, unit norm within 1e-12.
class CompositeState {
public:
  CompositeState(SpaceShape shape, Eigen::VectorXcd amplitudes);

  const SpaceShape& shape() const noexcept { return shape_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Complex amplitude(int control, int atom, int n0, int n1) const {
    return amps_[shape_.index(control, atom, n0, n1)];
  }
  double norm() const { return amps_.norm(); }

  // Weight sitting on |e, n_max> of the given field, the component a
  // truncated ladder cannot feed. Should stay negligible under a good cutoff.
  double excited_edge_population(int field) const;

private:
  SpaceShape shape_;
  Eigen::VectorXcd amps_;
};

// Single-subsystem states -------------------------------------------------

Eigen::VectorXcd fock_state(int n, int n_max);

struct TruncatedCoherent {
  Eigen::VectorXcd amplitudes;  // renormalized after truncation
  double tail_weight;           // Poisson weight beyond n_max, before renorm
};

// Rejects cutoffs whose discarded tail exceeds tail_tol; the error names the
// smallest acceptable n_max.
TruncatedCoherent coherent_state(Complex alpha, int n_max,
                                 double tail_tol = 1e-10);

// Operators ---------------------------------------------------------------

struct LadderPair {
  Eigen::MatrixXcd annihilate;  // a
  Eigen::MatrixXcd create;      // a^dagger, truncated: a^dagger|n_max> = 0
};
LadderPair ladder_ops(int n_max);
Eigen::MatrixXcd number_op(int n_max);

Eigen::Matrix2cd sigma_z();
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_plus();   // |e><g|
Eigen::Matrix2cd sigma_minus();  // |g><e|

// Composite construction ----------------------------------------------------

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// |control> (x) |atom> (x) |field0> (x) |field1>; the field factors must share
// one dimension, which sets the shape.
CompositeState tensor(const Eigen::VectorXcd& control,
                      const Eigen::VectorXcd& atom,
                      const Eigen::VectorXcd& field0,
                      const Eigen::VectorXcd& field1);

// op acting on one subsystem, identity elsewhere.
OperatorMatrix embed(const Eigen::MatrixXcd& op, Subsystem where,
                     const SpaceShape& shape);

// Expectation of a hermitian operator; the imaginary residual must stay below
// 1e-12 relative to scale or this throws.
double expectation(const OperatorMatrix& op, const CompositeState& psi);

// Same, but op lives on a single subsystem; avoids materializing the embedding.
double subsystem_expectation(const Eigen::MatrixXcd& op, Subsystem where,
                             const CompositeState& psi);

// <a_k^dagger a_k>
double photon_number_expectation(const CompositeState& psi, int field);

// |<a|b>|^2, symmetric, 1 for identical states.
double fidelity(const CompositeState& a, const CompositeState& b);
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace jcpath
