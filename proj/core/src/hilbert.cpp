#include "jcpath/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace jcpath {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

SpaceShape::SpaceShape(int n_max) : n_max_(n_max) {
  require(n_max >= 0, "SpaceShape: n_max must be nonnegative");
}

Eigen::Index SpaceShape::index(int control, int atom, int n0, int n1) const {
  require(control == 0 || control == 1, "SpaceShape::index: control out of range");
  require(atom == 0 || atom == 1, "SpaceShape::index: atom out of range");
  require(n0 >= 0 && n0 <= n_max_, "SpaceShape::index: n0 out of range");
  require(n1 >= 0 && n1 <= n_max_, "SpaceShape::index: n1 out of range");
  const Eigen::Index f = field_dim();
  return ((control * 2ll + atom) * f + n0) * f + n1;
}

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {
  require(mat_.rows() == mat_.cols(), "OperatorMatrix: matrix must be square");
  require(mat_.allFinite(), "OperatorMatrix: entries must be finite");
}

double OperatorMatrix::hermiticity_defect() const {
  return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::unitarity_defect() const {
  Eigen::MatrixXcd g = mat_.adjoint() * mat_;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_diagonal() const {
  for (Eigen::Index j = 0; j < mat_.cols(); ++j)
    for (Eigen::Index i = 0; i < mat_.rows(); ++i)
      if (i != j && mat_(i, j) != 0.0) return false;
  return true;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require(a.dim() == b.dim(), "OperatorMatrix: dimension mismatch in product");
  return OperatorMatrix(a.matrix() * b.matrix());
}

CompositeState::CompositeState(SpaceShape shape, Eigen::VectorXcd amplitudes)
    : shape_(shape), amps_(std::move(amplitudes)) {
  require(amps_.size() == shape_.dim(),
          "CompositeState: amplitude vector does not match shape");
  require(amps_.allFinite(), "CompositeState: amplitudes must be finite");
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "CompositeState: state not normalized (norm = " << n << ")";
    throw std::invalid_argument(os.str());
  }
}

double CompositeState::excited_edge_population(int field) const {
  require(field == 0 || field == 1, "excited_edge_population: field must be 0 or 1");
  const int edge = shape_.n_max();
  double w = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int m = 0; m <= shape_.n_max(); ++m) {
      const Complex a = field == 0 ? amplitude(c, 0, edge, m)
                                   : amplitude(c, 0, m, edge);
      w += std::norm(a);
    }
  return w;
}

Eigen::VectorXcd fock_state(int n, int n_max) {
  if (n < 0) throw std::invalid_argument("fock_state: n must be nonnegative");
  if (n > n_max)
    throw TruncationError("fock_state: level exceeds cutoff", n);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_max + 1);
  v[n] = 1.0;
  return v;
}

TruncatedCoherent coherent_state(Complex alpha, int n_max, double tail_tol) {
  if (n_max < 0) throw std::invalid_argument("coherent_state: n_max must be nonnegative");
  // c_{n+1} = c_n * alpha / sqrt(n+1), c_0 = exp(-|alpha|^2/2)
  Eigen::VectorXcd v(n_max + 1);
  Complex c = std::exp(Complex(-0.5 * std::norm(alpha), 0.0));
  double kept = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    v[n] = c;
    kept += std::norm(c);
    c *= alpha / std::sqrt(double(n + 1));
  }
  double tail = 1.0 - kept;
  if (tail < 0.0) tail = 0.0;
  if (tail > tail_tol) {
    // keep extending the recurrence until enough weight is captured
    int required = n_max;
    double k = kept;
    while (1.0 - k > tail_tol && required < 1 << 20) {
      ++required;
      k += std::norm(c);
      c *= alpha / std::sqrt(double(required + 1));
    }
    std::ostringstream os;
    os << "coherent_state: discarded tail weight " << tail << " exceeds "
       << tail_tol << "; need n_max >= " << required;
    throw TruncationError(os.str(), required);
  }
  v /= std::sqrt(kept);
  return {std::move(v), tail};
}

LadderPair ladder_ops(int n_max) {
  if (n_max < 0) throw std::invalid_argument("ladder_ops: n_max must be nonnegative");
  const int d = n_max + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return {a, a.adjoint()};
}

Eigen::MatrixXcd number_op(int n_max) {
  const int d = n_max + 1;
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = double(k);
  return n;
}

Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd sigma_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m;
  m << 0, 1, 0, 0;
  return m;
}

Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CompositeState tensor(const Eigen::VectorXcd& control,
                      const Eigen::VectorXcd& atom,
                      const Eigen::VectorXcd& field0,
                      const Eigen::VectorXcd& field1) {
  require(control.size() == 2, "tensor: control factor must have dimension 2");
  require(atom.size() == 2, "tensor: atom factor must have dimension 2");
  require(field0.size() == field1.size() && field0.size() >= 1,
          "tensor: field factors must share one dimension");
  SpaceShape shape(int(field0.size()) - 1);
  return CompositeState(shape, kron(kron(control, atom), kron(field0, field1)));
}

OperatorMatrix embed(const Eigen::MatrixXcd& op, Subsystem where,
                     const SpaceShape& shape) {
  const auto dims = shape.dims();
  require(op.rows() == op.cols(), "embed: operator must be square");
  require(op.rows() == dims[where], "embed: operator does not fit subsystem");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int s = 0; s < 4; ++s) {
    if (s == where)
      out = kron(out, op).eval();
    else
      out = kron(out, Eigen::MatrixXcd::Identity(dims[s], dims[s])).eval();
  }
  return OperatorMatrix(std::move(out));
}

namespace {

double real_with_residual_check(Complex v, const char* what) {
  const double scale = std::max(1.0, std::abs(v.real()));
  if (std::abs(v.imag()) > 1e-12 * scale)
    throw std::logic_error(std::string(what) +
                           ": imaginary residual exceeds tolerance");
  return v.real();
}

}  // namespace

double expectation(const OperatorMatrix& op, const CompositeState& psi) {
  require(op.dim() == psi.shape().dim(), "expectation: dimension mismatch");
  const Complex v = psi.amplitudes().dot(op.matrix() * psi.amplitudes());
  return real_with_residual_check(v, "expectation");
}

double subsystem_expectation(const Eigen::MatrixXcd& op, Subsystem where,
                             const CompositeState& psi) {
  const auto dims = psi.shape().dims();
  require(op.rows() == op.cols() && op.rows() == dims[where],
          "subsystem_expectation: operator does not fit subsystem");
  // strides of the flattened index
  Eigen::Index stride = 1;
  for (int s = 3; s > where; --s) stride *= dims[s];
  const Eigen::Index d_sub = dims[where];
  const Eigen::Index block = stride * d_sub;
  const auto& v = psi.amplitudes();
  Complex acc = 0.0;
  for (Eigen::Index outer = 0; outer < v.size(); outer += block)
    for (Eigen::Index inner = 0; inner < stride; ++inner)
      for (Eigen::Index i = 0; i < d_sub; ++i) {
        Complex row = 0.0;
        for (Eigen::Index j = 0; j < d_sub; ++j)
          row += op(i, j) * v[outer + inner + j * stride];
        acc += std::conj(v[outer + inner + i * stride]) * row;
      }
  return real_with_residual_check(acc, "subsystem_expectation");
}

double photon_number_expectation(const CompositeState& psi, int field) {
  require(field == 0 || field == 1, "photon_number_expectation: field must be 0 or 1");
  const int f = psi.shape().field_dim();
  const auto& v = psi.amplitudes();
  double acc = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int n0 = 0; n0 < f; ++n0)
        for (int n1 = 0; n1 < f; ++n1) {
          const double w = std::norm(v[psi.shape().index(c, a, n0, n1)]);
          acc += w * (field == 0 ? n0 : n1);
        }
  return acc;
}

double fidelity(const CompositeState& a, const CompositeState& b) {
  require(a.shape() == b.shape(), "fidelity: states live on different shapes");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  require(a.size() == b.size(), "fidelity: dimension mismatch");
  return std::norm(a.dot(b));
}

}  // namespace jcpath
