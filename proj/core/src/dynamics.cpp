#include "jcpath/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace jcpath {
namespace {

constexpr Complex kI{0.0, 1.0};

// sin(x)/x, series below the point where the direct quotient loses digits.
double sinc(double x) {
  double ax = std::abs(x);
  if (ax < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// exp(-i V dt) on atom (x) field_k, ordered (a, n) with a=0 excited.
// V = (delta/2) sigma_z + g (sigma_- a^dagger + sigma_+ a). Couples only
// {|e,n>, |g,n+1>}; |g,0> and the cutoff edge |e,n_max> pick up pure
// detuning phases.
Eigen::MatrixXcd klimov_block(double delta, double g, int n_max, double dt) {
  int f = n_max + 1;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(2 * f, 2 * f);
  auto e_idx = [f](int n) { return n; };
  auto g_idx = [f](int n) { return f + n; };

  for (int n = 0; n + 1 <= n_max; ++n) {
    double omega = std::sqrt(g * g * (n + 1) + 0.25 * delta * delta);
    double c = std::cos(omega * dt);
    double s = dt * sinc(omega * dt);  // sin(omega dt)/omega, omega -> 0 safe
    w(e_idx(n), e_idx(n)) = c - kI * (0.5 * delta) * s;
    w(g_idx(n + 1), g_idx(n + 1)) = c + kI * (0.5 * delta) * s;
    Complex off = -kI * g * std::sqrt(double(n + 1)) * s;
    w(e_idx(n), g_idx(n + 1)) = off;
    w(g_idx(n + 1), e_idx(n)) = off;
  }
  w(g_idx(0), g_idx(0)) = std::exp(kI * (0.5 * delta * dt));
  w(e_idx(n_max), e_idx(n_max)) = std::exp(-kI * (0.5 * delta * dt));
  return w;
}

struct Triplet {
  int row, col;
  Complex value;
};

std::vector<Triplet> nonzeros(const Eigen::MatrixXcd& m) {
  std::vector<Triplet> out;
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r)
      if (m(r, c) != Complex{0.0, 0.0}) out.push_back({r, c, m(r, c)});
  return out;
}

// Free phase accumulated on branch k by basis ket (a, n0, n1) over tau:
// omega_k (n_k +- 1/2) + omega_other n_other, the +- following sigma_z.
Complex branch_free_phase(const SystemParams& p, int k, int atom, int n0,
                          int n1, double tau) {
  double omega_k = k == 0 ? p.omega_0 : p.omega_1;
  double omega_o = k == 0 ? p.omega_1 : p.omega_0;
  int nk = k == 0 ? n0 : n1;
  int no = k == 0 ? n1 : n0;
  double sz = atom == 0 ? 0.5 : -0.5;
  double angle = (omega_k * (nk + sz) + omega_o * no) * tau;
  return std::exp(-kI * angle);
}

void check_small_unitarity(const Eigen::MatrixXcd& w, const char* label) {
  double defect = (w.adjoint() * w -
                   Eigen::MatrixXcd::Identity(w.rows(), w.cols()))
                      .cwiseAbs()
                      .maxCoeff();
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << label << ": block unitarity defect " << defect;
    throw std::logic_error(msg.str());
  }
}

}  // namespace

double SystemParams::delta(int cavity) const {
  if (cavity != 0 && cavity != 1)
    throw std::invalid_argument("cavity index must be 0 or 1");
  return omega_a - (cavity == 0 ? omega_0 : omega_1);
}

double SystemParams::coupling(int cavity) const {
  if (cavity != 0 && cavity != 1)
    throw std::invalid_argument("cavity index must be 0 or 1");
  return cavity == 0 ? g0 : g1;
}

double SystemParams::dispersive_lambda() const {
  if (delta(0) == 0.0 || delta(1) == 0.0)
    throw std::domain_error(
        "dispersive parameter undefined for a resonant cavity");
  return std::max(std::abs(g0 / delta(0)), std::abs(g1 / delta(1)));
}

void SystemParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(omega_a) || !finite(omega_0) || !finite(omega_1) ||
      !finite(g0) || !finite(g1))
    throw std::invalid_argument("system parameters must be finite");
  if (omega_a <= 0.0 || omega_0 <= 0.0 || omega_1 <= 0.0)
    throw std::invalid_argument("frequencies must be positive");
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
}

RwaReport SystemParams::rwa_check() const {
  RwaReport r;
  std::ostringstream msg;
  for (int k = 0; k < 2; ++k) {
    double scale = 0.1 * (omega_a + (k == 0 ? omega_0 : omega_1));
    double rg = std::abs(coupling(k)) / scale;
    double rd = std::abs(delta(k)) / scale;
    r.worst_ratio = std::max({r.worst_ratio, rg, rd});
    if (rg > 1.0)
      msg << "cavity " << k << ": |g| = " << std::abs(coupling(k))
          << " exceeds 0.1 (omega_a + omega) = " << scale << "; ";
    if (rd > 1.0)
      msg << "cavity " << k << ": |delta| = " << std::abs(delta(k))
          << " exceeds 0.1 (omega_a + omega) = " << scale << "; ";
  }
  r.message = msg.str();
  r.ok = r.message.empty();
  if (!r.ok) r.message = "rotating-wave validity strained: " + r.message;
  return r;
}

CompositeState Propagator::apply(const CompositeState& psi) const {
  if (matrix.dim() != psi.amplitudes().size())
    throw std::invalid_argument("propagator and state dimensions differ");
  return CompositeState(psi.shape(), matrix.matrix() * psi.amplitudes());
}

OperatorMatrix free_hamiltonian(const SystemParams& p) {
  p.validate();
  SpaceShape shape(p.n_max);
  Eigen::VectorXd diag(shape.dim());
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int n0 = 0; n0 <= p.n_max; ++n0)
        for (int n1 = 0; n1 <= p.n_max; ++n1)
          diag[shape.index(c, a, n0, n1)] =
              (a == 0 ? 0.5 : -0.5) * p.omega_a + p.omega_0 * n0 +
              p.omega_1 * n1;
  return OperatorMatrix(diag.cast<Complex>().asDiagonal());
}

OperatorMatrix interaction_hamiltonian(const SystemParams& p) {
  p.validate();
  SpaceShape shape(p.n_max);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(shape.dim(), shape.dim());
  // sigma_- a_k^dagger moves |e, n_k> to |g, n_k + 1>.
  for (int k = 0; k < 2; ++k) {
    double g = p.coupling(k);
    for (int n = 0; n + 1 <= p.n_max; ++n) {
      double amp = g * std::sqrt(double(n + 1));
      for (int m = 0; m <= p.n_max; ++m) {
        int n0_from = k == 0 ? n : m, n1_from = k == 0 ? m : n;
        int n0_to = k == 0 ? n + 1 : m, n1_to = k == 0 ? m : n + 1;
        Eigen::Index from = shape.index(k, 0, n0_from, n1_from);
        Eigen::Index to = shape.index(k, 1, n0_to, n1_to);
        h(to, from) = amp;
        h(from, to) = amp;
      }
    }
  }
  return OperatorMatrix(std::move(h));
}

OperatorMatrix klimov_w(const SystemParams& p, int cavity, double dt) {
  p.validate();
  Eigen::MatrixXcd w =
      klimov_block(p.delta(cavity), p.coupling(cavity), p.n_max, dt);
  check_small_unitarity(w, "klimov_w");

  SpaceShape shape(p.n_max);
  int f = shape.field_dim();
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(shape.dim(), shape.dim());
  for (const Triplet& t : nonzeros(w)) {
    int ar = t.row / f, nr = t.row % f;
    int ac = t.col / f, nc = t.col % f;
    for (int c = 0; c < 2; ++c)
      for (int m = 0; m <= p.n_max; ++m) {
        Eigen::Index row =
            cavity == 0 ? shape.index(c, ar, nr, m) : shape.index(c, ar, m, nr);
        Eigen::Index col =
            cavity == 0 ? shape.index(c, ac, nc, m) : shape.index(c, ac, m, nc);
        full(row, col) = t.value;
      }
  }
  return OperatorMatrix(std::move(full));
}

Propagator controlled_propagator(const SystemParams& p, double t_start,
                                 double t_end) {
  p.validate();
  if (!(t_end >= t_start))
    throw std::invalid_argument("propagation interval must not run backwards");
  double tau = t_end - t_start;

  SpaceShape shape(p.n_max);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(shape.dim(), shape.dim());
  for (int k = 0; k < 2; ++k) {
    Eigen::MatrixXcd w =
        klimov_block(p.delta(k), p.coupling(k), p.n_max, tau);
    check_small_unitarity(w, "controlled_propagator");
    int f = shape.field_dim();
    for (const Triplet& t : nonzeros(w)) {
      int ar = t.row / f, nr = t.row % f;
      int ac = t.col / f, nc = t.col % f;
      for (int m = 0; m <= p.n_max; ++m) {
        Eigen::Index row =
            k == 0 ? shape.index(k, ar, nr, m) : shape.index(k, ar, m, nr);
        Eigen::Index col =
            k == 0 ? shape.index(k, ac, nc, m) : shape.index(k, ac, m, nc);
        int n0 = k == 0 ? nr : m, n1 = k == 0 ? m : nr;
        u(row, col) = branch_free_phase(p, k, ar, n0, n1, tau) * t.value;
      }
    }
  }
  return Propagator{OperatorMatrix(std::move(u)), t_start, t_end,
                    PropagationMethod::closed_form};
}

Propagator free_propagator(const SystemParams& p, double dt) {
  OperatorMatrix h = free_hamiltonian(p);
  Eigen::VectorXcd phases =
      (-kI * dt * h.matrix().diagonal().array()).exp();
  return Propagator{OperatorMatrix(phases.asDiagonal()), 0.0, dt,
                    PropagationMethod::free_phase};
}

Propagator numeric_expm(const OperatorMatrix& hamiltonian, double dt) {
  const Eigen::MatrixXcd& h = hamiltonian.matrix();
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hamiltonian.hermiticity_defect() > 1e-10 * scale)
    throw std::invalid_argument("numeric_expm requires a hermitian generator");

  if (hamiltonian.is_diagonal()) {
    Eigen::VectorXcd phases =
        (-kI * dt * h.diagonal().real().array().cast<Complex>()).exp();
    return Propagator{OperatorMatrix(phases.asDiagonal()), 0.0, dt,
                      PropagationMethod::eigendecomposition};
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigendecomposition failed");
  Eigen::VectorXcd phases =
      (-kI * dt * es.eigenvalues().array().cast<Complex>()).exp();
  Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() *
                       es.eigenvectors().adjoint();
  return Propagator{OperatorMatrix(std::move(u)), 0.0, dt,
                    PropagationMethod::eigendecomposition};
}

Propagator dispersive_propagator(const SystemParams& p, double t_m) {
  p.validate();
  if (p.delta(0) == 0.0 || p.delta(1) == 0.0)
    throw RegimeError("dispersive evolution needs detuned cavities");
  double lambda = p.dispersive_lambda();
  double spread = lambda * lambda * (p.n_max + 1);
  if (lambda > 0.02 || spread > 1e-2) {
    std::ostringstream msg;
    msg << "dispersive regime rejected: lambda = " << lambda
        << " (limit 0.02), lambda^2 (n_max + 1) = " << spread
        << " (limit 0.01)";
    throw RegimeError(msg.str());
  }

  SpaceShape shape(p.n_max);
  Eigen::VectorXcd phases(shape.dim());
  for (int k = 0; k < 2; ++k) {
    double chi = p.coupling(k) * p.coupling(k) / p.delta(k);
    for (int a = 0; a < 2; ++a) {
      double sz = a == 0 ? 1.0 : -1.0;
      for (int n0 = 0; n0 <= p.n_max; ++n0)
        for (int n1 = 0; n1 <= p.n_max; ++n1) {
          int nk = k == 0 ? n0 : n1;
          int no = k == 0 ? n1 : n0;
          double omega_k = k == 0 ? p.omega_0 : p.omega_1;
          double omega_o = k == 0 ? p.omega_1 : p.omega_0;
          double energy = 0.5 * (p.omega_a + chi) * sz +
                          (omega_k + chi * sz) * nk + omega_o * no;
          phases[shape.index(k, a, n0, n1)] = std::exp(-kI * energy * t_m);
        }
    }
  }
  return Propagator{OperatorMatrix(phases.asDiagonal()), 0.0, t_m,
                    PropagationMethod::dispersive_phase};
}

}  // namespace jcpath
