#include "jcpath/pipeline.hpp"

#include <cmath>

namespace jcpath {
namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::VectorXcd control_ket(double theta, double phi) {
  Eigen::VectorXcd v(2);
  v << Complex{std::cos(theta), 0.0},
      std::exp(kI * phi) * std::sin(theta);
  return v;
}

}  // namespace

int rabi_safe_n_max(const RabiScenario& s) {
  return std::max(s.n0, s.n1) + 2;
}

CompositeState initial_rabi_state(const RabiScenario& s, int n_max) {
  s.validate();
  Eigen::VectorXcd atom(2);
  atom << 1.0, 0.0;  // excited
  return tensor(control_ket(s.theta, s.phi), atom, fock_state(s.n0, n_max),
                fock_state(s.n1, n_max));
}

ConditionedRun rabi_conditioned_state(const RabiScenario& s, int n_max) {
  SystemParams p = s.params(n_max);
  CompositeState psi = initial_rabi_state(s, n_max);
  psi = controlled_propagator(p, 0.0, s.t_m).apply(psi);
  MeasurementRecord plus = measure(psi, control_basis(s.theta, s.phi), 0);
  CompositeState at_t =
      controlled_propagator(p, s.t_m, s.t).apply(plus.post_state);
  return ConditionedRun{std::move(at_t), plus.probability};
}

double simulated_inversion(const RabiScenario& s, int n_max) {
  ConditionedRun run = rabi_conditioned_state(s, n_max);
  return subsystem_expectation(sigma_z(), kAtom, run.state);
}

double simulated_photon_average(const RabiScenario& s, int n_max, int field) {
  ConditionedRun run = rabi_conditioned_state(s, n_max);
  return photon_number_expectation(run.state, field);
}

XiCoefficients simulated_xi(const RabiScenario& s, int n_max) {
  if (n_max < rabi_safe_n_max(s))
    throw std::invalid_argument(
        "cutoff too small to read all path amplitudes exactly");
  ConditionedRun run = rabi_conditioned_state(s, n_max);
  double scale = std::sqrt(run.plus_probability);

  XiCoefficients out;
  out.norm0 = scale;
  auto amp = [&](int control, int atom, int f0, int f1) -> Complex {
    if (f0 < 0 || f1 < 0) return Complex{0.0, 0.0};
    return scale * run.state.amplitude(control, atom, f0, f1);
  };
  out.xi[0] = amp(0, 0, s.n0, s.n1);
  out.xi[1] = amp(0, 1, s.n0 + 1, s.n1);
  out.xi[2] = amp(0, 1, s.n0, s.n1 + 1);
  out.xi[3] = amp(0, 0, s.n0 - 1, s.n1 + 1);
  out.xi[4] = amp(1, 0, s.n0, s.n1);
  out.xi[5] = amp(1, 1, s.n0, s.n1 + 1);
  out.xi[6] = amp(1, 1, s.n0 + 1, s.n1);
  out.xi[7] = amp(1, 0, s.n0 + 1, s.n1 - 1);
  return out;
}

CompositeState initial_dispersive_state(const DispersiveScenario& s) {
  s.validate();
  Eigen::VectorXcd control(2);
  control << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd atom(2);
  atom << std::exp(kI * s.chi) / std::sqrt(2.0),
      Complex{1.0 / std::sqrt(2.0), 0.0};
  Eigen::VectorXcd field =
      coherent_state(s.alpha, s.params.n_max).amplitudes;
  return tensor(control, atom, field, field);
}

CompositeState dispersive_evolved_state(const DispersiveScenario& s,
                                        bool exact_jc) {
  CompositeState psi = initial_dispersive_state(s);
  double t_m = s.t_m();
  if (s.T0 > 0.0) psi = free_propagator(s.params, s.T0).apply(psi);
  if (exact_jc) {
    psi = controlled_propagator(s.params, s.T0, s.T0 + t_m).apply(psi);
  } else {
    psi = dispersive_propagator(s.params, t_m).apply(psi);
  }
  double rest = s.t - s.T0 - t_m;
  if (rest > 0.0) psi = free_propagator(s.params, rest).apply(psi);
  return psi;
}

DispersiveReadout dispersive_readout(const DispersiveScenario& s,
                                     bool exact_jc, ControlOutcome control,
                                     std::optional<AtomOutcome> atom) {
  CompositeState psi = dispersive_evolved_state(s, exact_jc);
  int c_index = control == ControlOutcome::plus ? 0 : 1;
  MeasurementRecord c_rec = measure(psi, control_basis(M_PI / 4.0, 0.0), c_index);
  double prob = c_rec.probability;
  CompositeState state = std::move(c_rec.post_state);
  if (atom) {
    bool z = *atom == AtomOutcome::excited || *atom == AtomOutcome::ground;
    MeasurementBasis basis = z ? atom_z_basis() : atom_x_basis();
    int a_index =
        (*atom == AtomOutcome::excited || *atom == AtomOutcome::plus_x) ? 0
                                                                        : 1;
    MeasurementRecord a_rec = measure(state, basis, a_index);
    prob *= a_rec.probability;
    state = std::move(a_rec.post_state);
  }
  return DispersiveReadout{std::move(state), prob};
}

}  // namespace jcpath
