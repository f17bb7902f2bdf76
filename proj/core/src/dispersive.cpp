#include "jcpath/dispersive.hpp"

#include <cmath>

namespace jcpath {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * M_PI;

Eigen::VectorXcd normalized_or_throw(Eigen::VectorXcd v, const char* what) {
  double n = v.norm();
  if (n < 1e-7)
    throw std::domain_error(std::string(what) +
                            " has vanishing norm for these parameters");
  return v / n;
}

}  // namespace

double DispersiveScenario::t_m() const { return interaction_time(m, params); }

int DispersiveScenario::parity() const {
  int base = m % 2 == 0 ? 1 : -1;
  return params.delta(0) > 0.0 ? base : -base;
}

void DispersiveScenario::validate() const {
  params.validate();
  if (!params.identical())
    throw std::invalid_argument("dispersive runs assume identical cavities");
  if (params.delta(0) == 0.0)
    throw std::invalid_argument("dispersive runs need a detuned atom");
  if (m < 1) throw std::invalid_argument("the schedule index starts at 1");
  if (!(T0 >= 0.0)) throw std::invalid_argument("entry time must be >= 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) ||
      !std::isfinite(chi) || !std::isfinite(t))
    throw std::invalid_argument("scenario parameters must be finite");
  if (t < T0 + t_m())
    throw std::invalid_argument("readout must come after the zone: t >= T0 + t_m");
}

RegimeReport validate_regime(const DispersiveScenario& s) {
  RegimeReport r;
  double a = std::abs(s.alpha);
  r.n_max_estimate = int(std::ceil(a * a + 10.0 * a));
  r.lambda = s.params.dispersive_lambda();
  r.spread = r.lambda * r.lambda * (r.n_max_estimate + 1);
  r.lambda_allowed = std::sqrt(r.spread_limit / (r.n_max_estimate + 1));
  r.ok = r.lambda <= r.lambda_limit && r.spread <= r.spread_limit;
  if (!r.ok) {
    r.message = "outside the far-detuned regime: lambda = " +
                std::to_string(r.lambda) + " (allowed " +
                std::to_string(std::min(r.lambda_limit, r.lambda_allowed)) +
                " for " + std::to_string(r.n_max_estimate + 1) +
                " photon levels)";
  }
  return r;
}

double interaction_time(int m, const SystemParams& params) {
  params.validate();
  if (m < 1) throw std::invalid_argument("the schedule index starts at 1");
  if (!params.identical())
    throw std::invalid_argument("dispersive schedule assumes identical cavities");
  double delta = params.delta(0);
  if (delta == 0.0)
    throw std::domain_error("interaction time undefined on resonance");
  double g = params.g0;
  if (!(g > 0.0)) throw std::invalid_argument("coupling must be positive");
  return (2.0 * m - 1.0) * M_PI * std::abs(delta) / (2.0 * g * g);
}

CatBellStates build_states(const DispersiveScenario& s) {
  s.validate();
  int n_max = s.params.n_max;
  double a2 = std::norm(s.alpha);
  int p = s.parity();

  CatBellStates out;
  out.alpha_m = kI * double(p) * s.alpha * std::exp(-kI * (s.params.omega_0 * s.t));
  out.atom_phase =
      kI * double(p) * std::exp(kI * (s.chi - s.params.omega_a * s.t));

  out.up_plus = coherent_state(out.alpha_m, n_max).amplitudes;
  out.up_minus = coherent_state(-out.alpha_m, n_max).amplitudes;
  out.down =
      coherent_state(s.alpha * std::exp(-kI * (s.params.omega_0 * s.t)), n_max)
          .amplitudes;

  double phase_arg = s.chi - s.params.omega_a * s.t;
  out.norm_cat = std::sqrt(2.0) *
                 std::sqrt(1.0 - p * std::exp(-2.0 * a2) * std::sin(phase_arg));
  out.norm_sym = std::sqrt(2.0) * std::sqrt(1.0 + std::exp(-2.0 * a2));
  out.norm_antisym = std::sqrt(2.0) * std::sqrt(1.0 - std::exp(-2.0 * a2));

  out.cat = normalized_or_throw(out.up_minus + out.atom_phase * out.up_plus,
                                "the cat state");

  out.bell_sym_plus = normalized_or_throw(
      kron(out.up_plus, out.down) + kron(out.down, out.up_plus),
      "the symmetric pair state");
  out.bell_sym_minus = normalized_or_throw(
      kron(out.up_minus, out.down) + kron(out.down, out.up_minus),
      "the symmetric pair state");
  out.bell_antisym_plus = normalized_or_throw(
      kron(out.up_plus, out.down) - kron(out.down, out.up_plus),
      "the antisymmetric pair state");
  out.bell_antisym_minus = normalized_or_throw(
      kron(out.up_minus, out.down) - kron(out.down, out.up_minus),
      "the antisymmetric pair state");

  out.cat_component_overlap = std::exp(-2.0 * a2);
  out.up_down_overlap = std::exp(-a2);
  out.down_cat_bound = 2.0 * std::exp(-a2) / out.norm_cat;
  return out;
}

CompositeState conditioned_state(const DispersiveScenario& s,
                                 ControlOutcome control,
                                 std::optional<AtomOutcome> atom) {
  CatBellStates cs = build_states(s);
  SpaceShape shape(s.params.n_max);
  double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd control_vec =
      control == ControlOutcome::plus ? Eigen::Vector2cd{r, r}
                                      : Eigen::Vector2cd{r, -r};
  bool sym = control == ControlOutcome::plus;
  const Eigen::VectorXcd& pair_plus =
      sym ? cs.bell_sym_plus : cs.bell_antisym_plus;
  const Eigen::VectorXcd& pair_minus =
      sym ? cs.bell_sym_minus : cs.bell_antisym_minus;

  Eigen::VectorXcd atom_fields;
  Eigen::Index fd = cs.up_plus.size();
  if (!atom) {
    // (|g> pair_minus + Q |e> pair_plus)/sqrt 2, atom slot major.
    atom_fields = Eigen::VectorXcd::Zero(2 * fd * fd);
    atom_fields.head(fd * fd) = r * cs.atom_phase * pair_plus;  // |e>
    atom_fields.tail(fd * fd) = r * pair_minus;                 // |g>
  } else {
    Eigen::Vector2cd atom_vec;
    Eigen::VectorXcd fields;
    double branch_sign = sym ? 1.0 : -1.0;
    switch (*atom) {
      case AtomOutcome::excited:
        atom_vec = {1.0, 0.0};
        fields = pair_plus;
        break;
      case AtomOutcome::ground:
        atom_vec = {0.0, 1.0};
        fields = pair_minus;
        break;
      case AtomOutcome::plus_x:
        atom_vec = {r, r};
        fields = normalized_or_throw(
            kron(cs.cat, cs.down) + branch_sign * kron(cs.down, cs.cat),
            "the double-cat branch");
        break;
      case AtomOutcome::minus_x: {
        atom_vec = {r, -r};
        // chi -> chi + pi flips the cat's internal phase.
        Eigen::VectorXcd flipped = normalized_or_throw(
            cs.up_minus - cs.atom_phase * cs.up_plus, "the cat state");
        fields = normalized_or_throw(
            kron(flipped, cs.down) + branch_sign * kron(cs.down, flipped),
            "the double-cat branch");
        break;
      }
    }
    atom_fields = kron(Eigen::VectorXcd(atom_vec), fields);
  }
  Eigen::VectorXcd full =
      kron(Eigen::VectorXcd(control_vec), atom_fields);
  full /= full.norm();
  return CompositeState(shape, std::move(full));
}

double double_cat_probability(double Theta, double alpha_sq) {
  if (!(alpha_sq >= 0.0))
    throw std::invalid_argument("|alpha|^2 must be non-negative");
  double st = std::sin(Theta);
  double st2 = std::sin(Theta + 2.0 * alpha_sq);
  double num = 2.0 * (1.0 - st2);
  double den = std::exp(2.0 * alpha_sq) + 1.0 - st - st2;
  if (den <= 0.0 || num <= 0.0) return 0.0;  // degenerate alpha -> 0 corner
  return num / den;
}

double theta_param(int m, double chi, double omega_a, double t) {
  double sign = m % 2 == 0 ? 1.0 : -1.0;
  double raw = sign * (chi - omega_a * t);
  double r = std::fmod(raw, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

}  // namespace jcpath
