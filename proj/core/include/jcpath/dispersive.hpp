#pragma once

#include <optional>
#include <string>

#include "jcpath/dynamics.hpp"

namespace jcpath {

// One far-detuned run: both cavities start in |alpha>, the atom in
// (|g> + e^{i chi}|e>)/sqrt 2, the control in the balanced superposition.
// The atom crosses its branch cavity during [T0, T0 + t_m] and everything is
// read out at t.
struct DispersiveScenario {
  Complex alpha;
  double chi = 0.0;
  int m = 1;        // interaction-time index, t_m = (2m-1) pi |Delta| / (2 g^2)
  double T0 = 0.0;  // entry time
  double t = 0.0;   // readout time, >= T0 + t_m
  SystemParams params;

  double t_m() const;
  double lambda() const { return params.dispersive_lambda(); }

  // Sign of the coherent displacement picked up in the zone: (-1)^m for
  // positive detuning, flipped for negative.
  int parity() const;

  void validate() const;
};

struct RegimeReport {
  bool ok = false;
  double lambda = 0.0;
  double lambda_limit = 0.02;
  int n_max_estimate = 0;         // ceil(|alpha|^2 + 10 |alpha|)
  double spread = 0.0;            // lambda^2 (n_max_estimate + 1)
  double spread_limit = 1e-2;
  double lambda_allowed = 0.0;    // sqrt(spread_limit / (n_max_estimate + 1))
  std::string message;
};

// Report-only check of the far-detuned conditions against the photon budget
// the coherent inputs need.
RegimeReport validate_regime(const DispersiveScenario& s);

// t_m = (2m-1) pi |Delta| / (2 g^2); the zone then imprints a quarter-turn
// (odd multiple) of conditional phase.
double interaction_time(int m, const SystemParams& params);

// Field states the readout can prepare, on one cavity (dimension n_max + 1)
// or on the field pair (dimension (n_max + 1)^2). Both cavities are
// identical, so one copy of each single-field state serves k = 0 and 1.
// All stored vectors are numerically normalized after truncation; the
// closed-form norms and overlap diagnostics are kept alongside.
struct CatBellStates {
  Eigen::VectorXcd cat;       // (|-alpha_m> + Q |alpha_m>)/norm_cat
  Eigen::VectorXcd up_plus;   // |+alpha_m>
  Eigen::VectorXcd up_minus;  // |-alpha_m>
  Eigen::VectorXcd down;      // |alpha e^{-i omega t}>

  Eigen::VectorXcd bell_sym_plus;      // (up_plus down + down up_plus)/norm
  Eigen::VectorXcd bell_sym_minus;     // (up_minus down + down up_minus)/norm
  Eigen::VectorXcd bell_antisym_plus;  // (up_plus down - down up_plus)/norm
  Eigen::VectorXcd bell_antisym_minus;

  Complex alpha_m;        // i p alpha e^{-i omega t}
  Complex atom_phase;     // Q = i p e^{i(chi - omega_a t)}
  double norm_cat = 0.0;  // sqrt(2) sqrt(1 - p e^{-2|a|^2} sin(chi - omega_a t))
  double norm_sym = 0.0;      // sqrt(2) sqrt(1 + e^{-2|a|^2})
  double norm_antisym = 0.0;  // sqrt(2) sqrt(1 - e^{-2|a|^2})

  // Distinguishability diagnostics (advisory, not enforced).
  double cat_component_overlap = 0.0;  // e^{-2|a|^2}
  double up_down_overlap = 0.0;        // e^{-|a|^2}
  double down_cat_bound = 0.0;         // 2 e^{-|a|^2} / norm_cat
};

// Builds every readout state. Throws TruncationError when n_max cannot hold
// the coherent tails to 1e-10, std::domain_error when alpha is too small for
// the antisymmetric combinations to exist.
CatBellStates build_states(const DispersiveScenario& s);

enum class ControlOutcome { plus, minus };
enum class AtomOutcome { excited, ground, plus_x, minus_x };

// The normalized full-system state after measuring the control (and
// optionally the atom) on the dispersively evolved state, built from the
// closed-form field states rather than by simulation. Throws
// std::domain_error on zero-probability branches.
CompositeState conditioned_state(const DispersiveScenario& s,
                                 ControlOutcome control,
                                 std::optional<AtomOutcome> atom);

// Probability that both cavities hold the cat state after the (+, +x)
// readout: 2 [1 - sin(Theta + 2 a2)] / [e^{2 a2} + 1 - sin Theta
// - sin(Theta + 2 a2)], a2 = |alpha|^2.
double double_cat_probability(double Theta, double alpha_sq);

// Theta = (-1)^m (chi - omega_a t), reduced to [0, 2 pi).
double theta_param(int m, double chi, double omega_a, double t);

}  // namespace jcpath
