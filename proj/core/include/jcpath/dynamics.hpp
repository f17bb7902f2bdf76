#pragma once

#include <string>

#include "jcpath/hilbert.hpp"

namespace jcpath {

// Thrown when a requested evolution lies outside the regime its
// approximation is valid in.
class RegimeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RwaReport {
  bool ok = true;
  double worst_ratio = 0.0;  // max of |g_k|, |delta_k| over 0.1*(omega_a+omega_k)
  std::string message;       // empty when ok
};

// Angular frequencies in rad/s, couplings in 1/s, hbar factored out.
struct SystemParams {
  double omega_a;   // atomic transition
  double omega_0;   // cavity 0 mode
  double omega_1;   // cavity 1 mode
  double g0;        // atom-cavity 0 coupling
  double g1;        // atom-cavity 1 coupling
  int n_max;        // Fock cutoff per field

  double delta(int cavity) const;  // omega_a - omega_k
  bool resonant() const { return delta(0) == 0.0 && delta(1) == 0.0; }
  bool identical() const { return omega_0 == omega_1 && g0 == g1; }
  double coupling(int cavity) const;

  // max over cavities of g_k/|delta_k|, the small parameter of the
  // dispersive expansion. Throws when either cavity is resonant.
  double dispersive_lambda() const;

  void validate() const;        // throws std::invalid_argument
  RwaReport rwa_check() const;  // advisory, never throws
};

enum class PropagationMethod {
  closed_form,         // per-block rotation formula
  eigendecomposition,  // generic hermitian exponential
  dispersive_phase,    // diagonal effective model
  free_phase,          // diagonal free evolution
};

struct Propagator {
  OperatorMatrix matrix;
  double t_start = 0.0;
  double t_end = 0.0;
  PropagationMethod method = PropagationMethod::closed_form;

  CompositeState apply(const CompositeState& psi) const;
};

// H_free = (omega_a/2) sigma_z + omega_0 n_0 + omega_1 n_1, diagonal.
OperatorMatrix free_hamiltonian(const SystemParams& p);

// Control-conditioned coupling: on branch k the term
// g_k (sigma_- a_k^dagger + sigma_+ a_k) acts, the other field is untouched.
// The full generator is free_hamiltonian(p) + interaction_hamiltonian(p).
OperatorMatrix interaction_hamiltonian(const SystemParams& p);

// exp(-i V_k dt) for the coupling part V_k = (delta_k/2) sigma_z
// + g_k(sigma_- a_k^dagger + sigma_+ a_k), evaluated per excitation block:
// identity on the control and the other field. At the cutoff the coupling
// out of the space is dropped, which keeps the result exactly unitary.
OperatorMatrix klimov_w(const SystemParams& p, int cavity, double dt);

// Full interaction-zone propagator for the interval [t_start, t_end]:
// each control branch gets its free phases times the block rotation.
Propagator controlled_propagator(const SystemParams& p, double t_start,
                                 double t_end);

// exp(-i H_free dt), diagonal phases.
Propagator free_propagator(const SystemParams& p, double dt);

// Generic oracle: exp(-i H dt) through a hermitian eigendecomposition
// (diagonal inputs are exponentiated directly). Rejects non-hermitian input.
Propagator numeric_expm(const OperatorMatrix& hamiltonian, double dt);

// Diagonal effective propagator valid deep in the dispersive regime;
// refuses (RegimeError) when lambda > 0.02 or lambda^2 (n_max+1) > 1e-2,
// or when the cavities are not identical and detuned.
Propagator dispersive_propagator(const SystemParams& p, double t_m);

}  // namespace jcpath
