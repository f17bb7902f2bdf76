#pragma once

#include <array>

#include "jcpath/dynamics.hpp"

namespace jcpath {

// One two-zone run: the atom enters in |e> with the control in
// cos(theta)|0> + e^{i phi} sin(theta)|1>, fields in |n0>|n1>. At t_m the
// control is measured in its preparation basis (outcome "+") and re-enters;
// observables are read at t.
struct RabiScenario {
  double theta = 0.0;
  double phi = 0.0;
  int n0 = 0;
  int n1 = 0;
  double g0 = 0.0;
  double g1 = 0.0;
  double delta0 = 0.0;  // omega_a - omega_0
  double delta1 = 0.0;
  double omega0 = 0.0;
  double omega1 = 0.0;
  double t_m = 0.0;
  double t = 0.0;

  bool resonant() const { return delta0 == 0.0 && delta1 == 0.0; }
  bool identical() const {
    return g0 == g1 && n0 == n1 && delta0 == delta1 && omega0 == omega1;
  }
  double omega_a() const;  // consistent atom frequency, or throws
  SystemParams params(int n_max) const;
  void validate() const;
};

// Rabi frequency of the excitation block with total coupling weight x:
// sqrt(g^2 x + delta^2/4). x is n+1 for the pair {|e,n>, |g,n+1>}.
double rabi_frequency(double x, double delta, double g);

// Amplitude staying on the excited member of block x after time t:
// cos(t Omega) - i (delta/2) t sinc(Omega t).
Complex excited_amplitude(double x, double delta, double g, double t);

// Amplitude transferred to the other member: -i g sqrt(x) t sinc(Omega t).
Complex transfer_amplitude(double x, double delta, double g, double t);

// Norm of the state component selected by the "+" control outcome at t_m.
double norm_n0(const RabiScenario& s);

// Amplitudes of the eight kets reachable at time t, conditioned on the "+"
// outcome at t_m (not yet divided by norm0). Branch 0 (control |0>):
// xi[0] |e,n0,n1>, xi[1] |g,n0+1,n1>, xi[2] |g,n0,n1+1>, xi[3] |e,n0-1,n1+1>;
// branch 1 (control |1>): xi[4] |e,n0,n1>, xi[5] |g,n0,n1+1>,
// xi[6] |g,n0+1,n1>, xi[7] |e,n0+1,n1-1>. Sum of |xi|^2 equals norm0^2.
struct XiCoefficients {
  std::array<Complex, 8> xi;
  double norm0 = 0.0;
};

XiCoefficients xi_coefficients(const RabiScenario& s);

// <sigma_z>(t) conditioned on the "+" outcome. Resonant scenarios use the
// closed-form coefficient set; detuned ones assemble the same quadratic form
// from the path amplitudes.
double inversion(const RabiScenario& s);

// The compact identical-cavity resonant expression, evaluated literally.
double inversion_identical_resonant(double theta, double g, int n, double t,
                                    double t_m);

// <a_j^dagger a_j>(t) conditioned on the "+" outcome.
double photon_average(const RabiScenario& s, int field);

// Probability that the final state holds an exchanged photon
// (|e,n0-1,n1+1> or |e,n0+1,n1-1>), conditioned on "+". Requires a resonant
// scenario at theta = pi/4; bounded by 1/2.
double exchange_probability(const RabiScenario& s);

struct ExchangeOptimum {
  double t_m = 0.0;
  double t = 0.0;
};

// Times maximizing the identical-cavity exchange probability at exactly 1/2,
// indexed by l = 1, 2, ... Needs n >= 1.
ExchangeOptimum exchange_optimum(int n, double g, int l);

}  // namespace jcpath
