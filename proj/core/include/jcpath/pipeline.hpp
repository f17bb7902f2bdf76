#pragma once

#include <optional>

#include "jcpath/analytic.hpp"
#include "jcpath/dispersive.hpp"
#include "jcpath/measurement.hpp"

namespace jcpath {

// Simulation twins of the closed forms: build the state, evolve it with the
// propagators, condition on measurement outcomes, read expectations. Every
// analytic result in this library is validated against these.

CompositeState initial_rabi_state(const RabiScenario& s, int n_max);

struct ConditionedRun {
  CompositeState state;      // normalized state at time t
  double plus_probability;   // norm^2 selected by the "+" outcome at t_m
};

// Evolve to t_m, project the control onto its preparation state, evolve to t.
ConditionedRun rabi_conditioned_state(const RabiScenario& s, int n_max);

double simulated_inversion(const RabiScenario& s, int n_max);
double simulated_photon_average(const RabiScenario& s, int n_max, int field);

// Path amplitudes read off the simulated state, scaled to the analytic
// convention (times norm0).
XiCoefficients simulated_xi(const RabiScenario& s, int n_max);

// Smallest cutoff on which the two-zone dynamics is exactly the untruncated
// dynamics (the edge blocks never gain population).
int rabi_safe_n_max(const RabiScenario& s);

CompositeState initial_dispersive_state(const DispersiveScenario& s);

// State at readout time t. exact_jc switches the interaction zone from the
// diagonal far-detuned model to the full propagator.
CompositeState dispersive_evolved_state(const DispersiveScenario& s,
                                        bool exact_jc);

struct DispersiveReadout {
  CompositeState state;
  double probability;  // joint probability of the requested outcomes
};

// Measure the control (and optionally the atom) on the evolved state.
DispersiveReadout dispersive_readout(const DispersiveScenario& s,
                                     bool exact_jc, ControlOutcome control,
                                     std::optional<AtomOutcome> atom);

}  // namespace jcpath
