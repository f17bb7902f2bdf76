#pragma once

#include <string>
#include <vector>

#include "jcpath/hilbert.hpp"

namespace jcpath {

// Orthonormal projective basis on one two-level subsystem. states[i] is the
// single-subsystem ket whose outcome is labels[i].
struct MeasurementBasis {
  Subsystem subsystem;
  std::vector<Eigen::Vector2cd> states;
  std::vector<std::string> labels;

  void validate() const;  // orthonormality within 1e-12, matching sizes
};

// {cos(theta)|0> + e^{i phi} sin(theta)|1>, sin(theta)|0> - e^{i phi}
// cos(theta)|1>}, labelled "+" / "-". The "+" outcome matches the
// interferometer port that recombines the paths with their input weights.
MeasurementBasis control_basis(double theta, double phi);

// {|e>, |g>} labelled "e" / "g".
MeasurementBasis atom_z_basis();

// {(|e> + |g>)/sqrt 2, (|e> - |g>)/sqrt 2} labelled "+x" / "-x".
MeasurementBasis atom_x_basis();

// Probability of each basis outcome, ordered as basis.states. Sums to the
// squared norm of psi.
std::vector<double> outcome_probabilities(const CompositeState& psi,
                                          const MeasurementBasis& basis);

struct MeasurementRecord {
  int outcome_index;
  std::string label;
  double probability;
  CompositeState post_state;  // renormalized
};

// Project onto one outcome and renormalize. Throws std::domain_error when the
// outcome probability is too small to condition on (< 1e-14).
MeasurementRecord measure(const CompositeState& psi,
                          const MeasurementBasis& basis, int outcome_index);

}  // namespace jcpath
