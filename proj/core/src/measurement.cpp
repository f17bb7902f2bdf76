#include "jcpath/measurement.hpp"

#include <cmath>

namespace jcpath {
namespace {

// Apply <b| on the chosen two-level subsystem without building a projector:
// the result keeps the full shape, with the subsystem collapsed onto |b>.
Eigen::VectorXcd project_component(const CompositeState& psi,
                                   Subsystem where,
                                   const Eigen::Vector2cd& b) {
  const SpaceShape& shape = psi.shape();
  auto dims = shape.dims();
  if (dims[where] != 2)
    throw std::invalid_argument("projective basis targets a two-level part");

  Eigen::Index stride = 1;
  for (int s = where + 1; s < 4; ++s) stride *= dims[s];
  Eigen::Index block = stride * 2;

  const Eigen::VectorXcd& amps = psi.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amps.size());
  for (Eigen::Index outer = 0; outer < amps.size(); outer += block)
    for (Eigen::Index inner = 0; inner < stride; ++inner) {
      Complex v = std::conj(b[0]) * amps[outer + inner] +
                  std::conj(b[1]) * amps[outer + stride + inner];
      // Keep the collapsed component in the subsystem's |0> slot and zero the
      // other, so norms and downstream projections stay consistent.
      out[outer + inner] = v;
    }
  return out;
}

}  // namespace

void MeasurementBasis::validate() const {
  if (states.size() != 2 || labels.size() != 2)
    throw std::invalid_argument("basis needs exactly two states and labels");
  for (const auto& s : states)
    if (std::abs(s.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("basis states must be normalized");
  if (std::abs(states[0].dot(states[1])) > 1e-12)
    throw std::invalid_argument("basis states must be orthogonal");
}

MeasurementBasis control_basis(double theta, double phi) {
  Complex phase = std::exp(Complex{0.0, phi});
  Eigen::Vector2cd plus{std::cos(theta), phase * std::sin(theta)};
  Eigen::Vector2cd minus{std::sin(theta), -phase * std::cos(theta)};
  return MeasurementBasis{kControl, {plus, minus}, {"+", "-"}};
}

MeasurementBasis atom_z_basis() {
  return MeasurementBasis{
      kAtom, {Eigen::Vector2cd{1.0, 0.0}, Eigen::Vector2cd{0.0, 1.0}},
      {"e", "g"}};
}

MeasurementBasis atom_x_basis() {
  double r = 1.0 / std::sqrt(2.0);
  return MeasurementBasis{
      kAtom, {Eigen::Vector2cd{r, r}, Eigen::Vector2cd{r, -r}},
      {"+x", "-x"}};
}

std::vector<double> outcome_probabilities(const CompositeState& psi,
                                          const MeasurementBasis& basis) {
  basis.validate();
  std::vector<double> probs;
  probs.reserve(basis.states.size());
  for (const auto& b : basis.states)
    probs.push_back(project_component(psi, basis.subsystem, b).squaredNorm());
  return probs;
}

MeasurementRecord measure(const CompositeState& psi,
                          const MeasurementBasis& basis, int outcome_index) {
  basis.validate();
  if (outcome_index < 0 || outcome_index >= int(basis.states.size()))
    throw std::out_of_range("outcome index out of range");

  const Eigen::Vector2cd& b = basis.states[outcome_index];
  Eigen::VectorXcd collapsed = project_component(psi, basis.subsystem, b);
  double prob = collapsed.squaredNorm();
  if (prob < 1e-14)
    throw std::domain_error("conditioning on an outcome of probability " +
                            std::to_string(prob));

  // Re-insert the measured subsystem state so the post state lives in the
  // full space.
  const SpaceShape& shape = psi.shape();
  auto dims = shape.dims();
  Eigen::Index stride = 1;
  for (int s = basis.subsystem + 1; s < 4; ++s) stride *= dims[s];
  Eigen::Index block = stride * 2;
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(collapsed.size());
  for (Eigen::Index outer = 0; outer < collapsed.size(); outer += block)
    for (Eigen::Index inner = 0; inner < stride; ++inner) {
      Complex v = collapsed[outer + inner];
      full[outer + inner] = b[0] * v;
      full[outer + stride + inner] = b[1] * v;
    }
  full /= std::sqrt(prob);

  return MeasurementRecord{outcome_index, basis.labels[outcome_index], prob,
                           CompositeState(shape, std::move(full))};
}

}  // namespace jcpath
