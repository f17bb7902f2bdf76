#include <cmath>

#include "doctest.h"
#include "jcpath/dispersive.hpp"
#include "jcpath/pipeline.hpp"

using namespace jcpath;

namespace {

constexpr double kPi = 3.14159265358979323846;

// lambda = 0.015, spread over the coherent budget well inside the limits
DispersiveScenario deep_scenario() {
  DispersiveScenario s;
  s.alpha = Complex(1.0745, 0.0);
  s.chi = 0.7;
  s.m = 1;
  s.T0 = 0.3;
  s.params = SystemParams{1066.666666666667, 1000.0, 1000.0, 1.0, 1.0, 28};
  s.t = s.T0 + s.t_m() + 0.2;
  return s;
}

Eigen::VectorXcd pair_ket(const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b) {
  return kron(a, b);
}

}  // namespace

TEST_CASE("interaction time and displacement parity") {
  SystemParams p{1066.666666666667, 1000.0, 1000.0, 1.0, 1.0, 28};
  double delta = p.delta(0);
  CHECK(interaction_time(1, p) ==
        doctest::Approx(0.5 * kPi * delta).epsilon(1e-12));
  CHECK(interaction_time(3, p) ==
        doctest::Approx(2.5 * kPi * delta).epsilon(1e-12));
  CHECK_THROWS_AS(interaction_time(0, p), std::invalid_argument);

  DispersiveScenario s = deep_scenario();
  CHECK(s.t_m() == doctest::Approx(interaction_time(1, p)));
  CHECK(s.parity() == -1);
  s.m = 2;
  CHECK(s.parity() == +1);

  // negative detuning flips the sign
  DispersiveScenario flipped = deep_scenario();
  flipped.params.omega_a = 933.333333333333;
  flipped.t = flipped.T0 + flipped.t_m() + 0.2;
  CHECK(flipped.parity() == +1);
}

TEST_CASE("scenario validation") {
  DispersiveScenario s = deep_scenario();
  CHECK_NOTHROW(s.validate());
  DispersiveScenario early = s;
  early.t = early.T0;  // readout before the zone ends
  CHECK_THROWS_AS(early.validate(), std::invalid_argument);
  DispersiveScenario bad_m = s;
  bad_m.m = 0;
  CHECK_THROWS_AS(bad_m.validate(), std::invalid_argument);
}

TEST_CASE("regime report accepts the deep case and flags the shallow one") {
  DispersiveScenario deep = deep_scenario();
  RegimeReport ok = validate_regime(deep);
  CHECK(ok.ok);
  CHECK(ok.lambda == doctest::Approx(0.015).epsilon(1e-9));
  CHECK(ok.n_max_estimate >= 11);  // |alpha|^2 + 10 |alpha| = 11.9
  CHECK(ok.spread < ok.spread_limit);

  DispersiveScenario shallow = deep;
  shallow.params.omega_a = 1020.0;  // lambda = 0.05
  shallow.t = shallow.T0 + shallow.t_m() + 0.2;
  RegimeReport bad = validate_regime(shallow);
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("lambda") != std::string::npos);

  DispersiveScenario crowded = deep;
  crowded.alpha = Complex(4.5, 0.0);  // budget pushes the spread past 1e-2
  RegimeReport bad2 = validate_regime(crowded);
  CHECK_FALSE(bad2.ok);
  CHECK(bad2.lambda_allowed < bad2.lambda);
}

TEST_CASE("closed-form norms and overlaps of the readout states") {
  DispersiveScenario s = deep_scenario();
  CatBellStates cs = build_states(s);
  const double a2 = std::norm(s.alpha);

  CHECK(cs.cat.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cs.up_plus.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cs.down.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (const Eigen::VectorXcd* b :
       {&cs.bell_sym_plus, &cs.bell_sym_minus, &cs.bell_antisym_plus,
        &cs.bell_antisym_minus})
    CHECK(b->norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(cs.cat_component_overlap ==
        doctest::Approx(std::exp(-2.0 * a2)).epsilon(1e-12));
  CHECK(cs.up_down_overlap ==
        doctest::Approx(std::exp(-a2)).epsilon(1e-12));
  CHECK(cs.norm_sym ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(1.0 + std::exp(-2.0 * a2)))
            .epsilon(1e-12));
  CHECK(cs.norm_antisym ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(1.0 - std::exp(-2.0 * a2)))
            .epsilon(1e-12));

  double predicted_cat_norm = std::sqrt(2.0) *
                              std::sqrt(1.0 - s.parity() *
                                                  std::exp(-2.0 * a2) *
                                                  std::sin(s.chi -
                                                           s.params.omega_a *
                                                               s.t));
  CHECK(cs.norm_cat == doctest::Approx(predicted_cat_norm).epsilon(1e-12));

  // the stored displacement follows alpha_m = i p alpha e^{-i omega t}
  Complex expected_alpha_m =
      Complex(0.0, 1.0) * double(s.parity()) * s.alpha *
      std::exp(Complex(0.0, -s.params.omega_0 * s.t));
  CHECK(std::abs(cs.alpha_m - expected_alpha_m) < 1e-12);

  // numeric overlaps agree with the closed forms
  CHECK(std::abs(std::abs(cs.up_plus.dot(cs.down)) - std::exp(-a2)) < 1e-10);
  CHECK(std::abs(std::abs(cs.up_plus.dot(cs.up_minus)) -
                 std::exp(-2.0 * a2)) < 1e-10);

  // tiny alpha starves the antisymmetric normalization
  DispersiveScenario tiny = s;
  tiny.alpha = Complex(1e-9, 0.0);
  CHECK_THROWS_AS(build_states(tiny), std::domain_error);

  // a coherent amplitude the cutoff cannot hold is rejected
  DispersiveScenario fat = s;
  fat.alpha = Complex(4.5, 0.0);
  fat.params.n_max = 12;
  CHECK_THROWS_AS(build_states(fat), TruncationError);
}

TEST_CASE("conditioned states assemble the advertised products") {
  DispersiveScenario s = deep_scenario();
  CatBellStates cs = build_states(s);
  SpaceShape shape(s.params.n_max);
  const double r = std::sqrt(0.5);
  const Eigen::Vector2cd plus_c(r, r);
  const Eigen::Vector2cd e(1.0, 0.0), g(0.0, 1.0);

  struct Case {
    ControlOutcome control;
    AtomOutcome atom;
    const Eigen::VectorXcd* pair;
    bool excited;
  };
  const Case cases[] = {
      {ControlOutcome::plus, AtomOutcome::excited, &cs.bell_sym_plus, true},
      {ControlOutcome::plus, AtomOutcome::ground, &cs.bell_sym_minus, false},
      {ControlOutcome::minus, AtomOutcome::excited, &cs.bell_antisym_plus,
       true},
      {ControlOutcome::minus, AtomOutcome::ground, &cs.bell_antisym_minus,
       false},
  };
  for (const Case& c : cases) {
    CompositeState out = conditioned_state(s, c.control, c.atom);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
    Eigen::VectorXcd control_ket =
        c.control == ControlOutcome::plus ? plus_c
                                          : Eigen::Vector2cd(r, -r);
    CompositeState expected(
        shape, kron(control_ket,
                    kron(Eigen::VectorXcd(c.excited ? e : g), *c.pair)));
    CHECK(fidelity(out, expected) == doctest::Approx(1.0).epsilon(1e-10));
  }

  // x readouts put a cat in each cavity
  for (AtomOutcome a : {AtomOutcome::plus_x, AtomOutcome::minus_x}) {
    CompositeState out = conditioned_state(s, ControlOutcome::plus, a);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-10));
    if (a == AtomOutcome::plus_x) {
      double p_cat = fidelity(
          out, CompositeState(
                   shape, kron(Eigen::VectorXcd(plus_c),
                               kron(Eigen::VectorXcd(Eigen::Vector2cd(r, r)),
                                    pair_ket(cs.cat, cs.cat)))));
      double direct = double_cat_probability(
          theta_param(s.m, s.chi, s.params.omega_a, s.t), std::norm(s.alpha));
      CHECK(p_cat == doctest::Approx(direct).epsilon(1e-8));
    }
  }

  // control-only readout keeps the atom-field entanglement
  CompositeState both = conditioned_state(s, ControlOutcome::plus,
                                          std::nullopt);
  CHECK(both.norm() == doctest::Approx(1.0).epsilon(1e-10));
  Eigen::VectorXcd atom_field =
      (kron(Eigen::VectorXcd(g), cs.bell_sym_minus) +
       cs.atom_phase * kron(Eigen::VectorXcd(e), cs.bell_sym_plus)) /
      std::sqrt(2.0);
  CompositeState expected(shape, kron(Eigen::VectorXcd(plus_c), atom_field));
  CHECK(fidelity(both, expected) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("conditioned states match the simulated pipeline") {
  DispersiveScenario s = deep_scenario();
  for (ControlOutcome control : {ControlOutcome::plus, ControlOutcome::minus})
    for (AtomOutcome atom : {AtomOutcome::excited, AtomOutcome::ground,
                             AtomOutcome::plus_x, AtomOutcome::minus_x}) {
      DispersiveReadout sim = dispersive_readout(s, false, control, atom);
      CompositeState direct = conditioned_state(s, control, atom);
      CHECK(fidelity(sim.state, direct) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }

  // the "+" outcome arrives with probability (1 + e^{-2 a2})/2
  DispersiveReadout plus = dispersive_readout(s, false, ControlOutcome::plus,
                                              std::nullopt);
  CHECK(plus.probability ==
        doctest::Approx(0.5 * (1.0 + std::exp(-2.0 * std::norm(s.alpha))))
            .epsilon(1e-9));
  // conditioned on the control, the atom z readout is balanced
  DispersiveReadout pe = dispersive_readout(s, false, ControlOutcome::plus,
                                            AtomOutcome::excited);
  CHECK(pe.probability / plus.probability ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("double cat probability closed form") {
  // frozen working point
  CHECK(double_cat_probability(2.25, 1.155) ==
        doctest::Approx(0.3524).epsilon(2e-3));
  // vanishing field: the two cat outcomes are the whole story
  CHECK(double_cat_probability(0.5, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  // the degenerate corner where the cat norm vanishes
  CHECK(double_cat_probability(0.5 * kPi, 0.0) == 0.0);
  // large fields suppress the cat coincidence
  CHECK(double_cat_probability(2.25, 8.0) < 1e-5);

  CHECK_THROWS_AS(double_cat_probability(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("theta parameter reduction and parity flip") {
  double th1 = theta_param(1, 0.7, 1066.666666666667, 0.9);
  CHECK(th1 >= 0.0);
  CHECK(th1 < 2.0 * kPi);
  double th2 = theta_param(2, 0.7, 1066.666666666667, 0.9);
  double diff = std::fmod(th1 + th2, 2.0 * kPi);
  CHECK(std::min(diff, 2.0 * kPi - diff) < 1e-9);

  // matches the unreduced definition
  double raw = -(0.7 - 1066.666666666667 * 0.9);
  double reduced = std::fmod(raw, 2.0 * kPi);
  if (reduced < 0.0) reduced += 2.0 * kPi;
  CHECK(th1 == doctest::Approx(reduced).epsilon(1e-12));
}
