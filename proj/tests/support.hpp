#pragma once

#include <random>

#include "jcpath/analytic.hpp"
#include "jcpath/hilbert.hpp"

namespace jcpath_tests {

using jcpath::Complex;

// Deterministic scenario source for property-style checks. Detuning mode:
// 0 both resonant, 1 both detuned +-0.3 g, 2 mixed signs chosen per cavity.
class ScenarioSource {
public:
  explicit ScenarioSource(std::uint64_t seed) : rng_(seed) {}

  jcpath::RabiScenario draw(bool force_detuned) {
    jcpath::RabiScenario s;
    for (;;) {
      s.theta = half_pi() * uniform_(rng_);
      s.phi = 4.0 * half_pi() * uniform_(rng_);
      s.n0 = photons_(rng_);
      s.n1 = photons_(rng_);
      s.g0 = 0.05 + 0.95 * uniform_(rng_);
      s.g1 = 0.05 + 0.95 * uniform_(rng_);
      s.delta0 = pick_delta(s.g0, force_detuned);
      s.delta1 = pick_delta(s.g1, force_detuned);
      const double base =
          0.7 + 0.6 * uniform_(rng_) + std::max(0.0, s.delta1 - s.delta0);
      s.omega0 = base;
      s.omega1 = base + s.delta0 - s.delta1;
      const double gt = 20.0 * std::max(uniform_(rng_), 1e-3);
      s.t = gt / std::max(s.g0, s.g1);
      s.t_m = s.t * uniform_(rng_);
      if (jcpath::norm_n0(s) >= 0.05) return s;
    }
  }

private:
  static double half_pi() { return 2.0 * std::atan(1.0); }

  double pick_delta(double g, bool force_detuned) {
    const int mode = detuning_(rng_);
    if (!force_detuned && mode == 0) return 0.0;
    const bool negative = force_detuned ? (mode == 2) : (mode == 1);
    return (negative ? -0.3 : 0.3) * g;
  }

  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::uniform_int_distribution<int> photons_{0, 5};
  std::uniform_int_distribution<int> detuning_{0, 2};
};

// Coupling generator of one cavity on the full space, built by plain tensor
// products: an assembly route independent of the propagator factory.
inline Eigen::MatrixXcd coupling_generator(double delta, double g, int cavity,
                                           int n_max) {
  const int f = n_max + 1;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd idf = Eigen::MatrixXcd::Identity(f, f);
  const jcpath::LadderPair ladder = jcpath::ladder_ops(n_max);
  const Eigen::MatrixXcd raise = ladder.create;
  const Eigen::MatrixXcd lower = ladder.annihilate;

  const Eigen::MatrixXcd sp = jcpath::sigma_plus();
  const Eigen::MatrixXcd sm = jcpath::sigma_minus();
  const Eigen::MatrixXcd sz = jcpath::sigma_z();

  auto on_fields = [&](const Eigen::MatrixXcd& op) {
    return cavity == 0 ? jcpath::kron(op, idf) : jcpath::kron(idf, op);
  };
  Eigen::MatrixXcd v =
      g * (jcpath::kron(sm, on_fields(raise)) +
           jcpath::kron(sp, on_fields(lower))) +
      0.5 * delta * jcpath::kron(sz, jcpath::kron(idf, idf));
  return jcpath::kron(id2, v);
}

}  // namespace jcpath_tests
