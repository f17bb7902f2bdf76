#include "jcpath/analytic.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace jcpath {
namespace {

constexpr Complex kI{0.0, 1.0};

double sinc(double x) {
  double ax = std::abs(x);
  if (ax < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Ket of the atom-plus-fields part; the control branch is tracked separately.
using Ket = std::tuple<int, int, int>;  // (atom, n0, n1), atom 0 = excited
using PathMap = std::map<Ket, Complex>;

struct LegParams {
  double g, delta, omega_k, omega_o;
};

LegParams leg_params(const RabiScenario& s, int cavity) {
  if (cavity == 0) return {s.g0, s.delta0, s.omega0, s.omega1};
  return {s.g1, s.delta1, s.omega1, s.omega0};
}

// One interaction zone: the atom exchanges excitation with cavity k while
// both fields accumulate their free phases. Exact per excitation block.
PathMap evolve_zone(const PathMap& in, const RabiScenario& s, int cavity,
                    double tau) {
  LegParams lp = leg_params(s, cavity);
  PathMap out;
  auto add = [&out](int a, int n0, int n1, Complex v) {
    if (v != Complex{0.0, 0.0}) out[{a, n0, n1}] += v;
  };
  for (const auto& [ket, amp] : in) {
    auto [a, n0, n1] = ket;
    int nk = cavity == 0 ? n0 : n1;
    int no = cavity == 0 ? n1 : n0;
    if (a == 0) {
      // Block {|e,nk>, |g,nk+1>}: conserved excitation nk + 1/2.
      Complex phase =
          std::exp(-kI * ((lp.omega_k * (nk + 0.5) + lp.omega_o * no) * tau));
      Complex f = excited_amplitude(nk + 1.0, lp.delta, lp.g, tau);
      Complex h = transfer_amplitude(nk + 1.0, lp.delta, lp.g, tau);
      add(0, n0, n1, amp * phase * f);
      if (cavity == 0)
        add(1, n0 + 1, n1, amp * phase * h);
      else
        add(1, n0, n1 + 1, amp * phase * h);
    } else {
      // Block {|e,nk-1>, |g,nk>}, or the uncoupled |g,0>.
      Complex phase =
          std::exp(-kI * ((lp.omega_k * (nk - 0.5) + lp.omega_o * no) * tau));
      Complex f = std::conj(excited_amplitude(nk, lp.delta, lp.g, tau));
      add(1, n0, n1, amp * phase * f);
      if (nk >= 1) {
        Complex h = transfer_amplitude(nk, lp.delta, lp.g, tau);
        if (cavity == 0)
          add(0, n0 - 1, n1, amp * phase * h);
        else
          add(0, n0, n1 - 1, amp * phase * h);
      }
    }
  }
  return out;
}

double squared_norm(const PathMap& m) {
  double s = 0.0;
  for (const auto& [ket, amp] : m) s += std::norm(amp);
  return s;
}

// The six expectation values of the quadratic form, resonant case. j is the
// second-zone cavity, o the other one; K_same pairs the j-path of the merged
// state with itself, K_cross pairs it with the o-path, K_other the o-path
// with itself.
struct QuadraticKernel {
  double same, cross, other;
};

QuadraticKernel inversion_kernel(const RabiScenario& s, int j) {
  int o = 1 - j;
  double gj = j == 0 ? s.g0 : s.g1;
  double go = o == 0 ? s.g0 : s.g1;
  double nj = j == 0 ? s.n0 : s.n1;
  double no = o == 0 ? s.n0 : s.n1;
  double rj = std::sqrt(nj + 1.0), ro = std::sqrt(no + 1.0);
  double tau = s.t - s.t_m;
  QuadraticKernel k;
  k.same = std::cos(2.0 * gj * rj * s.t);
  k.cross = std::cos((2.0 * s.t - s.t_m) * gj * rj) *
            std::cos(s.t_m * go * ro);
  double c = std::cos(s.t_m * go * ro);
  double sn = std::sin(s.t_m * go * ro);
  k.other = std::cos(2.0 * tau * gj * rj) * c * c -
            std::cos(2.0 * tau * gj * std::sqrt(nj)) * sn * sn;
  return k;
}

QuadraticKernel photon_kernel(const RabiScenario& s, int j, int target) {
  int o = 1 - j;
  double gj = j == 0 ? s.g0 : s.g1;
  double go = o == 0 ? s.g0 : s.g1;
  double nj = j == 0 ? s.n0 : s.n1;
  double no = o == 0 ? s.n0 : s.n1;
  double rj = std::sqrt(nj + 1.0), ro = std::sqrt(no + 1.0);
  double tau = s.t - s.t_m;
  double nt = target == 0 ? s.n0 : s.n1;
  QuadraticKernel k;
  if (j == target) {
    double st = std::sin(gj * rj * s.t);
    double stau = std::sin(gj * rj * tau);
    double co = std::cos(go * ro * s.t_m);
    double so = std::sin(go * ro * s.t_m);
    double slow = std::sin(gj * std::sqrt(nj) * tau);
    k.same = nt + st * st;
    k.cross = co * (st * stau + nt * std::cos(gj * rj * s.t_m));
    // The o-path reaches this zone with its weight on |g>, so the lower
    // block (which can absorb the spare photon) contributes alongside the
    // upper one, exactly as in the inversion kernel.
    k.other = nt + co * co * stau * stau - so * so * slow * slow;
  } else {
    double stm = std::sin(go * ro * s.t_m);  // go here couples the target
    k.same = nt;
    k.cross = nt * std::cos(gj * rj * s.t_m) * std::cos(go * ro * s.t_m);
    k.other = nt + stm * stm;
  }
  return k;
}

double quadratic_assembly(const RabiScenario& s,
                          const QuadraticKernel& k0,
                          const QuadraticKernel& k1) {
  double c2 = std::cos(s.theta) * std::cos(s.theta);
  double s2 = 1.0 - c2;
  double w0 = c2, w1 = s2;
  double acc = 0.0;
  acc += w0 * (w0 * w0 * k0.same + 2.0 * w0 * w1 * k0.cross +
               w1 * w1 * k0.other);
  acc += w1 * (w1 * w1 * k1.same + 2.0 * w1 * w0 * k1.cross +
               w0 * w0 * k1.other);
  return acc;
}

double norm0_squared(const RabiScenario& s) {
  double c2 = std::cos(s.theta) * std::cos(s.theta);
  double s2 = 1.0 - c2;
  Complex f0 = excited_amplitude(s.n0 + 1.0, s.delta0, s.g0, s.t_m);
  Complex f1 = excited_amplitude(s.n1 + 1.0, s.delta1, s.g1, s.t_m);
  Complex cross = std::exp(kI * ((s.omega1 - s.omega0) * 0.5 * s.t_m)) *
                  std::conj(f1) * f0;
  return c2 * c2 + s2 * s2 + 2.0 * c2 * s2 * cross.real();
}

void require_positive_projection(double n0_sq) {
  if (n0_sq < 1e-14)
    throw std::domain_error(
        "the '+' control outcome has vanishing probability here");
}

}  // namespace

double RabiScenario::omega_a() const {
  double a0 = delta0 + omega0, a1 = delta1 + omega1;
  double scale = std::max({1.0, std::abs(a0), std::abs(a1)});
  if (std::abs(a0 - a1) > 1e-12 * scale)
    throw std::invalid_argument(
        "delta_k + omega_k must give one atomic frequency for both cavities");
  return a0;
}

SystemParams RabiScenario::params(int n_max) const {
  validate();
  return SystemParams{omega_a(), omega0, omega1, g0, g1, n_max};
}

void RabiScenario::validate() const {
  for (double v : {theta, phi, g0, g1, delta0, delta1, omega0, omega1, t_m, t})
    if (!std::isfinite(v))
      throw std::invalid_argument("scenario parameters must be finite");
  if (n0 < 0 || n1 < 0)
    throw std::invalid_argument("photon numbers must be non-negative");
  if (t_m < 0.0 || t < t_m)
    throw std::invalid_argument("times must satisfy 0 <= t_m <= t");
  omega_a();  // consistency
}

double rabi_frequency(double x, double delta, double g) {
  return std::sqrt(g * g * x + 0.25 * delta * delta);
}

Complex excited_amplitude(double x, double delta, double g, double t) {
  double om = rabi_frequency(x, delta, g);
  double arg = om * t;
  return Complex{std::cos(arg), -0.5 * delta * t * sinc(arg)};
}

Complex transfer_amplitude(double x, double delta, double g, double t) {
  double om = rabi_frequency(x, delta, g);
  return -kI * g * std::sqrt(x) * t * sinc(om * t);
}

double norm_n0(const RabiScenario& s) {
  s.validate();
  return std::sqrt(std::max(0.0, norm0_squared(s)));
}

XiCoefficients xi_coefficients(const RabiScenario& s) {
  s.validate();
  double c = std::cos(s.theta), sn = std::sin(s.theta);
  Complex split1 = std::exp(kI * s.phi) * sn;

  PathMap initial{{Ket{0, s.n0, s.n1}, Complex{1.0, 0.0}}};
  PathMap leg0 = evolve_zone(initial, s, 0, s.t_m);
  PathMap leg1 = evolve_zone(initial, s, 1, s.t_m);

  // "+" projection folds the branch weights onto a shared field-atom state.
  PathMap merged;
  for (const auto& [ket, amp] : leg0) merged[ket] += c * c * amp;
  for (const auto& [ket, amp] : leg1) merged[ket] += sn * sn * amp;
  double n0_sq = squared_norm(merged);

  double tau = s.t - s.t_m;
  PathMap final0 = evolve_zone(merged, s, 0, tau);
  PathMap final1 = evolve_zone(merged, s, 1, tau);

  XiCoefficients out;
  out.xi.fill(Complex{0.0, 0.0});
  out.norm0 = std::sqrt(n0_sq);

  auto assign = [&](const PathMap& m, Complex weight,
                    const std::array<Ket, 4>& slots, int base) {
    for (const auto& [ket, amp] : m) {
      bool placed = false;
      for (int i = 0; i < 4; ++i)
        if (ket == slots[i]) {
          out.xi[base + i] = weight * amp;
          placed = true;
          break;
        }
      if (!placed && std::abs(amp) > 1e-13)
        throw std::logic_error("path amplitude outside the eight-ket family");
    }
  };
  assign(final0, Complex{c, 0.0},
         {Ket{0, s.n0, s.n1}, Ket{1, s.n0 + 1, s.n1}, Ket{1, s.n0, s.n1 + 1},
          Ket{0, s.n0 - 1, s.n1 + 1}},
         0);
  assign(final1, split1,
         {Ket{0, s.n0, s.n1}, Ket{1, s.n0, s.n1 + 1}, Ket{1, s.n0 + 1, s.n1},
          Ket{0, s.n0 + 1, s.n1 - 1}},
         4);
  return out;
}

double inversion(const RabiScenario& s) {
  s.validate();
  if (s.resonant()) {
    if (s.identical())
      return inversion_identical_resonant(s.theta, s.g0, s.n0, s.t, s.t_m);
    double n0_sq = norm0_squared(s);
    require_positive_projection(n0_sq);
    return quadratic_assembly(s, inversion_kernel(s, 0),
                              inversion_kernel(s, 1)) /
           n0_sq;
  }
  XiCoefficients x = xi_coefficients(s);
  double n0_sq = x.norm0 * x.norm0;
  require_positive_projection(n0_sq);
  double excited = std::norm(x.xi[0]) + std::norm(x.xi[3]) +
                   std::norm(x.xi[4]) + std::norm(x.xi[7]);
  double ground = std::norm(x.xi[1]) + std::norm(x.xi[2]) +
                  std::norm(x.xi[5]) + std::norm(x.xi[6]);
  return (excited - ground) / n0_sq;
}

double inversion_identical_resonant(double theta, double g, int n, double t,
                                    double t_m) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  double rp = std::sqrt(n + 1.0), r = std::sqrt(double(n));
  double s2t = std::sin(2.0 * theta);
  double ctm = std::cos(g * t_m * rp);
  double stm = std::sin(g * t_m * rp);
  double num =
      2.0 * (3.0 + std::cos(4.0 * theta)) * std::cos(2.0 * g * t * rp) +
      2.0 * s2t * s2t *
          (std::cos(2.0 * g * (t - t_m) * rp) * (1.0 + ctm * ctm) -
           std::cos(2.0 * g * (t - t_m) * r) * stm * stm);
  double den = 7.0 + std::cos(4.0 * theta) +
               2.0 * s2t * s2t * std::cos(2.0 * g * t_m * rp);
  require_positive_projection(den / 8.0);
  return num / den;
}

double photon_average(const RabiScenario& s, int field) {
  s.validate();
  if (field != 0 && field != 1)
    throw std::invalid_argument("field index must be 0 or 1");
  if (s.resonant()) {
    double n0_sq = norm0_squared(s);
    require_positive_projection(n0_sq);
    return quadratic_assembly(s, photon_kernel(s, 0, field),
                              photon_kernel(s, 1, field)) /
           n0_sq;
  }
  XiCoefficients x = xi_coefficients(s);
  double n0_sq = x.norm0 * x.norm0;
  require_positive_projection(n0_sq);
  // Occupation of the target field on each of the eight kets.
  std::array<double, 8> occ;
  if (field == 0)
    occ = {double(s.n0), s.n0 + 1.0, double(s.n0), s.n0 - 1.0,
           double(s.n0), double(s.n0), s.n0 + 1.0, s.n0 + 1.0};
  else
    occ = {double(s.n1), double(s.n1), s.n1 + 1.0, s.n1 + 1.0,
           double(s.n1), s.n1 + 1.0, double(s.n1), s.n1 - 1.0};
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += occ[i] * std::norm(x.xi[i]);
  return acc / n0_sq;
}

double exchange_probability(const RabiScenario& s) {
  s.validate();
  if (!s.resonant())
    throw std::domain_error("exchange closed form holds on resonance only");
  if (std::abs(s.theta - std::atan(1.0)) > 1e-12)  // pi/4
    throw std::domain_error(
        "exchange closed form holds at theta = pi/4 only");
  double tau = s.t - s.t_m;
  double a = std::sin(s.g1 * std::sqrt(double(s.n1)) * tau);
  double b = std::sin(s.g0 * std::sqrt(s.n0 + 1.0) * s.t_m);
  double c = std::sin(s.g0 * std::sqrt(double(s.n0)) * tau);
  double d = std::sin(s.g1 * std::sqrt(s.n1 + 1.0) * s.t_m);
  double num = a * a * b * b + c * c * d * d;
  double den = 4.0 * (1.0 + std::cos(s.g0 * std::sqrt(s.n0 + 1.0) * s.t_m) *
                                std::cos(s.g1 * std::sqrt(s.n1 + 1.0) * s.t_m));
  require_positive_projection(den);
  return num / den;
}

ExchangeOptimum exchange_optimum(int n, double g, int l) {
  if (n < 1)
    throw std::domain_error("photon exchange needs at least one photon");
  if (l < 1) throw std::invalid_argument("the optimum index starts at 1");
  if (!(g > 0.0)) throw std::invalid_argument("coupling must be positive");
  double odd = 2.0 * l - 1.0;
  double rp = std::sqrt(n + 1.0), r = std::sqrt(double(n));
  ExchangeOptimum opt;
  opt.t_m = M_PI * odd / (2.0 * g * rp);
  opt.t = (M_PI / (2.0 * g)) * (1.0 / r + 1.0 / rp) * odd;
  return opt;
}

}  // namespace jcpath
