#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "coop/rng.hpp"

namespace coop {

// Cart-pole swing-up.
//
// Model: a cart of mass M on a frictionless track, the pole treated as a
// point mass m concentrated at its centre of mass, a distance l from the
// pivot (l = pole half-length). theta is measured from upright, so theta = 0
// is the pole standing up and theta = pi hanging down. With horizontal force
// F on the cart, the Lagrangian of the point-mass pendulum on a cart gives
//
//   xdd  = (F + m sin(th) (l thd^2 - g cos(th))) / (M + m sin(th)^2)
//   thdd = (g sin(th) - xdd cos(th)) / l
//
// Total mechanical energy, with the potential measured at pivot height:
//
//   E = 1/2 (M+m) xd^2 + m xd l thd cos(th) + 1/2 m l^2 thd^2 + m g l cos(th)
//
// E is conserved when F = 0, which the integration tests check.
//
// Integration: classic fourth-order Runge-Kutta, each dt = 0.01 s control
// step done as two substeps of dt/2. First-order schemes drift secularly on
// this system (the kinetic energy couples x_dot and theta_dot, so
// semi-implicit Euler is not symplectic here and loses over 20% of the swing
// energy in 10 s); RK4 at this step size holds the drift near 1e-6 of the
// swing energy. The trig terms are evaluated with the argument reduced about
// the nearest representable multiple of pi, so the gravity term vanishes
// exactly at theta = 0 and theta = pi and both equilibria are exact fixed
// points of the integrator in floating point.
namespace cartpole {
inline constexpr double kCartMass = 0.5;     // M, kg
inline constexpr double kPoleMass = 0.5;     // m, kg
inline constexpr double kPoleLength = 0.6;   // l, pivot to point mass, m
inline constexpr double kGravity = 9.81;     // g, m/s^2
inline constexpr double kForceScale = 10.0;  // F = kForceScale * action, N
inline constexpr double kDt = 0.01;          // control step, s
inline constexpr int kSubsteps = 2;
inline constexpr double kTrackLimit = 2.4;   // |x| beyond this ends the episode
inline constexpr int kHorizon = 1000;        // steps per episode
}  // namespace cartpole

struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = std::numbers::pi;
  double theta_dot = 0.0;
  int t = 0;
};

inline constexpr std::size_t kObsDim = 5;

// What the agent sees: [x, x_dot, cos(theta), sin(theta), theta_dot].
struct Observation {
  std::array<double, kObsDim> values{};
};

inline Observation observe(const CartPoleState& s) {
  return Observation{{s.x, s.x_dot, std::cos(s.theta), std::sin(s.theta),
                      s.theta_dot}};
}

namespace detail {

// sin/cos of theta with the argument reduced about the nearest representable
// multiple of pi. Keeps the trig accurate for unbounded spinning angles and
// makes sin evaluate to exactly +/-0 at theta = 0 and theta = pi.
inline void reduced_sincos(double theta, double& sin_th, double& cos_th) {
  const double k = std::nearbyint(theta / std::numbers::pi);
  const double r = theta - k * std::numbers::pi;
  const double s = std::sin(r);
  const double c = std::cos(r);
  const bool odd = std::fmod(std::fabs(k), 2.0) == 1.0;
  sin_th = odd ? -s : s;
  cos_th = odd ? -c : c;
}

struct Derivatives {
  double x_dot = 0.0;
  double x_dd = 0.0;
  double theta_dot = 0.0;
  double theta_dd = 0.0;
};

inline Derivatives cartpole_derivatives(double x_dot, double theta,
                                        double theta_dot, double force) {
  using namespace cartpole;
  double sin_th = 0.0;
  double cos_th = 0.0;
  reduced_sincos(theta, sin_th, cos_th);
  Derivatives d;
  d.x_dot = x_dot;
  d.theta_dot = theta_dot;
  d.x_dd = (force + kPoleMass * sin_th *
                        (kPoleLength * theta_dot * theta_dot -
                         kGravity * cos_th)) /
           (kCartMass + kPoleMass * sin_th * sin_th);
  d.theta_dd = (kGravity * sin_th - d.x_dd * cos_th) / kPoleLength;
  return d;
}

}  // namespace detail

// Start of an episode: cart centred and at rest, pole hanging down with a
// small seeded perturbation, theta = pi + Uniform(-0.01, 0.01).
inline CartPoleState cartpole_reset(std::uint64_t seed) {
  RngState rng{seed};
  CartPoleState s;
  s.x = 0.0;
  s.x_dot = 0.0;
  s.theta = std::numbers::pi + rng_uniform(rng, -0.01, 0.01);
  s.theta_dot = 0.0;
  s.t = 0;
  return s;
}

struct StepResult {
  CartPoleState state;
  Observation obs;
  double reward = 0.0;
  bool done = false;
};

// One control step. The action is clamped to [-1, 1]; reward is cos(theta),
// so +1 upright and -1 hanging; the episode ends when the cart leaves the
// track or the horizon is reached. A non-finite state after integration is
// reported as an error (it indicates an integration blowup, not a valid
// trajectory).
inline StepResult cartpole_step(const CartPoleState& state, double action) {
  using namespace cartpole;
  const double force = kForceScale * std::clamp(action, -1.0, 1.0);
  const double h = kDt / kSubsteps;

  CartPoleState s = state;
  for (int sub = 0; sub < kSubsteps; ++sub) {
    const auto k1 = detail::cartpole_derivatives(s.x_dot, s.theta,
                                                 s.theta_dot, force);
    const auto k2 = detail::cartpole_derivatives(
        s.x_dot + 0.5 * h * k1.x_dd, s.theta + 0.5 * h * k1.theta_dot,
        s.theta_dot + 0.5 * h * k1.theta_dd, force);
    const auto k3 = detail::cartpole_derivatives(
        s.x_dot + 0.5 * h * k2.x_dd, s.theta + 0.5 * h * k2.theta_dot,
        s.theta_dot + 0.5 * h * k2.theta_dd, force);
    const auto k4 = detail::cartpole_derivatives(
        s.x_dot + h * k3.x_dd, s.theta + h * k3.theta_dot,
        s.theta_dot + h * k3.theta_dd, force);
    s.x += h / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
    s.x_dot +=
        h / 6.0 * (k1.x_dd + 2.0 * k2.x_dd + 2.0 * k3.x_dd + k4.x_dd);
    s.theta += h / 6.0 * (k1.theta_dot + 2.0 * k2.theta_dot +
                          2.0 * k3.theta_dot + k4.theta_dot);
    s.theta_dot += h / 6.0 * (k1.theta_dd + 2.0 * k2.theta_dd +
                              2.0 * k3.theta_dd + k4.theta_dd);
  }
  s.t = state.t + 1;

  if (!std::isfinite(s.x) || !std::isfinite(s.x_dot) ||
      !std::isfinite(s.theta) || !std::isfinite(s.theta_dot)) {
    throw std::runtime_error("cartpole_step: non-finite state (integration blowup)");
  }

  StepResult out;
  out.state = s;
  out.obs = observe(s);
  out.reward = std::cos(s.theta);
  out.done = std::fabs(s.x) > kTrackLimit || s.t >= kHorizon;
  return out;
}

// Mechanical energy of the model above, in joules. Zero potential at pivot
// height: hanging at rest gives -m g l, balanced at rest +m g l.
inline double total_energy(const CartPoleState& s) {
  using namespace cartpole;
  const double total_mass = kCartMass + kPoleMass;
  const double cos_th = std::cos(s.theta);
  return 0.5 * total_mass * s.x_dot * s.x_dot +
         kPoleMass * s.x_dot * kPoleLength * s.theta_dot * cos_th +
         0.5 * kPoleMass * kPoleLength * kPoleLength * s.theta_dot * s.theta_dot +
         kPoleMass * kGravity * kPoleLength * cos_th;
}

// Fixed remapping of observation components, drawn once per episode for the
// shuffled-sensor evaluations.
struct PermSpec {
  std::array<std::size_t, kObsDim> perm{};  // out[i] = in[perm[i]]

  static PermSpec identity() {
    PermSpec p;
    for (std::size_t i = 0; i < kObsDim; ++i) p.perm[i] = i;
    return p;
  }

  // Fisher-Yates over the seeded generator.
  static PermSpec draw(RngState& rng) {
    PermSpec p = identity();
    for (std::size_t i = kObsDim - 1; i > 0; --i) {
      const std::size_t j = rng_next_u64(rng) % (i + 1);
      std::swap(p.perm[i], p.perm[j]);
    }
    return p;
  }

  bool bijective() const {
    std::array<bool, kObsDim> seen{};
    for (std::size_t v : perm) {
      if (v >= kObsDim || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }
};

inline Observation permute_observation(const Observation& obs,
                                       const PermSpec& spec) {
  Observation out;
  for (std::size_t i = 0; i < kObsDim; ++i) {
    out.values[i] = obs.values[spec.perm[i]];
  }
  return out;
}

}  // namespace coop
