#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "coop/cartpole.hpp"

using namespace coop;

TEST_CASE("reset is seeded and starts hanging at the origin") {
  const CartPoleState a = cartpole_reset(99);
  const CartPoleState b = cartpole_reset(99);
  CHECK(a.x == 0.0);
  CHECK(a.x_dot == 0.0);
  CHECK(a.theta_dot == 0.0);
  CHECK(a.t == 0);
  CHECK(a.theta >= std::numbers::pi - 0.01);
  CHECK(a.theta <= std::numbers::pi + 0.01);
  CHECK(a.theta == b.theta);
  CHECK(cartpole_reset(100).theta != a.theta);
}

TEST_CASE("observation packs state with unit-circle angle") {
  const CartPoleState s = cartpole_reset(5);
  const Observation obs = observe(s);
  CHECK(obs.values[0] == s.x);
  CHECK(obs.values[1] == s.x_dot);
  CHECK(obs.values[4] == s.theta_dot);
  const double c = obs.values[2];
  const double sn = obs.values[3];
  CHECK(std::fabs(c * c + sn * sn - 1.0) <= 1e-12);
}

TEST_CASE("hanging equilibrium is an exact fixed point") {
  CartPoleState s;
  s.x = 0.0;
  s.x_dot = 0.0;
  s.theta = std::numbers::pi;
  s.theta_dot = 0.0;
  const StepResult out = cartpole_step(s, 0.0);
  CHECK(out.state.x == s.x);
  CHECK(out.state.x_dot == s.x_dot);
  CHECK(out.state.theta == s.theta);
  CHECK(out.state.theta_dot == s.theta_dot);
  CHECK(out.state.t == 1);
  CHECK(out.reward == -1.0);
  CHECK(!out.done);
}

TEST_CASE("upright equilibrium is an exact fixed point") {
  CartPoleState s;
  s.theta = 0.0;
  const StepResult out = cartpole_step(s, 0.0);
  CHECK(out.state.x == 0.0);
  CHECK(out.state.x_dot == 0.0);
  CHECK(out.state.theta == 0.0);
  CHECK(out.state.theta_dot == 0.0);
  CHECK(out.reward == 1.0);
}

TEST_CASE("upright perturbation grows monotonically at first") {
  CartPoleState s;
  s.theta = 0.01;
  double prev = std::fabs(s.theta);
  for (int i = 0; i < 50; ++i) {
    const StepResult out = cartpole_step(s, 0.0);
    s = out.state;
    CHECK(std::fabs(s.theta) > prev);
    prev = std::fabs(s.theta);
  }
}

TEST_CASE("energy values at rest") {
  using namespace cartpole;
  const double mgl = kPoleMass * kGravity * kPoleLength;
  CartPoleState down;
  down.theta = std::numbers::pi;
  CHECK(total_energy(down) == doctest::Approx(-mgl).epsilon(1e-12));
  CartPoleState up;
  up.theta = 0.0;
  CHECK(total_energy(up) == doctest::Approx(mgl).epsilon(1e-12));
}

TEST_CASE("zero-force trajectory conserves energy within 1% over 10 s") {
  using namespace cartpole;
  CartPoleState s;
  s.theta = std::numbers::pi / 2.0;
  const double e0 = total_energy(s);
  // E(0) is zero here (rest at pivot height), so drift is measured against
  // the swing energy scale m*g*l.
  const double scale = kPoleMass * kGravity * kPoleLength;
  double max_drift = 0.0;
  for (int i = 0; i < 1000; ++i) {
    StepResult out = cartpole_step(s, 0.0);
    s = out.state;
    s.t = 0;  // keep stepping without hitting the horizon flag
    max_drift = std::max(max_drift, std::fabs(total_energy(s) - e0));
  }
  CHECK(max_drift / scale <= 0.01);
}

TEST_CASE("trajectories are deterministic in (seed, actions)") {
  const auto rollout = [](std::uint64_t seed) {
    CartPoleState s = cartpole_reset(seed);
    std::vector<double> trace;
    for (int i = 0; i < 200; ++i) {
      const double action = (i % 7 == 0) ? 0.9 : -0.35;
      const StepResult out = cartpole_step(s, action);
      s = out.state;
      trace.push_back(s.x);
      trace.push_back(s.theta);
    }
    return trace;
  };
  CHECK(rollout(3) == rollout(3));
  CHECK(rollout(3) != rollout(4));
}

TEST_CASE("rewards stay in [-1, 1] and the cart leaving the track ends it") {
  CartPoleState s = cartpole_reset(8);
  bool done = false;
  int steps = 0;
  while (!done) {
    const StepResult out = cartpole_step(s, 1.0);
    CHECK(out.reward >= -1.0);
    CHECK(out.reward <= 1.0);
    s = out.state;
    done = out.done;
    ++steps;
    REQUIRE(steps <= cartpole::kHorizon);
  }
  CHECK(std::fabs(s.x) > cartpole::kTrackLimit);
  CHECK(steps < cartpole::kHorizon);
}

TEST_CASE("horizon terminates an idle episode") {
  CartPoleState s = cartpole_reset(9);
  bool done = false;
  int steps = 0;
  while (!done) {
    const StepResult out = cartpole_step(s, 0.0);
    s = out.state;
    done = out.done;
    ++steps;
  }
  CHECK(steps == cartpole::kHorizon);
}

TEST_CASE("non-finite blowup is reported as an error") {
  CartPoleState s;
  s.x_dot = 1e300;
  s.theta_dot = 1e300;
  CHECK_THROWS_AS((void)cartpole_step(s, 0.0), std::runtime_error);
}

TEST_CASE("action outside [-1, 1] is clamped") {
  CartPoleState s = cartpole_reset(10);
  const StepResult big = cartpole_step(s, 100.0);
  const StepResult one = cartpole_step(s, 1.0);
  CHECK(big.state.x == one.state.x);
  CHECK(big.state.theta == one.state.theta);
}

TEST_CASE("permute_observation: identity, inverse, reversal") {
  Observation obs;
  obs.values = {1.0, 2.0, 3.0, 4.0, 5.0};

  const PermSpec ident = PermSpec::identity();
  CHECK(permute_observation(obs, ident).values == obs.values);

  PermSpec rev;
  rev.perm = {4, 3, 2, 1, 0};
  const Observation reversed = permute_observation(obs, rev);
  CHECK(reversed.values == std::array<double, 5>{5.0, 4.0, 3.0, 2.0, 1.0});

  RngState rng{55};
  const PermSpec spec = PermSpec::draw(rng);
  REQUIRE(spec.bijective());
  PermSpec inverse;
  for (std::size_t i = 0; i < kObsDim; ++i) inverse.perm[spec.perm[i]] = i;
  const Observation round =
      permute_observation(permute_observation(obs, spec), inverse);
  CHECK(round.values == obs.values);
}

TEST_CASE("drawn permutations are bijections preserving the multiset") {
  RngState rng{56};
  for (int trial = 0; trial < 100; ++trial) {
    const PermSpec spec = PermSpec::draw(rng);
    CHECK(spec.bijective());
    Observation obs;
    for (std::size_t i = 0; i < kObsDim; ++i) {
      obs.values[i] = rng_uniform(rng, -5.0, 5.0);
    }
    Observation shuffled = permute_observation(obs, spec);
    auto a = obs.values;
    auto b = shuffled.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}
