#include <doctest.h>

#include <cmath>

#include "coop/matrix.hpp"
#include "coop/positional.hpp"
#include "coop/rng.hpp"

using namespace coop;

namespace {

Matrix random_matrix(RngState& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng_uniform(rng, -2.0, 2.0);
  return m;
}

}  // namespace

TEST_CASE("mat_mul identity") {
  Matrix eye(2, 2);
  eye(0, 0) = 1.0;
  eye(1, 1) = 1.0;
  Matrix v(2, 1);
  v(0, 0) = 5.0;
  v(1, 0) = 6.0;
  const Matrix out = mat_mul(eye, v);
  CHECK(out(0, 0) == 5.0);
  CHECK(out(1, 0) == 6.0);
}

TEST_CASE("mat_mul hand example") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 3.0;
  a(1, 1) = 4.0;
  Matrix b(2, 1);
  b(0, 0) = 5.0;
  b(1, 0) = 6.0;
  const Matrix out = mat_mul(a, b);
  CHECK(out.rows == 2);
  CHECK(out.cols == 1);
  CHECK(out(0, 0) == doctest::Approx(17.0));
  CHECK(out(1, 0) == doctest::Approx(39.0));
}

TEST_CASE("mat_mul zero annihilates") {
  RngState rng{11};
  const Matrix a = random_matrix(rng, 3, 4);
  const Matrix zero(4, 2, 0.0);
  const Matrix out = mat_mul(a, zero);
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("mat_mul rejects dimension mismatch") {
  const Matrix a(2, 3);
  const Matrix b(2, 3);
  CHECK_THROWS_AS((void)mat_mul(a, b), std::invalid_argument);
}

TEST_CASE("mat_mul associativity within 1e-9 relative") {
  RngState rng{7};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n1 = 1 + rng_next_u64(rng) % 5;
    const std::size_t n2 = 1 + rng_next_u64(rng) % 5;
    const std::size_t n3 = 1 + rng_next_u64(rng) % 5;
    const std::size_t n4 = 1 + rng_next_u64(rng) % 5;
    const Matrix a = random_matrix(rng, n1, n2);
    const Matrix b = random_matrix(rng, n2, n3);
    const Matrix c = random_matrix(rng, n3, n4);
    const Matrix left = mat_mul(mat_mul(a, b), c);
    const Matrix right = mat_mul(a, mat_mul(b, c));
    for (std::size_t i = 0; i < left.data.size(); ++i) {
      const double scale = std::max(1.0, std::fabs(left.data[i]));
      CHECK(std::fabs(left.data[i] - right.data[i]) / scale <= 1e-9);
    }
  }
}

TEST_CASE("mat_mul keeps finite inputs finite") {
  RngState rng{13};
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 4, 6);
    const Matrix b = random_matrix(rng, 6, 3);
    CHECK(all_finite(mat_mul(a, b)));
  }
}

TEST_CASE("activation examples") {
  Matrix m(1, 3);
  m(0, 0) = -1.0;
  m(0, 1) = 0.0;
  m(0, 2) = 2.0;
  const Matrix relu = apply_activation(Activation::ReLU, m);
  CHECK(relu(0, 0) == 0.0);
  CHECK(relu(0, 1) == 0.0);
  CHECK(relu(0, 2) == 2.0);

  const Matrix ident = apply_activation(Activation::Identity, m);
  CHECK(ident == m);

  CHECK(apply_activation(Activation::Tanh, 0.0) == 0.0);
}

TEST_CASE("ReLU idempotent, tanh bounded") {
  RngState rng{17};
  for (int trial = 0; trial < 200; ++trial) {
    const double x = rng_uniform(rng, -50.0, 50.0);
    const double once = apply_activation(Activation::ReLU, x);
    CHECK(apply_activation(Activation::ReLU, once) == once);
    // tanh saturates to exactly +/-1 in doubles, so the bound is closed.
    const double t = apply_activation(Activation::Tanh, x);
    CHECK(t >= -1.0);
    CHECK(t <= 1.0);
  }
}

TEST_CASE("positional_row index 0") {
  const auto row4 = positional_row(4, 0);
  REQUIRE(row4.size() == 4);
  CHECK(row4[0] == 0.0);
  CHECK(row4[1] == 1.0);
  CHECK(row4[2] == 0.0);
  CHECK(row4[3] == 1.0);

  const auto row2 = positional_row(2, 0);
  REQUIRE(row2.size() == 2);
  CHECK(row2[0] == 0.0);
  CHECK(row2[1] == 1.0);
}

TEST_CASE("positional_row in [-1, 1] and rejects odd dim") {
  RngState rng{23};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 2 * (1 + rng_next_u64(rng) % 32);
    const std::size_t index = rng_next_u64(rng) % 1000;
    for (double v : positional_row(dim, index)) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK_THROWS_AS((void)positional_row(3, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)positional_row(1, 5), std::invalid_argument);
}
