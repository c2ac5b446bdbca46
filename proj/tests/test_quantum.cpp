#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hvlab/errors.hpp"
#include "hvlab/quantum.hpp"
#include "support/generators.hpp"

using namespace hvlab;
using namespace hvlab::quantum;
using std::numbers::pi;

namespace {

const Frame kStandard = Frame::from_rows({1, 0, 0, 0, 1, 0, 0, 0, 1});

std::array<double, 3> negate(const Ray& r) { return {-r[0], -r[1], -r[2]}; }

}  // namespace

TEST_CASE("angles normalize into [0, pi)") {
  CHECK(Angle(pi).value() == 0.0);
  CHECK(Angle(-pi / 4).value() == doctest::Approx(3 * pi / 4));
  CHECK(Angle(5 * pi / 2).value() == doctest::Approx(pi / 2));
  CHECK_THROWS_AS(Angle(std::nan("")), InputError);
}

TEST_CASE("rays are unit vectors with canonical sign") {
  Ray r({0.0, -0.6, 0.8});
  CHECK(r[1] == 0.6);
  CHECK(r[2] == -0.8);
  CHECK(Ray({0, 0.6, -0.8}).same_as(r));
  CHECK_THROWS_AS(Ray({1, 1, 0}), InputError);
  CHECK_THROWS_AS(Ray::normalized({0, 0, 0}), InputError);
  CHECK_THROWS_AS(Frame::from_rows({1, 0, 0, 1, 0, 0, 0, 0, 1}), InputError);
}

TEST_CASE("photon statistics at the quoted angles") {
  auto same = photon_stats(Angle(0.3), Angle(0.3));
  CHECK(same.mismatch() == 0.0);
  CHECK(same.p11 == 0.5);
  CHECK(same.p00 == 0.5);

  CHECK(photon_stats(Angle(pi / 2), Angle(0)).mismatch() == 1.0);

  auto third = photon_stats(Angle(pi / 3), Angle(0));
  CHECK(third.p11 == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(third.mismatch() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("photon Born oracle") {
  auto zero = born_oracle_photon(Angle(0), Angle(0));
  CHECK(std::abs(zero.p11 - 0.5) < 1e-12);
  CHECK(std::abs(zero.p00 - 0.5) < 1e-12);
  CHECK(std::abs(born_oracle_photon(Angle(pi / 4), Angle(0)).mismatch() - 0.5) < 1e-12);

  testing::Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Angle a(testing::uniform(rng, -10, 10)), b(testing::uniform(rng, -10, 10));
    CHECK(photon_stats(a, b).max_abs_diff(born_oracle_photon(a, b)) <= 1e-12);
  }
}

TEST_CASE("photon statistics depend only on the angle difference modulo pi") {
  testing::Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const double a = testing::uniform(rng, 0, pi), b = testing::uniform(rng, 0, pi), s = testing::uniform(rng, -5, 5);
    CHECK(photon_stats(Angle(a), Angle(b)).max_abs_diff(photon_stats(Angle(a + s), Angle(b + s))) < 1e-12);
    CHECK(photon_stats(Angle(a), Angle(b)).max_abs_diff(photon_stats(Angle(a + pi), Angle(b))) < 1e-12);
  }
}

TEST_CASE("spin-one pair statistics") {
  const Ray x({1, 0, 0}), y({0, 1, 0});
  auto perp = spin1_pair_stats(x, y);
  CHECK(perp.p11 == doctest::Approx(1.0 / 3));
  CHECK(perp.p00 == 0.0);
  CHECK(perp.mismatch() == doctest::Approx(2.0 / 3));

  auto equal = spin1_pair_stats(x, x);
  CHECK(equal.p11 == doctest::Approx(2.0 / 3));
  CHECK(equal.p00 == doctest::Approx(1.0 / 3));
  CHECK(equal.mismatch() == 0.0);

  const Ray diag = Ray::normalized({1, 1, 0});
  CHECK(spin1_pair_stats(x, diag).mismatch() == doctest::Approx(1.0 / 3));

  testing::Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const Ray a = Ray::normalized(testing::random_direction(rng));
    const Ray b = Ray::normalized(testing::random_direction(rng));
    CHECK(spin1_pair_stats(a, b).max_abs_diff(spin1_pair_stats(Ray::normalized(negate(a)), b)) < 1e-15);
  }
}

TEST_CASE("spin-one joint table") {
  auto id = spin1_joint(kStandard, kStandard);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(id.cells[i][j] == doctest::Approx(i == j ? 1.0 / 3 : 0.0));

  // Rotation about the first axis keeps b_1 = a_1.
  const double c = std::cos(0.7), s = std::sin(0.7);
  const Frame rot = Frame::from_rows({1, 0, 0, 0, c, s, 0, -s, c});
  auto t = spin1_joint(kStandard, rot);
  CHECK(t.cells[0][0] == doctest::Approx(1.0 / 3));
  CHECK(t.cells[0][1] == doctest::Approx(0.0));
  CHECK(t.cells[1][0] == doctest::Approx(0.0));
  CHECK(t.cells[0][2] == doctest::Approx(0.0));
  CHECK(t.cells[2][0] == doctest::Approx(0.0));

  testing::Rng rng(14);
  for (int k = 0; k < 100; ++k) {
    const Frame a = testing::random_frame(rng), b = testing::random_frame(rng);
    auto j = spin1_joint(a, b);
    CHECK(std::abs(j.total() - 1.0) < 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
      double row = 0.0;
      for (std::size_t m = 0; m < 3; ++m) {
        row += j.cells[i][m];
        CHECK(j.pair(i, m).max_abs_diff(spin1_pair_stats(a[i], b[m])) < 1e-12);
      }
      // Alice's component i is 0 with probability 1/3 regardless of the frames.
      CHECK(std::abs(row - 1.0 / 3) < 1e-12);
    }
  }
}

TEST_CASE("spin-one Born oracle") {
  auto id = born_oracle_spin1(kStandard, kStandard);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(id.cells[i][i] - 1.0 / 3) < 1e-12);

  testing::Rng rng(15);
  for (int k = 0; k < 100; ++k) {
    const Frame a = testing::random_frame(rng), b = testing::random_frame(rng);
    CHECK(squared_spin_sum_defect(a) < 1e-12);
    CHECK(spin1_joint(a, b).max_abs_diff(born_oracle_spin1(a, b)) < 1e-12);
  }
}

TEST_CASE("perfect correlation on shared rays") {
  testing::Rng rng(16);
  for (int k = 0; k < 100; ++k) {
    const Frame a = testing::random_frame(rng);
    const std::size_t i = testing::pick(rng, 0, 2);
    const Frame b = testing::frame_containing(rng, negate(a[i]));
    auto j = born_oracle_spin1(a, b);
    auto shared = j.pair(i, 0);
    CHECK(std::abs(shared.p10) < 1e-12);
    CHECK(std::abs(shared.p01) < 1e-12);
    CHECK(spin1_joint(a, b).pair(i, 0).mismatch() < 1e-12);
  }
}

TEST_CASE("zero-position triples") {
  CHECK(zero_position_triple(0) == std::array<int, 3>{0, 1, 1});
  CHECK(zero_position_triple(2) == std::array<int, 3>{1, 1, 0});
}
