#include "doctest.h"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hvlab/errors.hpp"
#include "hvlab/finprob.hpp"
#include "support/generators.hpp"

using namespace hvlab;
using namespace hvlab::finprob;

namespace {

SampleSpace coin(double p_heads = 0.5) {
  return SampleSpace({"H", "T"}, FiniteDistribution({p_heads, 1.0 - p_heads}));
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("distributions reject negative or unnormalized weights") {
  CHECK_THROWS_AS(FiniteDistribution({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(FiniteDistribution({-0.1, 1.1}), InputError);
  CHECK_THROWS_AS(FiniteDistribution({}), InputError);
  CHECK_NOTHROW(FiniteDistribution({0.25, 0.75}));
  CHECK_THROWS_AS(SampleSpace({"a", "a"}, FiniteDistribution::uniform(2)), InputError);
  CHECK_THROWS_AS(SampleSpace({"a"}, FiniteDistribution::uniform(2)), InputError);
}

TEST_CASE("product of two fair coins is uniform on four tuples") {
  const std::array<SampleSpace, 2> f{coin(), coin()};
  auto p = product_measure(f);
  REQUIRE(p.space.size() == 4);
  for (double w : p.space.dist().weights()) CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.space.atoms()[1] == "(H,T)");
  REQUIRE(p.projections.size() == 2);
  CHECK(p.projections[0].name() == "X0");
}

TEST_CASE("product of a single factor is an isomorphic copy") {
  const std::array<SampleSpace, 1> f{SampleSpace({"x", "y", "z"}, FiniteDistribution({0.2, 0.3, 0.5}))};
  auto p = product_measure(f);
  REQUIRE(p.space.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p.space.weight(i) == f[0].weight(i));
  CHECK(p.projections[0].assignment() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("product weights are products of factor weights") {
  const std::array<SampleSpace, 2> f{
      SampleSpace({"a", "b"}, FiniteDistribution({1.0 / 3, 2.0 / 3})), coin()};
  auto p = product_measure(f);
  const std::vector<double> expected{1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p.space.weight(i) - expected[i]) < 1e-15);
  CHECK_THROWS_AS(product_measure(std::span<const SampleSpace>{}), InputError);
}

TEST_CASE("push_forward: identity, constant and coordinate projections") {
  const SampleSpace s({"a", "b", "c"}, FiniteDistribution({0.1, 0.2, 0.7}));
  {
    const std::array<RandomVariable, 1> id{RandomVariable::identity(s, "X")};
    auto t = push_forward(s, id);
    for (std::size_t i = 0; i < 3; ++i) CHECK(t.cells()[i] == s.weight(i));
  }
  {
    const std::array<RandomVariable, 1> c{RandomVariable::constant(s, "K", "k")};
    auto t = push_forward(s, c);
    REQUIRE(t.cells().size() == 1);
    CHECK(t.cells()[0] == doctest::Approx(1.0));
  }
  {
    const std::array<SampleSpace, 2> f{SampleSpace({"x", "y"}, FiniteDistribution({0.3, 0.7})), s};
    auto p = product_measure(f);
    auto t = push_forward(p.space, p.projections);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(t.at({i, j}) - f[0].weight(i) * s.weight(j)) < 1e-15);
  }
  const std::array<RandomVariable, 1> foreign{RandomVariable("Y", {"0"}, {0, 0})};
  CHECK_THROWS_AS(push_forward(s, foreign), InputError);
}

TEST_CASE("condition: uniform restriction, point mass, independence and zero events") {
  const SampleSpace four = SampleSpace::indexed(FiniteDistribution::uniform(4));
  const std::array<RandomVariable, 2> rvs{RandomVariable::identity(four, "X"),
                                          RandomVariable("E", {"no", "yes"}, {1, 1, 0, 0})};
  auto joint = push_forward(four, rvs);
  const std::array<Assignment, 1> in_event{Assignment{"E", 1}};
  auto c = condition(joint, in_event);
  REQUIRE(c.rank() == 1);
  CHECK(c.cells() == std::vector<double>{0.5, 0.5, 0.0, 0.0});

  const std::array<Assignment, 2> full{Assignment{"X", 2}, Assignment{"E", 0}};
  auto pm = condition(joint, full);
  CHECK(pm.rank() == 0);
  CHECK(pm.cells() == std::vector<double>{1.0});

  const std::array<Assignment, 2> impossible{Assignment{"X", 0}, Assignment{"E", 0}};
  CHECK_THROWS_AS(condition(joint, impossible), ConditioningError);
  const std::array<Assignment, 1> unknown{Assignment{"Q", 0}};
  CHECK_THROWS_AS(condition(joint, unknown), InputError);

  // Conditioning a product table on one coordinate leaves the other marginal unchanged.
  const std::array<SampleSpace, 2> f{SampleSpace({"x", "y"}, FiniteDistribution({0.3, 0.7})),
                                     SampleSpace({"u", "v", "w"}, FiniteDistribution({0.5, 0.25, 0.25}))};
  auto p = product_measure(f, std::array<std::string, 2>{"L", "R"});
  auto t = push_forward(p.space, p.projections);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::array<Assignment, 1> g{Assignment{"L", i}};
    auto r = condition(t, g);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(r.cells()[j] - f[1].weight(j)) < 1e-15);
  }
}

TEST_CASE("mutual independence: products, copies and the XOR triple") {
  const std::array<SampleSpace, 3> f{coin(0.3), coin(0.6), coin(0.5)};
  auto p = product_measure(f);
  auto r = check_mutual_independence(p.projections, p.space, 1e-12);
  CHECK(r.independent);
  CHECK(r.max_residual < 1e-15);

  const std::array<RandomVariable, 2> same{p.projections[0],
                                           RandomVariable("copy", p.projections[0].codomain(),
                                                          p.projections[0].assignment())};
  CHECK_FALSE(check_mutual_independence(same, p.space, 1e-12).independent);

  // Two fair bits and their XOR: pairwise independent, jointly dependent.
  const std::array<SampleSpace, 2> bits{coin(), coin()};
  auto q = product_measure(bits);
  std::vector<std::size_t> x(q.space.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = q.projections[0].value_at(k) ^ q.projections[1].value_at(k);
  const RandomVariable xr("xor", {"0", "1"}, x);
  const std::array<RandomVariable, 3> triple{q.projections[0], q.projections[1], xr};
  auto t = check_mutual_independence(triple, q.space, 1e-12);
  CHECK_FALSE(t.independent);
  // Enumerated: P(0,0,0) = 1/4 against 1/8 under independence.
  CHECK(t.max_residual == doctest::Approx(0.125));
  const std::array<RandomVariable, 2> pair{q.projections[0], xr};
  CHECK(check_mutual_independence(pair, q.space, 1e-12).independent);
}

TEST_CASE("marginal consistency and condition/marginal commutation") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<SampleSpace, 3> f{
        SampleSpace::indexed(FiniteDistribution(testing::positive_weights(rng, 2))),
        SampleSpace::indexed(FiniteDistribution(testing::positive_weights(rng, 3))),
        SampleSpace::indexed(FiniteDistribution(testing::positive_weights(rng, 4)))};
    // A correlated space: reweight the product atoms at random.
    auto p = product_measure(f, std::array<std::string, 3>{"A", "B", "C"});
    auto w = testing::positive_weights(rng, p.space.size());
    SampleSpace s(p.space.atoms(), FiniteDistribution(w));
    auto joint = push_forward(s, p.projections);
    CHECK(std::abs(sum(joint.cells()) - 1.0) < 1e-12);

    const std::array<std::string, 2> keep{"A", "C"};
    const std::array<RandomVariable, 2> ac{p.projections[0], p.projections[2]};
    auto direct = push_forward(s, ac);
    auto summed = joint.marginal(keep);
    for (std::size_t k = 0; k < direct.cells().size(); ++k) CHECK(std::abs(direct.cells()[k] - summed.cells()[k]) < 1e-15);

    // Condition on B then drop C == drop C then condition on B.
    const std::array<Assignment, 1> given{Assignment{"B", 1}};
    const std::array<std::string, 1> only_a{"A"};
    const std::array<std::string, 2> ab{"A", "B"};
    auto x = condition(joint, given).marginal(only_a);
    auto y = condition(joint.marginal(ab), given);
    for (std::size_t k = 0; k < x.cells().size(); ++k) CHECK(std::abs(x.cells()[k] - y.cells()[k]) < 1e-12);
  }
}

TEST_CASE("sampling is deterministic and follows the law") {
  CHECK(sample(coin(), 1, 0).take_all().empty());
  const SampleSpace point({"a", "b", "c"}, FiniteDistribution::point_mass(3, 1));
  for (std::size_t v : sample(point, 99, 1000).take_all()) CHECK(v == 1);

  const SampleSpace three({"a", "b", "c"}, FiniteDistribution({0.2, 0.0, 0.8}));
  CHECK(sample(three, 5, 200).take_all() == sample(three, 5, 200).take_all());
  CHECK(sample(three, 5, 200).take_all() != sample(three, 6, 200).take_all());

  // Frequencies within 4 binomial standard deviations for every atom and seed.
  const std::size_t n = 1'000'000;
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xDEADBEEFULL}) {
    for (const SampleSpace& s : {coin(), three}) {
      std::vector<std::size_t> counts(s.size(), 0);
      auto stream = sample(s, seed, n);
      while (!stream.done()) ++counts[stream.next()];
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double p = s.weight(i);
        const double freq = static_cast<double>(counts[i]) / n;
        CHECK(std::abs(freq - p) <= 4.0 * std::sqrt(p * (1 - p) / n) + 1e-15);
      }
    }
  }
}
