#pragma once

// Finite probability spaces, random variables on them, and the joint tables
// they induce. Everything here is an immutable value; operations are pure.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hvlab::finprob {

/// Tolerance used for identities that hold exactly in real arithmetic.
inline constexpr double kIdentityTol = 1e-12;

class FiniteDistribution {
 public:
  /// Throws InputError on negative weights or when the weights do not sum to 1
  /// within kIdentityTol.
  explicit FiniteDistribution(std::vector<double> weights);

  static FiniteDistribution uniform(std::size_t n);
  static FiniteDistribution point_mass(std::size_t n, std::size_t at);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

class SampleSpace {
 public:
  /// Atom identifiers must be unique and match the distribution length.
  SampleSpace(std::vector<std::string> atoms, FiniteDistribution dist);

  /// Space with atoms "0".."n-1".
  static SampleSpace indexed(FiniteDistribution dist);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const FiniteDistribution& dist() const noexcept { return dist_; }
  double weight(std::size_t atom) const { return dist_[atom]; }
  std::optional<std::size_t> index_of(std::string_view atom) const;

 private:
  std::vector<std::string> atoms_;
  FiniteDistribution dist_;
};

/// A total map from the atoms of a space (by index) onto a finite ordered codomain.
class RandomVariable {
 public:
  RandomVariable(std::string name, std::vector<std::string> codomain,
                 std::vector<std::size_t> assignment);

  static RandomVariable identity(const SampleSpace& space, std::string name);
  static RandomVariable constant(const SampleSpace& space, std::string name, std::string value);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& codomain() const noexcept { return codomain_; }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
  std::size_t value_at(std::size_t atom) const { return assignment_[atom]; }
  std::size_t atom_count() const noexcept { return assignment_.size(); }
  bool defined_on(const SampleSpace& space) const noexcept {
    return assignment_.size() == space.size();
  }

 private:
  std::string name_;
  std::vector<std::string> codomain_;
  std::vector<std::size_t> assignment_;
};

/// Joint distribution over the product of named finite axes, stored row-major
/// (last axis varies fastest). A rank-0 table has exactly one cell of mass 1.
class JointTable {
 public:
  struct Axis {
    std::string name;
    std::vector<std::string> values;
  };

  JointTable(std::vector<Axis> axes, std::vector<double> cells);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const std::vector<double>& cells() const noexcept { return cells_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::vector<std::size_t> shape() const;

  /// Throws InputError when no axis carries that name.
  std::size_t axis_index(std::string_view name) const;
  std::size_t flat_index(std::span<const std::size_t> values) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  double at(std::span<const std::size_t> values) const { return cells_[flat_index(values)]; }
  double at(std::initializer_list<std::size_t> values) const {
    return at(std::span<const std::size_t>(values.begin(), values.size()));
  }

  /// Sum out every axis not listed; the result keeps the listed order.
  JointTable marginal(std::span<const std::string> keep) const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> cells_;
  std::vector<std::size_t> strides_;
};

struct ProductSpace {
  SampleSpace space;
  std::vector<RandomVariable> projections;
};

/// Product measure of the factors. Atoms are tuples "(a,b,...)" of factor atoms,
/// ordered with the last factor varying fastest. Projection i is named
/// `names[i]` when given, "X<i>" otherwise. Throws InputError on an empty list.
ProductSpace product_measure(std::span<const SampleSpace> factors,
                             std::span<const std::string> names = {});

/// Law of (rv_1, ..., rv_n) under the space's distribution.
JointTable push_forward(const SampleSpace& space, std::span<const RandomVariable> rvs);

using Assignment = std::pair<std::string, std::size_t>;

/// Conditional table of the remaining axes given the partial assignment.
/// Throws ConditioningError when the event has probability zero and InputError
/// when the assignment names an unknown axis or an out-of-range value.
JointTable condition(const JointTable& table, std::span<const Assignment> given);

/// Probability of a partial assignment.
double event_probability(const JointTable& table, std::span<const Assignment> given);

struct IndependenceReport {
  bool independent = false;
  double max_residual = 0.0;
};

/// Mutual independence: |P(joint) - prod P(marginals)| <= tol for every value tuple.
IndependenceReport check_mutual_independence(std::span<const RandomVariable> rvs,
                                             const SampleSpace& space, double tol);

/// Deterministic stream of atom indices drawn i.i.d. from a space's distribution.
/// Draw k is a pure function of (seed, k), so streams are reproducible and can be
/// split at any offset.
class SampleStream {
 public:
  SampleStream(const SampleSpace& space, std::uint64_t seed, std::size_t n);

  bool done() const noexcept { return cursor_ >= n_; }
  std::size_t remaining() const noexcept { return n_ - cursor_; }
  std::size_t next();
  std::vector<std::size_t> take_all();

 private:
  std::vector<double> cumulative_;
  std::uint64_t seed_;
  std::size_t n_;
  std::size_t cursor_ = 0;
};

SampleStream sample(const SampleSpace& space, std::uint64_t seed, std::size_t n);

/// Inverse-CDF lookup shared by every sampler: first index whose cumulative
/// weight exceeds u * total. Zero-weight entries are never returned.
std::size_t draw_index(std::span<const double> cumulative, double u);

}  // namespace hvlab::finprob
