#pragma once

// Quantum predictions for the two EPR-Bohm experiments: polarization-entangled
// photons and spin-one pairs. Closed forms live next to Born-rule oracles that
// recompute the same numbers from state vectors and operators.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace hvlab::quantum {

/// Orthonormality / unit-norm tolerance for caller-supplied rays and frames.
inline constexpr double kGeometryTol = 1e-9;

/// Polarizer axis in [0, pi).
class Angle {
 public:
  explicit Angle(double radians);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Unit vector in R^3 identified with its negation. Stored with its first
/// component that exceeds kGeometryTol in magnitude positive.
class Ray {
 public:
  /// Throws InputError unless the input has unit norm within kGeometryTol.
  explicit Ray(std::array<double, 3> components);
  /// Normalizes first; throws InputError on a (near) zero vector.
  static Ray normalized(std::array<double, 3> v);

  const std::array<double, 3>& components() const noexcept { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }

  bool same_as(const Ray& other, double tol = kGeometryTol) const;

 private:
  std::array<double, 3> c_;
};

double dot(const Ray& a, const Ray& b) noexcept;

/// Orthonormal basis of R^3, axes up to sign.
class Frame {
 public:
  /// Throws InputError unless pairwise inner products vanish within kGeometryTol.
  explicit Frame(std::array<Ray, 3> rays);
  /// Nine reals, one ray per row.
  static Frame from_rows(const std::array<double, 9>& rows);

  const std::array<Ray, 3>& rays() const noexcept { return rays_; }
  const Ray& operator[](std::size_t i) const { return rays_[i]; }
  std::array<double, 9> rows() const;

  /// Index of the axis equal to the ray up to sign, or -1.
  int position_of(const Ray& r, double tol = kGeometryTol) const;
  /// Same three axes, possibly reordered.
  bool same_axes(const Frame& other, double tol = kGeometryTol) const;

 private:
  std::array<Ray, 3> rays_;
};

/// Joint law of one binary component on each side.
struct PairStats {
  double p11 = 0, p10 = 0, p01 = 0, p00 = 0;
  double mismatch() const noexcept { return p10 + p01; }
  double max_abs_diff(const PairStats& o) const noexcept;
};

/// cells[i][j] = P(Alice's zero at position i, Bob's zero at position j).
struct SpinJointTable {
  std::array<std::array<double, 3>, 3> cells{};

  double total() const noexcept;
  /// Joint law of (F_i, G_j), component value 0 meaning "zero at that position".
  PairStats pair(std::size_t i, std::size_t j) const noexcept;
  double max_abs_diff(const SpinJointTable& o) const noexcept;
};

PairStats photon_stats(Angle alpha, Angle beta);
PairStats spin1_pair_stats(const Ray& a, const Ray& b);
SpinJointTable spin1_joint(const Frame& a, const Frame& b);

/// Recomputes photon statistics from |psi> = (|00> + |11>)/sqrt 2 and
/// polarizer projectors.
PairStats born_oracle_photon(Angle alpha, Angle beta);
/// Recomputes the spin-one joint from |psi> = sum_m |m>|m> / sqrt 3, the spin-one
/// component operators, and the squared projections <a_i, J>^2.
SpinJointTable born_oracle_spin1(const Frame& a, const Frame& b);

/// Max deviation of sum_i <a_i, J>^2 from 2 * identity for the frame, computed
/// on the same operators the spin-one oracle uses.
double squared_spin_sum_defect(const Frame& a);

/// Zero-position outcome triple: (1,1,0), (1,0,1) or (0,1,1) for positions 0..2.
std::array<int, 3> zero_position_triple(std::size_t zero_at);

}  // namespace hvlab::quantum
