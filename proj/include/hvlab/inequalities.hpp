#pragma once

// Boole-inequality audits, the violation function along the one-parameter
// family of photon settings (0, 3t; t, 3t), and membership of 2x2 binary
// conditional tables in the local polytope.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hvlab/models.hpp"

namespace hvlab::inequalities {

/// Tolerance for a Boole slack to count as nonnegative.
inline constexpr double kBooleTol = 1e-12;
/// Default feasibility tolerance of the polytope test.
inline constexpr double kFeasibilityTol = 1e-9;

struct BooleReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool holds = false;
};

/// P(f1 != g1) <= P(f1 != g2) + P(f2 != g1) + P(f2 != g2) for {0,1}-valued
/// variables on a finite space with weights pz.
BooleReport boole_check(std::span<const double> pz, std::span<const std::uint8_t> f1,
                        std::span<const std::uint8_t> f2, std::span<const std::uint8_t> g1,
                        std::span<const std::uint8_t> g2);

/// Same inequality with each term read as the table's mismatch probability at
/// the corresponding setting pair.
BooleReport boole_check_table(const models::ConditionalTable& t, std::size_t a1, std::size_t a2,
                              std::size_t b1, std::size_t b2);

/// Audits every ordered choice of two distinct settings per side (a side with a
/// single setting uses it twice). Returns the report with the smallest slack.
BooleReport boole_audit(const models::ConditionalTable& t);

/// Boole audit of a factorized photon model evaluated on X_Z with the response
/// functions as the four random variables, over every ordered choice of settings.
BooleReport boole_audit(const models::FactorizedModel& m);

/// sin^2(3t) + sin^2(2t) - sin^2(t).
double f_theta(double theta) noexcept;

struct ScanPoint {
  double theta = 0.0;
  double f = 0.0;
};

struct ViolationScan {
  std::vector<ScanPoint> points;      // ordered by theta
  std::vector<ScanPoint> violations;  // points with f < 0
};

/// Grid min, min + step, ... up to max (inclusive within 1e-9 steps).
/// Throws InputError unless min <= max and step > 0.
ViolationScan scan_f(double min, double max, double step);

/// CSV with header "theta,f,violation" and 17 significant digits.
void write_scan_csv(const ViolationScan& scan, std::ostream& out);

struct DeterministicStrategy {
  std::array<std::uint8_t, 2> alice{};
  std::array<std::uint8_t, 2> bob{};
};

/// The 16 strategies; strategy k has alice = (bit0, bit1), bob = (bit2, bit3) of k.
const std::array<DeterministicStrategy, 16>& strategies();

struct PolytopeResult {
  bool feasible = false;
  std::vector<double> weights;  // one per strategy
  double residual = 0.0;        // max constraint violation of the weights
  std::size_t pivots = 0;
};

/// Mixture of strategies as a 2x2 binary conditional table.
models::ConditionalTable mixture_table(std::span<const double> weights);

/// Decides whether a convex combination of the 16 deterministic strategies
/// reproduces the table. Throws InputError unless the table has two settings
/// per side, binary outcomes and every setting pair present.
PolytopeResult local_polytope_feasible(const models::ConditionalTable& t,
                                       double tol = kFeasibilityTol);

/// Boole audit with the random variables read off a polytope witness: Z ranges
/// over strategies weighted by the mixture.
BooleReport boole_from_mixture(const PolytopeResult& r, std::size_t a1, std::size_t a2,
                               std::size_t b1, std::size_t b2);

}  // namespace hvlab::inequalities
