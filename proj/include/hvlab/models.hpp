#pragma once

// Hidden-variable models for the two EPR-Bohm experiments.
//
// A RawModel is a finite "super-deterministic" space X carrying the settings
// A, B, the outcomes F, G and a hidden variable Z. A FactorizedModel is the
// product form (settings x settings x Z with response functions) that a raw
// model reduces to under Freedom and Parameter Independence. A
// StochasticKernelModel replaces response functions by outcome distributions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hvlab/finprob.hpp"
#include "hvlab/quantum.hpp"

namespace hvlab::models {

enum class Variant { photon, spin1 };

/// Number of outcomes per side: 2 for photons ({0,1}), 3 for spin one (zero position).
std::size_t outcome_count(Variant v) noexcept;
std::vector<std::string> outcome_labels(Variant v);
const char* variant_name(Variant v) noexcept;

/// A measurement setting. Photon settings carry an angle, spin-one settings a
/// frame; settings recovered from a raw model carry only their label.
struct Setting {
  std::string label;
  std::optional<quantum::Angle> angle;
  std::optional<quantum::Frame> frame;

  static Setting of_angle(std::string label, double radians);
  static Setting of_frame(std::string label, const quantum::Frame& f);
};

struct FactorizedModel {
  Variant variant = Variant::photon;
  std::vector<Setting> settings_a, settings_b;
  std::vector<double> p_a, p_b;
  std::vector<std::string> z;
  std::vector<double> p_z;
  // response_f[alpha][z] and response_g[beta][z] are outcome indices.
  std::vector<std::vector<std::size_t>> response_f, response_g;

  /// Throws InputError when an invariant fails: normalized, strictly positive
  /// distributions; total response maps with in-range outcomes.
  void validate() const;
};

struct StochasticKernelModel {
  std::vector<Setting> settings_a, settings_b;
  std::vector<double> p_a, p_b;
  std::vector<std::string> z;
  std::vector<double> p_z;
  // kernel_f[alpha][z] = (P(F=0 | alpha, z), P(F=1 | alpha, z)); likewise kernel_g.
  std::vector<std::vector<std::array<double, 2>>> kernel_f, kernel_g;

  void validate() const;
};

struct RawModel {
  finprob::SampleSpace space;
  finprob::RandomVariable a, b, f, g, z;

  void validate() const;
};

/// Per setting pair, a table over (F, G) outcomes.
struct ConditionalTable {
  std::vector<Setting> settings_a, settings_b;
  std::vector<std::string> outcomes_f, outcomes_g;
  std::vector<double> cells;       // [(a * nb + b) * nf + f] * ng + g
  std::vector<bool> present;       // per setting pair; false when never observed
  std::vector<std::uint64_t> counts;  // shots per setting pair (empirical tables only)

  std::size_t na() const noexcept { return settings_a.size(); }
  std::size_t nb() const noexcept { return settings_b.size(); }
  std::size_t nf() const noexcept { return outcomes_f.size(); }
  std::size_t ng() const noexcept { return outcomes_g.size(); }
  std::size_t offset(std::size_t a, std::size_t b) const noexcept { return (a * nb() + b) * nf() * ng(); }
  double at(std::size_t a, std::size_t b, std::size_t f, std::size_t g) const {
    return cells[offset(a, b) + f * ng() + g];
  }
  double& at(std::size_t a, std::size_t b, std::size_t f, std::size_t g) {
    return cells[offset(a, b) + f * ng() + g];
  }
  bool is_present(std::size_t a, std::size_t b) const { return present[a * nb() + b]; }
  /// P(F != G | a, b) for binary tables.
  double mismatch(std::size_t a, std::size_t b) const;

  /// Max |difference| over setting pairs present in both tables; throws
  /// InputError on a shape mismatch.
  double max_abs_diff(const ConditionalTable& other) const;

  /// Throws InputError unless every present per-pair table sums to 1 within tol.
  void validate(double tol = finprob::kIdentityTol) const;
};

ConditionalTable make_table(std::vector<Setting> settings_a, std::vector<Setting> settings_b,
                            std::vector<std::string> outcomes_f, std::vector<std::string> outcomes_g);

/// Quantum photon statistics at every (alpha, beta) pair.
ConditionalTable photon_table(std::span<const double> angles_a, std::span<const double> angles_b);

/// The raw model on X = X_A x X_B x X_Z with product measure, F = response_f(A, Z)
/// and G = response_g(B, Z).
RawModel induced_raw_model(const FactorizedModel& m);

/// P(F, G | A, B) of a raw model; setting pairs of probability zero are absent.
ConditionalTable conditional_table(const RawModel& m);

struct FreedomReport {
  bool probabilistic = false;  // (A, B, Z) mutually independent within tol
  double residual = 0.0;
  bool surjective = false;     // every (alpha, beta, z) attained by some atom
  std::optional<std::array<std::size_t, 3>> missing_triple;
  // Pairwise independence results reported alongside the triple.
  bool pair_ab = false, pair_az = false, pair_bz = false;
  double residual_ab = 0.0, residual_az = 0.0, residual_bz = 0.0;
};

FreedomReport check_freedom(const RawModel& m, double tol);

struct PIWitness {
  char variable = 'F';  // 'F' or 'G'
  std::size_t setting = 0;
  std::size_t z = 0;
  std::size_t atom_1 = 0, atom_2 = 0;  // two positive-weight atoms in the fiber with different outcomes
};

struct PIReport {
  bool holds = false;
  std::optional<PIWitness> witness;
  // f_hat[alpha][z] (resp. g_hat[beta][z]): outcome index, or -1 on a null fiber.
  std::vector<std::vector<long>> f_hat, g_hat;
};

PIReport check_parameter_independence(const RawModel& m);

/// Throws RefusalError naming "Freedom", "Parameter Independence" or
/// "Full support" when the corresponding precondition fails.
FactorizedModel factorize(const RawModel& m, Variant variant = Variant::photon);

/// cell(alpha, beta, lambda, mu) = sum_z P_Z(z) [F(alpha,z)=lambda] [G(beta,z)=mu].
ConditionalTable predicted_table(const FactorizedModel& m);

/// Draws (alpha, beta, z) from the product measure, applies the responses and
/// tallies conditional frequencies. Shot k uses counter k of the seeded stream.
ConditionalTable simulate(const FactorizedModel& m, std::uint64_t shots, std::uint64_t seed);

/// Joint law over axes (A, B, F, G, Z) induced by a kernel model.
finprob::JointTable joint_table(const StochasticKernelModel& m);

/// P(F, G | A, B) read off a joint table with axes named A, B, F, G (and
/// possibly others, which are summed out).
ConditionalTable conditional_table(const finprob::JointTable& joint);

/// Embeds a conditional table into a joint over (A, B, F, G, Z) with the given
/// settings weights and a single hidden value.
finprob::JointTable embed_with_trivial_z(const ConditionalTable& t, std::span<const double> p_a,
                                         std::span<const double> p_b);

struct BellLocalityReport {
  bool bell_local = false;
  double locality_residual = 0.0;
  bool freedom = false;
  double freedom_residual = 0.0;
};

BellLocalityReport check_bell_locality(const finprob::JointTable& joint, double tol);

struct Derandomization {
  ConditionalTable table;  // statistics of the extended deterministic model
  double max_abs_diff = 0.0;
  bool certified = false;
};

/// Statistics of the deterministic extension on [0,1] x [0,1] x X_Z with
/// F(s,t,z) = [s <= P(F=1|alpha,z)] and G(s,t,z) = [t <= P(G=1|beta,z)], integrated
/// in closed form, certified against the model's own conditional statistics.
Derandomization derandomize(const StochasticKernelModel& m, double tol = finprob::kIdentityTol);

StochasticKernelModel as_kernel_model(const FactorizedModel& m);

/// The factorized model with the same statistics when every kernel row is a
/// point mass; nullopt otherwise.
std::optional<FactorizedModel> deterministic_equivalent(const StochasticKernelModel& m);

struct CorrelationWitness {
  std::size_t z = 0;
  std::size_t frame_a = 0, frame_b = 0;
  std::size_t i = 0, j = 0;
};

struct PerfectCorrelationReport {
  bool holds = false;
  std::size_t shared_rays_checked = 0;
  std::vector<std::pair<std::size_t, std::size_t>> skipped;  // pairs with no shared ray
  std::optional<CorrelationWitness> witness;
};

/// For every listed (frame_a, frame_b) index pair and every shared ray a_i = +-b_j,
/// requires component i of response_f to equal component j of response_g at every z.
PerfectCorrelationReport check_perfect_correlation(
    const FactorizedModel& m, std::span<const std::pair<std::size_t, std::size_t>> frame_pairs);

/// All (alpha, beta) index pairs of a model.
std::vector<std::pair<std::size_t, std::size_t>> all_setting_pairs(const FactorizedModel& m);

}  // namespace hvlab::models
