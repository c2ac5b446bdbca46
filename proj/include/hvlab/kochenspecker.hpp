#pragma once

// Finite Kochen-Specker machinery: ray sets, their orthogonality graphs,
// {0,1} colorings with exactly one 0 per orthogonal triad, a complete
// backtracking search, and the pipeline that turns a spin-one hidden-variable
// model into per-z colorings.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hvlab/models.hpp"
#include "hvlab/quantum.hpp"

namespace hvlab::ks {

class RaySet {
 public:
  RaySet() = default;
  /// Throws InputError when two rays coincide up to sign within kGeometryTol.
  explicit RaySet(std::vector<quantum::Ray> rays);

  std::size_t size() const noexcept { return rays_.size(); }
  const std::vector<quantum::Ray>& rays() const noexcept { return rays_; }
  const quantum::Ray& operator[](std::size_t i) const { return rays_[i]; }
  std::optional<std::size_t> find(const quantum::Ray& r) const;

 private:
  std::vector<quantum::Ray> rays_;
};

struct OrthoGraph {
  RaySet rays;
  std::vector<std::array<std::size_t, 2>> pairs;   // i < j
  std::vector<std::array<std::size_t, 3>> triads;  // i < j < k
  std::vector<std::vector<std::size_t>> neighbors;
};

OrthoGraph orthogonality_graph(const RaySet& rays, double tol = quantum::kGeometryTol);

/// The 33 rays with components in {0, +-1, +-sqrt 2} up to normalization:
/// permutations of (0,0,1), (0,1,+-1), (0,1,+-sqrt2) and (1,+-1,+-sqrt2).
RaySet peres33();

using Coloring = std::vector<std::uint8_t>;

struct ColoringCheck {
  bool valid = false;
  enum class Violation { none, size, value, triad, pair } violation = Violation::none;
  std::size_t index = 0;  // offending triad or pair index
  std::string message;
};

ColoringCheck verify_coloring(const OrthoGraph& g, const Coloring& c);

struct SearchOptions {
  bool count = false;  // enumerate every coloring instead of stopping at the first
};

struct SearchReport {
  bool colorable = false;
  std::optional<Coloring> witness;
  std::uint64_t nodes_explored = 0;
  bool exhausted = false;
  std::optional<std::uint64_t> count;  // set in counting mode
};

/// Complete backtracking with unit propagation. Branches on the unassigned ray
/// with the most assigned neighbours (ties: most neighbours, then lowest index),
/// trying 0 before 1.
SearchReport search_coloring(const OrthoGraph& g, SearchOptions options = {});

struct ObstructionReport {
  bool model_exists = false;
  std::string reason;
  SearchReport search;  // filled when no model was supplied
  std::optional<models::PerfectCorrelationReport> correlation;
  // Per hidden value: the derived ray coloring (1 where a ray never appears in a frame).
  std::vector<Coloring> derived;
  std::optional<std::size_t> failing_z;
  std::optional<ColoringCheck> failing_check;
};

/// Without a model: searches for a coloring; none means no model with
/// Determinism, Parameter Independence, Freedom and perfect correlation exists
/// on the frames of the ray set. With a spin-one model: checks perfect
/// correlation, derives F(ray, z) and verifies the coloring for each z. Throws
/// InputError when a triad of the graph is missing from either side's settings.
ObstructionReport frame_function_obstruction(const RaySet& rays,
                                             const models::FactorizedModel* model = nullptr);

/// One-per-triad frames of the graph, suitable as spin-one settings.
std::vector<quantum::Frame> triad_frames(const OrthoGraph& g);

/// Spin-one model with one hidden value per coloring: settings are the triad
/// frames on both sides and the response at z puts the zero where coloring z does.
models::FactorizedModel model_from_colorings(const OrthoGraph& g, const std::vector<Coloring>& colorings);

/// One ray per line as three reals; '#' starts a comment line. Rays are
/// normalized and sign-canonicalized.
RaySet parse_rays(std::istream& in);
void write_rays(const RaySet& rays, std::ostream& out);

}  // namespace hvlab::ks
