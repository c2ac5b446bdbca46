#include "hvlab/kochenspecker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "hvlab/errors.hpp"

namespace hvlab::ks {

using quantum::Ray;

RaySet::RaySet(std::vector<Ray> rays) : rays_(std::move(rays)) {
  for (std::size_t i = 0; i < rays_.size(); ++i)
    for (std::size_t j = i + 1; j < rays_.size(); ++j)
      if (rays_[i].same_as(rays_[j])) {
        throw InputError("ray set: rays " + std::to_string(i) + " and " + std::to_string(j) +
                         " coincide up to sign");
      }
}

std::optional<std::size_t> RaySet::find(const Ray& r) const {
  for (std::size_t i = 0; i < rays_.size(); ++i)
    if (rays_[i].same_as(r)) return i;
  return std::nullopt;
}

OrthoGraph orthogonality_graph(const RaySet& rays, double tol) {
  OrthoGraph g{rays, {}, {}, std::vector<std::vector<std::size_t>>(rays.size())};
  const std::size_t n = rays.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(quantum::dot(rays[i], rays[j])) <= tol) {
        adj[i][j] = adj[j][i] = true;
        g.pairs.push_back({i, j});
        g.neighbors[i].push_back(j);
        g.neighbors[j].push_back(i);
      }
  for (const auto& [i, j] : g.pairs)
    for (std::size_t k : g.neighbors[j])
      if (k > j && adj[i][k]) g.triads.push_back({i, j, k});
  std::sort(g.triads.begin(), g.triads.end());
  return g;
}

RaySet peres33() {
  const double r2 = std::sqrt(2.0);
  std::vector<std::array<double, 3>> seeds;
  auto permutations = [&](std::array<double, 3> v) {
    std::sort(v.begin(), v.end());
    do seeds.push_back(v);
    while (std::next_permutation(v.begin(), v.end()));
  };
  permutations({0, 0, 1});
  for (double s : {1.0, -1.0}) {
    permutations({0, 1, s});
    permutations({0, 1, s * r2});
    for (double t : {1.0, -1.0}) permutations({1, s, t * r2});
  }
  std::vector<Ray> rays;
  for (const auto& v : seeds) {
    Ray r = Ray::normalized(v);
    if (std::none_of(rays.begin(), rays.end(), [&](const Ray& x) { return x.same_as(r); })) {
      rays.push_back(r);
    }
  }
  return RaySet(std::move(rays));
}

ColoringCheck verify_coloring(const OrthoGraph& g, const Coloring& c) {
  ColoringCheck out;
  if (c.size() != g.rays.size()) {
    out.violation = ColoringCheck::Violation::size;
    out.message = "coloring does not assign every ray";
    return out;
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > 1) {
      out.violation = ColoringCheck::Violation::value;
      out.index = i;
      out.message = "ray " + std::to_string(i) + " has a value other than 0 or 1";
      return out;
    }
  for (std::size_t t = 0; t < g.triads.size(); ++t) {
    const auto& tr = g.triads[t];
    const int zeros = (c[tr[0]] == 0) + (c[tr[1]] == 0) + (c[tr[2]] == 0);
    if (zeros != 1) {
      out.violation = ColoringCheck::Violation::triad;
      out.index = t;
      out.message = "triad (" + std::to_string(tr[0]) + "," + std::to_string(tr[1]) + "," +
                    std::to_string(tr[2]) + ") has " + std::to_string(zeros) + " zeros";
      return out;
    }
  }
  for (std::size_t p = 0; p < g.pairs.size(); ++p) {
    const auto& pr = g.pairs[p];
    if (c[pr[0]] == 0 && c[pr[1]] == 0) {
      out.violation = ColoringCheck::Violation::pair;
      out.index = p;
      out.message = "orthogonal pair (" + std::to_string(pr[0]) + "," + std::to_string(pr[1]) +
                    ") has two zeros";
      return out;
    }
  }
  out.valid = true;
  return out;
}

namespace {

class Search {
 public:
  Search(const OrthoGraph& g, SearchOptions opt)
      : g_(g), opt_(opt), value_(g.rays.size(), -1), ray_triads_(g.rays.size()) {
    for (std::size_t t = 0; t < g.triads.size(); ++t)
      for (std::size_t r : g.triads[t]) ray_triads_[r].push_back(t);
  }

  SearchReport run() {
    SearchReport report;
    const bool stopped = descend();
    report.nodes_explored = nodes_;
    report.witness = witness_;
    report.colorable = witness_.has_value();
    report.exhausted = !stopped;
    if (opt_.count) report.count = solutions_;
    return report;
  }

 private:
  // Assigns and propagates; false on conflict. Every assignment goes on the trail.
  bool assign(std::size_t ray, int v) {
    std::vector<std::pair<std::size_t, int>> queue{{ray, v}};
    while (!queue.empty()) {
      auto [r, val] = queue.back();
      queue.pop_back();
      if (value_[r] >= 0) {
        if (value_[r] != val) return false;
        continue;
      }
      value_[r] = val;
      trail_.push_back(r);
      if (val == 0) {
        for (std::size_t n : g_.neighbors[r]) {
          if (value_[n] == 0) return false;
          if (value_[n] < 0) queue.emplace_back(n, 1);
        }
      }
      for (std::size_t t : ray_triads_[r]) {
        int zeros = 0, open = 0;
        std::size_t last_open = 0;
        for (std::size_t m : g_.triads[t]) {
          if (value_[m] == 0) ++zeros;
          if (value_[m] < 0) {
            ++open;
            last_open = m;
          }
        }
        if (zeros > 1) return false;
        if (zeros == 0 && open == 0) return false;
        if (zeros == 0 && open == 1) queue.emplace_back(last_open, 0);
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  std::optional<std::size_t> pick() const {
    std::optional<std::size_t> best;
    std::size_t best_assigned = 0, best_degree = 0;
    for (std::size_t r = 0; r < value_.size(); ++r) {
      if (value_[r] >= 0) continue;
      std::size_t assigned = 0;
      for (std::size_t n : g_.neighbors[r]) assigned += value_[n] >= 0;
      const std::size_t degree = g_.neighbors[r].size();
      if (!best || assigned > best_assigned || (assigned == best_assigned && degree > best_degree)) {
        best = r;
        best_assigned = assigned;
        best_degree = degree;
      }
    }
    return best;
  }

  // Returns true when the search stopped early at a witness.
  bool descend() {
    ++nodes_;
    auto ray = pick();
    if (!ray) {
      ++solutions_;
      if (!witness_) witness_ = Coloring(value_.begin(), value_.end());
      return !opt_.count;
    }
    for (int v : {0, 1}) {
      const std::size_t mark = trail_.size();
      if (assign(*ray, v) && descend()) return true;
      undo(mark);
    }
    return false;
  }

  const OrthoGraph& g_;
  SearchOptions opt_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> ray_triads_;
  std::vector<std::size_t> trail_;
  std::uint64_t nodes_ = 0;
  std::uint64_t solutions_ = 0;
  std::optional<Coloring> witness_;
};

}  // namespace

SearchReport search_coloring(const OrthoGraph& g, SearchOptions options) {
  auto report = Search(g, options).run();
  if (report.witness && !verify_coloring(g, *report.witness).valid) {
    throw std::logic_error("coloring search produced an invalid witness");
  }
  return report;
}

std::vector<quantum::Frame> triad_frames(const OrthoGraph& g) {
  std::vector<quantum::Frame> frames;
  for (const auto& t : g.triads) frames.emplace_back(std::array<Ray, 3>{g.rays[t[0]], g.rays[t[1]], g.rays[t[2]]});
  return frames;
}

models::FactorizedModel model_from_colorings(const OrthoGraph& g, const std::vector<Coloring>& colorings) {
  if (colorings.empty()) throw InputError("need at least one coloring");
  if (g.triads.empty()) throw InputError("ray set has no orthogonal triads");
  models::FactorizedModel m;
  m.variant = models::Variant::spin1;
  const auto frames = triad_frames(g);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    m.settings_a.push_back(models::Setting::of_frame(std::to_string(t), frames[t]));
  }
  m.settings_b = m.settings_a;
  m.p_a.assign(frames.size(), 1.0 / static_cast<double>(frames.size()));
  m.p_b = m.p_a;
  for (std::size_t z = 0; z < colorings.size(); ++z) {
    if (!verify_coloring(g, colorings[z]).valid) throw InputError("coloring " + std::to_string(z) + " is invalid");
    m.z.push_back("c" + std::to_string(z));
    m.p_z.push_back(1.0 / static_cast<double>(colorings.size()));
  }
  m.response_f.assign(frames.size(), {});
  for (std::size_t t = 0; t < g.triads.size(); ++t)
    for (const auto& c : colorings) {
      std::size_t zero_at = 0;
      while (c[g.triads[t][zero_at]] != 0) ++zero_at;
      m.response_f[t].push_back(zero_at);
    }
  m.response_g = m.response_f;
  return m;
}

namespace {

std::size_t find_frame(const std::vector<models::Setting>& settings, const quantum::Frame& f, const char* side) {
  for (std::size_t s = 0; s < settings.size(); ++s) {
    if (settings[s].frame && settings[s].frame->same_axes(f)) return s;
  }
  throw InputError(std::string("model settings of ") + side + " do not cover every triad of the ray set");
}

}  // namespace

ObstructionReport frame_function_obstruction(const RaySet& rays, const models::FactorizedModel* model) {
  const auto g = orthogonality_graph(rays);
  ObstructionReport report;
  if (!model) {
    report.search = search_coloring(g);
    report.model_exists = report.search.colorable;
    report.reason = report.model_exists
                        ? "a frame function exists on these rays; a deterministic model can be built from it"
                        : "no frame function exists on these rays, so no model satisfies Determinism, Parameter "
                          "Independence, Freedom and perfect correlation on their frames";
    return report;
  }

  model->validate();
  if (model->variant != models::Variant::spin1) throw InputError("obstruction pipeline needs a spin-one model");
  for (const auto& f : triad_frames(g)) {
    find_frame(model->settings_a, f, "A");
    find_frame(model->settings_b, f, "B");
  }

  const auto pairs = models::all_setting_pairs(*model);
  report.correlation = models::check_perfect_correlation(*model, pairs);
  if (!report.correlation->holds) {
    report.reason = "perfect correlation fails at a shared ray";
    return report;
  }

  // F(ray, z) from every frame on either side that contains the ray.
  for (std::size_t z = 0; z < model->z.size(); ++z) {
    Coloring c(g.rays.size(), 1);
    std::vector<bool> seen(g.rays.size(), false);
    auto visit = [&](const std::vector<models::Setting>& settings,
                     const std::vector<std::vector<std::size_t>>& resp) -> bool {
      for (std::size_t s = 0; s < settings.size(); ++s) {
        if (!settings[s].frame) continue;
        for (std::size_t i = 0; i < 3; ++i) {
          auto r = g.rays.find((*settings[s].frame)[i]);
          if (!r) continue;
          const std::uint8_t v = resp[s][z] != i;
          if (seen[*r] && c[*r] != v) return false;
          seen[*r] = true;
          c[*r] = v;
        }
      }
      return true;
    };
    if (!visit(model->settings_a, model->response_f) || !visit(model->settings_b, model->response_g)) {
      report.failing_z = z;
      report.reason = "the outcome at a ray depends on the frame it is measured in";
      report.derived.push_back(std::move(c));
      return report;
    }
    auto check = verify_coloring(g, c);
    report.derived.push_back(std::move(c));
    if (!check.valid && !report.failing_z) {
      report.failing_z = z;
      report.failing_check = check;
    }
  }
  if (report.failing_z) {
    report.reason = "derived frame function is not a valid coloring: " + report.failing_check->message;
    return report;
  }
  report.model_exists = true;
  report.reason = "every hidden value induces a valid frame function";
  return report;
}

RaySet parse_rays(std::istream& in) {
  std::vector<Ray> rays;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::array<double, 3> v{};
    std::string extra;
    if (!(ls >> v[0] >> v[1] >> v[2]) || (ls >> extra)) {
      throw InputError("ray file line " + std::to_string(lineno) + ": expected three reals");
    }
    try {
      rays.push_back(Ray::normalized(v));
    } catch (const InputError& e) {
      throw InputError("ray file line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return RaySet(std::move(rays));
}

void write_rays(const RaySet& rays, std::ostream& out) {
  out << "# " << rays.size() << " rays, one per line\n";
  char buf[96];
  for (const auto& r : rays.rays()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", r[0], r[1], r[2]);
    out << buf;
  }
}

}  // namespace hvlab::ks
