#include "hvlab/finprob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hvlab/errors.hpp"
#include "hvlab/rng.hpp"

namespace hvlab::finprob {

namespace {

void require_normalized(std::span<const double> w, const char* what) {
  if (w.empty()) throw InputError(std::string(what) + ": no atoms");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InputError(std::string(what) + ": weights must be finite and nonnegative");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > kIdentityTol) {
    throw InputError(std::string(what) + ": weights sum to " + std::to_string(total) +
                     ", expected 1");
  }
}

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  require_normalized(weights_, "distribution");
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
  if (n == 0) throw InputError("uniform distribution over an empty set");
  return FiniteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteDistribution FiniteDistribution::point_mass(std::size_t n, std::size_t at) {
  if (at >= n) throw InputError("point mass outside the support");
  std::vector<double> w(n, 0.0);
  w[at] = 1.0;
  return FiniteDistribution(std::move(w));
}

SampleSpace::SampleSpace(std::vector<std::string> atoms, FiniteDistribution dist)
    : atoms_(std::move(atoms)), dist_(std::move(dist)) {
  if (atoms_.size() != dist_.size()) {
    throw InputError("sample space: atom count does not match distribution length");
  }
  std::set<std::string_view> seen;
  for (const auto& a : atoms_) {
    if (!seen.insert(a).second) throw InputError("sample space: duplicate atom '" + a + "'");
  }
}

SampleSpace SampleSpace::indexed(FiniteDistribution dist) {
  std::vector<std::string> atoms(dist.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = std::to_string(i);
  return SampleSpace(std::move(atoms), std::move(dist));
}

std::optional<std::size_t> SampleSpace::index_of(std::string_view atom) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), atom);
  if (it == atoms_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

RandomVariable::RandomVariable(std::string name, std::vector<std::string> codomain,
                               std::vector<std::size_t> assignment)
    : name_(std::move(name)), codomain_(std::move(codomain)), assignment_(std::move(assignment)) {
  if (codomain_.empty()) throw InputError("random variable '" + name_ + "': empty codomain");
  for (std::size_t v : assignment_) {
    if (v >= codomain_.size()) {
      throw InputError("random variable '" + name_ + "': value outside codomain");
    }
  }
}

RandomVariable RandomVariable::identity(const SampleSpace& space, std::string name) {
  std::vector<std::size_t> assignment(space.size());
  std::iota(assignment.begin(), assignment.end(), std::size_t{0});
  return RandomVariable(std::move(name), space.atoms(), std::move(assignment));
}

RandomVariable RandomVariable::constant(const SampleSpace& space, std::string name,
                                        std::string value) {
  return RandomVariable(std::move(name), {std::move(value)},
                        std::vector<std::size_t>(space.size(), 0));
}

JointTable::JointTable(std::vector<Axis> axes, std::vector<double> cells)
    : axes_(std::move(axes)), cells_(std::move(cells)) {
  std::size_t expected = 1;
  for (const auto& ax : axes_) {
    if (ax.values.empty()) throw InputError("joint table: axis '" + ax.name + "' has no values");
    expected *= ax.values.size();
  }
  if (cells_.size() != expected) throw InputError("joint table: cell count does not match axes");
  require_normalized(cells_, "joint table");
  strides_.assign(axes_.size(), 1);
  for (std::size_t k = axes_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * axes_[k].values.size();
  }
}

std::vector<std::size_t> JointTable::shape() const {
  std::vector<std::size_t> s;
  s.reserve(axes_.size());
  for (const auto& ax : axes_) s.push_back(ax.values.size());
  return s;
}

std::size_t JointTable::axis_index(std::string_view name) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].name == name) return k;
  }
  throw InputError("joint table: no variable named '" + std::string(name) + "'");
}

std::size_t JointTable::flat_index(std::span<const std::size_t> values) const {
  if (values.size() != axes_.size()) throw InputError("joint table: index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] >= axes_[k].values.size()) throw InputError("joint table: index out of range");
    flat += values[k] * strides_[k];
  }
  return flat;
}

std::vector<std::size_t> JointTable::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

JointTable JointTable::marginal(std::span<const std::string> keep) const {
  std::vector<std::size_t> kept;
  std::vector<Axis> axes;
  for (const auto& name : keep) {
    kept.push_back(axis_index(name));
    axes.push_back(axes_[kept.back()]);
  }
  std::size_t out_size = 1;
  for (const auto& ax : axes) out_size *= ax.values.size();
  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> out_strides(kept.size(), 1);
  for (std::size_t k = kept.size(); k-- > 1;) {
    out_strides[k - 1] = out_strides[k] * axes[k].values.size();
  }
  for (std::size_t flat = 0; flat < cells_.size(); ++flat) {
    auto idx = unflatten(flat);
    std::size_t o = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) o += idx[kept[k]] * out_strides[k];
    out[o] += cells_[flat];
  }
  return JointTable(std::move(axes), std::move(out));
}

ProductSpace product_measure(std::span<const SampleSpace> factors,
                             std::span<const std::string> names) {
  if (factors.empty()) throw InputError("product measure of an empty factor list");
  if (!names.empty() && names.size() != factors.size()) {
    throw InputError("product measure: one projection name per factor required");
  }
  std::size_t total = 1;
  for (const auto& f : factors) total *= f.size();

  std::vector<std::string> atoms(total);
  std::vector<double> weights(total);
  std::vector<std::vector<std::size_t>> coords(factors.size(), std::vector<std::size_t>(total));
  std::vector<std::size_t> idx(factors.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::string label = "(";
    double w = 1.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k) label += ",";
      label += factors[k].atoms()[idx[k]];
      w *= factors[k].weight(idx[k]);
      coords[k][flat] = idx[k];
    }
    atoms[flat] = label + ")";
    weights[flat] = w;
    for (std::size_t k = factors.size(); k-- > 0;) {
      if (++idx[k] < factors[k].size()) break;
      idx[k] = 0;
    }
  }

  ProductSpace out{SampleSpace(std::move(atoms), FiniteDistribution(std::move(weights))), {}};
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::string name = names.empty() ? "X" + std::to_string(k) : names[k];
    out.projections.emplace_back(std::move(name), factors[k].atoms(), std::move(coords[k]));
  }
  return out;
}

JointTable push_forward(const SampleSpace& space, std::span<const RandomVariable> rvs) {
  std::vector<JointTable::Axis> axes;
  std::vector<std::size_t> strides(rvs.size(), 1);
  std::size_t size = 1;
  for (const auto& rv : rvs) {
    if (!rv.defined_on(space)) {
      throw InputError("random variable '" + rv.name() + "' is not defined on this space");
    }
    axes.push_back({rv.name(), rv.codomain()});
    size *= rv.codomain().size();
  }
  for (std::size_t k = rvs.size(); k-- > 1;) strides[k - 1] = strides[k] * rvs[k].codomain().size();
  std::vector<double> cells(size, 0.0);
  for (std::size_t atom = 0; atom < space.size(); ++atom) {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < rvs.size(); ++k) flat += rvs[k].value_at(atom) * strides[k];
    cells[flat] += space.weight(atom);
  }
  return JointTable(std::move(axes), std::move(cells));
}

namespace {

struct ResolvedEvent {
  std::vector<long> fixed;  // per axis: required value or -1
};

ResolvedEvent resolve(const JointTable& table, std::span<const Assignment> given) {
  ResolvedEvent ev{std::vector<long>(table.rank(), -1)};
  for (const auto& [name, value] : given) {
    std::size_t k = table.axis_index(name);
    if (value >= table.axes()[k].values.size()) {
      throw InputError("conditioning value out of range for '" + name + "'");
    }
    if (ev.fixed[k] >= 0 && ev.fixed[k] != static_cast<long>(value)) {
      throw InputError("contradictory assignment for '" + name + "'");
    }
    ev.fixed[k] = static_cast<long>(value);
  }
  return ev;
}

bool matches(const ResolvedEvent& ev, std::span<const std::size_t> idx) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (ev.fixed[k] >= 0 && static_cast<long>(idx[k]) != ev.fixed[k]) return false;
  }
  return true;
}

}  // namespace

double event_probability(const JointTable& table, std::span<const Assignment> given) {
  auto ev = resolve(table, given);
  double p = 0.0;
  for (std::size_t flat = 0; flat < table.cells().size(); ++flat) {
    if (matches(ev, table.unflatten(flat))) p += table.cells()[flat];
  }
  return p;
}

JointTable condition(const JointTable& table, std::span<const Assignment> given) {
  auto ev = resolve(table, given);
  std::vector<std::size_t> free_axes;
  std::vector<JointTable::Axis> axes;
  for (std::size_t k = 0; k < table.rank(); ++k) {
    if (ev.fixed[k] < 0) {
      free_axes.push_back(k);
      axes.push_back(table.axes()[k]);
    }
  }
  std::size_t size = 1;
  for (const auto& ax : axes) size *= ax.values.size();
  std::vector<std::size_t> strides(axes.size(), 1);
  for (std::size_t k = axes.size(); k-- > 1;) strides[k - 1] = strides[k] * axes[k].values.size();

  std::vector<double> cells(size, 0.0);
  double mass = 0.0;
  for (std::size_t flat = 0; flat < table.cells().size(); ++flat) {
    auto idx = table.unflatten(flat);
    if (!matches(ev, idx)) continue;
    std::size_t o = 0;
    for (std::size_t k = 0; k < free_axes.size(); ++k) o += idx[free_axes[k]] * strides[k];
    cells[o] += table.cells()[flat];
    mass += table.cells()[flat];
  }
  if (!(mass > 0.0)) throw ConditioningError("conditioning event has probability zero");
  for (double& c : cells) c /= mass;
  return JointTable(std::move(axes), std::move(cells));
}

IndependenceReport check_mutual_independence(std::span<const RandomVariable> rvs,
                                             const SampleSpace& space, double tol) {
  if (!(tol > 0.0)) throw InputError("independence tolerance must be positive");
  auto joint = push_forward(space, rvs);
  std::vector<std::vector<double>> marginals;
  for (const auto& rv : rvs) {
    std::vector<double> m(rv.codomain().size(), 0.0);
    for (std::size_t atom = 0; atom < space.size(); ++atom) m[rv.value_at(atom)] += space.weight(atom);
    marginals.push_back(std::move(m));
  }
  IndependenceReport report{true, 0.0};
  for (std::size_t flat = 0; flat < joint.cells().size(); ++flat) {
    auto idx = joint.unflatten(flat);
    double product = 1.0;
    for (std::size_t k = 0; k < idx.size(); ++k) product *= marginals[k][idx[k]];
    report.max_residual = std::max(report.max_residual, std::abs(joint.cells()[flat] - product));
  }
  report.independent = report.max_residual <= tol;
  return report;
}

std::size_t draw_index(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

SampleStream::SampleStream(const SampleSpace& space, std::uint64_t seed, std::size_t n)
    : cumulative_(space.size()), seed_(seed), n_(n) {
  std::partial_sum(space.dist().weights().begin(), space.dist().weights().end(),
                   cumulative_.begin());
}

std::size_t SampleStream::next() {
  if (done()) throw InputError("sample stream exhausted");
  return draw_index(cumulative_, counter_uniform(seed_, cursor_++));
}

std::vector<std::size_t> SampleStream::take_all() {
  std::vector<std::size_t> out;
  out.reserve(remaining());
  while (!done()) out.push_back(next());
  return out;
}

SampleStream sample(const SampleSpace& space, std::uint64_t seed, std::size_t n) {
  return SampleStream(space, seed, n);
}

}  // namespace hvlab::finprob
