#include "hvlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hvlab/errors.hpp"
#include "hvlab/rng.hpp"

namespace hvlab::models {

using finprob::FiniteDistribution;
using finprob::JointTable;
using finprob::RandomVariable;
using finprob::SampleSpace;

std::size_t outcome_count(Variant v) noexcept { return v == Variant::photon ? 2 : 3; }

std::vector<std::string> outcome_labels(Variant v) {
  if (v == Variant::photon) return {"0", "1"};
  return {"z1", "z2", "z3"};
}

const char* variant_name(Variant v) noexcept { return v == Variant::photon ? "photon" : "spin1"; }

Setting Setting::of_angle(std::string label, double radians) {
  return Setting{std::move(label), quantum::Angle(radians), std::nullopt};
}

Setting Setting::of_frame(std::string label, const quantum::Frame& f) {
  return Setting{std::move(label), std::nullopt, f};
}

namespace {

void require_full_support(std::span<const double> w, const std::string& what) {
  FiniteDistribution check(std::vector<double>(w.begin(), w.end()));
  for (double x : w) {
    if (!(x > 0.0)) throw InputError(what + " must be strictly positive on its declared set");
  }
}

void require_distinct_labels(const std::vector<Setting>& s, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& x : s) {
    if (!seen.insert(x.label).second) throw InputError(what + ": duplicate setting label '" + x.label + "'");
  }
}

std::vector<std::string> labels_of(const std::vector<Setting>& s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (const auto& x : s) out.push_back(x.label);
  return out;
}

std::vector<Setting> settings_from_labels(const std::vector<std::string>& labels) {
  std::vector<Setting> out;
  for (const auto& l : labels) out.push_back(Setting{l, std::nullopt, std::nullopt});
  return out;
}

template <class Row>
void require_shape(const std::vector<std::vector<Row>>& m, std::size_t rows, std::size_t cols,
                   const std::string& what) {
  if (m.size() != rows) throw InputError(what + ": one row per setting required");
  for (const auto& r : m) {
    if (r.size() != cols) throw InputError(what + ": one entry per hidden value required");
  }
}

void require_kernel_rows(const std::vector<std::vector<std::array<double, 2>>>& k,
                         const std::string& what) {
  for (const auto& row : k)
    for (const auto& d : row) {
      try {
        FiniteDistribution check({d[0], d[1]});
      } catch (const InputError& e) {
        throw InputError(what + ": " + e.what());
      }
    }
}

}  // namespace

void FactorizedModel::validate() const {
  if (settings_a.empty() || settings_b.empty() || z.empty()) {
    throw InputError("factorized model: settings and hidden values must be nonempty");
  }
  if (p_a.size() != settings_a.size() || p_b.size() != settings_b.size() || p_z.size() != z.size()) {
    throw InputError("factorized model: distribution length mismatch");
  }
  require_full_support(p_a, "settings distribution p_a");
  require_full_support(p_b, "settings distribution p_b");
  require_full_support(p_z, "hidden-variable distribution p_z");
  require_distinct_labels(settings_a, "settings_a");
  require_distinct_labels(settings_b, "settings_b");
  require_shape(response_f, settings_a.size(), z.size(), "response_f");
  require_shape(response_g, settings_b.size(), z.size(), "response_g");
  const std::size_t n_out = outcome_count(variant);
  for (const auto* resp : {&response_f, &response_g})
    for (const auto& row : *resp)
      for (std::size_t o : row)
        if (o >= n_out) throw InputError("factorized model: response outside the outcome set");
}

void StochasticKernelModel::validate() const {
  if (settings_a.empty() || settings_b.empty() || z.empty()) {
    throw InputError("stochastic model: settings and hidden values must be nonempty");
  }
  if (p_a.size() != settings_a.size() || p_b.size() != settings_b.size() || p_z.size() != z.size()) {
    throw InputError("stochastic model: distribution length mismatch");
  }
  require_full_support(p_a, "settings distribution p_a");
  require_full_support(p_b, "settings distribution p_b");
  require_full_support(p_z, "hidden-variable distribution p_z");
  require_distinct_labels(settings_a, "settings_a");
  require_distinct_labels(settings_b, "settings_b");
  require_shape(kernel_f, settings_a.size(), z.size(), "kernel_f");
  require_shape(kernel_g, settings_b.size(), z.size(), "kernel_g");
  require_kernel_rows(kernel_f, "kernel_f");
  require_kernel_rows(kernel_g, "kernel_g");
}

void RawModel::validate() const {
  for (const auto* rv : {&a, &b, &f, &g, &z}) {
    if (!rv->defined_on(space)) {
      throw InputError("raw model: variable '" + rv->name() + "' is not total on the space");
    }
  }
}

double ConditionalTable::mismatch(std::size_t a, std::size_t b) const {
  if (nf() != 2 || ng() != 2) throw InputError("mismatch is defined for binary outcomes only");
  return at(a, b, 0, 1) + at(a, b, 1, 0);
}

double ConditionalTable::max_abs_diff(const ConditionalTable& other) const {
  if (na() != other.na() || nb() != other.nb() || nf() != other.nf() || ng() != other.ng()) {
    throw InputError("conditional tables have different shapes");
  }
  double m = 0.0;
  for (std::size_t a = 0; a < na(); ++a)
    for (std::size_t b = 0; b < nb(); ++b) {
      if (!is_present(a, b) || !other.is_present(a, b)) continue;
      for (std::size_t k = 0; k < nf() * ng(); ++k) {
        m = std::max(m, std::abs(cells[offset(a, b) + k] - other.cells[offset(a, b) + k]));
      }
    }
  return m;
}

void ConditionalTable::validate(double tol) const {
  if (na() == 0 || nb() == 0 || nf() == 0 || ng() == 0) throw InputError("conditional table: empty axis");
  if (cells.size() != na() * nb() * nf() * ng()) throw InputError("conditional table: cell count mismatch");
  if (present.size() != na() * nb()) throw InputError("conditional table: presence flags mismatch");
  for (std::size_t a = 0; a < na(); ++a)
    for (std::size_t b = 0; b < nb(); ++b) {
      if (!is_present(a, b)) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < nf() * ng(); ++k) {
        const double c = cells[offset(a, b) + k];
        if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("conditional table: negative or non-finite cell");
        s += c;
      }
      if (std::abs(s - 1.0) > tol) throw InputError("conditional table: per-setting table not normalized");
    }
}

ConditionalTable make_table(std::vector<Setting> settings_a, std::vector<Setting> settings_b,
                            std::vector<std::string> outcomes_f, std::vector<std::string> outcomes_g) {
  ConditionalTable t;
  t.settings_a = std::move(settings_a);
  t.settings_b = std::move(settings_b);
  t.outcomes_f = std::move(outcomes_f);
  t.outcomes_g = std::move(outcomes_g);
  t.cells.assign(t.na() * t.nb() * t.nf() * t.ng(), 0.0);
  t.present.assign(t.na() * t.nb(), true);
  return t;
}

ConditionalTable photon_table(std::span<const double> angles_a, std::span<const double> angles_b) {
  std::vector<Setting> sa, sb;
  for (std::size_t i = 0; i < angles_a.size(); ++i) sa.push_back(Setting::of_angle(std::to_string(i), angles_a[i]));
  for (std::size_t i = 0; i < angles_b.size(); ++i) sb.push_back(Setting::of_angle(std::to_string(i), angles_b[i]));
  auto t = make_table(std::move(sa), std::move(sb), outcome_labels(Variant::photon),
                      outcome_labels(Variant::photon));
  for (std::size_t a = 0; a < t.na(); ++a)
    for (std::size_t b = 0; b < t.nb(); ++b) {
      auto s = quantum::photon_stats(*t.settings_a[a].angle, *t.settings_b[b].angle);
      t.at(a, b, 0, 0) = s.p00;
      t.at(a, b, 0, 1) = s.p01;
      t.at(a, b, 1, 0) = s.p10;
      t.at(a, b, 1, 1) = s.p11;
    }
  return t;
}

RawModel induced_raw_model(const FactorizedModel& m) {
  m.validate();
  const std::array<SampleSpace, 3> factors{
      SampleSpace(labels_of(m.settings_a), FiniteDistribution(m.p_a)),
      SampleSpace(labels_of(m.settings_b), FiniteDistribution(m.p_b)),
      SampleSpace(m.z, FiniteDistribution(m.p_z))};
  const std::array<std::string, 3> names{"A", "B", "Z"};
  auto product = finprob::product_measure(factors, names);

  const auto& pa = product.projections[0];
  const auto& pb = product.projections[1];
  const auto& pz = product.projections[2];
  const std::size_t n = product.space.size();
  std::vector<std::size_t> f(n), g(n);
  for (std::size_t atom = 0; atom < n; ++atom) {
    f[atom] = m.response_f[pa.value_at(atom)][pz.value_at(atom)];
    g[atom] = m.response_g[pb.value_at(atom)][pz.value_at(atom)];
  }
  auto outcomes = outcome_labels(m.variant);
  return RawModel{product.space,
                  pa,
                  pb,
                  RandomVariable("F", outcomes, std::move(f)),
                  RandomVariable("G", outcomes, std::move(g)),
                  pz};
}

ConditionalTable conditional_table(const JointTable& joint) {
  const std::array<std::string, 4> keep{"A", "B", "F", "G"};
  auto abfg = joint.marginal(keep);
  const auto& ax = abfg.axes();
  auto t = make_table(settings_from_labels(ax[0].values), settings_from_labels(ax[1].values),
                      ax[2].values, ax[3].values);
  const std::size_t block = t.nf() * t.ng();
  for (std::size_t a = 0; a < t.na(); ++a)
    for (std::size_t b = 0; b < t.nb(); ++b) {
      const std::size_t base = t.offset(a, b);  // same row-major layout as the marginal
      double mass = 0.0;
      for (std::size_t k = 0; k < block; ++k) mass += abfg.cells()[base + k];
      if (!(mass > 0.0)) {
        t.present[a * t.nb() + b] = false;
        continue;
      }
      for (std::size_t k = 0; k < block; ++k) t.cells[base + k] = abfg.cells()[base + k] / mass;
    }
  return t;
}

ConditionalTable conditional_table(const RawModel& m) {
  m.validate();
  const std::array<RandomVariable, 4> rvs{
      RandomVariable("A", m.a.codomain(), m.a.assignment()),
      RandomVariable("B", m.b.codomain(), m.b.assignment()),
      RandomVariable("F", m.f.codomain(), m.f.assignment()),
      RandomVariable("G", m.g.codomain(), m.g.assignment())};
  return conditional_table(finprob::push_forward(m.space, rvs));
}

FreedomReport check_freedom(const RawModel& m, double tol) {
  m.validate();
  FreedomReport r;
  const std::array<RandomVariable, 3> abz{m.a, m.b, m.z};
  auto triple = finprob::check_mutual_independence(abz, m.space, tol);
  r.probabilistic = triple.independent;
  r.residual = triple.max_residual;

  auto pair = [&](const RandomVariable& x, const RandomVariable& y) {
    const std::array<RandomVariable, 2> xy{x, y};
    return finprob::check_mutual_independence(xy, m.space, tol);
  };
  auto ab = pair(m.a, m.b), az = pair(m.a, m.z), bz = pair(m.b, m.z);
  r.pair_ab = ab.independent;
  r.pair_az = az.independent;
  r.pair_bz = bz.independent;
  r.residual_ab = ab.max_residual;
  r.residual_az = az.max_residual;
  r.residual_bz = bz.max_residual;

  const std::size_t na = m.a.codomain().size(), nb = m.b.codomain().size(), nz = m.z.codomain().size();
  std::vector<bool> seen(na * nb * nz, false);
  for (std::size_t atom = 0; atom < m.space.size(); ++atom) {
    seen[(m.a.value_at(atom) * nb + m.b.value_at(atom)) * nz + m.z.value_at(atom)] = true;
  }
  r.surjective = true;
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      r.surjective = false;
      r.missing_triple = std::array<std::size_t, 3>{k / (nb * nz), (k / nz) % nb, k % nz};
      break;
    }
  }
  return r;
}

namespace {

// Extracts outcome(setting, z) on positive-weight atoms; returns the first conflict.
std::optional<PIWitness> extract_response(const RawModel& m, const RandomVariable& setting,
                                          const RandomVariable& outcome, char name,
                                          std::vector<std::vector<long>>& table) {
  const std::size_t ns = setting.codomain().size(), nz = m.z.codomain().size();
  table.assign(ns, std::vector<long>(nz, -1));
  std::vector<std::vector<std::size_t>> first_atom(ns, std::vector<std::size_t>(nz, 0));
  for (std::size_t atom = 0; atom < m.space.size(); ++atom) {
    if (!(m.space.weight(atom) > 0.0)) continue;
    const std::size_t s = setting.value_at(atom), z = m.z.value_at(atom);
    const long v = static_cast<long>(outcome.value_at(atom));
    if (table[s][z] < 0) {
      table[s][z] = v;
      first_atom[s][z] = atom;
    } else if (table[s][z] != v) {
      return PIWitness{name, s, z, first_atom[s][z], atom};
    }
  }
  return std::nullopt;
}

}  // namespace

PIReport check_parameter_independence(const RawModel& m) {
  m.validate();
  PIReport r;
  r.witness = extract_response(m, m.a, m.f, 'F', r.f_hat);
  if (!r.witness) r.witness = extract_response(m, m.b, m.g, 'G', r.g_hat);
  r.holds = !r.witness.has_value();
  return r;
}

FactorizedModel factorize(const RawModel& m, Variant variant) {
  m.validate();
  const std::size_t n_out = outcome_count(variant);
  if (m.f.codomain().size() != n_out || m.g.codomain().size() != n_out) {
    throw InputError(std::string("raw model outcomes do not match the ") + variant_name(variant) + " variant");
  }
  auto freedom = check_freedom(m, finprob::kIdentityTol);
  if (!freedom.probabilistic) {
    throw RefusalError("Freedom", "Freedom fails: (A, B, Z) are not independent (residual " +
                                      std::to_string(freedom.residual) + ")");
  }
  auto pi = check_parameter_independence(m);
  if (!pi.holds) {
    throw RefusalError("Parameter Independence",
                       std::string("Parameter Independence fails: ") + pi.witness->variable +
                           " depends on more than (setting, Z)");
  }

  auto law = [&](const RandomVariable& rv) {
    std::vector<double> w(rv.codomain().size(), 0.0);
    for (std::size_t atom = 0; atom < m.space.size(); ++atom) w[rv.value_at(atom)] += m.space.weight(atom);
    return w;
  };
  FactorizedModel out;
  out.variant = variant;
  out.settings_a = settings_from_labels(m.a.codomain());
  out.settings_b = settings_from_labels(m.b.codomain());
  out.p_a = law(m.a);
  out.p_b = law(m.b);
  for (double w : out.p_a)
    if (!(w > 0.0)) throw RefusalError("Full support", "settings of A lack full support");
  for (double w : out.p_b)
    if (!(w > 0.0)) throw RefusalError("Full support", "settings of B lack full support");

  const auto pz = law(m.z);
  std::vector<std::size_t> kept;
  double kept_mass = 0.0;
  for (std::size_t k = 0; k < pz.size(); ++k) {
    if (pz[k] > 0.0) {
      kept.push_back(k);
      kept_mass += pz[k];
    }
  }
  for (std::size_t k : kept) {
    out.z.push_back(m.z.codomain()[k]);
    out.p_z.push_back(pz[k] / kept_mass);
  }
  auto restrict = [&](const std::vector<std::vector<long>>& hat) {
    std::vector<std::vector<std::size_t>> resp(hat.size());
    for (std::size_t s = 0; s < hat.size(); ++s)
      for (std::size_t k : kept) {
        // Positive settings weight and positive P_Z(k) with a product law: the fiber is non-null.
        resp[s].push_back(static_cast<std::size_t>(hat[s][k]));
      }
    return resp;
  };
  out.response_f = restrict(pi.f_hat);
  out.response_g = restrict(pi.g_hat);
  out.validate();
  return out;
}

ConditionalTable predicted_table(const FactorizedModel& m) {
  m.validate();
  auto outcomes = outcome_labels(m.variant);
  auto t = make_table(m.settings_a, m.settings_b, outcomes, outcomes);
  for (std::size_t a = 0; a < t.na(); ++a)
    for (std::size_t b = 0; b < t.nb(); ++b)
      for (std::size_t z = 0; z < m.z.size(); ++z) {
        t.at(a, b, m.response_f[a][z], m.response_g[b][z]) += m.p_z[z];
      }
  return t;
}

ConditionalTable simulate(const FactorizedModel& m, std::uint64_t shots, std::uint64_t seed) {
  m.validate();
  if (shots == 0) throw InputError("simulate requires at least one shot");
  const std::size_t na = m.settings_a.size(), nb = m.settings_b.size(), nz = m.z.size();
  std::vector<double> cumulative(na * nb * nz);
  double acc = 0.0;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t z = 0; z < nz; ++z) {
        acc += m.p_a[a] * m.p_b[b] * m.p_z[z];
        cumulative[(a * nb + b) * nz + z] = acc;
      }

  auto outcomes = outcome_labels(m.variant);
  auto t = make_table(m.settings_a, m.settings_b, outcomes, outcomes);
  const std::size_t no = outcomes.size();
  std::vector<std::uint64_t> tally(t.cells.size(), 0);
  t.counts.assign(na * nb, 0);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const std::size_t idx = finprob::draw_index(cumulative, counter_uniform(seed, k));
    const std::size_t z = idx % nz, b = (idx / nz) % nb, a = idx / (nz * nb);
    ++t.counts[a * nb + b];
    ++tally[t.offset(a, b) + m.response_f[a][z] * no + m.response_g[b][z]];
  }
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      const auto n = t.counts[a * nb + b];
      t.present[a * nb + b] = n > 0;
      if (n == 0) continue;
      for (std::size_t k = 0; k < no * no; ++k) {
        t.cells[t.offset(a, b) + k] = static_cast<double>(tally[t.offset(a, b) + k]) / static_cast<double>(n);
      }
    }
  return t;
}

JointTable joint_table(const StochasticKernelModel& m) {
  m.validate();
  const auto outcomes = outcome_labels(Variant::photon);
  std::vector<JointTable::Axis> axes{{"A", labels_of(m.settings_a)},
                                     {"B", labels_of(m.settings_b)},
                                     {"F", outcomes},
                                     {"G", outcomes},
                                     {"Z", m.z}};
  const std::size_t na = m.settings_a.size(), nb = m.settings_b.size(), nz = m.z.size();
  std::vector<double> cells;
  cells.reserve(na * nb * 4 * nz);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t g = 0; g < 2; ++g)
          for (std::size_t z = 0; z < nz; ++z) {
            cells.push_back(m.p_a[a] * m.p_b[b] * m.p_z[z] * m.kernel_f[a][z][f] * m.kernel_g[b][z][g]);
          }
  return JointTable(std::move(axes), std::move(cells));
}

JointTable embed_with_trivial_z(const ConditionalTable& t, std::span<const double> p_a,
                                std::span<const double> p_b) {
  t.validate();
  if (p_a.size() != t.na() || p_b.size() != t.nb()) throw InputError("settings weights do not match the table");
  std::vector<JointTable::Axis> axes{{"A", labels_of(t.settings_a)},
                                     {"B", labels_of(t.settings_b)},
                                     {"F", t.outcomes_f},
                                     {"G", t.outcomes_g},
                                     {"Z", {"z0"}}};
  std::vector<double> cells(t.cells.size());
  for (std::size_t a = 0; a < t.na(); ++a)
    for (std::size_t b = 0; b < t.nb(); ++b)
      for (std::size_t k = 0; k < t.nf() * t.ng(); ++k) {
        cells[t.offset(a, b) + k] = p_a[a] * p_b[b] * t.cells[t.offset(a, b) + k];
      }
  return JointTable(std::move(axes), std::move(cells));
}

BellLocalityReport check_bell_locality(const JointTable& joint, double tol) {
  if (!(tol > 0.0)) throw InputError("Bell-locality tolerance must be positive");
  const std::array<std::string, 5> order{"A", "B", "F", "G", "Z"};
  auto j = joint.marginal(order);
  const auto shape = j.shape();
  const std::size_t na = shape[0], nb = shape[1], nf = shape[2], ng = shape[3], nz = shape[4];
  auto p = [&](std::size_t a, std::size_t b, std::size_t f, std::size_t g, std::size_t z) {
    return j.cells()[(((a * nb + b) * nf + f) * ng + g) * nz + z];
  };

  // Marginals needed for the per-wing conditionals.
  std::vector<double> abz(na * nb * nz, 0.0), afz(na * nf * nz, 0.0), az(na * nz, 0.0),
      bgz(nb * ng * nz, 0.0), bz(nb * nz, 0.0), ab(na * nb, 0.0), pz(nz, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t g = 0; g < ng; ++g)
          for (std::size_t z = 0; z < nz; ++z) {
            const double w = p(a, b, f, g, z);
            abz[(a * nb + b) * nz + z] += w;
            afz[(a * nf + f) * nz + z] += w;
            az[a * nz + z] += w;
            bgz[(b * ng + g) * nz + z] += w;
            bz[b * nz + z] += w;
            ab[a * nb + b] += w;
            pz[z] += w;
          }

  BellLocalityReport r;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t z = 0; z < nz; ++z) {
        const double m = abz[(a * nb + b) * nz + z];
        if (!(m > 0.0)) continue;
        for (std::size_t f = 0; f < nf; ++f)
          for (std::size_t g = 0; g < ng; ++g) {
            const double lhs = p(a, b, f, g, z) / m;
            const double rhs = (afz[(a * nf + f) * nz + z] / az[a * nz + z]) *
                               (bgz[(b * ng + g) * nz + z] / bz[b * nz + z]);
            r.locality_residual = std::max(r.locality_residual, std::abs(lhs - rhs));
          }
      }
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) {
      const double m = ab[a * nb + b];
      if (!(m > 0.0)) continue;
      for (std::size_t z = 0; z < nz; ++z) {
        r.freedom_residual = std::max(r.freedom_residual, std::abs(abz[(a * nb + b) * nz + z] / m - pz[z]));
      }
    }
  r.bell_local = r.locality_residual <= tol;
  r.freedom = r.freedom_residual <= tol;
  return r;
}

Derandomization derandomize(const StochasticKernelModel& m, double tol) {
  m.validate();
  const auto outcomes = outcome_labels(Variant::photon);
  Derandomization d{make_table(m.settings_a, m.settings_b, outcomes, outcomes), 0.0, false};
  // Lebesgue measure of {s in [0,1] : [s <= p] = value}.
  auto measure = [](std::size_t value, double p) { return value == 1 ? p : 1.0 - p; };
  for (std::size_t a = 0; a < d.table.na(); ++a)
    for (std::size_t b = 0; b < d.table.nb(); ++b)
      for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t g = 0; g < 2; ++g) {
          double s = 0.0;
          for (std::size_t z = 0; z < m.z.size(); ++z) {
            s += m.p_z[z] * measure(f, m.kernel_f[a][z][1]) * measure(g, m.kernel_g[b][z][1]);
          }
          d.table.at(a, b, f, g) = s;
        }
  const auto own = conditional_table(joint_table(m));
  d.max_abs_diff = d.table.max_abs_diff(own);
  d.certified = d.max_abs_diff <= tol;
  return d;
}

StochasticKernelModel as_kernel_model(const FactorizedModel& m) {
  m.validate();
  if (m.variant != Variant::photon) throw InputError("kernel models are defined for binary outcomes only");
  StochasticKernelModel k{m.settings_a, m.settings_b, m.p_a, m.p_b, m.z, m.p_z, {}, {}};
  auto lift = [](const std::vector<std::vector<std::size_t>>& resp) {
    std::vector<std::vector<std::array<double, 2>>> out(resp.size());
    for (std::size_t s = 0; s < resp.size(); ++s)
      for (std::size_t o : resp[s]) out[s].push_back(o == 1 ? std::array<double, 2>{0.0, 1.0}
                                                          : std::array<double, 2>{1.0, 0.0});
    return out;
  };
  k.kernel_f = lift(m.response_f);
  k.kernel_g = lift(m.response_g);
  return k;
}

std::optional<FactorizedModel> deterministic_equivalent(const StochasticKernelModel& m) {
  m.validate();
  auto lower = [](const std::vector<std::vector<std::array<double, 2>>>& kernel)
      -> std::optional<std::vector<std::vector<std::size_t>>> {
    std::vector<std::vector<std::size_t>> out(kernel.size());
    for (std::size_t s = 0; s < kernel.size(); ++s)
      for (const auto& row : kernel[s]) {
        if (row[1] == 1.0 && row[0] == 0.0) out[s].push_back(1);
        else if (row[0] == 1.0 && row[1] == 0.0) out[s].push_back(0);
        else return std::nullopt;
      }
    return out;
  };
  auto f = lower(m.kernel_f);
  auto g = lower(m.kernel_g);
  if (!f || !g) return std::nullopt;
  return FactorizedModel{Variant::photon, m.settings_a, m.settings_b, m.p_a, m.p_b, m.z, m.p_z,
                         std::move(*f), std::move(*g)};
}

PerfectCorrelationReport check_perfect_correlation(
    const FactorizedModel& m, std::span<const std::pair<std::size_t, std::size_t>> frame_pairs) {
  m.validate();
  if (m.variant != Variant::spin1) throw InputError("perfect correlation applies to spin-one models");
  PerfectCorrelationReport r;
  for (const auto& [fa, fb] : frame_pairs) {
    if (fa >= m.settings_a.size() || fb >= m.settings_b.size()) {
      throw InputError("frame pair refers to a setting outside the model");
    }
    const auto& sa = m.settings_a[fa];
    const auto& sb = m.settings_b[fb];
    if (!sa.frame || !sb.frame) throw InputError("spin-one settings must carry frames");
    bool shared = false;
    for (std::size_t i = 0; i < 3; ++i) {
      const int j = sb.frame->position_of((*sa.frame)[i]);
      if (j < 0) continue;
      shared = true;
      ++r.shared_rays_checked;
      for (std::size_t z = 0; z < m.z.size(); ++z) {
        const bool f_i = m.response_f[fa][z] != i;
        const bool g_j = m.response_g[fb][z] != static_cast<std::size_t>(j);
        if (f_i != g_j && !r.witness) {
          r.witness = CorrelationWitness{z, fa, fb, i, static_cast<std::size_t>(j)};
        }
      }
    }
    if (!shared) r.skipped.emplace_back(fa, fb);
  }
  r.holds = !r.witness.has_value();
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> all_setting_pairs(const FactorizedModel& m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < m.settings_a.size(); ++a)
    for (std::size_t b = 0; b < m.settings_b.size(); ++b) out.emplace_back(a, b);
  return out;
}

}  // namespace hvlab::models
