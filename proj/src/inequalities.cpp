#include "hvlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hvlab/errors.hpp"
#include "hvlab/finprob.hpp"
#include "hvlab/lp.hpp"

namespace hvlab::inequalities {

namespace {

BooleReport make_report(double lhs, double rhs) {
  return BooleReport{lhs, rhs, rhs - lhs, rhs - lhs >= -kBooleTol};
}

// Ordered pairs of distinct indices; a single setting is paired with itself.
std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n == 1) out.emplace_back(0, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.emplace_back(i, j);
  return out;
}

}  // namespace

BooleReport boole_check(std::span<const double> pz, std::span<const std::uint8_t> f1,
                        std::span<const std::uint8_t> f2, std::span<const std::uint8_t> g1,
                        std::span<const std::uint8_t> g2) {
  const std::size_t n = pz.size();
  if (f1.size() != n || f2.size() != n || g1.size() != n || g2.size() != n) {
    throw InputError("boole check: every variable must be total on X_Z");
  }
  finprob::FiniteDistribution{std::vector<double>(pz.begin(), pz.end())};  // validates weights
  for (auto v : {f1, f2, g1, g2})
    for (auto x : v)
      if (x > 1) throw InputError("boole check: variables must be {0,1}-valued");
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    lhs += pz[z] * (f1[z] != g1[z]);
    rhs += pz[z] * ((f1[z] != g2[z]) + (f2[z] != g1[z]) + (f2[z] != g2[z]));
  }
  return make_report(lhs, rhs);
}

BooleReport boole_check_table(const models::ConditionalTable& t, std::size_t a1, std::size_t a2,
                              std::size_t b1, std::size_t b2) {
  return make_report(t.mismatch(a1, b1), t.mismatch(a1, b2) + t.mismatch(a2, b1) + t.mismatch(a2, b2));
}

BooleReport boole_audit(const models::ConditionalTable& t) {
  std::optional<BooleReport> worst;
  for (auto [a1, a2] : ordered_pairs(t.na()))
    for (auto [b1, b2] : ordered_pairs(t.nb())) {
      auto r = boole_check_table(t, a1, a2, b1, b2);
      if (!worst || r.slack < worst->slack) worst = r;
    }
  return *worst;
}

BooleReport boole_audit(const models::FactorizedModel& m) {
  m.validate();
  if (m.variant != models::Variant::photon) throw InputError("Boole audit needs binary outcomes");
  auto bits = [](const std::vector<std::size_t>& resp) {
    return std::vector<std::uint8_t>(resp.begin(), resp.end());
  };
  std::optional<BooleReport> worst;
  for (auto [a1, a2] : ordered_pairs(m.settings_a.size()))
    for (auto [b1, b2] : ordered_pairs(m.settings_b.size())) {
      auto r = boole_check(m.p_z, bits(m.response_f[a1]), bits(m.response_f[a2]),
                           bits(m.response_g[b1]), bits(m.response_g[b2]));
      if (!worst || r.slack < worst->slack) worst = r;
    }
  return *worst;
}

double f_theta(double theta) noexcept {
  const double s3 = std::sin(3.0 * theta), s2 = std::sin(2.0 * theta), s1 = std::sin(theta);
  return s3 * s3 + s2 * s2 - s1 * s1;
}

ViolationScan scan_f(double min, double max, double step) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min <= max)) {
    throw InputError("scan range must satisfy min <= max");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("scan step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  ViolationScan scan;
  scan.points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = min + static_cast<double>(k) * step;
    const ScanPoint p{theta, f_theta(theta)};
    scan.points.push_back(p);
    if (p.f < 0.0) scan.violations.push_back(p);
  }
  return scan;
}

void write_scan_csv(const ViolationScan& scan, std::ostream& out) {
  out << "theta,f,violation\n";
  char buf[64];
  for (const auto& p : scan.points) {
    std::snprintf(buf, sizeof buf, "%.17g,", p.theta);
    out << buf;
    std::snprintf(buf, sizeof buf, "%.17g,", p.f);
    out << buf << (p.f < 0.0 ? 1 : 0) << '\n';
  }
}

const std::array<DeterministicStrategy, 16>& strategies() {
  static const auto table = [] {
    std::array<DeterministicStrategy, 16> s{};
    for (std::size_t k = 0; k < 16; ++k) {
      s[k].alice = {static_cast<std::uint8_t>(k & 1), static_cast<std::uint8_t>((k >> 1) & 1)};
      s[k].bob = {static_cast<std::uint8_t>((k >> 2) & 1), static_cast<std::uint8_t>((k >> 3) & 1)};
    }
    return s;
  }();
  return table;
}

namespace {

models::ConditionalTable empty_2x2() {
  std::vector<models::Setting> sa{{"0", std::nullopt, std::nullopt}, {"1", std::nullopt, std::nullopt}};
  auto labels = models::outcome_labels(models::Variant::photon);
  return models::make_table(sa, sa, labels, labels);
}

void require_2x2(const models::ConditionalTable& t) {
  if (t.na() != 2 || t.nb() != 2 || t.nf() != 2 || t.ng() != 2) {
    throw InputError("polytope test needs two settings per side and binary outcomes");
  }
  if (std::find(t.present.begin(), t.present.end(), false) != t.present.end()) {
    throw InputError("polytope test needs every setting pair present");
  }
  t.validate(kFeasibilityTol);
}

}  // namespace

models::ConditionalTable mixture_table(std::span<const double> weights) {
  if (weights.size() != 16) throw InputError("mixture needs one weight per strategy");
  auto t = empty_2x2();
  for (std::size_t k = 0; k < 16; ++k) {
    const auto& s = strategies()[k];
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) t.at(a, b, s.alice[a], s.bob[b]) += weights[k];
  }
  return t;
}

PolytopeResult local_polytope_feasible(const models::ConditionalTable& t, double tol) {
  require_2x2(t);
  if (!(tol > 0.0)) throw InputError("feasibility tolerance must be positive");

  // Rows: one per (a, b, f, g) cell, then normalization.
  std::vector<std::vector<double>> a(17, std::vector<double>(16, 0.0));
  std::vector<double> rhs(17, 0.0);
  for (std::size_t k = 0; k < 16; ++k) {
    const auto& s = strategies()[k];
    for (std::size_t sa = 0; sa < 2; ++sa)
      for (std::size_t sb = 0; sb < 2; ++sb) a[(sa * 2 + sb) * 4 + s.alice[sa] * 2 + s.bob[sb]][k] = 1.0;
    a[16][k] = 1.0;
  }
  for (std::size_t sa = 0; sa < 2; ++sa)
    for (std::size_t sb = 0; sb < 2; ++sb)
      for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t g = 0; g < 2; ++g) rhs[(sa * 2 + sb) * 4 + f * 2 + g] = t.at(sa, sb, f, g);
  rhs[16] = 1.0;

  auto lp = lp::find_feasible_point(a, rhs, tol);
  PolytopeResult r;
  r.weights = lp.x;
  r.pivots = lp.pivots;
  for (std::size_t row = 0; row < 17; ++row) {
    double lhs = 0.0;
    for (std::size_t k = 0; k < 16; ++k) lhs += a[row][k] * r.weights[k];
    r.residual = std::max(r.residual, std::abs(lhs - rhs[row]));
  }
  r.feasible = lp.feasible && r.residual <= tol;
  return r;
}

BooleReport boole_from_mixture(const PolytopeResult& r, std::size_t a1, std::size_t a2,
                               std::size_t b1, std::size_t b2) {
  if (r.weights.size() != 16) throw InputError("mixture needs one weight per strategy");
  std::vector<std::uint8_t> f1, f2, g1, g2;
  for (const auto& s : strategies()) {
    f1.push_back(s.alice.at(a1));
    f2.push_back(s.alice.at(a2));
    g1.push_back(s.bob.at(b1));
    g2.push_back(s.bob.at(b2));
  }
  return boole_check(r.weights, f1, f2, g1, g2);
}

}  // namespace hvlab::inequalities
