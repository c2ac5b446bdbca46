#include "hvlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hvlab/errors.hpp"
#include "small_linalg.hpp"

namespace hvlab::quantum {

using detail::Complex;
using detail::Mat;
using detail::Vec;

Angle::Angle(double radians) {
  if (!std::isfinite(radians)) throw InputError("angle must be finite");
  double v = std::fmod(radians, std::numbers::pi);
  if (v < 0.0) v += std::numbers::pi;
  if (v >= std::numbers::pi) v = 0.0;
  value_ = v;
}

namespace {

std::array<double, 3> canonical_sign(std::array<double, 3> c) {
  for (double x : c) {
    if (std::abs(x) > kGeometryTol) {
      if (x < 0.0) {
        for (double& y : c) y = -y;
      }
      break;
    }
  }
  for (double& y : c) {
    if (y == 0.0) y = 0.0;  // drop negative zero
  }
  return c;
}

}  // namespace

Ray::Ray(std::array<double, 3> components) {
  double n2 = 0.0;
  for (double x : components) {
    if (!std::isfinite(x)) throw InputError("ray components must be finite");
    n2 += x * x;
  }
  if (std::abs(std::sqrt(n2) - 1.0) > kGeometryTol) {
    throw InputError("ray is not unit norm within tolerance");
  }
  c_ = canonical_sign(components);
}

Ray Ray::normalized(std::array<double, 3> v) {
  double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(n > kGeometryTol)) throw InputError("cannot normalize a zero vector");
  for (double& x : v) x /= n;
  return Ray(v);
}

bool Ray::same_as(const Ray& other, double tol) const {
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    plus = std::max(plus, std::abs(c_[i] - other.c_[i]));
    minus = std::max(minus, std::abs(c_[i] + other.c_[i]));
  }
  return std::min(plus, minus) <= tol;
}

double dot(const Ray& a, const Ray& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Frame::Frame(std::array<Ray, 3> rays) : rays_(std::move(rays)) {
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (std::abs(dot(rays_[i], rays_[j])) > kGeometryTol) {
        throw InputError("frame rays are not pairwise orthogonal");
      }
}

Frame Frame::from_rows(const std::array<double, 9>& rows) {
  return Frame({Ray({rows[0], rows[1], rows[2]}), Ray({rows[3], rows[4], rows[5]}),
                Ray({rows[6], rows[7], rows[8]})});
}

std::array<double, 9> Frame::rows() const {
  std::array<double, 9> out{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) out[3 * i + k] = rays_[i][k];
  return out;
}

int Frame::position_of(const Ray& r, double tol) const {
  for (std::size_t i = 0; i < 3; ++i)
    if (rays_[i].same_as(r, tol)) return static_cast<int>(i);
  return -1;
}

bool Frame::same_axes(const Frame& other, double tol) const {
  for (const auto& r : other.rays_)
    if (position_of(r, tol) < 0) return false;
  return true;
}

double PairStats::max_abs_diff(const PairStats& o) const noexcept {
  return std::max({std::abs(p11 - o.p11), std::abs(p10 - o.p10), std::abs(p01 - o.p01),
                   std::abs(p00 - o.p00)});
}

double SpinJointTable::total() const noexcept {
  double s = 0.0;
  for (const auto& row : cells)
    for (double c : row) s += c;
  return s;
}

PairStats SpinJointTable::pair(std::size_t i, std::size_t j) const noexcept {
  double row = 0.0, col = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    row += cells[i][k];
    col += cells[k][j];
  }
  const double both_zero = cells[i][j];
  PairStats s;
  s.p00 = both_zero;
  s.p01 = row - both_zero;
  s.p10 = col - both_zero;
  s.p11 = total() - row - col + both_zero;
  return s;
}

double SpinJointTable::max_abs_diff(const SpinJointTable& o) const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m = std::max(m, std::abs(cells[i][j] - o.cells[i][j]));
  return m;
}

PairStats photon_stats(Angle alpha, Angle beta) {
  const double d = alpha.value() - beta.value();
  const double c = std::cos(d), s = std::sin(d);
  PairStats out;
  out.p11 = out.p00 = 0.5 * c * c;
  out.p10 = out.p01 = 0.5 * s * s;
  return out;
}

PairStats spin1_pair_stats(const Ray& a, const Ray& b) {
  const double c = dot(a, b);
  const double c2 = c * c;
  PairStats out;
  out.p11 = (1.0 + c2) / 3.0;
  out.p00 = c2 / 3.0;
  out.p10 = out.p01 = (1.0 - c2) / 3.0;
  return out;
}

SpinJointTable spin1_joint(const Frame& a, const Frame& b) {
  SpinJointTable t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double c = dot(a[i], b[j]);
      t.cells[i][j] = c * c / 3.0;
    }
  return t;
}

PairStats born_oracle_photon(Angle alpha, Angle beta) {
  const double r = 1.0 / std::sqrt(2.0);
  // Basis |0>,|1> of linear polarization; two-photon basis |00>,|01>,|10>,|11>.
  const Vec<4> psi{Complex(r), Complex(0), Complex(0), Complex(r)};

  auto pass = [](double theta) {
    const Vec<2> axis{Complex(std::cos(theta)), Complex(std::sin(theta))};
    return detail::outer(axis, axis);
  };
  const auto id = Mat<2>::identity();
  const std::array<Mat<2>, 2> alice{id - pass(alpha.value()), pass(alpha.value())};
  const std::array<Mat<2>, 2> bob{id - pass(beta.value()), pass(beta.value())};

  auto prob = [&](int f, int g) {
    return detail::expectation(detail::kron(alice[f], bob[g]), psi).real();
  };
  PairStats out;
  out.p11 = prob(1, 1);
  out.p10 = prob(1, 0);
  out.p01 = prob(0, 1);
  out.p00 = prob(0, 0);
  return out;
}

namespace {

// Spin-one component operators in the Cartesian basis: (J_k)_{lm} = -i eps_{klm}.
// In this basis (n.J)^2 = I - n n^T, so the maximally entangled state below yields
// perfect correlation for equal axes on both sides.
std::array<Mat<3>, 3> spin_one_operators() {
  std::array<Mat<3>, 3> j{};
  const Complex mi(0.0, -1.0);
  auto eps = [](std::size_t k, std::size_t l, std::size_t m) -> double {
    if (k == l || l == m || k == m) return 0.0;
    return ((l + 3 - k) % 3 == 1) ? 1.0 : -1.0;
  };
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t m = 0; m < 3; ++m) j[k](l, m) = mi * eps(k, l, m);
  return j;
}

Mat<3> squared_projection(const std::array<Mat<3>, 3>& j, const Ray& n) {
  Mat<3> nj = Complex(n[0]) * j[0] + Complex(n[1]) * j[1] + Complex(n[2]) * j[2];
  return nj * nj;
}

}  // namespace

SpinJointTable born_oracle_spin1(const Frame& a, const Frame& b) {
  const auto j = spin_one_operators();
  const auto id = Mat<3>::identity();
  const double r = 1.0 / std::sqrt(3.0);
  Vec<9> psi{};
  for (std::size_t k = 0; k < 3; ++k) psi[4 * k] = Complex(r);

  // Projector onto the eigenvalue-0 space of <n, J>^2 (eigenvalues are 0 and 1).
  std::array<Mat<3>, 3> alice_zero, bob_zero;
  for (std::size_t i = 0; i < 3; ++i) {
    alice_zero[i] = id - squared_projection(j, a[i]);
    bob_zero[i] = id - squared_projection(j, b[i]);
  }
  SpinJointTable t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      t.cells[i][k] = detail::expectation(detail::kron(alice_zero[i], bob_zero[k]), psi).real();
  return t;
}

double squared_spin_sum_defect(const Frame& a) {
  const auto j = spin_one_operators();
  Mat<3> sum = squared_projection(j, a[0]) + squared_projection(j, a[1]) + squared_projection(j, a[2]);
  return detail::max_abs(sum - Complex(2.0) * Mat<3>::identity());
}

std::array<int, 3> zero_position_triple(std::size_t zero_at) {
  std::array<int, 3> t{1, 1, 1};
  t.at(zero_at) = 0;
  return t;
}

}  // namespace hvlab::quantum
