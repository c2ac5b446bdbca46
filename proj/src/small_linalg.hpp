#pragma once

// Fixed-size dense complex linear algebra for the Born-rule oracles.

#include <array>
#include <complex>
#include <cstddef>

namespace hvlab::quantum::detail {

using Complex = std::complex<double>;

template <std::size_t N>
using Vec = std::array<Complex, N>;

template <std::size_t N>
struct Mat {
  std::array<Complex, N * N> a{};

  Complex& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
};

template <std::size_t N>
Mat<N> operator+(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> m;
  for (std::size_t i = 0; i < N * N; ++i) m.a[i] = x.a[i] + y.a[i];
  return m;
}

template <std::size_t N>
Mat<N> operator-(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> m;
  for (std::size_t i = 0; i < N * N; ++i) m.a[i] = x.a[i] - y.a[i];
  return m;
}

template <std::size_t N>
Mat<N> operator*(Complex s, const Mat<N>& x) {
  Mat<N> m;
  for (std::size_t i = 0; i < N * N; ++i) m.a[i] = s * x.a[i];
  return m;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex xk = x(r, k);
      if (xk == Complex{}) continue;
      for (std::size_t c = 0; c < N; ++c) m(r, c) += xk * y(k, c);
    }
  return m;
}

template <std::size_t N>
Vec<N> operator*(const Mat<N>& x, const Vec<N>& v) {
  Vec<N> out{};
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) out[r] += x(r, c) * v[c];
  return out;
}

template <std::size_t N>
Complex inner(const Vec<N>& u, const Vec<N>& v) {
  Complex s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

template <std::size_t N>
Mat<N> outer(const Vec<N>& u, const Vec<N>& v) {
  Mat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = u[r] * std::conj(v[c]);
  return m;
}

template <std::size_t N, std::size_t M>
Mat<N * M> kron(const Mat<N>& x, const Mat<M>& y) {
  Mat<N * M> m;
  for (std::size_t r1 = 0; r1 < N; ++r1)
    for (std::size_t c1 = 0; c1 < N; ++c1)
      for (std::size_t r2 = 0; r2 < M; ++r2)
        for (std::size_t c2 = 0; c2 < M; ++c2) m(r1 * M + r2, c1 * M + c2) = x(r1, c1) * y(r2, c2);
  return m;
}

/// <psi| op |psi>
template <std::size_t N>
Complex expectation(const Mat<N>& op, const Vec<N>& psi) {
  return inner(psi, op * psi);
}

template <std::size_t N>
double max_abs(const Mat<N>& x) {
  double m = 0.0;
  for (const auto& z : x.a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace hvlab::quantum::detail
