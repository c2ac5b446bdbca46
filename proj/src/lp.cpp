#include "hvlab/lp.hpp"

#include <cmath>
#include <limits>

#include "hvlab/errors.hpp"

namespace hvlab::lp {

namespace {
constexpr double kPivotEps = 1e-12;
}

FeasibilityResult find_feasible_point(const std::vector<std::vector<double>>& a,
                                      const std::vector<double>& b, double tol) {
  const std::size_t m = a.size();
  if (m == 0 || b.size() != m) throw InputError("lp: need one right-hand side per row");
  const std::size_t n = a.front().size();
  for (const auto& row : a)
    if (row.size() != n) throw InputError("lp: ragged constraint matrix");

  // Tableau columns: n originals, m artificials, rhs.
  const std::size_t width = n + m + 1;
  std::vector<double> t(m * width, 0.0);
  auto cell = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) cell(r, c) = sign * a[r][c];
    cell(r, n + r) = 1.0;
    cell(r, n + m) = sign * b[r];
    basis[r] = n + r;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  std::vector<double> cost(width, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) cost[c] -= cell(r, c);
    cost[n + m] -= cell(r, n + m);
  }

  FeasibilityResult out;
  for (;;) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < n + m; ++c) {
      if (cost[c] < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double coef = cell(r, enter);
      if (coef <= kPivotEps) continue;
      const double ratio = cell(r, n + m) / coef;
      if (ratio < best - kPivotEps || (ratio <= best + kPivotEps && leave < m && basis[r] < basis[leave])) {
        best = std::min(best, ratio);
        leave = r;
      }
    }
    // Phase one is bounded below by zero, so an improving column always has a pivot row.
    if (leave == m) break;

    const double pivot = cell(leave, enter);
    for (std::size_t c = 0; c < width; ++c) cell(leave, c) /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double factor = cell(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) cell(r, c) -= factor * cell(leave, c);
    }
    const double factor = cost[enter];
    for (std::size_t c = 0; c < width; ++c) cost[c] -= factor * cell(leave, c);
    basis[leave] = enter;
    ++out.pivots;
  }

  out.x.assign(n, 0.0);
  out.infeasibility = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double v = cell(r, n + m);
    if (basis[r] < n) out.x[basis[r]] = std::max(0.0, v);
    else out.infeasibility += std::abs(v);
  }
  out.feasible = out.infeasibility <= tol;
  return out;
}

}  // namespace hvlab::lp
