#include "gftpl/lp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gftpl {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Tableau layout: m rows, columns [0, total) are variables, last column is
// the RHS. `basis[i]` is the variable basic in row i.
struct Tableau {
  std::vector<std::vector<double>> t;  // m x (total + 1)
  std::vector<std::size_t> basis;
  std::size_t total = 0;

  double rhs(std::size_t i) const { return t[i].back(); }
};

// One simplex phase on the given objective row (reduced costs maintained in
// `obj`, with obj.back() = -objective value). Bland's rule: entering =
// lowest-index negative reduced cost; leaving = lowest-index tied ratio.
// `allowed` masks columns that may enter. Returns false on unboundedness.
bool run_simplex(Tableau& tab, std::vector<double>& obj,
                 const std::vector<bool>& allowed) {
  const std::size_t m = tab.t.size();
  for (;;) {
    std::size_t enter = tab.total;
    for (std::size_t j = 0; j < tab.total; ++j) {
      if (allowed[j] && obj[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == tab.total) return true;  // optimal

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double a = tab.t[i][enter];
      if (a > kPivotTol) {
        double ratio = tab.rhs(i) / a;
        if (leave == m || ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol &&
             tab.basis[i] < tab.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave == m) return false;  // unbounded

    // Pivot on (leave, enter).
    double piv = tab.t[leave][enter];
    for (double& v : tab.t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = tab.t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= tab.total; ++j)
        tab.t[i][j] -= f * tab.t[leave][j];
    }
    double f = obj[enter];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= tab.total; ++j)
        obj[j] -= f * tab.t[leave][j];
    }
    tab.basis[leave] = enter;
  }
}

}  // namespace

LpResult lp_minimize(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("lp: ragged matrix");
  if (b.size() != m) throw std::invalid_argument("lp: rhs size mismatch");

  LpResult res;
  if (m == 0) {  // unconstrained over x >= 0: minimum at x = 0 if c >= 0
    for (double cj : c)
      if (cj < 0.0) {
        res.status = LpResult::Status::kUnbounded;
        return res;
      }
    res.status = LpResult::Status::kOptimal;
    res.objective = 0.0;
    res.x.assign(n, 0.0);
    return res;
  }

  // Equality form A x - s + sign flip = b with rhs >= 0, plus artificials.
  Tableau tab;
  tab.total = n + m + m;  // x, surplus, artificial
  tab.t.assign(m, std::vector<double>(tab.total + 1, 0.0));
  tab.basis.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    double sign = (b[i] < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * a[i][j];
    tab.t[i][n + i] = -sign;  // surplus for the >= constraint
    tab.t[i][n + m + i] = 1.0;
    tab.t[i][tab.total] = sign * b[i];
    tab.basis[i] = n + m + i;
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<double> obj(tab.total + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) obj[n + m + i] = 1.0;
  for (std::size_t i = 0; i < m; ++i)  // reduce costs of the initial basis
    for (std::size_t j = 0; j <= tab.total; ++j) obj[j] -= tab.t[i][j];
  std::vector<bool> allowed(tab.total, true);
  if (!run_simplex(tab, obj, allowed))
    throw std::runtime_error("lp: phase-1 unbounded (internal error)");
  if (-obj.back() > kFeasTol) {
    res.status = LpResult::Status::kInfeasible;
    return res;
  }

  // Drive remaining artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n + m) continue;
    std::size_t enter = tab.total;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (std::fabs(tab.t[i][j]) > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == tab.total) continue;  // redundant row; keep artificial at 0
    double piv = tab.t[i][enter];
    for (double& v : tab.t[i]) v /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == i) continue;
      double f = tab.t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= tab.total; ++j)
        tab.t[r][j] -= f * tab.t[i][j];
    }
    tab.basis[i] = enter;
  }
  for (std::size_t j = n + m; j < tab.total; ++j) allowed[j] = false;

  // Phase 2: original objective, reduced against the current basis.
  std::vector<double> obj2(tab.total + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) obj2[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t bv = tab.basis[i];
    double f = obj2[bv];
    if (f != 0.0)
      for (std::size_t j = 0; j <= tab.total; ++j)
        obj2[j] -= f * tab.t[i][j];
  }
  if (!run_simplex(tab, obj2, allowed)) {
    res.status = LpResult::Status::kUnbounded;
    return res;
  }

  res.status = LpResult::Status::kOptimal;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.rhs(i);
  res.objective = -obj2.back();
  return res;
}

}  // namespace gftpl
