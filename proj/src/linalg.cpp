// SPDX-License-Identifier: Apache-2.0
#include "synopt/linalg.hpp"

#include <algorithm>
#include <set>

#include "synopt/error.hpp"

namespace synopt {

Rat dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) internal_error("dot: length mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec mat_vec(const Mat& a, const Vec& x) {
  Vec r;
  r.reserve(a.size());
  for (const Vec& row : a) r.push_back(dot(row, x));
  return r;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), Vec(a.size(), Rat(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a[0].size()) internal_error("transpose: ragged matrix");
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

EqSolution gauss_solve(const Mat& a, const Vec& b, std::size_t nvars) {
  if (a.size() != b.size()) internal_error("gauss_solve: row count mismatch");
  Mat m = a;
  Vec rhs = b;
  for (const Vec& row : m)
    if (row.size() != nvars) internal_error("gauss_solve: row width mismatch");

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < nvars && rank < m.size(); ++col) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    std::swap(rhs[piv], rhs[rank]);
    Rat inv = 1 / m[rank][col];
    for (std::size_t j = col; j < nvars; ++j) m[rank][j] *= inv;
    rhs[rank] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (std::size_t j = col; j < nvars; ++j) m[r][j] -= f * m[rank][j];
      rhs[r] -= f * rhs[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  EqSolution sol;
  for (std::size_t r = rank; r < m.size(); ++r)
    if (rhs[r] != 0) return sol;  // 0 = nonzero
  sol.consistent = true;

  std::vector<bool> is_pivot(nvars, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  for (std::size_t c = 0; c < nvars; ++c)
    if (!is_pivot[c]) sol.free_cols.push_back(c);

  sol.particular.assign(nvars, Rat(0));
  for (std::size_t r = 0; r < rank; ++r) sol.particular[pivot_col[r]] = rhs[r];

  for (std::size_t f : sol.free_cols) {
    Vec v(nvars, Rat(0));
    v[f] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = -m[r][f];
    sol.basis.push_back(std::move(v));
  }
  return sol;
}

namespace {

// Scaled to primitive integers so duplicates collapse; multiplier is
// positive, preserving the inequality. Returns false for a row that is
// trivially true (0 <= nonnegative).
bool canonical_row(IneqRow& row, bool& infeasible) {
  bool all_zero =
      std::all_of(row.coef.begin(), row.coef.end(),
                  [](const Rat& c) { return c == 0; });
  if (all_zero) {
    if (row.rhs < 0) infeasible = true;
    return false;
  }
  mpz_class lcm = row.rhs.get_den();
  for (const Rat& c : row.coef) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
                                        c.get_den().get_mpz_t());
  mpz_class gcd = 0;
  for (const Rat& c : row.coef) {
    mpz_class n = c.get_num() * (lcm / c.get_den());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), n.get_mpz_t());
  }
  mpz_class rn = row.rhs.get_num() * (lcm / row.rhs.get_den());
  mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), rn.get_mpz_t());
  Rat scale = Rat(lcm) / Rat(gcd);
  for (Rat& c : row.coef) {
    c *= scale;
    c.canonicalize();
  }
  row.rhs *= scale;
  row.rhs.canonicalize();
  return true;
}

struct RowLess {
  bool operator()(const IneqRow& a, const IneqRow& b) const {
    if (a.coef != b.coef) return a.coef < b.coef;
    return a.rhs < b.rhs;
  }
};

}  // namespace

std::optional<Vec> fm_feasible_point(const IneqSystem& sys, std::size_t nvars,
                                     std::size_t max_rows) {
  bool infeasible = false;
  std::vector<IneqSystem> stage(nvars + 1);
  {
    std::set<IneqRow, RowLess> seen;
    for (IneqRow row : sys) {
      if (row.coef.size() != nvars)
        internal_error("fm_feasible_point: row width mismatch");
      if (canonical_row(row, infeasible) && seen.insert(row).second)
        stage[0].push_back(std::move(row));
      if (infeasible) return std::nullopt;
    }
  }

  for (std::size_t v = 0; v < nvars; ++v) {
    std::vector<const IneqRow*> upper, lower;
    std::set<IneqRow, RowLess> seen;
    auto add = [&](IneqRow row) {
      if (canonical_row(row, infeasible) && seen.insert(row).second) {
        stage[v + 1].push_back(std::move(row));
        if (stage[v + 1].size() > max_rows)
          cap_error("inequality elimination exceeded " +
                    std::to_string(max_rows) + " rows");
      }
    };
    for (const IneqRow& row : stage[v]) {
      if (row.coef[v] > 0)
        upper.push_back(&row);
      else if (row.coef[v] < 0)
        lower.push_back(&row);
      else
        add(row);
      if (infeasible) return std::nullopt;
    }
    for (const IneqRow* lo : lower) {
      for (const IneqRow* up : upper) {
        Rat alpha = up->coef[v];   // > 0
        Rat beta = -lo->coef[v];   // > 0
        IneqRow merged;
        merged.coef.resize(nvars, Rat(0));
        for (std::size_t j = v + 1; j < nvars; ++j)
          merged.coef[j] = beta * up->coef[j] + alpha * lo->coef[j];
        merged.rhs = beta * up->rhs + alpha * lo->rhs;
        add(std::move(merged));
        if (infeasible) return std::nullopt;
      }
    }
  }

  // Back-substitute, preferring 0 clamped into the admissible interval.
  Vec x(nvars, Rat(0));
  for (std::size_t v = nvars; v-- > 0;) {
    std::optional<Rat> lo, hi;
    for (const IneqRow& row : stage[v]) {
      if (row.coef[v] == 0) continue;
      Rat rest = row.rhs;
      for (std::size_t j = v + 1; j < nvars; ++j) rest -= row.coef[j] * x[j];
      Rat bound = rest / row.coef[v];
      if (row.coef[v] > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else {
        if (!lo || bound > *lo) lo = bound;
      }
    }
    if (lo && hi && *lo > *hi)
      internal_error("fm_feasible_point: empty interval after elimination");
    Rat val = 0;
    if (lo && val < *lo) val = *lo;
    if (hi && val > *hi) val = *hi;
    x[v] = val;
  }
  return x;
}

std::optional<Vec> solve_eq_ineq(const Mat& aeq, const Vec& beq,
                                 const IneqSystem& ineqs, std::size_t nvars,
                                 std::size_t max_rows) {
  EqSolution eq = gauss_solve(aeq, beq, nvars);
  if (!eq.consistent) return std::nullopt;

  std::size_t k = eq.basis.size();
  IneqSystem reduced;
  reduced.reserve(ineqs.size());
  for (const IneqRow& row : ineqs) {
    if (row.coef.size() != nvars)
      internal_error("solve_eq_ineq: row width mismatch");
    IneqRow r;
    r.coef.reserve(k);
    for (const Vec& bv : eq.basis) r.coef.push_back(dot(row.coef, bv));
    r.rhs = row.rhs - dot(row.coef, eq.particular);
    reduced.push_back(std::move(r));
  }

  std::optional<Vec> t = fm_feasible_point(reduced, k, max_rows);
  if (!t) return std::nullopt;
  Vec x = eq.particular;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < nvars; ++j) x[j] += (*t)[i] * eq.basis[i][j];
  return x;
}

}  // namespace synopt
