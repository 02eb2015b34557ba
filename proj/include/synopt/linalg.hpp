// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "synopt/rational.hpp"

namespace synopt {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

Rat dot(const Vec& a, const Vec& b);
Vec mat_vec(const Mat& a, const Vec& x);
Mat transpose(const Mat& a);

/// General solution of A x = b: a particular point (free coordinates
/// zero) plus a null-space basis, one vector per free column.
struct EqSolution {
  bool consistent = false;
  Vec particular;
  std::vector<Vec> basis;
  std::vector<std::size_t> free_cols;
};

EqSolution gauss_solve(const Mat& a, const Vec& b, std::size_t nvars);

/// One inequality coef·x ≤ rhs.
struct IneqRow {
  Vec coef;
  Rat rhs;
};
using IneqSystem = std::vector<IneqRow>;

/// Exact Fourier–Motzkin feasibility with witness extraction. The
/// witness prefers 0 in each coordinate, clamped into the admissible
/// interval back to front, so it is deterministic. Intermediate row
/// counts are capped.
std::optional<Vec> fm_feasible_point(const IneqSystem& sys, std::size_t nvars,
                                     std::size_t max_rows = 100000);

/// Feasible point of {Aeq x = beq, ineqs} or nullopt: equalities are
/// eliminated by Gaussian elimination, the rest handed to
/// Fourier-Motzkin over the free coordinates.
std::optional<Vec> solve_eq_ineq(const Mat& aeq, const Vec& beq,
                                 const IneqSystem& ineqs, std::size_t nvars,
                                 std::size_t max_rows = 100000);

}  // namespace synopt
