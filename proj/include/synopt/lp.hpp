// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "synopt/ground.hpp"
#include "synopt/linalg.hpp"
#include "synopt/rational.hpp"

namespace synopt {

/// max c·x subject to A x <= b, x >= 0.
struct LPPrimal {
  Vec c;
  Mat a;
  Vec b;

  std::size_t rows() const { return a.size(); }
  std::size_t cols() const { return c.size(); }
};

/// min b·y subject to At y >= c, y >= 0. `at` is the transpose of the
/// source primal's matrix (n rows of m entries).
struct LPDual {
  Vec b;
  Mat at;
  Vec c;
};

struct CertificatePair {
  Vec x;
  Vec y;
};

/// Text format:
///   n m
///   c: <n rationals>
///   b: <m rationals>
///   A: <row of n rationals> ; <row> ; ...   (m rows)
/// '#' starts a comment. Rationals as `p` or `p/q`.
LPPrimal parse_lp(const std::string& text);

/// n+m whitespace-separated rationals: x* then y*.
CertificatePair parse_cert(const std::string& text, std::size_t n,
                           std::size_t m);

LPDual make_dual(const LPPrimal& p);

/// The dual re-expressed as a max problem: max (-b)·y s.t. (-At) y <=
/// -c, y >= 0. Applying make_dual and this twice returns the original.
LPPrimal dual_as_primal(const LPDual& d);

struct CSReport {
  std::vector<Rat> row_products;  // y_i (b_i - A_i x)
  std::vector<Rat> col_products;  // x_j (c_j - At_j y)
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool cs_ok = false;  // every product exactly zero
  Rat primal_objective;
  Rat dual_objective;
  bool optimal_pair = false;  // feasible both ways and cs_ok
};

/// Exact complementary-slackness evaluation; violations are report
/// content, not errors.
CSReport check_cs(const LPPrimal& p, const CertificatePair& cert);

/// True iff check_cs passes everything. When true the two objectives
/// must agree exactly; a mismatch raises an internal error.
bool verify_optimal_pair(const LPPrimal& p, const CertificatePair& cert);

/// The slackness conditions as definite clauses over nonzero-ness
/// atoms, plus the atoms' ground-truth values under the certificate.
struct HornCS {
  PropCNF cnf;
  std::vector<bool> assignment;  // parallel to cnf.vars
  bool satisfied = false;        // the CNF under the assignment
};

HornCS emit_horn_cs(const LPPrimal& p, const CertificatePair& cert);

enum class LPStatus { Found, PrimalInfeasible, PrimalUnbounded };

struct LPDecision {
  LPStatus status = LPStatus::PrimalInfeasible;
  std::optional<CertificatePair> cert;
  // Invocations of the joint feasibility procedure; 1 on every path.
  std::uint64_t joint_feasibility_calls = 0;
};

/// Optimal primal/dual pair through one joint-feasibility decision:
/// enumerate complementarity patterns (each row either y_i = 0 or
/// A_i x = b_i; each column either x_j = 0 or At_j y = c_j), solve the
/// induced equality system of each side exactly, and keep the first
/// feasible pattern by ascending index. No-pair instances are
/// classified by a separate primal feasibility check. Requires
/// rows + cols <= 12.
LPDecision decide_optimal_pair(const LPPrimal& p, int jobs = 1);
LPDecision decide_optimal_pair_serial(const LPPrimal& p);

/// The pair induced by one complementarity pattern, if feasible. Bit i
/// (i < rows) set means row i is tight; bit rows+j set means column j
/// is tight.
std::optional<CertificatePair> solve_pattern(const LPPrimal& p,
                                             std::uint64_t pattern);

std::optional<Vec> primal_feasible_point(const LPPrimal& p);
std::optional<Vec> dual_feasible_point(const LPPrimal& p);

std::string lp_str(const Vec& v);  // "1 2/3 -4", for reports

}  // namespace synopt
