// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synopt/normal_forms.hpp"
#include "synopt/syntactic_eval.hpp"

namespace synopt {

/// Horn clauses with at most two literals, on variables z1..zn. Binary
/// clauses keep their literal order, so (z1 | !z2) and (!z2 | z1) are
/// distinct instances mapping to different ordered pairs.
enum class MH2SKind {
  PosUnit,  // (za)
  NegUnit,  // (!za)
  PosNeg,   // (za | !zb)
  NegPos,   // (!za | zb)
  NegNeg,   // (!za | !zb)
};

struct MH2SClause {
  MH2SKind kind = MH2SKind::PosUnit;
  std::uint32_t a = 0;  // 0-based variable index
  std::uint32_t b = 0;  // unused for unit kinds (kept 0)

  friend auto operator<=>(const MH2SClause&, const MH2SClause&) = default;
};

struct MH2SInstance {
  std::uint32_t num_vars = 0;
  std::vector<MH2SClause> clauses;
};

/// DIMACS text: "p cnf n m" then m clauses of one or two nonzero
/// literals each, at most one positive. Literal order is preserved.
/// Duplicate literals within a clause are rejected.
MH2SInstance parse_mh2s(const std::string& text);

bool clause_satisfied(const MH2SClause& c, const std::vector<bool>& assign);

struct MH2SOpt {
  std::uint64_t optimum = 0;
  std::vector<bool> assignment;  // lexicographically least maximizer
};

/// Exhaustive maximization of the satisfied-clause count, at most
/// max_vars variables. Ties break to the lexicographically least
/// assignment (z1 most significant, false < true).
MH2SOpt brute_force_opt(const MH2SInstance& inst, std::size_t max_vars = 24,
                        int jobs = 1);
MH2SOpt brute_force_opt_serial(const MH2SInstance& inst,
                               std::size_t max_vars = 24);

/// The clause-satisfaction condition as a DNF over the four pair
/// predicates and the set variable: one pair of conjuncts per
/// predicate family, plus the single positive-pair conjunct.
ClauseSeq mh2s_phi_dnf();

/// Exactly-one axioms over the four pair predicates.
AxiomSet mh2s_axioms();

/// Full distribution of the DNF: 128 clauses, 7 choices wide.
const ClauseSeq& mh2s_psi_raw();

/// The distribution pruned of clauses entailed under the axioms.
const ClauseSeq& mh2s_psi_simplified();

struct EncodedMH2S {
  SyntacticInstance instance;
  std::size_t raw_cnf_clauses = 0;          // before pruning
  std::size_t raw_literals_per_clause = 0;  // one per DNF conjunct
  std::size_t simplified_clauses = 0;
  std::size_t matrix_clauses = 0;  // simplified + marker guard + !S(d)
};

/// Builds the quantifier-free counting instance whose optimum equals
/// the maximum satisfied-clause count: universe z1..zn plus a dummy d,
/// one marked ordered pair per clause, count over pairs (x,y) of the
/// pruned satisfaction formula, guarded by the markers and !S(d).
/// Each ordered pair carries at most one clause; with dedupe set,
/// exact duplicate clauses are merged first.
EncodedMH2S encode(const MH2SInstance& inst, bool dedupe = false);

std::string mh2s_var_name(std::uint32_t index);  // "z1", "z2", ...

/// Threshold decision through the encoded instance.
bool mh2s_decide(const MH2SInstance& inst, std::uint64_t k,
                 bool dedupe = false, int jobs = 1);

}  // namespace synopt
