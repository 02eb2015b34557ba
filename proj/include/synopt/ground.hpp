// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synopt/logic.hpp"
#include "synopt/normal_forms.hpp"

namespace synopt {

/// A ground second-order atom, its arguments already element names.
struct GroundAtom {
  std::string symbol;
  std::vector<std::string> elems;

  std::string display() const;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct PropLit {
  std::uint32_t var = 0;
  bool positive = true;
  friend auto operator<=>(const PropLit&, const PropLit&) = default;
};

/// Sorted, duplicate-free propositional clause. May be empty (an
/// unsatisfiable marker produced by grounding).
class PropClause {
 public:
  PropClause() = default;
  explicit PropClause(std::vector<PropLit> lits);
  const std::vector<PropLit>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  friend auto operator<=>(const PropClause&, const PropClause&) = default;

 private:
  std::vector<PropLit> lits_;
};

/// Where a ground clause came from: which matrix clause, under which
/// bound-variable assignment.
struct ClauseOrigin {
  std::size_t source_clause = 0;
  std::string binding;  // "x=a y=b", empty when no bound variables
  friend auto operator<=>(const ClauseOrigin&, const ClauseOrigin&) = default;
};

struct PropCNF {
  std::vector<GroundAtom> vars;  // index = variable id, first-use order
  std::vector<PropClause> clauses;
  std::vector<ClauseOrigin> origins;  // parallel to clauses

  std::uint32_t var_id(const GroundAtom& atom);  // interns
  std::optional<std::uint32_t> find_var(const GroundAtom& atom) const;

 private:
  std::map<GroundAtom, std::uint32_t> index_;
};

/// Instantiates a CNF-shaped matrix over all assignments of the bound
/// variables, the free variables fixed by `binding`. First-order and
/// equality literals are decided and eliminated: a true literal drops
/// its clause, a false literal drops out of the clause. What remains
/// ranges over ground second-order atoms. Variables are numbered in
/// first-use order (binding-block order, then clause order, then
/// literal order), independent of the worker count.
PropCNF ground(const Query& query, const FiniteStructure& structure,
               const VariableBinding& binding, int jobs = 1);

struct HornResult {
  bool satisfiable = false;
  std::vector<bool> model;  // minimal model when satisfiable
  std::optional<std::size_t> conflict_clause;
};

/// Unit propagation over definite/goal clauses; linear in the formula
/// size. Rejects non-Horn input. The model is the unique minimal one.
HornResult horn_sat(const PropCNF& cnf);

struct SatResult {
  bool satisfiable = false;
  std::vector<bool> witness;  // lexicographically least, var 0 heaviest
};

/// Exhaustive satisfiability over at most max_vars variables. The
/// witness is the first satisfying assignment in lexicographic order
/// (variable 0 most significant).
SatResult brute_sat(const PropCNF& cnf, std::size_t max_vars = 24,
                    int jobs = 1);
SatResult brute_sat_serial(const PropCNF& cnf, std::size_t max_vars = 24);

/// DIMACS text with variable-name comments:
///   c var 1 = S(a)
///   p cnf 2 1
///   1 -2 0
std::string to_dimacs(const PropCNF& cnf);

/// Accepts the subset written by to_dimacs: optional comments, one
/// header, clauses terminated by 0. "c var N = name" comments name
/// variables; unnamed ones display as xN.
PropCNF parse_dimacs(const std::string& text);

}  // namespace synopt
