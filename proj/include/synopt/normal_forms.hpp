// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "synopt/logic.hpp"

namespace synopt {

struct Literal {
  Atom atom;
  bool positive = true;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

inline Literal pos(Atom a) { return Literal{std::move(a), true}; }
inline Literal neg(Atom a) { return Literal{std::move(a), false}; }

/// A set of literals: sorted, duplicate-free.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits);

  const std::vector<Literal>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool contains(const Literal& l) const;

  friend auto operator<=>(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> lits_;
};

enum class NormalForm { CNF, DNF };

/// Clause list in either normal form. In CNF each clause is a
/// disjunction and the list a conjunction; in DNF the duals.
struct ClauseSeq {
  NormalForm form = NormalForm::CNF;
  std::vector<Clause> clauses;

  // Filled by dnf_to_cnf: size of the distributed product before
  // within-clause duplicate merging.
  std::size_t raw_clause_count = 0;
  std::size_t raw_literals_per_clause = 0;
};

using AxiomSet = std::vector<Clause>;

/// Full distribution of a DNF into a CNF: one output clause per way of
/// choosing one literal from each conjunct, emitted in odometer order
/// over the choice indices (first conjunct most significant). The
/// product count is guarded by clause_cap.
ClauseSeq dnf_to_cnf(const ClauseSeq& dnf, std::size_t clause_cap = 1u << 20);

/// At most one positive second-order literal. First-order and equality
/// literals do not count against the bound. The vocabulary resolves
/// symbol kinds where declared.
bool is_horn(const Clause& clause, const Vocabulary& vocab);
bool is_horn(const ClauseSeq& cnf, const Vocabulary& vocab);

/// Repeatedly deletes any clause entailed by the remaining ones
/// conjoined with the axioms, scanning in clause order until a full
/// sweep deletes nothing. Entailment is decided by truth tables over
/// the distinct atoms (capped by max_atoms).
ClauseSeq simplify_cnf(const ClauseSeq& cnf, const AxiomSet& axioms,
                       std::size_t max_atoms = 24, int jobs = 1);

/// Truth-table equivalence of two quantifier-free formulas relative to
/// axioms: every assignment satisfying all axioms gives f and g the
/// same value. Atom count capped by max_atoms.
bool check_equivalence(const Formula& f, const Formula& g,
                       const AxiomSet& axioms, std::size_t max_atoms = 24,
                       int jobs = 1);

/// Propositional evaluation: atom i of `atoms` reads bit i of `mask`.
bool eval_prop(const Formula& f, const std::vector<Atom>& atoms,
               std::uint64_t mask);

Formula clause_to_formula(const Clause& c, NormalForm form);
Formula clauses_to_formula(const ClauseSeq& seq);

/// Extracts clauses from a CNF-shaped formula (conjunction of
/// disjunctions of possibly negated atoms); nullopt if not that shape.
std::optional<std::vector<Clause>> formula_to_cnf(const Formula& f);

std::vector<Atom> collect_atoms(const std::vector<Clause>& clauses);

}  // namespace synopt
