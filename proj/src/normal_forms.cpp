// SPDX-License-Identifier: Apache-2.0
#include "synopt/normal_forms.hpp"

#include <algorithm>
#include <atomic>
#include <map>

#include "synopt/parallel.hpp"

namespace synopt {

Clause::Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Clause::contains(const Literal& l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

ClauseSeq dnf_to_cnf(const ClauseSeq& dnf, std::size_t clause_cap) {
  if (dnf.form != NormalForm::DNF)
    input_error("dnf_to_cnf expects a DNF input");
  if (dnf.clauses.empty()) input_error("empty DNF");
  std::size_t product = 1;
  for (const Clause& conjunct : dnf.clauses) {
    if (conjunct.size() == 0) input_error("empty conjunct in DNF");
    if (product > clause_cap / conjunct.size())
      cap_error("distribution exceeds clause cap");
    product *= conjunct.size();
  }

  ClauseSeq out;
  out.form = NormalForm::CNF;
  out.raw_clause_count = product;
  out.raw_literals_per_clause = dnf.clauses.size();
  out.clauses.reserve(product);

  std::vector<std::size_t> choice(dnf.clauses.size(), 0);
  for (std::size_t idx = 0; idx < product; ++idx) {
    std::vector<Literal> lits;
    lits.reserve(dnf.clauses.size());
    for (std::size_t j = 0; j < dnf.clauses.size(); ++j)
      lits.push_back(dnf.clauses[j].lits()[choice[j]]);
    out.clauses.emplace_back(std::move(lits));
    // odometer: last conjunct's choice advances fastest
    for (std::size_t j = dnf.clauses.size(); j-- > 0;) {
      if (++choice[j] < dnf.clauses[j].size()) break;
      choice[j] = 0;
    }
  }
  return out;
}

namespace {

// Unknown relation symbols are treated as second-order: the guarded
// count concerns predicate symbols that are not interpreted by the
// structure, and an undeclared symbol is exactly that.
bool is_so_literal(const Literal& l, const Vocabulary& vocab) {
  if (l.atom.kind == Atom::Kind::Equality) return false;
  const RelationSymbol* sym = vocab.find_relation(l.atom.symbol);
  if (!sym) return true;
  return sym->kind == SymbolKind::SecondOrder;
}

}  // namespace

bool is_horn(const Clause& clause, const Vocabulary& vocab) {
  std::size_t positives = 0;
  for (const Literal& l : clause.lits())
    if (l.positive && is_so_literal(l, vocab)) ++positives;
  return positives <= 1;
}

bool is_horn(const ClauseSeq& cnf, const Vocabulary& vocab) {
  for (const Clause& c : cnf.clauses)
    if (!is_horn(c, vocab)) return false;
  return true;
}

std::vector<Atom> collect_atoms(const std::vector<Clause>& clauses) {
  std::set<Atom> seen;
  std::vector<Atom> out;
  for (const Clause& c : clauses)
    for (const Literal& l : c.lits())
      if (seen.insert(l.atom).second) out.push_back(l.atom);
  return out;
}

namespace {

// Clause compiled against an atom index: satisfied by `mask` iff some
// positive atom bit is set or some negative atom bit is clear.
struct ClauseMask {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  bool sat(std::uint64_t mask) const {
    return (mask & pos) != 0 || (~mask & neg) != 0;
  }
};

using AtomIndex = std::map<Atom, std::size_t>;

AtomIndex index_atoms(const std::vector<Atom>& atoms) {
  AtomIndex idx;
  for (std::size_t i = 0; i < atoms.size(); ++i) idx[atoms[i]] = i;
  return idx;
}

ClauseMask compile_clause(const Clause& c, const AtomIndex& idx) {
  ClauseMask m;
  for (const Literal& l : c.lits()) {
    auto it = idx.find(l.atom);
    if (it == idx.end()) internal_error("atom missing from index");
    std::uint64_t bit = std::uint64_t{1} << it->second;
    (l.positive ? m.pos : m.neg) |= bit;
  }
  return m;
}

// Postfix program for fast propositional evaluation over atom bits.
struct Prog {
  enum : std::uint8_t { PUSH, NOT, AND, OR };
  struct Ins {
    std::uint8_t op;
    std::uint32_t idx;
  };
  std::vector<Ins> ins;

  bool run(std::uint64_t mask) const {
    char stack[4096];
    std::size_t top = 0;
    for (const Ins& i : ins) {
      switch (i.op) {
        case PUSH:
          stack[top++] = (mask >> i.idx) & 1;
          break;
        case NOT:
          stack[top - 1] = !stack[top - 1];
          break;
        case AND:
          --top;
          stack[top - 1] = stack[top - 1] && stack[top];
          break;
        case OR:
          --top;
          stack[top - 1] = stack[top - 1] || stack[top];
          break;
      }
    }
    return stack[0];
  }
};

std::size_t compile_node(const Formula::Node* n, const AtomIndex& idx,
                         Prog& prog) {
  switch (n->op) {
    case Formula::Op::Leaf: {
      auto it = idx.find(n->atom);
      if (it == idx.end()) internal_error("atom missing from index");
      prog.ins.push_back({Prog::PUSH, static_cast<std::uint32_t>(it->second)});
      return 1;
    }
    case Formula::Op::Not: {
      std::size_t d = compile_node(n->lhs.get(), idx, prog);
      prog.ins.push_back({Prog::NOT, 0});
      return d;
    }
    case Formula::Op::And:
    case Formula::Op::Or: {
      std::size_t dl = compile_node(n->lhs.get(), idx, prog);
      std::size_t dr = compile_node(n->rhs.get(), idx, prog);
      prog.ins.push_back(
          {n->op == Formula::Op::And ? Prog::AND : Prog::OR, 0});
      return std::max(dl, dr + 1);
    }
  }
  internal_error("corrupt formula node");
}

Prog compile_formula(const Formula& f, const AtomIndex& idx) {
  Prog prog;
  std::size_t depth = compile_node(&f.root(), idx, prog);
  if (depth > 4096) cap_error("formula too deep to evaluate");
  return prog;
}

// True if some assignment satisfies all clause masks and, when `prog`
// is given, makes it false. Existence is order-independent, so the
// parallel scan with an early-out flag is deterministic.
bool exists_countermodel(const std::vector<ClauseMask>& must_hold,
                         const ClauseMask* must_fail, std::size_t num_atoms,
                         int jobs) {
  const std::uint64_t total = std::uint64_t{1} << num_atoms;
  std::atomic<bool> found{false};
  const int workers = resolve_jobs(jobs);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
    if (found.load(std::memory_order_relaxed)) continue;
    std::uint64_t mask = static_cast<std::uint64_t>(m);
    bool ok = true;
    for (const ClauseMask& c : must_hold)
      if (!c.sat(mask)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (must_fail && must_fail->sat(mask)) continue;
    found.store(true, std::memory_order_relaxed);
  }
  return found.load();
}

}  // namespace

bool eval_prop(const Formula& f, const std::vector<Atom>& atoms,
               std::uint64_t mask) {
  AtomIndex idx = index_atoms(atoms);
  return compile_formula(f, idx).run(mask);
}

ClauseSeq simplify_cnf(const ClauseSeq& cnf, const AxiomSet& axioms,
                       std::size_t max_atoms, int jobs) {
  if (cnf.form != NormalForm::CNF)
    input_error("simplify_cnf expects a CNF input");
  std::vector<Clause> all = cnf.clauses;
  all.insert(all.end(), axioms.begin(), axioms.end());
  std::vector<Atom> atoms = collect_atoms(all);
  if (atoms.size() > max_atoms)
    cap_error("atom bound exceeded: " + std::to_string(atoms.size()) +
              " distinct atoms, cap " + std::to_string(max_atoms));
  AtomIndex idx = index_atoms(atoms);

  std::vector<Clause> clauses = cnf.clauses;
  std::vector<ClauseMask> masks;
  masks.reserve(clauses.size());
  for (const Clause& c : clauses) masks.push_back(compile_clause(c, idx));
  std::vector<ClauseMask> axiom_masks;
  for (const Clause& c : axioms) axiom_masks.push_back(compile_clause(c, idx));

  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t i = 0;
    while (i < clauses.size()) {
      std::vector<ClauseMask> rest = axiom_masks;
      for (std::size_t j = 0; j < masks.size(); ++j)
        if (j != i) rest.push_back(masks[j]);
      bool entailed =
          !exists_countermodel(rest, &masks[i], atoms.size(), jobs);
      if (entailed) {
        clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(i));
        masks.erase(masks.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        ++i;
      }
    }
  }

  ClauseSeq out;
  out.form = NormalForm::CNF;
  out.clauses = std::move(clauses);
  out.raw_clause_count = cnf.raw_clause_count;
  out.raw_literals_per_clause = cnf.raw_literals_per_clause;
  return out;
}

bool check_equivalence(const Formula& f, const Formula& g,
                       const AxiomSet& axioms, std::size_t max_atoms,
                       int jobs) {
  std::set<Atom> seen;
  std::vector<Atom> atoms;
  for (const Atom& a : collect_atoms(f))
    if (seen.insert(a).second) atoms.push_back(a);
  for (const Atom& a : collect_atoms(g))
    if (seen.insert(a).second) atoms.push_back(a);
  for (const Atom& a : collect_atoms(axioms))
    if (seen.insert(a).second) atoms.push_back(a);
  if (atoms.size() > max_atoms)
    cap_error("atom bound exceeded: " + std::to_string(atoms.size()) +
              " distinct atoms, cap " + std::to_string(max_atoms));
  AtomIndex idx = index_atoms(atoms);

  Prog pf = compile_formula(f, idx);
  Prog pg = compile_formula(g, idx);
  std::vector<ClauseMask> axiom_masks;
  for (const Clause& c : axioms) axiom_masks.push_back(compile_clause(c, idx));

  const std::uint64_t total = std::uint64_t{1} << atoms.size();
  std::atomic<bool> differ{false};
  const int workers = resolve_jobs(jobs);
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
    if (differ.load(std::memory_order_relaxed)) continue;
    std::uint64_t mask = static_cast<std::uint64_t>(m);
    bool guarded = true;
    for (const ClauseMask& c : axiom_masks)
      if (!c.sat(mask)) {
        guarded = false;
        break;
      }
    if (!guarded) continue;
    if (pf.run(mask) != pg.run(mask))
      differ.store(true, std::memory_order_relaxed);
  }
  return !differ.load();
}

Formula clause_to_formula(const Clause& c, NormalForm form) {
  if (c.size() == 0) internal_error("empty clause has no formula form");
  std::vector<Formula> parts;
  parts.reserve(c.size());
  for (const Literal& l : c.lits()) {
    Formula leaf = Formula::leaf(l.atom);
    parts.push_back(l.positive ? leaf : Formula::negation(leaf));
  }
  return form == NormalForm::CNF ? Formula::disj_all(parts)
                                 : Formula::conj_all(parts);
}

Formula clauses_to_formula(const ClauseSeq& seq) {
  if (seq.clauses.empty()) internal_error("empty clause list has no formula");
  std::vector<Formula> parts;
  parts.reserve(seq.clauses.size());
  for (const Clause& c : seq.clauses)
    parts.push_back(clause_to_formula(c, seq.form));
  return seq.form == NormalForm::CNF ? Formula::conj_all(parts)
                                     : Formula::disj_all(parts);
}

namespace {

bool literal_of(const Formula::Node* n, std::vector<Literal>& out) {
  if (n->op == Formula::Op::Leaf) {
    out.push_back(pos(n->atom));
    return true;
  }
  if (n->op == Formula::Op::Not &&
      n->lhs->op == Formula::Op::Leaf) {
    out.push_back(neg(n->lhs->atom));
    return true;
  }
  return false;
}

bool disjunction_of(const Formula::Node* n, std::vector<Literal>& out) {
  if (n->op == Formula::Op::Or)
    return disjunction_of(n->lhs.get(), out) &&
           disjunction_of(n->rhs.get(), out);
  return literal_of(n, out);
}

bool conjunction_of(const Formula::Node* n, std::vector<Clause>& out) {
  if (n->op == Formula::Op::And)
    return conjunction_of(n->lhs.get(), out) &&
           conjunction_of(n->rhs.get(), out);
  std::vector<Literal> lits;
  if (!disjunction_of(n, lits)) return false;
  out.emplace_back(std::move(lits));
  return true;
}

}  // namespace

std::optional<std::vector<Clause>> formula_to_cnf(const Formula& f) {
  std::vector<Clause> out;
  if (!conjunction_of(&f.root(), out)) return std::nullopt;
  return out;
}

}  // namespace synopt
