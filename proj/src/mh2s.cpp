// SPDX-License-Identifier: Apache-2.0
#include "synopt/mh2s.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "synopt/parallel.hpp"

namespace synopt {

namespace {

struct RawLit {
  long value;
  SourceSpan span;
};

}  // namespace

MH2SInstance parse_mh2s(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t nvars = 0, nclauses = 0;
  std::vector<std::vector<RawLit>> raw;
  std::vector<RawLit> current;

  while (std::getline(in, line)) {
    ++lineno;
    SourceSpan span{lineno, 1, 0};
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      if (have_header) input_error("duplicate header", span);
      std::istringstream ps(line);
      std::string p, fmt;
      if (!(ps >> p >> fmt >> nvars >> nclauses) || fmt != "cnf")
        input_error("malformed header, expected 'p cnf V C'", span);
      have_header = true;
      continue;
    }
    if (!have_header) input_error("clause before header", span);
    std::istringstream ls(line);
    long v;
    while (ls >> v) {
      if (v == 0) {
        raw.push_back(current);
        current.clear();
      } else {
        std::size_t id = static_cast<std::size_t>(v < 0 ? -v : v);
        if (id > nvars)
          input_error("literal " + std::to_string(v) +
                          " exceeds declared variable count",
                      span);
        current.push_back({v, span});
      }
    }
    if (!ls.eof()) input_error("malformed clause line", span);
  }
  if (!have_header) input_error("missing 'p cnf' header");
  if (!current.empty()) input_error("unterminated clause");
  if (raw.size() != nclauses)
    input_error("header declares " + std::to_string(nclauses) +
                " clauses, found " + std::to_string(raw.size()));

  MH2SInstance inst;
  inst.num_vars = static_cast<std::uint32_t>(nvars);
  for (std::size_t ci = 0; ci < raw.size(); ++ci) {
    const auto& lits = raw[ci];
    if (lits.empty())
      input_error("clause " + std::to_string(ci) + " is empty");
    if (lits.size() > 2)
      input_error("clause " + std::to_string(ci) + " has " +
                      std::to_string(lits.size()) + " literals; at most 2",
                  lits[2].span);
    MH2SClause c;
    if (lits.size() == 1) {
      c.kind = lits[0].value > 0 ? MH2SKind::PosUnit : MH2SKind::NegUnit;
      c.a = static_cast<std::uint32_t>(
          (lits[0].value < 0 ? -lits[0].value : lits[0].value) - 1);
      c.b = 0;
    } else {
      if (lits[0].value == lits[1].value)
        input_error("clause " + std::to_string(ci) + " repeats a literal",
                    lits[1].span);
      bool p0 = lits[0].value > 0, p1 = lits[1].value > 0;
      if (p0 && p1)
        input_error("clause " + std::to_string(ci) +
                        " has two positive literals; not Horn",
                    lits[1].span);
      c.a = static_cast<std::uint32_t>(
          (lits[0].value < 0 ? -lits[0].value : lits[0].value) - 1);
      c.b = static_cast<std::uint32_t>(
          (lits[1].value < 0 ? -lits[1].value : lits[1].value) - 1);
      if (p0)
        c.kind = MH2SKind::PosNeg;
      else if (p1)
        c.kind = MH2SKind::NegPos;
      else
        c.kind = MH2SKind::NegNeg;
    }
    inst.clauses.push_back(c);
  }
  return inst;
}

bool clause_satisfied(const MH2SClause& c, const std::vector<bool>& assign) {
  bool va = assign.at(c.a);
  switch (c.kind) {
    case MH2SKind::PosUnit: return va;
    case MH2SKind::NegUnit: return !va;
    case MH2SKind::PosNeg: return va || !assign.at(c.b);
    case MH2SKind::NegPos: return !va || assign.at(c.b);
    case MH2SKind::NegNeg: return !va || !assign.at(c.b);
  }
  internal_error("corrupt clause kind");
}

namespace {

std::uint64_t satisfied_count(const MH2SInstance& inst, std::uint64_t mask) {
  const std::uint32_t n = inst.num_vars;
  auto bit = [&](std::uint32_t v) -> bool {
    return (mask >> (n - 1 - v)) & 1;
  };
  std::uint64_t count = 0;
  for (const MH2SClause& c : inst.clauses) {
    bool sat = false;
    switch (c.kind) {
      case MH2SKind::PosUnit: sat = bit(c.a); break;
      case MH2SKind::NegUnit: sat = !bit(c.a); break;
      case MH2SKind::PosNeg: sat = bit(c.a) || !bit(c.b); break;
      case MH2SKind::NegPos: sat = !bit(c.a) || bit(c.b); break;
      case MH2SKind::NegNeg: sat = !bit(c.a) || !bit(c.b); break;
    }
    if (sat) ++count;
  }
  return count;
}

MH2SOpt mask_opt(const MH2SInstance& inst, std::uint64_t count,
                 std::uint64_t mask) {
  MH2SOpt out;
  out.optimum = count;
  out.assignment.resize(inst.num_vars);
  for (std::uint32_t i = 0; i < inst.num_vars; ++i)
    out.assignment[i] = (mask >> (inst.num_vars - 1 - i)) & 1;
  return out;
}

void check_mh2s_cap(const MH2SInstance& inst, std::size_t max_vars) {
  if (inst.num_vars > max_vars)
    cap_error("variable bound exceeded: " + std::to_string(inst.num_vars) +
              " variables, cap " + std::to_string(max_vars));
}

}  // namespace

MH2SOpt brute_force_opt_serial(const MH2SInstance& inst,
                               std::size_t max_vars) {
  check_mh2s_cap(inst, max_vars);
  const std::uint64_t total = std::uint64_t{1} << inst.num_vars;
  std::uint64_t best_count = 0, best_mask = 0;
  bool have = false;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::uint64_t c = satisfied_count(inst, mask);
    if (!have || c > best_count) {
      have = true;
      best_count = c;
      best_mask = mask;
    }
  }
  return mask_opt(inst, best_count, best_mask);
}

MH2SOpt brute_force_opt(const MH2SInstance& inst, std::size_t max_vars,
                        int jobs) {
  check_mh2s_cap(inst, max_vars);
  const std::uint64_t total = std::uint64_t{1} << inst.num_vars;
  std::uint64_t best_count = 0, best_mask = 0;
  bool have = false;
#pragma omp parallel num_threads(resolve_jobs(jobs))
  {
    std::uint64_t my_count = 0, my_mask = 0;
    bool mine = false;
#pragma omp for schedule(static) nowait
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
      std::uint64_t c = satisfied_count(inst, static_cast<std::uint64_t>(m));
      if (!mine || c > my_count) {
        mine = true;
        my_count = c;
        my_mask = static_cast<std::uint64_t>(m);
      }
    }
#pragma omp critical
    {
      if (mine && (!have || my_count > best_count ||
                   (my_count == best_count && my_mask < best_mask))) {
        have = true;
        best_count = my_count;
        best_mask = my_mask;
      }
    }
  }
  return mask_opt(inst, best_count, best_mask);
}

namespace {

Atom pair_atom(const char* symbol) {
  return rel_atom(symbol, {var("x"), var("y")});
}

}  // namespace

ClauseSeq mh2s_phi_dnf() {
  Atom A = pair_atom("FPSN");
  Atom B = pair_atom("FNSP");
  Atom C = pair_atom("BothNeg");
  Atom D = pair_atom("BothPos");
  Atom P = rel_atom("S", {var("x")});
  Atom Q = rel_atom("S", {var("y")});

  ClauseSeq dnf;
  dnf.form = NormalForm::DNF;
  dnf.clauses = {
      Clause({pos(A), pos(P)}), Clause({pos(A), neg(Q)}),
      Clause({pos(B), neg(P)}), Clause({pos(B), pos(Q)}),
      Clause({pos(C), neg(P)}), Clause({pos(C), neg(Q)}),
      Clause({pos(D), pos(P)}),
  };
  return dnf;
}

AxiomSet mh2s_axioms() {
  Atom A = pair_atom("FPSN");
  Atom B = pair_atom("FNSP");
  Atom C = pair_atom("BothNeg");
  Atom D = pair_atom("BothPos");
  return {
      Clause({pos(A), pos(B), pos(C), pos(D)}),
      Clause({neg(A), neg(B)}),
      Clause({neg(A), neg(C)}),
      Clause({neg(A), neg(D)}),
      Clause({neg(B), neg(C)}),
      Clause({neg(B), neg(D)}),
      Clause({neg(C), neg(D)}),
  };
}

const ClauseSeq& mh2s_psi_raw() {
  static const ClauseSeq psi = dnf_to_cnf(mh2s_phi_dnf());
  return psi;
}

namespace {

std::size_t positive_s_literals(const Clause& c) {
  std::size_t n = 0;
  for (const Literal& lit : c.lits())
    if (lit.positive && lit.atom.symbol == "S") ++n;
  return n;
}

}  // namespace

const ClauseSeq& mh2s_psi_simplified() {
  // The sweep keeps whatever survives, so clauses with two positive S
  // literals must be offered for deletion while their one-positive
  // subsumers are still present; ordering them first keeps the fixpoint
  // Horn.
  static const ClauseSeq psi = [] {
    ClauseSeq ordered = mh2s_psi_raw();
    std::stable_sort(ordered.clauses.begin(), ordered.clauses.end(),
                     [](const Clause& l, const Clause& r) {
                       return positive_s_literals(l) > positive_s_literals(r);
                     });
    return simplify_cnf(ordered, mh2s_axioms());
  }();
  return psi;
}

std::string mh2s_var_name(std::uint32_t index) {
  return "z" + std::to_string(index + 1);
}

EncodedMH2S encode(const MH2SInstance& inst, bool dedupe) {
  std::vector<MH2SClause> clauses = inst.clauses;
  if (dedupe) {
    std::vector<MH2SClause> unique;
    for (const MH2SClause& c : clauses)
      if (std::find(unique.begin(), unique.end(), c) == unique.end())
        unique.push_back(c);
    clauses = std::move(unique);
  }

  // clause -> (ordered pair, pair predicate, marker)
  struct Placement {
    std::string pair_rel;
    std::string marker;
    std::string x, y;
  };
  const std::string dummy = "d";
  std::map<std::pair<std::string, std::string>, std::size_t> used;
  std::vector<Placement> placements;
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    const MH2SClause& c = clauses[ci];
    if (c.a >= inst.num_vars ||
        (c.kind != MH2SKind::PosUnit && c.kind != MH2SKind::NegUnit &&
         c.b >= inst.num_vars))
      input_error("clause " + std::to_string(ci) +
                  " references a variable out of range");
    Placement p;
    switch (c.kind) {
      case MH2SKind::PosNeg:
        p = {"FPSN", "L1", mh2s_var_name(c.a), mh2s_var_name(c.b)};
        break;
      case MH2SKind::NegPos:
        p = {"FNSP", "L2", mh2s_var_name(c.a), mh2s_var_name(c.b)};
        break;
      case MH2SKind::NegNeg:
        p = {"BothNeg", "L3", mh2s_var_name(c.a), mh2s_var_name(c.b)};
        break;
      case MH2SKind::PosUnit:
        p = {"BothPos", "L4", mh2s_var_name(c.a), dummy};
        break;
      case MH2SKind::NegUnit:
        p = {"FNSP", "L2", mh2s_var_name(c.a), dummy};
        break;
    }
    auto [it, fresh] = used.emplace(std::make_pair(p.x, p.y), ci);
    if (!fresh)
      input_error("clauses " + std::to_string(it->second) + " and " +
                  std::to_string(ci) + " encode to the same ordered pair (" +
                  p.x + "," + p.y + ")");
    placements.push_back(std::move(p));
  }

  Vocabulary vocab;
  vocab.add_relation("FPSN", 2, SymbolKind::FirstOrder);
  vocab.add_relation("FNSP", 2, SymbolKind::FirstOrder);
  vocab.add_relation("BothNeg", 2, SymbolKind::FirstOrder);
  vocab.add_relation("BothPos", 2, SymbolKind::FirstOrder);
  vocab.add_relation("L1", 2, SymbolKind::FirstOrder);
  vocab.add_relation("L2", 2, SymbolKind::FirstOrder);
  vocab.add_relation("L3", 2, SymbolKind::FirstOrder);
  vocab.add_relation("L4", 2, SymbolKind::FirstOrder);
  vocab.add_constant(dummy);

  std::vector<std::string> universe;
  for (std::uint32_t i = 0; i < inst.num_vars; ++i)
    universe.push_back(mh2s_var_name(i));
  universe.push_back(dummy);

  FiniteStructure structure(vocab, universe);
  for (const Placement& p : placements) {
    structure.add_tuple(p.pair_rel, {p.x, p.y});
    structure.add_tuple(p.marker, {p.x, p.y});
  }
  structure.set_constant(dummy, dummy);

  Query q;
  q.vocab = vocab;
  q.vocab.add_relation("S", 1, SymbolKind::SecondOrder);
  q.free_vars = {"x", "y"};

  const ClauseSeq& psi = mh2s_psi_simplified();
  std::vector<Formula> parts;
  parts.reserve(psi.clauses.size() + 2);
  for (const Clause& c : psi.clauses)
    parts.push_back(clause_to_formula(c, NormalForm::CNF));
  parts.push_back(Formula::disj_all({
      Formula::leaf(pair_atom("L1")),
      Formula::leaf(pair_atom("L2")),
      Formula::leaf(pair_atom("L3")),
      Formula::leaf(pair_atom("L4")),
  }));
  parts.push_back(
      Formula::negation(Formula::leaf(rel_atom("S", {cons(dummy)}))));
  q.matrix = Formula::conj_all(parts);

  return EncodedMH2S{
      SyntacticInstance{std::move(structure), std::move(q)},
      mh2s_psi_raw().raw_clause_count,
      mh2s_psi_raw().raw_literals_per_clause,
      psi.clauses.size(),
      psi.clauses.size() + 2,
  };
}

bool mh2s_decide(const MH2SInstance& inst, std::uint64_t k, bool dedupe,
                 int jobs) {
  EncodedMH2S enc = encode(inst, dedupe);
  return decide_max(enc.instance, k, std::uint64_t{1} << 24, jobs);
}

}  // namespace synopt
