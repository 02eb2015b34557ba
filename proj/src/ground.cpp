// SPDX-License-Identifier: Apache-2.0
#include "synopt/ground.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "synopt/parallel.hpp"

namespace synopt {

std::string GroundAtom::display() const {
  if (elems.empty()) return symbol;
  std::string out = symbol + "(";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ",";
    out += elems[i];
  }
  return out + ")";
}

PropClause::PropClause(std::vector<PropLit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

std::uint32_t PropCNF::var_id(const GroundAtom& atom) {
  auto it = index_.find(atom);
  if (it != index_.end()) return it->second;
  std::uint32_t id = static_cast<std::uint32_t>(vars.size());
  vars.push_back(atom);
  index_.emplace(atom, id);
  return id;
}

std::optional<std::uint32_t> PropCNF::find_var(const GroundAtom& atom) const {
  auto it = index_.find(atom);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

struct RawLit {
  GroundAtom atom;
  bool positive;
};

struct RawClause {
  std::size_t source = 0;
  std::vector<RawLit> lits;
};

ElemId ground_term(const FiniteStructure& structure,
                   const VariableBinding& binding, const Term& t) {
  if (t.kind == Term::Kind::Constant) return structure.constant_value(t.name);
  auto id = binding.lookup(t.name);
  if (!id) input_error("unbound variable '" + t.name + "'");
  return *id;
}

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap,
                        const char* what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) cap_error(what);
    out *= base;
  }
  if (out > cap) cap_error(what);
  return out;
}

}  // namespace

PropCNF ground(const Query& query, const FiniteStructure& structure,
               const VariableBinding& binding, int jobs) {
  auto matrix = formula_to_cnf(query.matrix);
  if (!matrix) input_error("matrix is not a conjunction of clauses");
  for (const auto& v : query.free_vars)
    if (!binding.lookup(v))
      input_error("free variable '" + v + "' is not bound");

  const std::size_t n = structure.size();
  const std::size_t k = query.bound_vars.size();
  const std::size_t total =
      checked_pow(n, k, std::size_t{1} << 24, "bound variable space too large");

  const std::vector<Clause>& clauses = *matrix;
  std::vector<std::vector<RawClause>> slots(total);
  std::atomic<bool> failed{false};
  std::string fail_msg;
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(total); ++bi) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      VariableBinding full = binding;
      std::size_t rem = static_cast<std::size_t>(bi);
      for (std::size_t v = k; v-- > 0;) {
        full.bind(query.bound_vars[v], static_cast<ElemId>(rem % n));
        rem /= n;
      }
      std::vector<RawClause> mine;
      for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
        RawClause rc;
        rc.source = ci;
        bool satisfied = false;
        for (const Literal& lit : clauses[ci].lits()) {
          const Atom& a = lit.atom;
          const RelationSymbol* sym =
              a.kind == Atom::Kind::Relation
                  ? query.vocab.find_relation(a.symbol)
                  : nullptr;
          bool second_order = sym && sym->kind == SymbolKind::SecondOrder;
          if (a.kind == Atom::Kind::Relation && !sym)
            input_error("unknown relation '" + a.symbol + "'");
          if (second_order) {
            RawLit rl;
            rl.positive = lit.positive;
            rl.atom.symbol = a.symbol;
            for (const Term& t : a.args)
              rl.atom.elems.push_back(
                  structure.elem_name(ground_term(structure, full, t)));
            rc.lits.push_back(std::move(rl));
            continue;
          }
          bool value;
          if (a.kind == Atom::Kind::Equality) {
            value = ground_term(structure, full, a.args.at(0)) ==
                    ground_term(structure, full, a.args.at(1));
          } else {
            std::vector<ElemId> tuple;
            tuple.reserve(a.args.size());
            for (const Term& t : a.args)
              tuple.push_back(ground_term(structure, full, t));
            value = structure.holds(a.symbol, tuple);
          }
          if (value == lit.positive) {
            satisfied = true;
            break;
          }
          // false literal: drops out of the clause
        }
        if (!satisfied) mine.push_back(std::move(rc));
      }
      slots[static_cast<std::size_t>(bi)] = std::move(mine);
    } catch (const Error& e) {
      bool expected = false;
      if (failed.compare_exchange_strong(expected, true)) {
#pragma omp critical
        fail_msg = e.what();
      }
    }
  }
  if (failed.load()) input_error(fail_msg);

  PropCNF out;
  for (std::size_t bi = 0; bi < total; ++bi) {
    std::string bdesc;
    if (k > 0) {
      std::size_t rem = bi;
      std::vector<ElemId> elems(k);
      for (std::size_t v = k; v-- > 0;) {
        elems[v] = static_cast<ElemId>(rem % n);
        rem /= n;
      }
      std::ostringstream os;
      for (std::size_t v = 0; v < k; ++v) {
        if (v) os << " ";
        os << query.bound_vars[v] << "=" << structure.elem_name(elems[v]);
      }
      bdesc = os.str();
    }
    for (RawClause& rc : slots[bi]) {
      std::vector<PropLit> lits;
      lits.reserve(rc.lits.size());
      for (const RawLit& rl : rc.lits)
        lits.push_back(PropLit{out.var_id(rl.atom), rl.positive});
      out.clauses.emplace_back(std::move(lits));
      out.origins.push_back(ClauseOrigin{rc.source, bdesc});
    }
  }
  return out;
}

HornResult horn_sat(const PropCNF& cnf) {
  const std::size_t nv = cnf.vars.size();
  for (std::size_t ci = 0; ci < cnf.clauses.size(); ++ci) {
    std::size_t positives = 0;
    for (const PropLit& l : cnf.clauses[ci].lits())
      if (l.positive) ++positives;
    if (positives > 1)
      input_error("clause " + std::to_string(ci) + " is not Horn");
  }

  std::vector<std::vector<std::size_t>> neg_occ(nv);
  std::vector<std::size_t> neg_left(cnf.clauses.size(), 0);
  std::vector<std::optional<std::uint32_t>> head(cnf.clauses.size());
  std::vector<bool> value(nv, false);
  std::vector<std::uint32_t> queue;

  HornResult res;
  for (std::size_t ci = 0; ci < cnf.clauses.size(); ++ci) {
    const PropClause& c = cnf.clauses[ci];
    if (c.size() == 0) {
      res.satisfiable = false;
      res.conflict_clause = ci;
      return res;
    }
    for (const PropLit& l : c.lits()) {
      if (l.positive)
        head[ci] = l.var;
      else {
        neg_occ[l.var].push_back(ci);
        ++neg_left[ci];
      }
    }
    if (neg_left[ci] == 0 && !value[*head[ci]]) {
      value[*head[ci]] = true;
      queue.push_back(*head[ci]);
    }
  }

  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::uint32_t v = queue[qi];
    for (std::size_t ci : neg_occ[v]) {
      if (--neg_left[ci] > 0) continue;
      if (!head[ci]) {
        res.satisfiable = false;
        res.conflict_clause = ci;
        res.model.clear();
        return res;
      }
      if (!value[*head[ci]]) {
        value[*head[ci]] = true;
        queue.push_back(*head[ci]);
      }
    }
  }

  res.satisfiable = true;
  res.model = std::move(value);
  return res;
}

namespace {

struct BitClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

// Variable i occupies bit (nv-1-i), so ascending masks enumerate
// assignments in lexicographic order with variable 0 most significant.
std::vector<BitClause> bit_clauses(const PropCNF& cnf) {
  const std::size_t nv = cnf.vars.size();
  std::vector<BitClause> out;
  out.reserve(cnf.clauses.size());
  for (const PropClause& c : cnf.clauses) {
    BitClause b;
    for (const PropLit& l : c.lits()) {
      std::uint64_t bit = std::uint64_t{1} << (nv - 1 - l.var);
      (l.positive ? b.pos : b.neg) |= bit;
    }
    out.push_back(b);
  }
  return out;
}

bool mask_sat(const std::vector<BitClause>& clauses, std::uint64_t mask) {
  for (const BitClause& c : clauses)
    if ((mask & c.pos) == 0 && (~mask & c.neg) == 0) return false;
  return true;
}

SatResult mask_to_result(const PropCNF& cnf, std::uint64_t best) {
  SatResult res;
  const std::size_t nv = cnf.vars.size();
  if (best == UINT64_MAX) return res;
  res.satisfiable = true;
  res.witness.resize(nv);
  for (std::size_t i = 0; i < nv; ++i)
    res.witness[i] = (best >> (nv - 1 - i)) & 1;
  return res;
}

void check_var_cap(const PropCNF& cnf, std::size_t max_vars) {
  if (cnf.vars.size() > max_vars)
    cap_error("variable bound exceeded: " + std::to_string(cnf.vars.size()) +
              " variables, cap " + std::to_string(max_vars));
}

}  // namespace

SatResult brute_sat_serial(const PropCNF& cnf, std::size_t max_vars) {
  check_var_cap(cnf, max_vars);
  auto clauses = bit_clauses(cnf);
  const std::uint64_t total = std::uint64_t{1} << cnf.vars.size();
  for (std::uint64_t mask = 0; mask < total; ++mask)
    if (mask_sat(clauses, mask)) return mask_to_result(cnf, mask);
  return mask_to_result(cnf, UINT64_MAX);
}

SatResult brute_sat(const PropCNF& cnf, std::size_t max_vars, int jobs) {
  check_var_cap(cnf, max_vars);
  auto clauses = bit_clauses(cnf);
  const std::uint64_t total = std::uint64_t{1} << cnf.vars.size();
  std::atomic<std::uint64_t> best{UINT64_MAX};
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
    std::uint64_t mask = static_cast<std::uint64_t>(m);
    if (mask >= best.load(std::memory_order_relaxed)) continue;
    if (!mask_sat(clauses, mask)) continue;
    std::uint64_t cur = best.load(std::memory_order_relaxed);
    while (mask < cur &&
           !best.compare_exchange_weak(cur, mask, std::memory_order_relaxed)) {
    }
  }
  return mask_to_result(cnf, best.load());
}

std::string to_dimacs(const PropCNF& cnf) {
  std::ostringstream os;
  for (std::size_t i = 0; i < cnf.vars.size(); ++i)
    os << "c var " << (i + 1) << " = " << cnf.vars[i].display() << "\n";
  os << "p cnf " << cnf.vars.size() << " " << cnf.clauses.size() << "\n";
  for (const PropClause& c : cnf.clauses) {
    for (const PropLit& l : c.lits())
      os << (l.positive ? "" : "-") << (l.var + 1) << " ";
    os << "0\n";
  }
  return os.str();
}

PropCNF parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::size_t, std::string> names;
  bool have_header = false;
  std::size_t nvars = 0, nclauses = 0;
  std::vector<std::vector<long>> raw;
  std::vector<long> current;

  while (std::getline(in, line)) {
    ++lineno;
    SourceSpan span{lineno, 1, 0};
    if (line.empty()) continue;
    if (line[0] == 'c') {
      std::istringstream cs(line);
      std::string c, var, num, eq;
      if (cs >> c >> var >> num >> eq && var == "var" && eq == "=") {
        std::string rest;
        std::getline(cs, rest);
        if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
        std::size_t id = 0;
        try {
          id = std::stoul(num);
        } catch (...) {
          input_error("malformed variable comment", span);
        }
        if (id == 0) input_error("variable ids are 1-based", span);
        names[id - 1] = rest;
      }
      continue;
    }
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
        current.push_back(v);
      }
    }
    if (!ls.eof()) input_error("malformed clause line", span);
  }
  if (!have_header) input_error("missing 'p cnf' header");
  if (!current.empty()) input_error("unterminated clause");
  if (raw.size() != nclauses)
    input_error("header declares " + std::to_string(nclauses) +
                " clauses, found " + std::to_string(raw.size()));

  PropCNF out;
  for (std::size_t i = 0; i < nvars; ++i) {
    GroundAtom a;
    auto it = names.find(i);
    a.symbol = it != names.end() ? it->second : "x" + std::to_string(i + 1);
    out.var_id(a);
  }
  for (std::size_t ci = 0; ci < raw.size(); ++ci) {
    std::vector<PropLit> lits;
    for (long v : raw[ci])
      lits.push_back(PropLit{static_cast<std::uint32_t>((v < 0 ? -v : v) - 1),
                             v > 0});
    out.clauses.emplace_back(std::move(lits));
    out.origins.push_back(ClauseOrigin{ci, ""});
  }
  return out;
}

}  // namespace synopt
