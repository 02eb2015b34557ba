// SPDX-License-Identifier: Apache-2.0
#include "synopt/syntactic_eval.hpp"

#include <algorithm>
#include <atomic>

#include "synopt/parallel.hpp"

namespace synopt {

namespace {

std::size_t checked_pow_sz(std::size_t base, unsigned exp) {
  std::size_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && out > SIZE_MAX / base) cap_error("tuple space overflow");
    out *= base;
  }
  return out;
}

std::size_t so_bits(const SyntacticInstance& inst) {
  std::size_t bits = 0;
  for (const RelationSymbol& s : inst.query.vocab.so_signature()) {
    bits += checked_pow_sz(inst.structure.size(), s.arity);
    if (bits > 62)
      cap_error("second-order table space needs " + std::to_string(bits) +
                " bits; at most 62 are supported");
  }
  return bits;
}

SOAssignment mask_assignment(const SyntacticInstance& inst,
                             std::uint64_t mask, std::size_t bits) {
  SOAssignment so(inst.query.vocab.so_signature(), inst.structure.size());
  std::size_t flat = 0;
  for (std::size_t sym = 0; sym < so.signature().size(); ++sym)
    for (std::size_t t = 0; t < so.table_size(sym); ++t, ++flat)
      so.set_by_index(sym, t, (mask >> (bits - 1 - flat)) & 1);
  return so;
}

void check_limit(std::uint64_t total, std::uint64_t limit) {
  if (total > limit)
    cap_error("assignment space of size " + std::to_string(total) +
              " exceeds the limit " + std::to_string(limit));
}

// --- compiled evaluation kernel ------------------------------------
//
// The matrix is compiled once into a postfix program over atom slots.
// For every combination of count-tuple and bound-tuple values, each
// slot resolves to either a known constant (first-order and equality
// atoms) or a bit position in the flattened second-order tables.

constexpr std::uint32_t kFalse = 0xFFFFFFFE;
constexpr std::uint32_t kTrue = 0xFFFFFFFF;

struct MatrixProg {
  enum : std::uint8_t { PUSH, NOT, AND, OR };
  struct Ins {
    std::uint8_t op;
    std::uint32_t slot;
  };
  std::vector<Ins> ins;
};

void compile_matrix(const Formula::Node* n, const std::vector<Atom>& atoms,
                    MatrixProg& prog) {
  switch (n->op) {
    case Formula::Op::Leaf: {
      auto it = std::find(atoms.begin(), atoms.end(), n->atom);
      prog.ins.push_back(
          {MatrixProg::PUSH,
           static_cast<std::uint32_t>(it - atoms.begin())});
      return;
    }
    case Formula::Op::Not:
      compile_matrix(n->lhs.get(), atoms, prog);
      prog.ins.push_back({MatrixProg::NOT, 0});
      return;
    case Formula::Op::And:
    case Formula::Op::Or:
      compile_matrix(n->lhs.get(), atoms, prog);
      compile_matrix(n->rhs.get(), atoms, prog);
      prog.ins.push_back(
          {n->op == Formula::Op::And ? MatrixProg::AND : MatrixProg::OR, 0});
      return;
  }
  internal_error("corrupt formula node");
}

struct CompiledInstance {
  std::size_t bits = 0;          // flattened table width
  std::size_t free_total = 1;    // n^|count tuple|
  std::size_t bound_total = 1;   // n^|forall block|
  MatrixProg prog;
  // slot operands per (free index * bound_total + bound index)
  std::vector<std::vector<std::uint32_t>> ops;
};

CompiledInstance compile_instance(const SyntacticInstance& inst) {
  CompiledInstance ci;
  ci.bits = so_bits(inst);
  const FiniteStructure& s = inst.structure;
  const Query& q = inst.query;
  const std::size_t n = s.size();
  ci.free_total = checked_pow_sz(n, static_cast<unsigned>(q.free_vars.size()));
  ci.bound_total =
      checked_pow_sz(n, static_cast<unsigned>(q.bound_vars.size()));

  std::vector<Atom> atoms = collect_atoms(q.matrix);
  compile_matrix(&q.matrix.root(), atoms, ci.prog);

  // second-order table offsets in flattened order
  std::map<std::string, std::pair<std::size_t, unsigned>> so_offset;
  std::size_t off = 0;
  for (const RelationSymbol& sym : q.vocab.so_signature()) {
    so_offset[sym.name] = {off, sym.arity};
    off += checked_pow_sz(n, sym.arity);
  }

  ci.ops.resize(ci.free_total * ci.bound_total);
  VariableBinding binding;
  for (std::size_t f = 0; f < ci.free_total; ++f) {
    std::size_t rem = f;
    for (std::size_t v = q.free_vars.size(); v-- > 0;) {
      binding.bind(q.free_vars[v], static_cast<ElemId>(rem % n));
      rem /= n;
    }
    for (std::size_t b = 0; b < ci.bound_total; ++b) {
      rem = b;
      for (std::size_t v = q.bound_vars.size(); v-- > 0;) {
        binding.bind(q.bound_vars[v], static_cast<ElemId>(rem % n));
        rem /= n;
      }
      std::vector<std::uint32_t>& slot = ci.ops[f * ci.bound_total + b];
      slot.reserve(atoms.size());
      for (const Atom& a : atoms) {
        auto term_val = [&](const Term& t) -> ElemId {
          if (t.kind == Term::Kind::Constant) return s.constant_value(t.name);
          auto id = binding.lookup(t.name);
          if (!id) input_error("unbound variable '" + t.name + "'");
          return *id;
        };
        if (a.kind == Atom::Kind::Equality) {
          slot.push_back(term_val(a.args.at(0)) == term_val(a.args.at(1))
                             ? kTrue
                             : kFalse);
          continue;
        }
        auto so_it = so_offset.find(a.symbol);
        if (so_it != so_offset.end()) {
          std::vector<ElemId> tuple;
          tuple.reserve(a.args.size());
          for (const Term& t : a.args) tuple.push_back(term_val(t));
          if (tuple.size() != so_it->second.second)
            input_error("arity mismatch for '" + a.symbol + "'");
          slot.push_back(static_cast<std::uint32_t>(
              so_it->second.first + tuple_index(tuple, n)));
          continue;
        }
        const RelationSymbol* sym = s.vocab().find_relation(a.symbol);
        if (!sym) input_error("unknown relation '" + a.symbol + "'");
        std::vector<ElemId> tuple;
        tuple.reserve(a.args.size());
        for (const Term& t : a.args) tuple.push_back(term_val(t));
        if (tuple.size() != sym->arity)
          input_error("arity mismatch for '" + a.symbol + "'");
        slot.push_back(s.holds(a.symbol, tuple) ? kTrue : kFalse);
      }
    }
  }
  return ci;
}

bool run_prog(const MatrixProg& prog, const std::vector<std::uint32_t>& ops,
              std::uint64_t mask, std::size_t bits) {
  char stack[4096];
  std::size_t top = 0;
  for (const MatrixProg::Ins& ins : prog.ins) {
    switch (ins.op) {
      case MatrixProg::PUSH: {
        std::uint32_t operand = ops[ins.slot];
        if (operand >= kFalse)
          stack[top++] = operand == kTrue;
        else
          stack[top++] = (mask >> (bits - 1 - operand)) & 1;
        break;
      }
      case MatrixProg::NOT:
        stack[top - 1] = !stack[top - 1];
        break;
      case MatrixProg::AND:
        --top;
        stack[top - 1] = stack[top - 1] && stack[top];
        break;
      case MatrixProg::OR:
        --top;
        stack[top - 1] = stack[top - 1] || stack[top];
        break;
    }
  }
  return stack[0];
}

std::uint64_t mask_count(const CompiledInstance& ci, std::uint64_t mask) {
  std::uint64_t count = 0;
  for (std::size_t f = 0; f < ci.free_total; ++f) {
    bool all = true;
    for (std::size_t b = 0; b < ci.bound_total && all; ++b)
      all = run_prog(ci.prog, ci.ops[f * ci.bound_total + b], mask, ci.bits);
    if (all) ++count;
  }
  return count;
}

}  // namespace

std::uint64_t enumeration_size(const SyntacticInstance& inst) {
  return std::uint64_t{1} << so_bits(inst);
}

EvalResult evaluate_max(const SyntacticInstance& inst, std::uint64_t limit,
                        int jobs) {
  CompiledInstance ci = compile_instance(inst);
  const std::uint64_t total = std::uint64_t{1} << ci.bits;
  check_limit(total, limit);

  std::uint64_t best_count = 0;
  std::uint64_t best_mask = 0;
  bool have_best = false;
#pragma omp parallel num_threads(resolve_jobs(jobs))
  {
    std::uint64_t my_count = 0, my_mask = 0;
    bool my_have = false;
#pragma omp for schedule(static) nowait
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
      std::uint64_t mask = static_cast<std::uint64_t>(m);
      std::uint64_t c = mask_count(ci, mask);
      if (!my_have || c > my_count) {
        my_have = true;
        my_count = c;
        my_mask = mask;
      }
    }
#pragma omp critical
    {
      if (my_have &&
          (!have_best || my_count > best_count ||
           (my_count == best_count && my_mask < best_mask))) {
        have_best = true;
        best_count = my_count;
        best_mask = my_mask;
      }
    }
  }

  EvalResult res;
  res.optimum = best_count;
  res.witness = mask_assignment(inst, best_mask, ci.bits);
  res.examined = total;
  return res;
}

EvalResult evaluate_max_serial(const SyntacticInstance& inst,
                               std::uint64_t limit) {
  const std::size_t bits = so_bits(inst);
  const std::uint64_t total = std::uint64_t{1} << bits;
  check_limit(total, limit);

  const FiniteStructure& s = inst.structure;
  const Query& q = inst.query;
  const std::size_t n = s.size();
  std::size_t free_total = 1, bound_total = 1;
  for (std::size_t i = 0; i < q.free_vars.size(); ++i) free_total *= n;
  for (std::size_t i = 0; i < q.bound_vars.size(); ++i) bound_total *= n;

  EvalResult res;
  res.examined = total;
  bool have_best = false;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    SOAssignment so = mask_assignment(inst, mask, bits);
    std::uint64_t count = 0;
    for (std::size_t f = 0; f < free_total; ++f) {
      VariableBinding binding;
      std::size_t rem = f;
      for (std::size_t v = q.free_vars.size(); v-- > 0;) {
        binding.bind(q.free_vars[v], static_cast<ElemId>(rem % n));
        rem /= n;
      }
      bool all = true;
      for (std::size_t b = 0; b < bound_total && all; ++b) {
        rem = b;
        for (std::size_t v = q.bound_vars.size(); v-- > 0;) {
          binding.bind(q.bound_vars[v], static_cast<ElemId>(rem % n));
          rem /= n;
        }
        all = eval_qf(s, so, binding, q.matrix);
      }
      if (all) ++count;
    }
    if (!have_best || count > res.optimum) {
      have_best = true;
      res.optimum = count;
      res.witness = so;
    }
  }
  return res;
}

bool decide_max(const SyntacticInstance& inst, std::uint64_t k,
                std::uint64_t limit, int jobs) {
  if (k == 0) return true;
  CompiledInstance ci = compile_instance(inst);
  const std::uint64_t total = std::uint64_t{1} << ci.bits;
  check_limit(total, limit);
  std::atomic<bool> found{false};
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
    if (found.load(std::memory_order_relaxed)) continue;
    if (mask_count(ci, static_cast<std::uint64_t>(m)) >= k)
      found.store(true, std::memory_order_relaxed);
  }
  return found.load();
}

bool decide_max_serial(const SyntacticInstance& inst, std::uint64_t k,
                       std::uint64_t limit) {
  if (k == 0) return true;
  const std::size_t bits = so_bits(inst);
  const std::uint64_t total = std::uint64_t{1} << bits;
  check_limit(total, limit);

  const FiniteStructure& s = inst.structure;
  const Query& q = inst.query;
  const std::size_t n = s.size();
  std::size_t free_total = 1, bound_total = 1;
  for (std::size_t i = 0; i < q.free_vars.size(); ++i) free_total *= n;
  for (std::size_t i = 0; i < q.bound_vars.size(); ++i) bound_total *= n;

  for (std::uint64_t mask = 0; mask < total; ++mask) {
    SOAssignment so = mask_assignment(inst, mask, bits);
    std::uint64_t count = 0;
    for (std::size_t f = 0; f < free_total; ++f) {
      VariableBinding binding;
      std::size_t rem = f;
      for (std::size_t v = q.free_vars.size(); v-- > 0;) {
        binding.bind(q.free_vars[v], static_cast<ElemId>(rem % n));
        rem /= n;
      }
      bool all = true;
      for (std::size_t b = 0; b < bound_total && all; ++b) {
        rem = b;
        for (std::size_t v = q.bound_vars.size(); v-- > 0;) {
          binding.bind(q.bound_vars[v], static_cast<ElemId>(rem % n));
          rem /= n;
        }
        all = eval_qf(s, so, binding, q.matrix);
      }
      if (all) ++count;
    }
    if (count >= k) return true;
  }
  return false;
}

}  // namespace synopt
