// SPDX-License-Identifier: Apache-2.0
#include "synopt/logic.hpp"

#include <algorithm>

namespace synopt {

void Vocabulary::add_relation(const std::string& name, unsigned arity,
                              SymbolKind kind) {
  if (arity == 0) input_error("relation '" + name + "' with arity 0");
  if (has_name(name)) input_error("duplicate symbol '" + name + "'");
  relation_index_[name] = relations_.size();
  relations_.push_back({name, arity, kind});
}

void Vocabulary::add_constant(const std::string& name) {
  if (has_name(name)) input_error("duplicate symbol '" + name + "'");
  constant_names_.insert(name);
  constants_.push_back(name);
}

const RelationSymbol* Vocabulary::find_relation(const std::string& name) const {
  auto it = relation_index_.find(name);
  if (it == relation_index_.end()) return nullptr;
  return &relations_[it->second];
}

bool Vocabulary::has_constant(const std::string& name) const {
  return constant_names_.count(name) != 0;
}

bool Vocabulary::has_name(const std::string& name) const {
  return find_relation(name) != nullptr || has_constant(name);
}

std::vector<RelationSymbol> Vocabulary::so_signature() const {
  std::vector<RelationSymbol> out;
  for (const auto& r : relations_)
    if (r.kind == SymbolKind::SecondOrder) out.push_back(r);
  return out;
}

FiniteStructure::FiniteStructure(Vocabulary vocab,
                                 std::vector<std::string> universe)
    : vocab_(std::move(vocab)), universe_(std::move(universe)) {
  if (universe_.empty()) input_error("empty universe");
  for (std::size_t i = 0; i < universe_.size(); ++i) {
    auto [it, fresh] =
        elem_ids_.emplace(universe_[i], static_cast<ElemId>(i));
    if (!fresh) input_error("duplicate universe element '" + universe_[i] + "'");
  }
  for (const auto& r : vocab_.relations())
    if (r.kind == SymbolKind::FirstOrder) tuples_[r.name];
}

std::optional<ElemId> FiniteStructure::elem_id(const std::string& name) const {
  auto it = elem_ids_.find(name);
  if (it == elem_ids_.end()) return std::nullopt;
  return it->second;
}

void FiniteStructure::add_tuple(const std::string& relation,
                                const std::vector<std::string>& elems,
                                std::optional<SourceSpan> span) {
  const RelationSymbol* sym = vocab_.find_relation(relation);
  if (!sym || sym->kind != SymbolKind::FirstOrder)
    input_error("unknown relation '" + relation + "'", span);
  if (elems.size() != sym->arity)
    input_error("arity mismatch for '" + relation + "': expected " +
                    std::to_string(sym->arity) + " got " +
                    std::to_string(elems.size()),
                span);
  std::vector<ElemId> tuple;
  tuple.reserve(elems.size());
  for (const auto& e : elems) {
    auto id = elem_id(e);
    if (!id) input_error("unknown element '" + e + "'", span);
    tuple.push_back(*id);
  }
  tuples_[relation].insert(std::move(tuple));
}

void FiniteStructure::set_constant(const std::string& name,
                                   const std::string& elem,
                                   std::optional<SourceSpan> span) {
  if (!vocab_.has_constant(name))
    input_error("unknown constant '" + name + "'", span);
  auto id = elem_id(elem);
  if (!id) input_error("unknown element '" + elem + "'", span);
  constants_[name] = *id;
}

bool FiniteStructure::holds(const std::string& relation,
                            const std::vector<ElemId>& tuple) const {
  return tuples(relation).count(tuple) != 0;
}

const std::set<std::vector<ElemId>>& FiniteStructure::tuples(
    const std::string& relation) const {
  auto it = tuples_.find(relation);
  if (it == tuples_.end())
    input_error("unknown relation '" + relation + "'");
  return it->second;
}

ElemId FiniteStructure::constant_value(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end())
    input_error("constant '" + name + "' has no value");
  return it->second;
}

Formula Formula::leaf(Atom a) {
  auto node = std::make_shared<Node>();
  node->op = Op::Leaf;
  node->atom = std::move(a);
  return Formula(node);
}

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<Node>();
  node->op = Op::Not;
  node->lhs = f.node_;
  return Formula(node);
}

Formula Formula::conj(Formula a, Formula b) {
  auto node = std::make_shared<Node>();
  node->op = Op::And;
  node->lhs = a.node_;
  node->rhs = b.node_;
  return Formula(node);
}

Formula Formula::disj(Formula a, Formula b) {
  auto node = std::make_shared<Node>();
  node->op = Op::Or;
  node->lhs = a.node_;
  node->rhs = b.node_;
  return Formula(node);
}

Formula Formula::implies(Formula a, Formula b) {
  return disj(negation(std::move(a)), std::move(b));
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) internal_error("conj_all of empty list");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) internal_error("disj_all of empty list");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
  return acc;
}

const Formula::Node& Formula::root() const {
  if (!node_) internal_error("empty formula");
  return *node_;
}

namespace {

bool nodes_equal(const Formula::Node* a, const Formula::Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Formula::Op::Leaf) return a->atom == b->atom;
  return nodes_equal(a->lhs.get(), b->lhs.get()) &&
         nodes_equal(a->rhs.get(), b->rhs.get());
}

void walk_atoms(const Formula::Node* n, std::vector<Atom>& out,
                std::set<Atom>& seen) {
  if (!n) return;
  if (n->op == Formula::Op::Leaf) {
    if (seen.insert(n->atom).second) out.push_back(n->atom);
    return;
  }
  walk_atoms(n->lhs.get(), out, seen);
  walk_atoms(n->rhs.get(), out, seen);
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  return nodes_equal(a.node_.get(), b.node_.get());
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  for (const Atom& a : collect_atoms(f))
    for (const Term& t : a.args)
      if (t.kind == Term::Kind::Variable) out.insert(t.name);
  return out;
}

std::vector<Atom> collect_atoms(const Formula& f) {
  std::vector<Atom> out;
  std::set<Atom> seen;
  if (!f.empty()) walk_atoms(&f.root(), out, seen);
  return out;
}

void VariableBinding::bind(const std::string& name, ElemId elem) {
  for (auto& [n, e] : entries_)
    if (n == name) {
      e = elem;
      return;
    }
  entries_.emplace_back(name, elem);
}

std::optional<ElemId> VariableBinding::lookup(const std::string& name) const {
  for (const auto& [n, e] : entries_)
    if (n == name) return e;
  return std::nullopt;
}

namespace {

std::size_t pow_size(std::size_t base, unsigned exp) {
  std::size_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && out > SIZE_MAX / base) cap_error("tuple space overflow");
    out *= base;
  }
  return out;
}

}  // namespace

SOAssignment::SOAssignment(const std::vector<RelationSymbol>& signature,
                           std::size_t universe_size)
    : signature_(signature), universe_size_(universe_size) {
  for (std::size_t i = 0; i < signature_.size(); ++i) {
    index_[signature_[i].name] = i;
    offsets_.push_back(total_bits_);
    total_bits_ += pow_size(universe_size_, signature_[i].arity);
  }
  bits_.assign(total_bits_, false);
}

std::size_t SOAssignment::table_size(std::size_t sym_index) const {
  std::size_t end = sym_index + 1 < offsets_.size() ? offsets_[sym_index + 1]
                                                    : total_bits_;
  return end - offsets_.at(sym_index);
}

bool SOAssignment::get(const std::string& symbol,
                       std::size_t tuple_index) const {
  auto it = index_.find(symbol);
  if (it == index_.end())
    input_error("second-order symbol '" + symbol + "' not assigned");
  return get_by_index(it->second, tuple_index);
}

void SOAssignment::set(const std::string& symbol, std::size_t tuple_index,
                       bool value) {
  auto it = index_.find(symbol);
  if (it == index_.end())
    input_error("second-order symbol '" + symbol + "' not assigned");
  set_by_index(it->second, tuple_index, value);
}

bool SOAssignment::get_by_index(std::size_t sym_index,
                                std::size_t tuple_index) const {
  return bits_.at(offsets_.at(sym_index) + tuple_index);
}

void SOAssignment::set_by_index(std::size_t sym_index,
                                std::size_t tuple_index, bool value) {
  bits_.at(offsets_.at(sym_index) + tuple_index) = value;
}

std::size_t tuple_index(const std::vector<ElemId>& tuple, std::size_t n) {
  std::size_t idx = 0;
  for (ElemId e : tuple) idx = idx * n + e;
  return idx;
}

std::vector<ElemId> index_tuple(std::size_t index, unsigned arity,
                                std::size_t n) {
  std::vector<ElemId> tuple(arity, 0);
  for (unsigned i = arity; i-- > 0;) {
    tuple[i] = static_cast<ElemId>(index % n);
    index /= n;
  }
  return tuple;
}

namespace {

ElemId term_value(const FiniteStructure& structure,
                  const VariableBinding& binding, const Term& t) {
  if (t.kind == Term::Kind::Constant) return structure.constant_value(t.name);
  auto id = binding.lookup(t.name);
  if (!id) input_error("unbound variable '" + t.name + "'");
  return *id;
}

bool eval_atom(const FiniteStructure& structure, const SOAssignment& so,
               const VariableBinding& binding, const Atom& atom) {
  if (atom.kind == Atom::Kind::Equality) {
    return term_value(structure, binding, atom.args.at(0)) ==
           term_value(structure, binding, atom.args.at(1));
  }
  const RelationSymbol* sym = structure.vocab().find_relation(atom.symbol);
  SymbolKind kind;
  unsigned arity;
  if (sym) {
    kind = sym->kind;
    arity = sym->arity;
  } else {
    // Second-order symbols live in the query vocabulary, not always in
    // the structure's; fall back to the assignment's signature.
    kind = SymbolKind::SecondOrder;
    arity = 0;
    for (const auto& s : so.signature())
      if (s.name == atom.symbol) arity = s.arity;
    if (arity == 0) input_error("unknown relation '" + atom.symbol + "'");
  }
  if (atom.args.size() != arity)
    input_error("arity mismatch for '" + atom.symbol + "'");
  std::vector<ElemId> tuple;
  tuple.reserve(atom.args.size());
  for (const Term& t : atom.args)
    tuple.push_back(term_value(structure, binding, t));
  if (kind == SymbolKind::FirstOrder) return structure.holds(atom.symbol, tuple);
  return so.get(atom.symbol, tuple_index(tuple, structure.size()));
}

bool eval_node(const FiniteStructure& structure, const SOAssignment& so,
               const VariableBinding& binding, const Formula::Node* n) {
  switch (n->op) {
    case Formula::Op::Leaf:
      return eval_atom(structure, so, binding, n->atom);
    case Formula::Op::Not:
      return !eval_node(structure, so, binding, n->lhs.get());
    case Formula::Op::And:
      return eval_node(structure, so, binding, n->lhs.get()) &&
             eval_node(structure, so, binding, n->rhs.get());
    case Formula::Op::Or:
      return eval_node(structure, so, binding, n->lhs.get()) ||
             eval_node(structure, so, binding, n->rhs.get());
  }
  internal_error("corrupt formula node");
}

}  // namespace

bool eval_qf(const FiniteStructure& structure, const SOAssignment& so,
             const VariableBinding& binding, const Formula& f) {
  return eval_node(structure, so, binding, &f.root());
}

}  // namespace synopt
