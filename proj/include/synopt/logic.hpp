// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synopt/error.hpp"

namespace synopt {

using ElemId = std::uint32_t;

enum class SymbolKind { FirstOrder, SecondOrder };

struct RelationSymbol {
  std::string name;
  unsigned arity = 1;
  SymbolKind kind = SymbolKind::FirstOrder;

  friend bool operator==(const RelationSymbol&,
                         const RelationSymbol&) = default;
};

/// Relation symbols (first- and second-order) plus constant symbols.
/// All names share one namespace and are unique. Declaration order is
/// preserved for printing and for the second-order signature.
class Vocabulary {
 public:
  void add_relation(const std::string& name, unsigned arity, SymbolKind kind);
  void add_constant(const std::string& name);

  const RelationSymbol* find_relation(const std::string& name) const;
  bool has_constant(const std::string& name) const;
  bool has_name(const std::string& name) const;

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }

  /// Second-order relation symbols in declaration order.
  std::vector<RelationSymbol> so_signature() const;

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
  std::map<std::string, std::size_t> relation_index_;
  std::set<std::string> constant_names_;
};

/// A finite structure: nonempty universe, interpretations for every
/// first-order relation symbol and constant of its vocabulary.
class FiniteStructure {
 public:
  FiniteStructure(Vocabulary vocab, std::vector<std::string> universe);

  void add_tuple(const std::string& relation,
                 const std::vector<std::string>& elems,
                 std::optional<SourceSpan> span = std::nullopt);
  void set_constant(const std::string& name, const std::string& elem,
                    std::optional<SourceSpan> span = std::nullopt);

  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<std::string>& universe() const { return universe_; }
  std::size_t size() const { return universe_.size(); }

  std::optional<ElemId> elem_id(const std::string& name) const;
  const std::string& elem_name(ElemId id) const { return universe_.at(id); }

  bool holds(const std::string& relation,
             const std::vector<ElemId>& tuple) const;
  const std::set<std::vector<ElemId>>& tuples(
      const std::string& relation) const;
  ElemId constant_value(const std::string& name) const;

 private:
  Vocabulary vocab_;
  std::vector<std::string> universe_;
  std::map<std::string, ElemId> elem_ids_;
  std::map<std::string, std::set<std::vector<ElemId>>> tuples_;
  std::map<std::string, ElemId> constants_;
};

struct Term {
  enum class Kind { Variable, Constant };
  Kind kind = Kind::Variable;
  std::string name;

  friend auto operator<=>(const Term&, const Term&) = default;
};

inline Term var(std::string name) {
  return Term{Term::Kind::Variable, std::move(name)};
}
inline Term cons(std::string name) {
  return Term{Term::Kind::Constant, std::move(name)};
}

struct Atom {
  enum class Kind { Relation, Equality };
  Kind kind = Kind::Relation;
  std::string symbol;  // empty for equality
  std::vector<Term> args;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

inline Atom rel_atom(std::string symbol, std::vector<Term> args) {
  return Atom{Atom::Kind::Relation, std::move(symbol), std::move(args)};
}
inline Atom eq_atom(Term a, Term b) {
  return Atom{Atom::Kind::Equality, "", {std::move(a), std::move(b)}};
}

/// Quantifier-free formula over atoms. Implication is normalized away
/// at construction (a -> b becomes !a | b), so the connective set is
/// {atom, !, &, |}. Nodes are immutable and shared.
class Formula {
 public:
  enum class Op { Leaf, Not, And, Or };

  struct Node {
    Op op = Op::Leaf;
    Atom atom;  // when op == Leaf
    std::shared_ptr<const Node> lhs, rhs;
  };

  Formula() = default;

  static Formula leaf(Atom a);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);  // !a | b

  /// Left-folded conjunction / disjunction; parts must be nonempty.
  static Formula conj_all(const std::vector<Formula>& parts);
  static Formula disj_all(const std::vector<Formula>& parts);

  bool empty() const { return node_ == nullptr; }
  const Node& root() const;
  std::shared_ptr<const Node> share() const { return node_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Variable names that occur in a formula outside any binder. The
/// formulas here are quantifier-free, so this is every variable
/// occurrence; set is returned in name order.
std::set<std::string> free_vars(const Formula& f);

/// All distinct atoms of a formula, in structural order.
std::vector<Atom> collect_atoms(const Formula& f);

/// A block-quantified counting query:
///   sovar decls; count (w1..wk) : [forall x1..xm .] matrix
/// vocab holds the structure symbols plus the declared second-order
/// symbols; matrix is quantifier-free.
struct Query {
  Vocabulary vocab;
  std::vector<std::string> free_vars;   // the count tuple
  std::vector<std::string> bound_vars;  // the universal block
  Formula matrix;
};

/// Total map from variable names to universe elements.
class VariableBinding {
 public:
  void bind(const std::string& name, ElemId elem);
  std::optional<ElemId> lookup(const std::string& name) const;
  const std::vector<std::pair<std::string, ElemId>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, ElemId>> entries_;
};

/// One truth table per second-order symbol, in signature order. Table
/// bit t is the value on the tuple with odometer index t (first
/// argument most significant, universe order).
class SOAssignment {
 public:
  SOAssignment() = default;
  SOAssignment(const std::vector<RelationSymbol>& signature,
               std::size_t universe_size);

  bool get(const std::string& symbol, std::size_t tuple_index) const;
  void set(const std::string& symbol, std::size_t tuple_index, bool value);

  std::size_t total_bits() const { return total_bits_; }
  const std::vector<RelationSymbol>& signature() const { return signature_; }
  std::size_t universe_size() const { return universe_size_; }
  std::size_t table_size(std::size_t sym_index) const;
  bool get_by_index(std::size_t sym_index, std::size_t tuple_index) const;
  void set_by_index(std::size_t sym_index, std::size_t tuple_index,
                    bool value);

  friend bool operator==(const SOAssignment&, const SOAssignment&) = default;

 private:
  std::vector<RelationSymbol> signature_;
  std::size_t universe_size_ = 0;
  std::size_t total_bits_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<bool> bits_;
  std::map<std::string, std::size_t> index_;
};

/// Tuple -> odometer index (first argument most significant) and back.
std::size_t tuple_index(const std::vector<ElemId>& tuple, std::size_t n);
std::vector<ElemId> index_tuple(std::size_t index, unsigned arity,
                                std::size_t n);

/// Evaluates a quantifier-free formula in a structure, under a
/// second-order assignment and a total first-order binding.
bool eval_qf(const FiniteStructure& structure, const SOAssignment& so,
             const VariableBinding& binding, const Formula& f);

}  // namespace synopt
