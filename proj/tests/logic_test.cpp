// SPDX-License-Identifier: Apache-2.0
#include "synopt/logic.hpp"

#include "doctest.h"
#include "synopt/error.hpp"
#include "synopt/rational.hpp"

using namespace synopt;

namespace {

FiniteStructure tiny_graph() {
  Vocabulary v;
  v.add_relation("E", 2, SymbolKind::FirstOrder);
  v.add_constant("root");
  FiniteStructure a(v, {"a", "b", "c"});
  a.add_tuple("E", {"a", "b"});
  a.add_tuple("E", {"b", "c"});
  a.set_constant("root", "a");
  return a;
}

}  // namespace

TEST_CASE("vocabulary rejects duplicates and zero arity") {
  Vocabulary v;
  v.add_relation("R", 2, SymbolKind::FirstOrder);
  CHECK_THROWS_AS(v.add_relation("R", 1, SymbolKind::SecondOrder), Error);
  CHECK_THROWS_AS(v.add_constant("R"), Error);
  CHECK_THROWS_AS(v.add_relation("Z", 0, SymbolKind::FirstOrder), Error);
  v.add_constant("c");
  CHECK_THROWS_AS(v.add_relation("c", 1, SymbolKind::FirstOrder), Error);
}

TEST_CASE("structure validates tuples and constants") {
  Vocabulary v;
  v.add_relation("E", 2, SymbolKind::FirstOrder);
  v.add_constant("root");
  CHECK_THROWS_AS(FiniteStructure(v, {}), Error);
  CHECK_THROWS_AS(FiniteStructure(v, {"a", "a"}), Error);

  FiniteStructure a(v, {"a", "b"});
  CHECK_THROWS_AS(a.add_tuple("E", {"a"}), Error);
  CHECK_THROWS_AS(a.add_tuple("E", {"a", "z"}), Error);
  CHECK_THROWS_AS(a.add_tuple("F", {"a", "b"}), Error);
  CHECK_THROWS_AS(a.set_constant("root", "z"), Error);
  CHECK_THROWS_AS(a.set_constant("other", "a"), Error);

  a.add_tuple("E", {"a", "b"});
  a.add_tuple("E", {"a", "b"});  // set semantics
  CHECK(a.tuples("E").size() == 1);
  a.set_constant("root", "b");
  CHECK(a.constant_value("root") == 1);
}

TEST_CASE("tuple odometer puts the first argument most significant") {
  CHECK(tuple_index({1, 2}, 3) == 5);
  CHECK(index_tuple(5, 2, 3) == std::vector<ElemId>{1, 2});
  for (std::size_t i = 0; i < 27; ++i)
    CHECK(tuple_index(index_tuple(i, 3, 3), 3) == i);
}

TEST_CASE("second-order assignment lays tables out in signature order") {
  std::vector<RelationSymbol> sig = {
      {"S", 1, SymbolKind::SecondOrder},
      {"T", 2, SymbolKind::SecondOrder},
  };
  SOAssignment so(sig, 3);
  CHECK(so.total_bits() == 3 + 9);
  CHECK(so.table_size(0) == 3);
  CHECK(so.table_size(1) == 9);
  so.set("T", 4, true);
  CHECK(so.get("T", 4));
  CHECK_FALSE(so.get("S", 1));
  CHECK(so.get_by_index(1, 4));
  CHECK_THROWS_AS(so.get("U", 0), Error);
}

TEST_CASE("implication is normalized at construction") {
  Formula p = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  Formula q = Formula::leaf(eq_atom(var("x"), var("y")));
  Formula imp = Formula::implies(p, q);
  Formula expect = Formula::disj(Formula::negation(p), q);
  CHECK(imp == expect);
  CHECK(imp != Formula::disj(p, q));
}

TEST_CASE("free variables and atoms are collected without duplicates") {
  Formula p = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  Formula q = Formula::leaf(rel_atom("E", {var("y"), cons("root")}));
  Formula f = Formula::conj(p, Formula::disj(q, p));
  auto fv = free_vars(f);
  CHECK(fv == std::set<std::string>{"x", "y"});
  CHECK(collect_atoms(f).size() == 2);
}

TEST_CASE("quantifier-free evaluation covers all connectives") {
  FiniteStructure a = tiny_graph();
  SOAssignment so({{"S", 1, SymbolKind::SecondOrder}}, a.size());
  so.set("S", 0, true);  // S = {a}

  VariableBinding bind;
  bind.bind("x", 0);
  bind.bind("y", 1);

  Formula exy = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  Formula eyx = Formula::leaf(rel_atom("E", {var("y"), var("x")}));
  Formula sx = Formula::leaf(rel_atom("S", {var("x")}));
  Formula xisroot = Formula::leaf(eq_atom(var("x"), cons("root")));

  CHECK(eval_qf(a, so, bind, exy));
  CHECK_FALSE(eval_qf(a, so, bind, eyx));
  CHECK(eval_qf(a, so, bind, sx));
  CHECK(eval_qf(a, so, bind, xisroot));
  CHECK(eval_qf(a, so, bind, Formula::conj(exy, sx)));
  CHECK_FALSE(eval_qf(a, so, bind, Formula::conj(exy, eyx)));
  CHECK(eval_qf(a, so, bind, Formula::disj(eyx, sx)));
  CHECK(eval_qf(a, so, bind, Formula::negation(eyx)));
  CHECK(eval_qf(a, so, bind, Formula::implies(eyx, exy)));
  CHECK_FALSE(eval_qf(a, so, bind, Formula::implies(exy, eyx)));
}

TEST_CASE("evaluation rejects unbound variables and unknown symbols") {
  FiniteStructure a = tiny_graph();
  SOAssignment so({}, a.size());
  VariableBinding bind;
  Formula f = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  CHECK_THROWS_AS(eval_qf(a, so, bind, f), Error);
  bind.bind("x", 0);
  bind.bind("y", 1);
  Formula g = Formula::leaf(rel_atom("Missing", {var("x")}));
  CHECK_THROWS_AS(eval_qf(a, so, bind, g), Error);
  Formula h = Formula::leaf(rel_atom("E", {var("x")}));
  CHECK_THROWS_AS(eval_qf(a, so, bind, h), Error);
}

TEST_CASE("rationals parse and print in canonical form") {
  CHECK(rat_str(parse_rat("6/4")) == "3/2");
  CHECK(rat_str(parse_rat("-6/4")) == "-3/2");
  CHECK(rat_str(parse_rat("7")) == "7");
  CHECK(rat_str(make_rat(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("x"), Error);
  CHECK_THROWS_AS(parse_rat("1/"), Error);
  CHECK_THROWS_AS(parse_rat("1/-2"), Error);
  CHECK((parse_rat("2/3") + parse_rat("1/3") == 1));
}
