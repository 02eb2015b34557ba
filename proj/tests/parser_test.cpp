// SPDX-License-Identifier: Apache-2.0
#include "synopt/parser.hpp"

#include <random>

#include "doctest.h"
#include "synopt/error.hpp"

using namespace synopt;

namespace {

const char* kGraph =
    "# a two-edge path\n"
    "universe a b c;\n"
    "rel E/2 { (a,b) (b,c) };\n"
    "const root = a;\n";

Query graph_query() {
  FiniteStructure s = parse_structure(kGraph);
  return parse_query("sovar S/1;\ncount (w) : forall x . (S(w) | !S(x))\n",
                     s.vocab());
}

}  // namespace

TEST_CASE("structure text parses into universe, tuples and constants") {
  FiniteStructure s = parse_structure(kGraph);
  CHECK(s.universe() == std::vector<std::string>{"a", "b", "c"});
  CHECK(s.holds("E", {0, 1}));
  CHECK(s.holds("E", {1, 2}));
  CHECK_FALSE(s.holds("E", {0, 2}));
  CHECK(s.constant_value("root") == 0);
}

TEST_CASE("structure parse errors carry positions") {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    try {
      parse_structure(text);
      FAIL("expected parse failure for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
      CHECK(e.span().has_value());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_fail("universe a a;", "duplicate universe element");
  expect_fail("universe ;", "empty universe");
  expect_fail("universe a;\nrel E/2 { (a,z) };", "unknown element");
  expect_fail("universe a;\nrel E/2 { (a) };", "arity mismatch");
  expect_fail("universe a;\nrel E/1 { };\nrel E/1 { };", "duplicate symbol");
  expect_fail("universe a;\nconst c = z;", "unknown element");
  expect_fail("universe a b", "expected ';'");
  expect_fail("universe a;\nrel E/0 { };", "arity must be");
  expect_fail("universe a;\nrel E/9 { };", "arity must be");
  expect_fail("universe a; %", "unexpected character");
  expect_fail("universe a;\nfoo", "expected 'rel' or 'const'");
  expect_fail("universe a;\nconst rel = a;", "keyword");
}

TEST_CASE("query text parses into a block-quantified counting query") {
  Query q = graph_query();
  CHECK(q.free_vars == std::vector<std::string>{"w"});
  CHECK(q.bound_vars == std::vector<std::string>{"x"});
  const auto* sym = q.vocab.find_relation("S");
  REQUIRE(sym != nullptr);
  CHECK(sym->kind == SymbolKind::SecondOrder);
  CHECK(sym->arity == 1);

  Formula expect = Formula::disj(
      Formula::leaf(rel_atom("S", {var("w")})),
      Formula::negation(Formula::leaf(rel_atom("S", {var("x")}))));
  CHECK(q.matrix == expect);
}

TEST_CASE("query accepts an empty count tuple and no quantifier block") {
  FiniteStructure s = parse_structure(kGraph);
  Query q = parse_query("count () : E(root,root)", s.vocab());
  CHECK(q.free_vars.empty());
  CHECK(q.bound_vars.empty());
}

TEST_CASE("query parse errors carry positions") {
  FiniteStructure s = parse_structure(kGraph);
  auto expect_fail = [&](const std::string& text, const std::string& needle) {
    try {
      parse_query(text, s.vocab());
      FAIL("expected parse failure for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Input);
      CHECK(e.span().has_value());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_fail("count (w) : T(w)", "unknown relation");
  expect_fail("count (w) : E(w)", "arity mismatch");
  expect_fail("count (w) : S(w)", "unknown relation");
  expect_fail("sovar S/1; sovar S/1; count (w) : S(w)", "duplicate symbol");
  expect_fail("sovar E/1; count (w) : E(w)", "duplicate symbol");
  expect_fail("count (w,w) : E(w,w)", "duplicate variable");
  expect_fail("count (w) : forall w . E(w,w)", "duplicate variable");
  expect_fail("count (root) : E(root,root)", "clashes");
  expect_fail("count (w) : E(w,v)", "not declared");
  expect_fail("count (w) : E(w,w) & forall", "quantifier inside the matrix");
  expect_fail("count (w) : forall . E(w,w)", "declares no variables");
  expect_fail("count (w) : E(w,w) E(w,w)", "expected end of input");
  expect_fail("count (w) : E(E,w)", "used as a term");
}

TEST_CASE("implication arrow is right-associative and normalized") {
  FiniteStructure s = parse_structure(kGraph);
  Query q = parse_query("count (x,y) : E(x,y) -> E(y,x) -> x = y", s.vocab());
  Formula exy = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  Formula eyx = Formula::leaf(rel_atom("E", {var("y"), var("x")}));
  Formula eq = Formula::leaf(eq_atom(var("x"), var("y")));
  CHECK(q.matrix == Formula::implies(exy, Formula::implies(eyx, eq)));
}

TEST_CASE("precedence: not binds tighter than and, and tighter than or") {
  FiniteStructure s = parse_structure(kGraph);
  Query q = parse_query("count (x,y) : !E(x,y) & E(y,x) | x = y", s.vocab());
  Formula exy = Formula::leaf(rel_atom("E", {var("x"), var("y")}));
  Formula eyx = Formula::leaf(rel_atom("E", {var("y"), var("x")}));
  Formula eq = Formula::leaf(eq_atom(var("x"), var("y")));
  CHECK(q.matrix ==
        Formula::disj(Formula::conj(Formula::negation(exy), eyx), eq));
}

TEST_CASE("structure print is a parse fixpoint") {
  FiniteStructure s = parse_structure(kGraph);
  std::string text = print_structure(s);
  FiniteStructure s2 = parse_structure(text);
  CHECK(print_structure(s2) == text);
  CHECK(s2.universe() == s.universe());
  CHECK(s2.tuples("E") == s.tuples("E"));
  CHECK(s2.constant_value("root") == s.constant_value("root"));
}

TEST_CASE("query print round-trips structurally") {
  Query q = graph_query();
  FiniteStructure s = parse_structure(kGraph);
  Query q2 = parse_query(print_query(q), s.vocab());
  CHECK(q2.matrix == q.matrix);
  CHECK(q2.free_vars == q.free_vars);
  CHECK(q2.bound_vars == q.bound_vars);
}

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_int_distribution<int> var_pick(0, 1);
  auto v = [&]() { return var(var_pick(rng) ? "x" : "y"); };
  switch (pick(rng)) {
    case 0:
      return Formula::leaf(rel_atom("E", {v(), v()}));
    case 1: {
      int c = var_pick(rng);
      return c ? Formula::leaf(rel_atom("S", {v()}))
               : Formula::leaf(eq_atom(v(), cons("root")));
    }
    case 2:
      return Formula::negation(random_formula(rng, depth - 1));
    case 3:
      return Formula::conj(random_formula(rng, depth - 1),
                           random_formula(rng, depth - 1));
    case 4:
      return Formula::disj(random_formula(rng, depth - 1),
                           random_formula(rng, depth - 1));
    default:
      return Formula::implies(random_formula(rng, depth - 1),
                              random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("printing then parsing returns the same tree on random formulas") {
  FiniteStructure s = parse_structure(kGraph);
  std::mt19937 rng(20240817);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 5);
    std::string text =
        "sovar S/1;\ncount (x,y) : " + print_formula(f) + "\n";
    Query q = parse_query(text, s.vocab());
    CAPTURE(print_formula(f));
    REQUIRE(q.matrix == f);
  }
}
