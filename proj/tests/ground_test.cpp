// SPDX-License-Identifier: Apache-2.0
#include "synopt/ground.hpp"

#include <random>

#include "doctest.h"
#include "synopt/error.hpp"
#include "synopt/parser.hpp"

using namespace synopt;

namespace {

// Independent oracle: does any second-order assignment make the
// universally closed matrix true under the binding? Enumerates the
// assignment space directly with the generic evaluator.
bool exists_so_model(const Query& q, const FiniteStructure& s,
                     const VariableBinding& binding) {
  SOAssignment so(q.vocab.so_signature(), s.size());
  const std::size_t bits = so.total_bits();
  const std::size_t k = q.bound_vars.size();
  std::size_t bound_total = 1;
  for (std::size_t i = 0; i < k; ++i) bound_total *= s.size();

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    std::size_t flat = 0;
    for (std::size_t sym = 0; sym < q.vocab.so_signature().size(); ++sym)
      for (std::size_t t = 0; t < so.table_size(sym); ++t, ++flat)
        so.set_by_index(sym, t, (mask >> flat) & 1);
    bool all = true;
    for (std::size_t bi = 0; bi < bound_total && all; ++bi) {
      VariableBinding full = binding;
      std::size_t rem = bi;
      for (std::size_t v = k; v-- > 0;) {
        full.bind(q.bound_vars[v], static_cast<ElemId>(rem % s.size()));
        rem /= s.size();
      }
      all = eval_qf(s, so, full, q.matrix);
    }
    if (all) return true;
  }
  return false;
}

PropCNF make_cnf(std::size_t nvars,
                 const std::vector<std::vector<long>>& clauses) {
  PropCNF cnf;
  for (std::size_t i = 0; i < nvars; ++i) {
    GroundAtom a;
    a.symbol = "v" + std::to_string(i);
    cnf.var_id(a);
  }
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    std::vector<PropLit> lits;
    for (long v : clauses[ci])
      lits.push_back(PropLit{static_cast<std::uint32_t>((v < 0 ? -v : v) - 1),
                             v > 0});
    cnf.clauses.emplace_back(std::move(lits));
    cnf.origins.push_back({ci, ""});
  }
  return cnf;
}

}  // namespace

TEST_CASE("grounding eliminates first-order literals and numbers variables "
          "in first-use order") {
  FiniteStructure s = parse_structure(
      "universe a b;\nrel E/2 { (a,b) };\n");
  Query q = parse_query(
      "sovar S/1;\ncount () : forall x y . (!E(x,y) | !S(x) | S(y))",
      s.vocab());
  PropCNF g = ground(q, s, {});

  REQUIRE(g.vars.size() == 2);
  CHECK(g.vars[0].display() == "S(a)");
  CHECK(g.vars[1].display() == "S(b)");
  REQUIRE(g.clauses.size() == 1);
  CHECK(g.clauses[0] == PropClause({{0, false}, {1, true}}));
  REQUIRE(g.origins.size() == 1);
  CHECK(g.origins[0].source_clause == 0);
  CHECK(g.origins[0].binding == "x=a y=b");
}

TEST_CASE("grounding keeps empty clauses as unsatisfiable markers") {
  FiniteStructure s = parse_structure("universe a;\nrel E/2 { };\n");
  Query q = parse_query("sovar S/1;\ncount () : forall x . E(x,x)",
                        s.vocab());
  PropCNF g = ground(q, s, {});
  REQUIRE(g.clauses.size() == 1);
  CHECK(g.clauses[0].size() == 0);
  CHECK_FALSE(horn_sat(g).satisfiable);
  CHECK(horn_sat(g).conflict_clause == 0);
  CHECK_FALSE(brute_sat(g).satisfiable);
}

TEST_CASE("grounding respects the free-variable binding") {
  FiniteStructure s = parse_structure("universe a b;\nrel E/2 { (a,b) };\n");
  Query q = parse_query("sovar S/1;\ncount (w) : S(w) & E(w,w)", s.vocab());
  VariableBinding bind_a;
  bind_a.bind("w", 0);
  PropCNF ga = ground(q, s, bind_a);
  // E(a,a) is false, so that clause grounds to the empty clause
  REQUIRE(ga.clauses.size() == 2);
  CHECK(ga.clauses[1].size() == 0);

  CHECK_THROWS_AS(ground(q, s, {}), Error);
}

TEST_CASE("grounding rejects a matrix that is not a clause conjunction") {
  FiniteStructure s = parse_structure("universe a;\nrel E/2 { };\n");
  Query q = parse_query("sovar S/1;\ncount (w) : !(S(w) & S(w))", s.vocab());
  CHECK_THROWS_AS(ground(q, s, [] {
                    VariableBinding b;
                    b.bind("w", 0);
                    return b;
                  }()),
                  Error);
}

TEST_CASE("grounded satisfiability agrees with direct assignment search") {
  std::mt19937 rng(60902);
  const char* structures[] = {
      "universe a b;\nrel E/2 { (a,b) (b,a) };\n",
      "universe a b c;\nrel E/2 { (a,b) (b,c) };\n",
      "universe a b;\nrel E/2 { (a,a) (a,b) (b,b) };\n",
  };
  const char* queries[] = {
      "sovar S/1;\ncount () : forall x y . (!E(x,y) | !S(x) | S(y))",
      "sovar S/1;\ncount () : forall x y . ((!E(x,y) | S(x) | S(y)) & "
      "(!S(x) | !S(y) | E(x,y)))",
      "sovar S/1;\ncount () : forall x . (S(x) | x = x) & (!S(x) | E(x,x))",
      "sovar S/1; sovar T/2;\ncount () : forall x y . "
      "(!T(x,y) | S(x)) & (!E(x,y) | T(x,y))",
      "sovar S/1;\ncount () : forall x . S(x) & !S(x)",
  };
  for (const char* st : structures) {
    FiniteStructure s = parse_structure(st);
    for (const char* qt : queries) {
      Query q = parse_query(qt, s.vocab());
      PropCNF g = ground(q, s, {});
      bool oracle = exists_so_model(q, s, {});
      CAPTURE(st);
      CAPTURE(qt);
      REQUIRE(brute_sat(g).satisfiable == oracle);
      bool grounded_horn = true;
      for (const PropClause& c : g.clauses) {
        std::size_t positives = 0;
        for (const PropLit& l : c.lits())
          if (l.positive) ++positives;
        grounded_horn = grounded_horn && positives <= 1;
      }
      if (grounded_horn)
        REQUIRE(horn_sat(g).satisfiable == oracle);
      else
        CHECK_THROWS_AS(horn_sat(g), Error);
    }
  }
}

TEST_CASE("grounding output is identical across worker counts") {
  FiniteStructure s = parse_structure(
      "universe a b c d;\nrel E/2 { (a,b) (b,c) (c,d) (d,a) };\n");
  Query q = parse_query(
      "sovar S/1; sovar T/2;\ncount () : forall x y . "
      "(!E(x,y) | T(x,y)) & (!T(x,y) | S(x) | T(y,x))",
      s.vocab());
  PropCNF g1 = ground(q, s, {}, 1);
  PropCNF g4 = ground(q, s, {}, 4);
  CHECK(g1.vars == g4.vars);
  CHECK(g1.clauses == g4.clauses);
  CHECK(g1.origins == g4.origins);
}

TEST_CASE("horn solver finds the minimal model") {
  // facts and rules: v1; v1 -> v2; v3 -> v4
  PropCNF cnf = make_cnf(4, {{1}, {-1, 2}, {-3, 4}});
  HornResult r = horn_sat(cnf);
  REQUIRE(r.satisfiable);
  CHECK(r.model == std::vector<bool>{true, true, false, false});
}

TEST_CASE("horn solver reports the clause that closes a conflict") {
  PropCNF cnf = make_cnf(2, {{1}, {-1, 2}, {-2}});
  HornResult r = horn_sat(cnf);
  CHECK_FALSE(r.satisfiable);
  CHECK(r.conflict_clause == 2);
}

TEST_CASE("horn solver rejects clauses with two positive literals") {
  PropCNF cnf = make_cnf(2, {{1, 2}});
  CHECK_THROWS_AS(horn_sat(cnf), Error);
}

TEST_CASE("minimal model is contained in every satisfying assignment") {
  std::mt19937 rng(1105);
  std::uniform_int_distribution<int> nv(2, 5), nc(1, 8), body(0, 2),
      pick(0, 4), coin(0, 1);
  for (int round = 0; round < 200; ++round) {
    int vars = nv(rng);
    std::vector<std::vector<long>> clauses;
    for (int c = nc(rng); c-- > 0;) {
      std::vector<long> cl;
      std::set<long> used;
      for (int b = body(rng); b-- > 0;) {
        long v = pick(rng) % vars + 1;
        if (used.insert(v).second) cl.push_back(-v);
      }
      if (coin(rng)) {
        long v = pick(rng) % vars + 1;
        if (!used.count(v)) cl.push_back(v);
      }
      if (cl.empty()) continue;
      clauses.push_back(cl);
    }
    PropCNF cnf = make_cnf(static_cast<std::size_t>(vars), clauses);
    HornResult horn = horn_sat(cnf);
    SatResult brute = brute_sat_serial(cnf);
    CAPTURE(round);
    REQUIRE(horn.satisfiable == brute.satisfiable);
    if (!horn.satisfiable) continue;
    // minimality: every var true in the model is true in all models
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars); ++mask) {
      std::vector<bool> assign(static_cast<std::size_t>(vars));
      for (int i = 0; i < vars; ++i)
        assign[static_cast<std::size_t>(i)] = (mask >> (vars - 1 - i)) & 1;
      bool sat = true;
      for (const auto& cl : clauses) {
        bool any = false;
        for (long v : cl) {
          bool val = assign[static_cast<std::size_t>((v < 0 ? -v : v) - 1)];
          if ((v > 0) == val) {
            any = true;
            break;
          }
        }
        if (!any) {
          sat = false;
          break;
        }
      }
      if (!sat) continue;
      for (int i = 0; i < vars; ++i)
        if (horn.model[static_cast<std::size_t>(i)])
          REQUIRE(assign[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("exhaustive solver returns the lexicographically least witness") {
  PropCNF cnf = make_cnf(2, {{1}, {-1, 2}});
  SatResult r = brute_sat(cnf);
  REQUIRE(r.satisfiable);
  CHECK(r.witness == std::vector<bool>{true, true});

  PropCNF pick = make_cnf(3, {{2, 3}});
  SatResult rp = brute_sat(pick);
  REQUIRE(rp.satisfiable);
  // 000 and 00* fail, 001 is the first satisfying mask
  CHECK(rp.witness == std::vector<bool>{false, false, true});
}

TEST_CASE("parallel and serial exhaustive solvers agree") {
  std::mt19937 rng(40818);
  std::uniform_int_distribution<int> nc(1, 12), width(1, 3), pick(1, 8),
      sign(0, 1);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::vector<long>> clauses;
    for (int c = nc(rng); c-- > 0;) {
      std::vector<long> cl;
      for (int w = width(rng); w-- > 0;) {
        long v = pick(rng);
        cl.push_back(sign(rng) ? v : -v);
      }
      clauses.push_back(cl);
    }
    PropCNF cnf = make_cnf(8, clauses);
    SatResult serial = brute_sat_serial(cnf);
    SatResult parallel = brute_sat(cnf, 24, 4);
    CAPTURE(round);
    REQUIRE(serial.satisfiable == parallel.satisfiable);
    REQUIRE(serial.witness == parallel.witness);
  }
}

TEST_CASE("exhaustive solver enforces the variable cap") {
  PropCNF cnf;
  for (int i = 0; i < 25; ++i) {
    GroundAtom a;
    a.symbol = "v" + std::to_string(i);
    std::vector<PropLit> lits{PropLit{cnf.var_id(a), true}};
    cnf.clauses.emplace_back(std::move(lits));
    cnf.origins.push_back({static_cast<std::size_t>(i), ""});
  }
  try {
    brute_sat(cnf);
    FAIL("cap expected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ResourceCap);
  }
}

TEST_CASE("DIMACS output round-trips through the parser") {
  FiniteStructure s = parse_structure("universe a b;\nrel E/2 { (a,b) };\n");
  Query q = parse_query(
      "sovar S/1;\ncount () : forall x y . (!E(x,y) | !S(x) | S(y)) & S(x)",
      s.vocab());
  PropCNF g = ground(q, s, {});
  std::string text = to_dimacs(g);
  PropCNF back = parse_dimacs(text);
  CHECK(back.clauses == g.clauses);
  REQUIRE(back.vars.size() == g.vars.size());
  for (std::size_t i = 0; i < g.vars.size(); ++i)
    CHECK(back.vars[i].display() == g.vars[i].display());
  CHECK(to_dimacs(back) == text);
}

TEST_CASE("DIMACS parser rejects malformed input") {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    try {
      parse_dimacs(text);
      FAIL("expected failure for: " << text);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_fail("1 -2 0\n", "clause before header");
  expect_fail("p cnf 2 1\n3 0\n", "exceeds declared variable count");
  expect_fail("p cnf 2 1\n1 -2\n", "unterminated clause");
  expect_fail("p cnf 2 2\n1 0\n", "declares 2 clauses, found 1");
  expect_fail("p dnf 2 1\n1 0\n", "malformed header");
  expect_fail("p cnf 2 1\np cnf 2 1\n1 0\n", "duplicate header");
  expect_fail("", "missing 'p cnf' header");
}

TEST_CASE("DIMACS clauses may span lines") {
  PropCNF cnf = parse_dimacs("p cnf 3 2\n1 -2\n3 0 2 0\n");
  REQUIRE(cnf.clauses.size() == 2);
  CHECK(cnf.clauses[0] == PropClause({{0, true}, {1, false}, {2, true}}));
  CHECK(cnf.clauses[1] == PropClause({{1, true}}));
  CHECK(cnf.vars[0].display() == "x1");
}
