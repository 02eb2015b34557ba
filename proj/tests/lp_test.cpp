// SPDX-License-Identifier: Apache-2.0
#include "synopt/lp.hpp"

#include <random>

#include "doctest.h"
#include "synopt/error.hpp"

using namespace synopt;

namespace {

Rat rr(long n, long d = 1) { return make_rat(n, d); }

const char* kBoxLP =
    "2 2\n"
    "c: 1 1\n"
    "b: 2 3\n"
    "A: 1 0; 0 1\n";

LPPrimal random_lp(std::mt19937_64& rng, std::size_t max_dim = 4) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<long> coef(-3, 3);
  LPPrimal p;
  std::size_t n = dim(rng), m = dim(rng);
  for (std::size_t j = 0; j < n; ++j) p.c.push_back(rr(coef(rng)));
  for (std::size_t i = 0; i < m; ++i) {
    Vec row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(rr(coef(rng)));
    p.a.push_back(std::move(row));
    p.b.push_back(rr(coef(rng)));
  }
  return p;
}

bool same_lp(const LPPrimal& a, const LPPrimal& b) {
  return a.c == b.c && a.a == b.a && a.b == b.b;
}

}  // namespace

TEST_CASE("lp text parsing") {
  LPPrimal p = parse_lp(kBoxLP);
  CHECK((p.c == Vec{rr(1), rr(1)}));
  CHECK((p.b == Vec{rr(2), rr(3)}));
  CHECK((p.a == Mat{{rr(1), rr(0)}, {rr(0), rr(1)}}));

  LPPrimal frac = parse_lp("1 1 # comment\n c: -2/3 \n b: 1/2 \n A: 5");
  CHECK((frac.c == Vec{rr(-2, 3)}));

  CHECK_THROWS_AS(parse_lp("2 1\nc: 1 1\nb: 2\nA: 1 0 3"), Error);
  CHECK_THROWS_AS(parse_lp("1 1\nc: 1/0\nb: 1\nA: 1"), Error);
  CHECK_THROWS_AS(parse_lp("1 1\nc: 1\nb: 1\nA: 1; 2"), Error);
  CHECK_THROWS_AS(parse_lp("0 1\nc:\nb: 1\nA:"), Error);
  CHECK_THROWS_AS(parse_lp("1 2\nc: 1\nb: 1 1\nA: 1 1"), Error);  // missing ;
  CHECK_THROWS_AS(parse_lp(""), Error);
}

TEST_CASE("certificate parsing") {
  CertificatePair cert = parse_cert("2 3  1 1", 2, 2);
  CHECK((cert.x == Vec{rr(2), rr(3)}));
  CHECK((cert.y == Vec{rr(1), rr(1)}));
  CHECK_THROWS_AS(parse_cert("1 2 3", 2, 2), Error);
  CHECK_THROWS_AS(parse_cert("1 2 3 4 5", 2, 2), Error);
}

TEST_CASE("dual of a one-constraint program") {
  // max x1 s.t. x1 <= 1 -> min y1 s.t. y1 >= 1, y1 >= 0.
  LPPrimal p = parse_lp("1 1\nc: 1\nb: 1\nA: 1");
  LPDual d = make_dual(p);
  CHECK((d.b == Vec{rr(1)}));
  CHECK((d.at == Mat{{rr(1)}}));
  CHECK((d.c == Vec{rr(1)}));
}

TEST_CASE("dual of the box program") {
  LPDual d = make_dual(parse_lp(kBoxLP));
  CHECK((d.b == Vec{rr(2), rr(3)}));     // min 2 y1 + 3 y2
  CHECK((d.at == Mat{{rr(1), rr(0)}, {rr(0), rr(1)}}));
  CHECK((d.c == Vec{rr(1), rr(1)}));     // y1 >= 1, y2 >= 1
}

TEST_CASE("dualization is an involution") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    LPPrimal p = random_lp(rng);
    LPPrimal back = dual_as_primal(make_dual(dual_as_primal(make_dual(p))));
    REQUIRE(same_lp(p, back));
  }
}

TEST_CASE("slackness report on the box program") {
  LPPrimal p = parse_lp(kBoxLP);

  CSReport good = check_cs(p, {{rr(2), rr(3)}, {rr(1), rr(1)}});
  CHECK(good.primal_feasible);
  CHECK(good.dual_feasible);
  CHECK(good.cs_ok);
  CHECK(good.optimal_pair);
  CHECK((good.primal_objective == 5));
  CHECK((good.dual_objective == 5));

  CSReport slack = check_cs(p, {{rr(0), rr(0)}, {rr(1), rr(1)}});
  CHECK(slack.primal_feasible);
  CHECK(slack.dual_feasible);
  CHECK(!slack.cs_ok);
  CHECK((slack.row_products[0] == 2));  // y1 (b1 - A1 x) = 1 * 2
  CHECK(!slack.optimal_pair);

  CSReport neg = check_cs(p, {{rr(-1), rr(0)}, {rr(1), rr(1)}});
  CHECK(!neg.primal_feasible);
  CHECK(!neg.optimal_pair);
}

TEST_CASE("optimal pair verification") {
  LPPrimal p = parse_lp(kBoxLP);
  CHECK(verify_optimal_pair(p, {{rr(2), rr(3)}, {rr(1), rr(1)}}));
  CHECK(!verify_optimal_pair(p, {{rr(0), rr(0)}, {rr(1), rr(1)}}));
  CHECK(!verify_optimal_pair(p, {{rr(-1), rr(3)}, {rr(1), rr(1)}}));
}

TEST_CASE("slackness clauses mirror the product check") {
  LPPrimal p = parse_lp(kBoxLP);

  HornCS good = emit_horn_cs(p, {{rr(2), rr(3)}, {rr(1), rr(1)}});
  CHECK(good.cnf.clauses.size() == 4);
  CHECK(good.satisfied);
  for (const PropClause& cl : good.cnf.clauses) {
    CHECK(cl.size() == 2);
    for (const PropLit& lit : cl.lits()) CHECK(!lit.positive);  // Horn
  }

  HornCS bad = emit_horn_cs(p, {{rr(0), rr(0)}, {rr(1), rr(1)}});
  CHECK(!bad.satisfied);
  // Row 1: y1 != 0 and its slack != 0, so the clause is falsified.
  auto y1 = bad.cnf.find_var(GroundAtom{"YnotEq0", {"1"}});
  auto s1 = bad.cnf.find_var(GroundAtom{"B_AnotEq0", {"1"}});
  REQUIRE(y1.has_value());
  REQUIRE(s1.has_value());
  CHECK(bad.assignment[*y1]);
  CHECK(bad.assignment[*s1]);
}

TEST_CASE("slackness clauses agree with check_cs on random certificates") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<long> coef(-2, 2);
  for (int round = 0; round < 300; ++round) {
    LPPrimal p = random_lp(rng, 3);
    CertificatePair cert;
    for (std::size_t j = 0; j < p.cols(); ++j) cert.x.push_back(rr(coef(rng)));
    for (std::size_t i = 0; i < p.rows(); ++i) cert.y.push_back(rr(coef(rng)));
    HornCS horn = emit_horn_cs(p, cert);
    REQUIRE(horn.satisfied == check_cs(p, cert).cs_ok);
  }
}

TEST_CASE("pattern decision finds the box optimum") {
  LPPrimal p = parse_lp(kBoxLP);
  LPDecision d = decide_optimal_pair(p);
  REQUIRE(d.status == LPStatus::Found);
  REQUIRE(d.cert.has_value());
  CHECK((d.cert->x == Vec{rr(2), rr(3)}));
  CHECK((d.cert->y == Vec{rr(1), rr(1)}));
  CHECK(d.joint_feasibility_calls == 1);
}

TEST_CASE("pattern decision classifies failures") {
  // x1 <= -1 contradicts x1 >= 0.
  LPPrimal infeasible = parse_lp("1 1\nc: 1\nb: -1\nA: 1");
  LPDecision d1 = decide_optimal_pair(infeasible);
  CHECK(d1.status == LPStatus::PrimalInfeasible);
  CHECK(d1.joint_feasibility_calls == 1);

  // 0 x1 <= 1 never binds, so max x1 grows without bound.
  LPPrimal unbounded = parse_lp("1 1\nc: 1\nb: 1\nA: 0");
  LPDecision d2 = decide_optimal_pair(unbounded);
  CHECK(d2.status == LPStatus::PrimalUnbounded);
  CHECK(!dual_feasible_point(unbounded).has_value());
  CHECK(d2.joint_feasibility_calls == 1);
}

TEST_CASE("pattern decision respects the size bound") {
  LPPrimal big;
  big.c.assign(7, rr(1));
  big.b.assign(6, rr(1));
  big.a.assign(6, Vec(7, rr(1)));
  CHECK_THROWS_AS(decide_optimal_pair(big), Error);
}

TEST_CASE("every feasible pattern yields the same objective") {
  std::mt19937_64 rng(23);
  int found_cases = 0;
  for (int round = 0; round < 60; ++round) {
    LPPrimal p = random_lp(rng, 3);
    LPDecision d = decide_optimal_pair_serial(p);
    if (d.status != LPStatus::Found) continue;
    ++found_cases;
    Rat opt = dot(p.c, d.cert->x);
    std::uint64_t total = std::uint64_t{1} << (p.rows() + p.cols());
    for (std::uint64_t pat = 0; pat < total; ++pat) {
      auto cert = solve_pattern(p, pat);
      if (!cert) continue;
      REQUIRE(verify_optimal_pair(p, *cert));
      REQUIRE((dot(p.c, cert->x) == opt));
    }
  }
  CHECK(found_cases > 10);
}

TEST_CASE("random programs: decision agrees with feasibility analysis") {
  std::mt19937_64 rng(24);
  int found = 0, infeasible = 0, unbounded = 0;
  for (int round = 0; round < 150; ++round) {
    LPPrimal p = random_lp(rng);
    LPDecision d = decide_optimal_pair(p);
    REQUIRE(d.joint_feasibility_calls == 1);
    switch (d.status) {
      case LPStatus::Found:
        ++found;
        REQUIRE(verify_optimal_pair(p, *d.cert));
        REQUIRE(primal_feasible_point(p).has_value());
        REQUIRE(dual_feasible_point(p).has_value());
        break;
      case LPStatus::PrimalInfeasible:
        ++infeasible;
        REQUIRE(!primal_feasible_point(p).has_value());
        break;
      case LPStatus::PrimalUnbounded:
        ++unbounded;
        REQUIRE(primal_feasible_point(p).has_value());
        REQUIRE(!dual_feasible_point(p).has_value());
        break;
    }
  }
  // The generator must exercise all three outcomes.
  CHECK(found > 20);
  CHECK(infeasible > 10);
  CHECK(unbounded > 10);
}

TEST_CASE("parallel decision matches serial") {
  std::mt19937_64 rng(25);
  for (int round = 0; round < 40; ++round) {
    LPPrimal p = random_lp(rng, 3);
    LPDecision serial = decide_optimal_pair_serial(p);
    LPDecision par = decide_optimal_pair(p, 4);
    REQUIRE(par.status == serial.status);
    if (serial.status == LPStatus::Found) {
      REQUIRE((par.cert->x == serial.cert->x));
      REQUIRE((par.cert->y == serial.cert->y));
    }
  }
}

TEST_CASE("feasible points satisfy their programs") {
  std::mt19937_64 rng(26);
  for (int round = 0; round < 200; ++round) {
    LPPrimal p = random_lp(rng);
    if (auto x = primal_feasible_point(p)) {
      Vec ax = mat_vec(p.a, *x);
      for (std::size_t i = 0; i < p.rows(); ++i) REQUIRE((ax[i] <= p.b[i]));
      for (const Rat& v : *x) REQUIRE((v >= 0));
    }
    if (auto y = dual_feasible_point(p)) {
      Vec aty = mat_vec(transpose(p.a), *y);
      for (std::size_t j = 0; j < p.cols(); ++j)
        REQUIRE((aty[j] >= p.c[j]));
      for (const Rat& v : *y) REQUIRE((v >= 0));
    }
  }
}

TEST_CASE("vector formatting") {
  CHECK(lp_str({rr(1), rr(-2, 3), rr(4)}) == "1 -2/3 4");
  CHECK(lp_str({}) == "");
}
