// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs. parallel kernels on fixed workloads. The
// parallel variants must return bit-identical results; these timings
// show what the extra machinery buys.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "synopt/flow.hpp"
#include "synopt/ground.hpp"
#include "synopt/lp.hpp"
#include "synopt/mh2s.hpp"
#include "synopt/syntactic_eval.hpp"

namespace {

using namespace synopt;

MH2SInstance bench_mh2s(std::uint32_t vars, std::size_t clauses,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> var(0, vars - 1);
  std::uniform_int_distribution<int> kind(0, 4);
  MH2SInstance inst{vars, {}};
  // One clause per ordered pair; units occupy (a, dummy).
  std::set<std::pair<std::uint32_t, std::uint32_t>> used;
  while (inst.clauses.size() < clauses) {
    MH2SClause c;
    c.kind = static_cast<MH2SKind>(kind(rng));
    c.a = var(rng);
    std::uint32_t second = vars;
    if (c.kind != MH2SKind::PosUnit && c.kind != MH2SKind::NegUnit) {
      c.b = var(rng);
      if (c.b == c.a) continue;
      second = c.b;
    }
    if (!used.emplace(c.a, second).second) continue;
    inst.clauses.push_back(c);
  }
  return inst;
}

PropCNF bench_cnf(std::uint32_t vars, std::size_t clauses,
                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> var(0, vars - 1);
  std::bernoulli_distribution sign(0.5);
  PropCNF cnf;
  for (std::uint32_t v = 0; v < vars; ++v)
    cnf.var_id(GroundAtom{"p", {std::to_string(v)}});
  for (std::size_t i = 0; i < clauses; ++i) {
    std::vector<PropLit> lits;
    for (int k = 0; k < 3; ++k) lits.push_back({var(rng), sign(rng)});
    cnf.clauses.push_back(PropClause(std::move(lits)));
    cnf.origins.push_back({i, ""});
  }
  return cnf;
}

LPPrimal bench_lp() {
  // Six rows, six columns: the largest pattern space under the cap.
  LPPrimal p;
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> coef(0, 3);
  for (std::size_t j = 0; j < 6; ++j) p.c.push_back(Rat(1 + (j % 3)));
  for (std::size_t i = 0; i < 6; ++i) {
    p.b.push_back(Rat(4 + static_cast<long>(i)));
    Vec row;
    for (std::size_t j = 0; j < 6; ++j) row.push_back(Rat(coef(rng)));
    p.a.push_back(std::move(row));
  }
  return p;
}

FlowNetwork bench_network() {
  // Dense 16-vertex layered network; 14 non-terminals = 2^14 cuts.
  std::string text = "source s\nsink t\n";
  for (int v = 0; v < 14; ++v) text += "node v" + std::to_string(v) + "\n";
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> cap(1, 9);
  for (int v = 0; v < 7; ++v)
    text += "edge s v" + std::to_string(v) + " " + std::to_string(cap(rng)) +
            "\n";
  for (int u = 0; u < 7; ++u)
    for (int v = 7; v < 14; ++v)
      text += "edge v" + std::to_string(u) + " v" + std::to_string(v) + " " +
              std::to_string(cap(rng)) + "\n";
  for (int v = 7; v < 14; ++v)
    text += "edge v" + std::to_string(v) + " t " + std::to_string(cap(rng)) +
            "\n";
  return parse_network(text);
}

int hw_jobs() { return omp_get_max_threads(); }

void BM_EvaluateMaxSerial(benchmark::State& state) {
  EncodedMH2S enc = encode(bench_mh2s(10, 20, 7));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_max_serial(enc.instance));
}

void BM_EvaluateMaxParallel(benchmark::State& state) {
  EncodedMH2S enc = encode(bench_mh2s(10, 20, 7));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_max(enc.instance, std::uint64_t{1} << 24,
                                          hw_jobs()));
}

void BM_BruteOptSerial(benchmark::State& state) {
  MH2SInstance inst = bench_mh2s(20, 60, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_opt_serial(inst));
}

void BM_BruteOptParallel(benchmark::State& state) {
  MH2SInstance inst = bench_mh2s(20, 60, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force_opt(inst, 24, hw_jobs()));
}

void BM_BruteSatSerial(benchmark::State& state) {
  PropCNF cnf = bench_cnf(22, 120, 13);
  for (auto _ : state) benchmark::DoNotOptimize(brute_sat_serial(cnf));
}

void BM_BruteSatParallel(benchmark::State& state) {
  PropCNF cnf = bench_cnf(22, 120, 13);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_sat(cnf, 24, hw_jobs()));
}

void BM_LPDecideSerial(benchmark::State& state) {
  LPPrimal p = bench_lp();
  for (auto _ : state)
    benchmark::DoNotOptimize(decide_optimal_pair_serial(p));
}

void BM_LPDecideParallel(benchmark::State& state) {
  LPPrimal p = bench_lp();
  for (auto _ : state)
    benchmark::DoNotOptimize(decide_optimal_pair(p, hw_jobs()));
}

void BM_CertifyingCutSerial(benchmark::State& state) {
  FlowNetwork net = bench_network();
  Flow f = max_flow(net).flow;
  for (auto _ : state)
    benchmark::DoNotOptimize(exists_certifying_cut_serial(net, f));
}

void BM_CertifyingCutParallel(benchmark::State& state) {
  FlowNetwork net = bench_network();
  Flow f = max_flow(net).flow;
  for (auto _ : state)
    benchmark::DoNotOptimize(exists_certifying_cut(net, f, hw_jobs()));
}

BENCHMARK(BM_EvaluateMaxSerial);
BENCHMARK(BM_EvaluateMaxParallel);
BENCHMARK(BM_BruteOptSerial);
BENCHMARK(BM_BruteOptParallel);
BENCHMARK(BM_BruteSatSerial);
BENCHMARK(BM_BruteSatParallel);
BENCHMARK(BM_LPDecideSerial);
BENCHMARK(BM_LPDecideParallel);
BENCHMARK(BM_CertifyingCutSerial);
BENCHMARK(BM_CertifyingCutParallel);

}  // namespace

BENCHMARK_MAIN();
