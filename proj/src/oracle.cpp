// SPDX-License-Identifier: Apache-2.0
#include "synopt/oracle.hpp"

#include <sstream>

#include "synopt/error.hpp"
#include "synopt/syntactic_eval.hpp"

namespace synopt {

std::uint64_t search_call_ceiling(std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t n = hi - lo + 1;
  std::uint64_t c = 0;
  while ((std::uint64_t{1} << c) < n) ++c;
  return c;
}

SearchOutcome binary_search_opt(DecisionOracle& oracle, std::uint64_t lo,
                                std::uint64_t hi) {
  if (lo > hi) input_error("search bounds are reversed");
  SearchOutcome out;
  out.lo = lo;
  out.hi = hi;
  std::uint64_t budget = search_call_ceiling(lo, hi);
  std::uint64_t start = oracle.calls();
  bool saw_true = false;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (oracle.ask(mid)) {
      saw_true = true;
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  // All answers false leaves the caller's ask(lo)=true guarantee
  // untested; spend a spare call on it when the ceiling allows.
  if (!saw_true && oracle.calls() - start < budget && !oracle.ask(lo))
    input_error("precondition violated: ask(lo) is false");
  out.optimum = lo;
  out.calls = oracle.calls() - start;
  if (out.calls > budget)
    internal_error("search exceeded its call budget");
  return out;
}

namespace {

class MH2SOracle final : public DecisionOracle {
 public:
  MH2SOracle(const MH2SInstance& inst, bool dedupe, int jobs)
      : encoded_(encode(inst, dedupe)), jobs_(jobs) {}

 private:
  bool ask_impl(std::uint64_t k) override {
    return decide_max(encoded_.instance, k, std::uint64_t{1} << 24, jobs_);
  }
  EncodedMH2S encoded_;
  int jobs_;
};

class LPObjectiveOracle final : public DecisionOracle {
 public:
  explicit LPObjectiveOracle(const LPPrimal& p) : p_(p) {}

 private:
  bool ask_impl(std::uint64_t k) override {
    IneqSystem sys;
    for (std::size_t i = 0; i < p_.rows(); ++i)
      sys.push_back({p_.a[i], p_.b[i]});
    for (std::size_t j = 0; j < p_.cols(); ++j) {
      Vec unit(p_.cols(), Rat(0));
      unit[j] = -1;
      sys.push_back({std::move(unit), Rat(0)});
    }
    Vec negc;
    for (const Rat& v : p_.c) negc.push_back(-v);
    sys.push_back({std::move(negc), -Rat(static_cast<unsigned long>(k))});
    return fm_feasible_point(sys, p_.cols()).has_value();
  }
  LPPrimal p_;
};

class FlowOracle final : public DecisionOracle {
 public:
  explicit FlowOracle(const FlowNetwork& net)
      : value_(max_flow(net).value) {}

 private:
  bool ask_impl(std::uint64_t k) override {
    return value_ >= Rat(static_cast<unsigned long>(k));
  }
  Rat value_;
};

}  // namespace

std::unique_ptr<DecisionOracle> make_mh2s_oracle(const MH2SInstance& inst,
                                                 bool dedupe, int jobs) {
  return std::make_unique<MH2SOracle>(inst, dedupe, jobs);
}

std::unique_ptr<DecisionOracle> make_lp_objective_oracle(const LPPrimal& p) {
  return std::make_unique<LPObjectiveOracle>(p);
}

std::unique_ptr<DecisionOracle> make_flow_oracle(const FlowNetwork& net) {
  return std::make_unique<FlowOracle>(net);
}

Model1Result solve_model1_mh2s(const MH2SInstance& inst) {
  MH2SOpt opt = brute_force_opt(inst);
  std::ostringstream out;
  for (std::uint32_t v = 0; v < inst.num_vars; ++v) {
    if (v) out << ' ';
    out << mh2s_var_name(v) << '=' << (opt.assignment[v] ? 'T' : 'F');
  }
  return {out.str(), Rat(static_cast<unsigned long>(opt.optimum))};
}

Model1Result solve_model1_lp(const LPPrimal& p) {
  LPDecision d = decide_optimal_pair(p);
  switch (d.status) {
    case LPStatus::PrimalInfeasible:
      input_error("no-optimum(primal-infeasible)");
    case LPStatus::PrimalUnbounded:
      input_error("no-optimum(primal-unbounded)");
    case LPStatus::Found:
      break;
  }
  return {"x: " + lp_str(d.cert->x) + " y: " + lp_str(d.cert->y),
          dot(p.c, d.cert->x)};
}

Model1Result solve_model1_flow(const FlowNetwork& net) {
  MaxFlowResult r = max_flow(net);
  std::ostringstream out;
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    if (i) out << ' ';
    out << net.edges[i].from << "->" << net.edges[i].to << '='
        << rat_str(r.flow.edge_flow[i]);
  }
  return {out.str(), r.value};
}

}  // namespace synopt
