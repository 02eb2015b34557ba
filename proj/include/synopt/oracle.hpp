// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "synopt/flow.hpp"
#include "synopt/lp.hpp"
#include "synopt/mh2s.hpp"

namespace synopt {

/// "Is the optimum at least k?" with an instrumented call counter.
/// Implementations must be monotone: ask(k) true implies ask(k') true
/// for every k' <= k.
class DecisionOracle {
 public:
  virtual ~DecisionOracle() = default;

  bool ask(std::uint64_t k) {
    ++calls_;
    return ask_impl(k);
  }
  std::uint64_t calls() const { return calls_; }

 private:
  virtual bool ask_impl(std::uint64_t k) = 0;
  std::uint64_t calls_ = 0;
};

struct SearchOutcome {
  std::uint64_t optimum = 0;
  std::uint64_t calls = 0;  // asked during this search
  std::uint64_t lo = 0, hi = 0;
};

/// Largest k in [lo, hi] with ask(k) true, assuming ask(lo) is true.
/// Never exceeds ceil(log2(hi - lo + 1)) calls; zero calls when
/// lo == hi. If every answer came back false and budget remains, one
/// call re-checks ask(lo) and a false answer raises "precondition
/// violated".
SearchOutcome binary_search_opt(DecisionOracle& oracle, std::uint64_t lo,
                                std::uint64_t hi);

std::uint64_t search_call_ceiling(std::uint64_t lo, std::uint64_t hi);

/// Decides through the encoded counting instance, not the brute-force
/// optimizer. The encoding is built once and reused across asks.
std::unique_ptr<DecisionOracle> make_mh2s_oracle(const MH2SInstance& inst,
                                                 bool dedupe = false,
                                                 int jobs = 1);

/// Decides "max c.x >= k" by exact feasibility of the threshold system
/// {A x <= b, x >= 0, c.x >= k}; independent of the pattern search.
std::unique_ptr<DecisionOracle> make_lp_objective_oracle(const LPPrimal& p);

/// Compares k against the exact maximum flow value (computed once).
std::unique_ptr<DecisionOracle> make_flow_oracle(const FlowNetwork& net);

/// One-shot solution output: the solution string plus its value.
/// Instances with no optimum raise an input error whose message starts
/// with "no-optimum(" and names the reason.
struct Model1Result {
  std::string solution;
  Rat value;
};

Model1Result solve_model1_mh2s(const MH2SInstance& inst);
Model1Result solve_model1_lp(const LPPrimal& p);
Model1Result solve_model1_flow(const FlowNetwork& net);

}  // namespace synopt
