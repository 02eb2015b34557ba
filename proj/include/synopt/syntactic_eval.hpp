// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "synopt/logic.hpp"

namespace synopt {

/// A finite structure paired with a counting query over it.
struct SyntacticInstance {
  FiniteStructure structure;
  Query query;
};

/// Number of second-order assignments, 2^(sum of table sizes).
/// Rejects table spaces wider than 62 bits outright.
std::uint64_t enumeration_size(const SyntacticInstance& inst);

struct EvalResult {
  std::uint64_t optimum = 0;
  SOAssignment witness;
  std::uint64_t examined = 0;
};

/// Maximizes, over all second-order assignments, the number of
/// count-tuple values for which the universally closed matrix holds.
/// The witness is the lexicographically least maximizer (tables
/// flattened in signature order, false < true). The assignment space
/// is guarded by `limit`.
EvalResult evaluate_max(const SyntacticInstance& inst,
                        std::uint64_t limit = std::uint64_t{1} << 24,
                        int jobs = 1);

/// Reference implementation: same contract, plain loops over the
/// generic evaluator, no precompilation, no parallelism.
EvalResult evaluate_max_serial(const SyntacticInstance& inst,
                               std::uint64_t limit = std::uint64_t{1} << 24);

/// True iff some second-order assignment reaches a count of at least k.
/// Same enumeration as evaluate_max with an early exit.
bool decide_max(const SyntacticInstance& inst, std::uint64_t k,
                std::uint64_t limit = std::uint64_t{1} << 24, int jobs = 1);
bool decide_max_serial(const SyntacticInstance& inst, std::uint64_t k,
                       std::uint64_t limit = std::uint64_t{1} << 24);

}  // namespace synopt
