// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

#include "synopt/error.hpp"

namespace synopt {

/// Exact rational arithmetic. All values are kept canonical (gcd 1,
/// positive denominator); GMP maintains that across arithmetic.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  if (den == 0) input_error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Accepts "p", "-p", "p/q" with optional sign on p. q must be positive
/// and nonzero.
Rat parse_rat(const std::string& text,
              std::optional<SourceSpan> span = std::nullopt);

/// "5", "-2/3": integer if denominator is 1, "num/den" otherwise.
std::string rat_str(const Rat& q);

}  // namespace synopt
