// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "synopt/logic.hpp"

namespace synopt {

/// Structure text:
///   universe a b c ;
///   rel E/2 { (a,b) (b,c) } ;
///   const root = a ;
/// '#' starts a line comment. Every error carries a line:column span.
FiniteStructure parse_structure(const std::string& text);

/// Query text, against the vocabulary of a structure:
///   sovar S/1 ;
///   count (w) : forall x . (S(w) | !S(x))
/// Declared sovar symbols extend the vocabulary; variables must appear
/// in the count tuple or the forall block.
Query parse_query(const std::string& text, const Vocabulary& base);

/// Canonical text for a structure; parse_structure round-trips it.
std::string print_structure(const FiniteStructure& structure);

/// Canonical text for a query; parse_query round-trips it (implication
/// is already normalized away, so the arrow never appears).
std::string print_query(const Query& query);

/// The matrix alone, precedence-aware, minimal parentheses.
std::string print_formula(const Formula& f);

}  // namespace synopt
