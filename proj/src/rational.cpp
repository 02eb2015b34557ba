// SPDX-License-Identifier: Apache-2.0
#include "synopt/rational.hpp"

#include <cctype>

namespace synopt {

namespace {

bool valid_integer(const std::string& s, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& text, std::optional<SourceSpan> span) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "" : text.substr(slash + 1);
  if (!valid_integer(num, true) ||
      (slash != std::string::npos && !valid_integer(den, false)))
    input_error("malformed rational '" + text + "'", span);
  if (slash == std::string::npos) {
    Rat q(num);
    q.canonicalize();
    return q;
  }
  mpz_class d(den);
  if (d == 0) input_error("rational with zero denominator", span);
  Rat q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

}  // namespace synopt
