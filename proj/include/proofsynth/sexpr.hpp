#pragma once

#include <string>
#include <string_view>

#include "proofsynth/ast.hpp"

namespace proofsynth {

// Text format, round-trips exactly up to whitespace:
//   propositions  (var a) (imp P Q) (prod P Q) (sum P Q)
//   terms         (hole 3) (var x) (lam x M) (app M N) (pair M N)
//                 (casepair M x y N) (left M) (right M) (casesum L x M y N)

std::string print_prop(const PropPtr& p);
std::string print_term(const TermPtr& t);

// throw ParseError with a byte offset on malformed input; parse_term also
// rejects duplicate hole ids (term invariant)
PropPtr parse_prop(std::string_view s);
TermPtr parse_term(std::string_view s);

}  // namespace proofsynth
