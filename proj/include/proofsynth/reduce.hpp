#pragma once

#include <optional>

#include "proofsynth/ast.hpp"

namespace proofsynth {

// One-step reducers, leftmost-outermost (root first, then children left to
// right). nullopt when no redex exists anywhere in the term.
//
// beta rules:
//   (lam x M) N                     -> [N/x]M
//   casepair (pair L M) x y N       -> [L/x, M/y]N   (simultaneous)
//   casesum (left L)  x M y N      -> [L/x]M
//   casesum (right L) x M y N      -> [L/y]N
std::optional<TermPtr> beta_step(const TermPtr& t);

// eta rules:
//   lam x (M x)                        -> M     when x not free in M
//   pair (casepair L x y x) (casepair L' x' y' y')
//                                      -> L     when L =alpha L'
//   casesum M x N1 y N2                -> [M/z]N  when N1 = [left x / z]N and
//                                        N2 = [right y / z]N for some N with
//                                        x, y not free in it
std::optional<TermPtr> eta_step(const TermPtr& t);

bool is_normal(const TermPtr& t);

// repeated leftmost-outermost steps (beta preferred) to normal form;
// throws InternalError when max_steps is exceeded
TermPtr normalize(const TermPtr& t, int max_steps = 100000);

// Pruning predicate for generators: true when the term contains a redex that
// survives every way of filling its holes. On hole-free terms this is exactly
// !is_normal. On partial terms it is weaker than "has a redex": an eta redex
// whose side conditions still depend on unfilled holes is not forced.
bool has_forced_redex(const TermPtr& t);

}  // namespace proofsynth
