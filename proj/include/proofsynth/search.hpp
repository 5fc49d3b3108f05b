#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "proofsynth/ast.hpp"
#include "proofsynth/estimator.hpp"

namespace proofsynth {

struct SearchBudget {
    long long max_expansions = 1'000'000;
    double timeout_sec = 180.0;
};

struct SearchOptions {
    bool normal_only = false;  // prune fills that force a redex
    bool memo = false;         // drop partial terms already seen up to renaming
    std::ostream* trace = nullptr;
};

struct SearchStats {
    long long expansions = 0;
    long long pushed = 0;
    bool timed_out = false;
    bool budget_exhausted = false;
};

// Best-first proof search. Starts from a bare hole with priority 1; each
// expansion pops the highest-priority partial proof, picks the hole whose
// top rule likelihood is largest, and pushes every typable fill with
// priority = parent priority * rule probability (variable fills also divide
// by the number of binders in scope). Returns the first complete proof, or
// nullopt when the budget/timeout runs out or the space is exhausted.
// The returned proof always passes verify(); that is asserted internally
// (InternalError otherwise).
std::optional<TermPtr> proof_synthesize(const PropPtr& goal, const RuleEstimator& est,
                                        const SearchBudget& budget = {},
                                        const SearchOptions& opts = {},
                                        SearchStats* stats = nullptr);

// independent oracle: enumerate all closed terms by size, filter to normal
// proofs of the goal; returns a smallest proof (ties: least printed form)
std::optional<TermPtr> exhaustive_prove(const PropPtr& goal, int max_size);

// all closed terms of size 1..max_size, built over the same candidate
// universe the generators use (binders named x0, x1, ...)
std::vector<TermPtr> enumerate_closed_terms(int max_size);

// complete, closed, and typechecks against the ground goal
bool verify(const PropPtr& goal, const TermPtr& proof);

}  // namespace proofsynth
