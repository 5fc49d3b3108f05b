#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proofsynth/ast.hpp"

namespace proofsynth {

// a proposition together with one proof of it; proofs in generated corpora
// are closed, beta-eta-normal, and the proposition is the canonically renamed
// principal type of the proof
struct ProofPair {
    PropPtr proposition;
    TermPtr proof;
};

// a training example: which rule concludes the node at path in a proof of
// goal, given the obligation (the node's type)
struct Quadruple {
    PropPtr goal;
    PropPtr obligation;
    Path path;
    Rule rule;
};

// what can fill a hole: one of the seven contexts, or a bound variable
struct Candidate {
    bool is_var = false;
    OneDepthContext ctx{TermKind::Abs, "", ""};
    std::string var_name;
};

// the candidate universe at hole h: the seven one-depth contexts (binders
// named by the deterministic scheme) followed by the variables bound at h,
// outermost first
std::vector<Candidate> candidates_at(const TermPtr& m, int h);
TermPtr apply_candidate(const TermPtr& m, int h, const Candidate& c);

// Exhaustive generation of small proofs: all propositions with a closed
// beta-eta-normal proof of size <= max_size, one minimal proof each, sorted
// by proposition text. Fills the leftmost hole first and prunes fills that
// force a redex, exceed the size bound, or lose typability.
std::vector<ProofPair> small_proof_gen(int max_size);

// Randomized generation of larger proofs: repeatedly fills the leftmost hole
// with a uniformly random valid candidate, preferring variables once the
// partial proof's size reaches lower, restarting when completion lands below
// lower or the term can no longer finish within upper. Proof k draws from
// DetRng(seed + k), so output is independent of scheduling; jobs > 1 only
// parallelizes. Throws GiveUp when a proof exhausts restart_budget restarts.
struct LargeGenOptions {
    int restart_budget = 10000;
    int jobs = 1;
};
std::vector<ProofPair> random_large_proof_gen(int lower, int upper, uint64_t seed, int count,
                                              const LargeGenOptions& opts = {});

// one quadruple per proof node, in preorder, pairs in corpus order
std::vector<Quadruple> extract_quadruples(const std::vector<ProofPair>& pairs);

// seeded Fisher-Yates shuffle, then train = first floor(ratio * n) examples
struct DatasetSplit {
    std::vector<Quadruple> train, validation;
};
DatasetSplit split_quadruples(const std::vector<Quadruple>& quads, double ratio, uint64_t seed);

// ---- JSONL files -----------------------------------------------------------
// corpus lines:    {"proposition": <sexpr>, "proof": <sexpr>}
// quadruple lines: {"goal": <sexpr>, "obligation": <sexpr>,
//                   "path": [[<context-tag>, <child-index>], ...], "rule": <name>}
// Reading validates and round-trips exactly (serialized paths carry no binder
// names). All readers/writers throw IoError / ParseError.

void write_corpus(const std::string& path, const std::vector<ProofPair>& pairs);
std::vector<ProofPair> read_corpus(const std::string& path);
void write_quadruples(const std::string& path, const std::vector<Quadruple>& quads);
std::vector<Quadruple> read_quadruples(const std::string& path);

std::string path_to_json(const Path& rho);  // compact [["lam",0],...]
Path path_from_json(const std::string& s);

}  // namespace proofsynth
