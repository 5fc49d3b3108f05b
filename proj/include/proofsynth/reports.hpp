#pragma once

#include <string>
#include <vector>

#include "proofsynth/dataset.hpp"
#include "proofsynth/estimator.hpp"
#include "proofsynth/train.hpp"

namespace proofsynth {

// a rendered report: an aligned text table plus the same data as JSON lines
struct Report {
    std::string text;
    std::vector<std::string> jsonl;
};

// writes base + ".txt" and base + ".jsonl"
void write_report(const Report& r, const std::string& base);

// first column left aligned, the rest right aligned, two spaces between
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

// proofs per size
Report report_gen(const std::vector<ProofPair>& corpus);

// one row per epoch
Report report_train(const std::vector<EpochStats>& stats);

// Per-rule and per-depth accuracy matrix over a validation set. Depth is the
// 1-based node depth (path length + 1); rows cover depths 1..15 one by one,
// then 16-20 and 21+, then a total row. Cells are percentages; a rule absent
// from a bucket prints N/A.
Report report_eval(const RuleEstimator& est, const std::vector<Quadruple>& quads);

struct BenchResult {
    std::string prop;  // printed form
    bool found = false;
    bool verified = false;
    double seconds = 0.0;
    long long expansions = 0;
    int proof_size = 0;
};

// per-proposition rows plus a summary line (successes, mean seconds on
// success); seconds are wall clock, so these files are not byte-reproducible
Report report_bench(const std::vector<BenchResult>& results);

}  // namespace proofsynth
