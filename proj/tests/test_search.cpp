#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/reduce.hpp"
#include "proofsynth/search.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

using namespace proofsynth;

TEST_CASE("verify") {
    auto p = parse_prop("(imp (var a) (var a))");
    CHECK(verify(p, parse_term("(lam x (var x))")));
    CHECK(!verify(p, parse_term("(lam x (hole 0))")));   // incomplete
    CHECK(!verify(p, parse_term("(lam x (var y))")));    // open
    CHECK(!verify(pvar("a"), parse_term("(lam x (var x))")));
}

TEST_CASE("proof_synthesize with the uniform estimator finds the identity") {
    UniformEstimator uni;
    auto p = parse_prop("(imp (var a) (var a))");
    auto r = proof_synthesize(p, uni);
    REQUIRE(r.has_value());
    CHECK(verify(p, *r));
    CHECK(alpha_eq(*r, parse_term("(lam x (var x))")));
}

TEST_CASE("proof_synthesize solves a few classics") {
    UniformEstimator uni;
    for (const char* s : {
             "(imp (var a) (imp (var b) (var a)))",
             "(imp (var a) (imp (var b) (prod (var a) (var b))))",
             "(imp (prod (var a) (var b)) (var a))",
             "(imp (prod (var a) (var b)) (prod (var b) (var a)))",
             "(imp (sum (var a) (var b)) (sum (var b) (var a)))",
             "(imp (imp (var a) (var b)) (imp (prod (var a) (var c)) (var b)))",
         }) {
        auto p = parse_prop(s);
        CAPTURE(s);
        auto r = proof_synthesize(p, uni);
        REQUIRE(r.has_value());
        CHECK(verify(p, *r));
    }
}

TEST_CASE("proof_synthesize respects the expansion budget on an unprovable goal") {
    UniformEstimator uni;
    SearchBudget b;
    b.max_expansions = 500;
    SearchStats st;
    auto r = proof_synthesize(pvar("a"), uni, b, {}, &st);
    CHECK(!r.has_value());
    CHECK(st.budget_exhausted);
    CHECK(st.expansions == 500);
}

TEST_CASE("proof_synthesize times out") {
    UniformEstimator uni;
    SearchBudget b;
    b.timeout_sec = 0.0;
    SearchStats st;
    auto r = proof_synthesize(parse_prop("(imp (var a) (var a))"), uni, b, {}, &st);
    CHECK(!r.has_value());
    CHECK(st.timed_out);
}

TEST_CASE("proof_synthesize exhausts a finite space") {
    // no candidate ever types against a bare product of atoms except pair,
    // whose subgoals are atoms again; with normal-only pruning the space
    // stays small but infinite via pair-of-pair, so cap expansions instead
    UniformEstimator uni;
    SearchBudget b;
    b.max_expansions = 2000;
    auto r = proof_synthesize(parse_prop("(prod (var a) (var b))"), uni, b);
    CHECK(!r.has_value());
}

TEST_CASE("search is deterministic including its trace") {
    UniformEstimator uni;
    auto p = parse_prop("(imp (sum (var a) (var b)) (sum (var b) (var a)))");
    std::ostringstream t1, t2;
    SearchOptions o1;
    o1.trace = &t1;
    SearchOptions o2;
    o2.trace = &t2;
    auto r1 = proof_synthesize(p, uni, {}, o1);
    auto r2 = proof_synthesize(p, uni, {}, o2);
    REQUIRE(r1.has_value());
    REQUIRE(r2.has_value());
    CHECK(print_term(*r1) == print_term(*r2));
    CHECK(t1.str() == t2.str());
    CHECK(!t1.str().empty());
}

TEST_CASE("trace shows non-increasing pop priorities and the product law") {
    UniformEstimator uni;
    auto p = parse_prop("(imp (prod (var a) (var b)) (var a))");
    std::ostringstream trace;
    SearchOptions opts;
    opts.trace = &trace;
    auto r = proof_synthesize(p, uni, {}, opts);
    REQUIRE(r.has_value());
    std::istringstream in(trace.str());
    std::string line;
    double last = 2.0;
    int pops = 0;
    while (std::getline(in, line)) {
        auto ppos = line.find("\"priority\":");
        if (ppos == std::string::npos) continue;
        double prio = std::stod(line.substr(ppos + 11));
        CHECK(prio <= last + 1e-12);
        last = prio;
        ++pops;
        // every push's priority is bounded by its parent's
        size_t at = 0;
        while ((at = line.find("\"priority\":", at + 1)) != std::string::npos) {
            double child = std::stod(line.substr(at + 11));
            CHECK(child <= prio + 1e-12);
        }
    }
    CHECK(pops >= 1);
}

TEST_CASE("normal_only and memo options still find proofs") {
    UniformEstimator uni;
    auto p = parse_prop("(imp (sum (var a) (var a)) (var a))");
    SearchOptions normal;
    normal.normal_only = true;
    auto r1 = proof_synthesize(p, uni, {}, normal);
    REQUIRE(r1.has_value());
    CHECK(verify(p, *r1));
    CHECK(is_normal(*r1));

    SearchOptions memo;
    memo.memo = true;
    SearchStats with_memo, without_memo;
    auto r2 = proof_synthesize(p, uni, {}, memo, &with_memo);
    auto r3 = proof_synthesize(p, uni, {}, {}, &without_memo);
    REQUIRE(r2.has_value());
    REQUIRE(r3.has_value());
    CHECK(with_memo.pushed <= without_memo.pushed);
}

TEST_CASE("exhaustive_prove matches the worked examples") {
    auto r = exhaustive_prove(parse_prop("(imp (var a) (var a))"), 3);
    REQUIRE(r.has_value());
    CHECK(alpha_eq(*r, parse_term("(lam x (var x))")));
    CHECK(term_size(*r) == 2);  // smallest wins even when 3 is allowed

    auto fst = exhaustive_prove(parse_prop("(imp (prod (var a) (var b)) (var a))"), 4);
    REQUIRE(fst.has_value());
    CHECK(print_term(*fst) == "(lam x0 (casepair (var x0) x1 x2 (var x1)))");

    CHECK(!exhaustive_prove(pvar("a"), 6).has_value());
    CHECK(!exhaustive_prove(parse_prop("(imp (prod (var a) (var b)) (var a))"), 3).has_value());
}

TEST_CASE("exhaustive_prove minimal sizes agree with the generated corpus") {
    // The corpus keys proofs by principal type; exhaustive_prove accepts any
    // instance, so it may find a strictly smaller, more general proof
    // (e.g. (lam x (var x)) proves (imp (prod (var a) (var b)) (prod (var a) (var b)))).
    for (const auto& pr : small_proof_gen(4)) {
        auto r = exhaustive_prove(pr.proposition, 4);
        REQUIRE(r.has_value());
        CHECK(term_size(*r) <= term_size(pr.proof));
        CHECK(verify(pr.proposition, *r));
        auto pt = infer_principal(*r);
        REQUIRE(pt.has_value());
        if (prop_eq(canonical_rename(pt->principal), pr.proposition))
            CHECK(term_size(*r) == term_size(pr.proof));
    }
}

TEST_CASE("enumerate_closed_terms matches the oracle enumerator count") {
    auto lib = enumerate_closed_terms(5);
    auto ora = oracle::enum_upto(5);
    REQUIRE(lib.size() == ora.size());
    for (size_t i = 0; i < lib.size(); ++i) CHECK(alpha_eq(lib[i], ora[i]));
}

TEST_CASE("synthesized proofs verify across a corpus batch") {
    UniformEstimator uni;
    for (const auto& pr : small_proof_gen(4)) {
        SearchBudget b;
        b.max_expansions = 200000;
        b.timeout_sec = 30.0;
        auto r = proof_synthesize(pr.proposition, uni, b);
        REQUIRE(r.has_value());
        CHECK(verify(pr.proposition, *r));
    }
}
