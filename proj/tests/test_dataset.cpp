#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/reduce.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

using namespace proofsynth;

namespace {

std::string corpus_text(const std::vector<ProofPair>& pairs) {
    std::ostringstream os;
    for (const auto& pr : pairs)
        os << print_prop(pr.proposition) << " | " << print_term(pr.proof) << "\n";
    return os.str();
}

std::string temp_path(const char* stem) {
    return std::string("ps_test_") + stem + "_" + std::to_string(::getpid()) + ".jsonl";
}

}  // namespace

TEST_CASE("candidates_at lists seven contexts then bound variables") {
    auto m = parse_term("(lam a (lam b (hole 0)))");
    auto cs = candidates_at(m, 0);
    REQUIRE(cs.size() == 9);
    for (size_t i = 0; i < 7; ++i) {
        CHECK(!cs[i].is_var);
        CHECK(cs[i].ctx.kind == context_kinds()[i]);
    }
    CHECK(cs[7].is_var);
    CHECK(cs[7].var_name == "a");
    CHECK(cs[8].is_var);
    CHECK(cs[8].var_name == "b");
    CHECK(cs[0].ctx.binder == "x2");  // two binders above the hole
}

TEST_CASE("small_proof_gen(1) is empty") { CHECK(small_proof_gen(1).empty()); }

TEST_CASE("small_proof_gen(2) is exactly the identity") {
    auto pairs = small_proof_gen(2);
    REQUIRE(pairs.size() == 1);
    CHECK(print_prop(pairs[0].proposition) == "(imp (var a) (var a))");
    CHECK(alpha_eq(pairs[0].proof, parse_term("(lam x (var x))")));
}

TEST_CASE("small_proof_gen(3) finds the seven small theorems") {
    auto pairs = small_proof_gen(3);
    CHECK(pairs.size() == 7);
    std::set<std::string> props;
    for (auto& pr : pairs) props.insert(print_prop(pr.proposition));
    CHECK(props.count("(imp (var a) (var a))"));
    CHECK(props.count("(imp (var a) (imp (var b) (var a)))"));
    CHECK(props.count("(imp (var a) (imp (var b) (var b)))"));
    CHECK(props.count("(imp (var a) (sum (var a) (var b)))"));
    CHECK(props.count("(imp (var a) (sum (var b) (var a)))"));
    CHECK(props.count("(sum (imp (var a) (var a)) (var b))"));
    CHECK(props.count("(sum (var a) (imp (var b) (var b)))"));
}

TEST_CASE("small_proof_gen invariants and determinism at size 5") {
    auto pairs = small_proof_gen(5);
    CHECK(!pairs.empty());
    std::set<std::string> seen_props;
    for (const auto& pr : pairs) {
        CHECK(term_size(pr.proof) <= 5);
        CHECK(!has_holes(pr.proof));
        CHECK(free_vars(pr.proof).empty());
        CHECK(is_normal(pr.proof));
        auto inf = infer_principal(pr.proof);
        REQUIRE(inf.has_value());
        CHECK(prop_eq(canonical_rename(inf->principal), pr.proposition));
        CHECK(seen_props.insert(print_prop(pr.proposition)).second);  // unique key
    }
    CHECK(corpus_text(small_proof_gen(5)) == corpus_text(pairs));
}

TEST_CASE("small_proof_gen agrees with the brute-force oracle at size 4") {
    auto pairs = small_proof_gen(4);
    auto expect = oracle::small_corpus_oracle(4);
    REQUIRE(pairs.size() == expect.size());
    for (const auto& pr : pairs) {
        auto it = expect.find(print_prop(pr.proposition));
        REQUIRE(it != expect.end());
        CHECK(term_size(pr.proof) == it->second);
        CHECK(oracle::is_normal_oracle(pr.proof));
    }
}

TEST_CASE("random_large_proof_gen produces verifiable normal proofs in band") {
    auto pairs = random_large_proof_gen(4, 8, 42, 25);
    REQUIRE(pairs.size() == 25);
    for (const auto& pr : pairs) {
        int sz = term_size(pr.proof);
        CHECK(sz >= 4);
        CHECK(sz <= 8);
        CHECK(is_normal(pr.proof));
        CHECK(free_vars(pr.proof).empty());
        auto inf = infer_principal(pr.proof);
        REQUIRE(inf.has_value());
        CHECK(prop_eq(canonical_rename(inf->principal), pr.proposition));
    }
}

TEST_CASE("random_large_proof_gen: band (2,2) only yields the identity") {
    auto pairs = random_large_proof_gen(2, 2, 7, 5);
    for (const auto& pr : pairs) CHECK(alpha_eq(pr.proof, parse_term("(lam x (var x))")));
}

TEST_CASE("random_large_proof_gen is deterministic and scheduling-independent") {
    auto a = random_large_proof_gen(4, 10, 123, 12);
    auto b = random_large_proof_gen(4, 10, 123, 12);
    CHECK(corpus_text(a) == corpus_text(b));
    LargeGenOptions par;
    par.jobs = 4;
    auto c = random_large_proof_gen(4, 10, 123, 12, par);
    CHECK(corpus_text(a) == corpus_text(c));
    auto d = random_large_proof_gen(4, 10, 124, 12);
    CHECK(corpus_text(a) != corpus_text(d));
}

TEST_CASE("random_large_proof_gen gives up when the band is impossible") {
    LargeGenOptions opts;
    opts.restart_budget = 25;
    CHECK_THROWS_AS(random_large_proof_gen(1, 1, 5, 1, opts), GiveUp);
}

TEST_CASE("extract_quadruples on the identity proof") {
    auto p = parse_prop("(imp (var a) (var a))");
    auto pairs = std::vector<ProofPair>{{p, parse_term("(lam x (var x))")}};
    auto quads = extract_quadruples(pairs);
    REQUIRE(quads.size() == 2);
    CHECK(prop_eq(quads[0].goal, p));
    CHECK(prop_eq(quads[0].obligation, p));
    CHECK(quads[0].path.empty());
    CHECK(quads[0].rule == Rule::Abs);
    CHECK(prop_eq(quads[1].goal, p));
    CHECK(print_prop(quads[1].obligation) == "(var a)");
    REQUIRE(quads[1].path.size() == 1);
    CHECK(quads[1].path[0].ctx.kind == TermKind::Abs);
    CHECK(quads[1].path[0].child == 0);
    CHECK(quads[1].rule == Rule::Var);
}

TEST_CASE("extract_quadruples yields one example per node, preorder") {
    auto pairs = small_proof_gen(4);
    auto quads = extract_quadruples(pairs);
    size_t total = 0;
    for (auto& pr : pairs) total += static_cast<size_t>(term_size(pr.proof));
    CHECK(quads.size() == total);
    // replaying rules along paths rebuilds each proof's constructor skeleton
    size_t qi = 0;
    for (auto& pr : pairs) {
        for (int i = 0; i < term_size(pr.proof); ++i, ++qi) {
            auto sub = subterm_at(pr.proof, quads[qi].path);
            REQUIRE(sub.has_value());
            CHECK(rule_of_term((*sub)->kind) == quads[qi].rule);
        }
    }
}

TEST_CASE("split_quadruples floors the train size and is seeded") {
    auto quads = extract_quadruples(small_proof_gen(4));
    REQUIRE(quads.size() >= 10);
    auto sp = split_quadruples(quads, 0.9, 5);
    CHECK(sp.train.size() == static_cast<size_t>(0.9 * quads.size()));
    CHECK(sp.train.size() + sp.validation.size() == quads.size());
    auto sp2 = split_quadruples(quads, 0.9, 5);
    CHECK(sp.train.size() == sp2.train.size());
    for (size_t i = 0; i < sp.train.size(); ++i)
        CHECK(prop_eq(sp.train[i].obligation, sp2.train[i].obligation));
    auto all = split_quadruples(quads, 1.0, 5);
    CHECK(all.validation.empty());
    auto none = split_quadruples(quads, 0.0, 5);
    CHECK(none.train.empty());
}

TEST_CASE("corpus JSONL round trip") {
    auto pairs = small_proof_gen(3);
    auto file = temp_path("corpus");
    write_corpus(file, pairs);
    auto back = read_corpus(file);
    CHECK(corpus_text(back) == corpus_text(pairs));
    // byte determinism of the writer
    std::ifstream f1(file);
    std::stringstream buf1;
    buf1 << f1.rdbuf();
    write_corpus(file, pairs);
    std::ifstream f2(file);
    std::stringstream buf2;
    buf2 << f2.rdbuf();
    CHECK(buf1.str() == buf2.str());
    std::remove(file.c_str());
    CHECK_THROWS_AS(read_corpus("does_not_exist.jsonl"), IoError);
}

TEST_CASE("quadruple JSONL round trip") {
    auto quads = extract_quadruples(small_proof_gen(4));
    auto file = temp_path("quads");
    write_quadruples(file, quads);
    auto back = read_quadruples(file);
    REQUIRE(back.size() == quads.size());
    for (size_t i = 0; i < quads.size(); ++i) {
        CHECK(prop_eq(back[i].goal, quads[i].goal));
        CHECK(prop_eq(back[i].obligation, quads[i].obligation));
        CHECK(path_eq(back[i].path, quads[i].path));
        CHECK(back[i].rule == quads[i].rule);
    }
    std::remove(file.c_str());
}

TEST_CASE("path json") {
    Path rho = {{OneDepthContext{TermKind::Abs, "x", ""}, 0},
                {OneDepthContext{TermKind::CaseSum, "l", "r"}, 2}};
    auto s = path_to_json(rho);
    CHECK(s == "[[\"lam\",0],[\"casesum\",2]]");
    CHECK(path_eq(path_from_json(s), rho));
    CHECK(path_from_json("[]").empty());
    CHECK_THROWS_AS(path_from_json("[\"lam\"]"), ParseError);
    CHECK_THROWS_AS(path_from_json("[[\"bogus\",0]]"), ParseError);
    CHECK_THROWS_AS(path_from_json("[[\"lam\",5]]"), ParseError);
    CHECK_THROWS_AS(path_from_json("not json"), ParseError);
}
