#include "proofsynth/dataset.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "proofsynth/errors.hpp"
#include "proofsynth/reduce.hpp"
#include "proofsynth/rng.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

namespace proofsynth {

using nlohmann::json;

// --------------------------------------------------------------------------
// candidates
// --------------------------------------------------------------------------

std::vector<Candidate> candidates_at(const TermPtr& m, int h) {
    std::vector<Candidate> out;
    for (TermKind k : context_kinds()) {
        Candidate c;
        c.ctx = make_context_at(m, h, k);  // throws NoSuchHole when h is absent
        out.push_back(std::move(c));
    }
    // bound variables, outermost first
    for (const auto& loc : holes(m)) {
        if (loc.id != h) continue;
        for (const auto& name : binder_names_at(m, loc.path)) {
            Candidate c;
            c.is_var = true;
            c.var_name = name;
            out.push_back(std::move(c));
        }
        break;
    }
    return out;
}

TermPtr apply_candidate(const TermPtr& m, int h, const Candidate& c) {
    return c.is_var ? fill(m, h, c.var_name) : fill(m, h, c.ctx);
}

// --------------------------------------------------------------------------
// small proofs: exhaustive queue
// --------------------------------------------------------------------------

std::vector<ProofPair> small_proof_gen(int max_size) {
    // proposition text -> pair, minimal proof kept
    std::map<std::string, ProofPair> found;
    std::deque<TermPtr> queue;
    queue.push_back(hole(0));

    while (!queue.empty()) {
        TermPtr m = queue.front();
        queue.pop_front();
        auto hs = holes(m);
        int h = hs.front().id;  // leftmost
        for (const Candidate& c : candidates_at(m, h)) {
            TermPtr next = apply_candidate(m, h, c);
            // every hole still needs at least one node
            if (term_size(next) + num_holes(next) > max_size) continue;
            if (has_forced_redex(next)) continue;
            auto inf = infer_principal(next);
            if (!inf) continue;
            if (has_holes(next)) {
                queue.push_back(next);
                continue;
            }
            PropPtr prop = canonical_rename(inf->principal);
            std::string key = print_prop(prop);
            auto it = found.find(key);
            if (it == found.end()) {
                found.emplace(key, ProofPair{prop, next});
            } else if (term_size(next) < term_size(it->second.proof)) {
                it->second.proof = next;
            }
        }
    }

    std::vector<ProofPair> out;
    out.reserve(found.size());
    for (auto& [k, v] : found) out.push_back(std::move(v));
    return out;
}

// --------------------------------------------------------------------------
// large random proofs
// --------------------------------------------------------------------------

namespace {

// one attempt: grow from a bare hole until complete or a restart condition
// hits; returns nullptr on restart
TermPtr grow_once(int lower, int upper, DetRng& rng) {
    TermPtr m = hole(0);
    while (true) {
        if (!has_holes(m)) {
            if (term_size(m) < lower) return nullptr;
            return m;
        }
        if (term_size(m) + num_holes(m) > upper) return nullptr;  // cannot finish in bound
        int h = holes(m).front().id;
        std::vector<Candidate> valid;
        std::vector<TermPtr> filled;
        bool have_var = false;
        for (const Candidate& c : candidates_at(m, h)) {
            TermPtr next = apply_candidate(m, h, c);
            if (has_forced_redex(next)) continue;
            if (!infer_principal(next)) continue;
            if (c.is_var) have_var = true;
            valid.push_back(c);
            filled.push_back(next);
        }
        if (valid.empty()) return nullptr;
        // close quickly once large enough
        bool prefer_vars = term_size(m) >= lower && have_var;
        std::vector<int> pool;
        for (size_t i = 0; i < valid.size(); ++i)
            if (!prefer_vars || valid[i].is_var) pool.push_back(static_cast<int>(i));
        m = filled[pool[static_cast<size_t>(rng.below(pool.size()))]];
    }
}

ProofPair gen_one(int lower, int upper, uint64_t seed, int k, int budget) {
    DetRng rng(seed + static_cast<uint64_t>(k));
    for (int attempt = 0; attempt < budget; ++attempt) {
        TermPtr m = grow_once(lower, upper, rng);
        if (!m) continue;
        auto inf = infer_principal(m);
        if (!inf) throw InternalError("random proof lost typability");
        if (!is_normal(m)) throw InternalError("random proof is not normal");
        return {canonical_rename(inf->principal), m};
    }
    throw GiveUp("random_large_proof_gen: restart budget exhausted for proof " +
                 std::to_string(k));
}

}  // namespace

std::vector<ProofPair> random_large_proof_gen(int lower, int upper, uint64_t seed, int count,
                                              const LargeGenOptions& opts) {
    std::vector<ProofPair> out(static_cast<size_t>(std::max(count, 0)));
    int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (int k = 0; k < count; ++k) out[k] = gen_one(lower, upper, seed, k, opts.restart_budget);
        return out;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;
    auto worker = [&] {
        while (true) {
            int k = next.fetch_add(1);
            if (k >= count || failed.load()) return;
            try {
                out[k] = gen_one(lower, upper, seed, k, opts.restart_budget);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!failed.exchange(true)) first_error = e.what();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw GiveUp(first_error);
    return out;
}

// --------------------------------------------------------------------------
// quadruples
// --------------------------------------------------------------------------

namespace {

void quads_rec(const TypedTermPtr& t, const PropPtr& goal, Path& rho,
               std::vector<Quadruple>& out) {
    const Term& node = *t->node;
    out.push_back({goal, t->type, rho, rule_of_term(node.kind)});
    for (int i = 0; i < term_child_count(node.kind); ++i) {
        rho.push_back({OneDepthContext{node.kind, node.name, node.name2}, i});
        quads_rec(t->children[i], goal, rho, out);
        rho.pop_back();
    }
}

}  // namespace

std::vector<Quadruple> extract_quadruples(const std::vector<ProofPair>& pairs) {
    std::vector<Quadruple> out;
    for (const auto& pr : pairs) {
        TypedTermPtr typed = annotate(pr.proof, pr.proposition);  // throws IllTyped on bad pairs
        Path rho;
        quads_rec(typed, pr.proposition, rho, out);
    }
    return out;
}

DatasetSplit split_quadruples(const std::vector<Quadruple>& quads, double ratio, uint64_t seed) {
    std::vector<Quadruple> shuffled = quads;
    DetRng rng(seed);
    det_shuffle(shuffled, rng);
    size_t ntrain = static_cast<size_t>(ratio * static_cast<double>(shuffled.size()));
    DatasetSplit out;
    out.train.assign(shuffled.begin(), shuffled.begin() + ntrain);
    out.validation.assign(shuffled.begin() + ntrain, shuffled.end());
    return out;
}

// --------------------------------------------------------------------------
// files
// --------------------------------------------------------------------------

std::string path_to_json(const Path& rho) {
    json arr = json::array();
    for (const auto& step : rho) arr.push_back({context_tag(step.ctx.kind), step.child});
    return arr.dump();
}

Path path_from_json(const std::string& s) {
    json arr;
    try {
        arr = json::parse(s);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad path json: ") + e.what());
    }
    if (!arr.is_array()) throw ParseError("bad path json: not an array");
    Path rho;
    for (const auto& step : arr) {
        if (!step.is_array() || step.size() != 2 || !step[0].is_string() ||
            !step[1].is_number_integer())
            throw ParseError("bad path step");
        auto kind = context_kind_from_tag(step[0].get<std::string>());
        if (!kind) throw ParseError("unknown context tag " + step[0].get<std::string>());
        int child = step[1].get<int>();
        if (child < 0 || child >= context_arity(*kind)) throw ParseError("bad child index");
        rho.push_back({OneDepthContext{*kind, "", ""}, child});
    }
    return rho;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: no newline translation
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

}  // namespace

void write_corpus(const std::string& path, const std::vector<ProofPair>& pairs) {
    auto f = open_out(path);
    for (const auto& pr : pairs) {
        json line = {{"proposition", print_prop(pr.proposition)},
                     {"proof", print_term(pr.proof)}};
        f << line.dump() << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

std::vector<ProofPair> read_corpus(const std::string& path) {
    auto f = open_in(path);
    std::vector<ProofPair> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        out.push_back({parse_prop(j.at("proposition").get<std::string>()),
                       parse_term(j.at("proof").get<std::string>())});
    }
    return out;
}

void write_quadruples(const std::string& path, const std::vector<Quadruple>& quads) {
    auto f = open_out(path);
    for (const auto& q : quads) {
        json steps = json::array();
        for (const auto& step : q.path) steps.push_back({context_tag(step.ctx.kind), step.child});
        json line = {{"goal", print_prop(q.goal)},
                     {"obligation", print_prop(q.obligation)},
                     {"path", steps},
                     {"rule", rule_name(q.rule)}};
        f << line.dump() << '\n';
    }
    if (!f) throw IoError("write failed: " + path);
}

std::vector<Quadruple> read_quadruples(const std::string& path) {
    auto f = open_in(path);
    std::vector<Quadruple> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        Quadruple q;
        q.goal = parse_prop(j.at("goal").get<std::string>());
        q.obligation = parse_prop(j.at("obligation").get<std::string>());
        q.path = path_from_json(j.at("path").dump());
        auto r = rule_from_name(j.at("rule").get<std::string>());
        if (!r)
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown rule " +
                             j.at("rule").get<std::string>());
        q.rule = *r;
        out.push_back(std::move(q));
    }
    return out;
}

}  // namespace proofsynth
