#include "proofsynth/search.hpp"

#include <chrono>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

#include "proofsynth/dataset.hpp"
#include "proofsynth/errors.hpp"
#include "proofsynth/reduce.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

namespace proofsynth {

bool verify(const PropPtr& goal, const TermPtr& proof) {
    if (has_holes(proof)) return false;
    if (!free_vars(proof).empty()) return false;
    return typecheck({}, proof, goal);
}

// --------------------------------------------------------------------------
// best-first search
// --------------------------------------------------------------------------

namespace {

struct Node {
    TermPtr term;
    double priority;
    long long seq;  // FIFO tie-break
    std::map<int, PropPtr> obligations;
};

struct NodeCmp {
    bool operator()(const Node& a, const Node& b) const {
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.seq > b.seq;
    }
};

Rule candidate_rule(const Candidate& c) {
    return c.is_var ? Rule::Var : rule_of_term(c.ctx.kind);
}

void trace_term(std::ostream& os, const char* key, const TermPtr& t) {
    os << '"' << key << "\":\"" << print_term(t) << '"';
}

}  // namespace

std::optional<TermPtr> proof_synthesize(const PropPtr& goal, const RuleEstimator& est,
                                        const SearchBudget& budget, const SearchOptions& opts,
                                        SearchStats* stats) {
    SearchStats local;
    SearchStats& st = stats ? *stats : local;
    st = SearchStats{};
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.timeout_sec));

    std::priority_queue<Node, std::vector<Node>, NodeCmp> open;
    long long seq = 0;
    std::unordered_set<std::string> seen;

    {
        TermPtr root = hole(0);
        auto inf = infer_with_goal(root, goal);
        if (!inf) throw InternalError("bare hole failed to type");
        open.push({root, 1.0, seq++, std::move(inf->obligations)});
    }

    while (!open.empty()) {
        if (st.expansions >= budget.max_expansions) {
            st.budget_exhausted = true;
            return std::nullopt;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            st.timed_out = true;
            return std::nullopt;
        }
        Node cur = open.top();
        open.pop();
        ++st.expansions;

        // pick the hole with the most confident rule prediction
        auto hs = holes(cur.term);
        if (hs.empty()) throw InternalError("complete term in the open queue");
        size_t best = 0;
        double best_p = -1.0;
        RuleDistribution best_dist;
        for (size_t i = 0; i < hs.size(); ++i) {
            auto it = cur.obligations.find(hs[i].id);
            if (it == cur.obligations.end())
                throw InternalError("hole without an obligation");
            RuleDistribution d = est.classify(goal, hs[i].path, it->second);
            double p = d.max();
            if (p > best_p) {
                best_p = p;
                best = i;
                best_dist = d;
            }
        }
        const HoleLocation& target = hs[best];
        int nbinders = static_cast<int>(binder_names_at(cur.term, target.path).size());

        if (opts.trace) {
            *opts.trace << "{\"expansion\":" << st.expansions << ",\"priority\":" << cur.priority
                        << ",";
            trace_term(*opts.trace, "term", cur.term);
            *opts.trace << ",\"hole\":" << path_to_json(target.path) << ",\"pushes\":[";
        }

        bool first_push = true;
        for (const Candidate& c : candidates_at(cur.term, target.id)) {
            TermPtr next = apply_candidate(cur.term, target.id, c);
            if (opts.normal_only && has_forced_redex(next)) continue;
            auto inf = infer_with_goal(next, goal);
            if (!inf) continue;
            if (!has_holes(next)) {
                if (!verify(goal, next))
                    throw InternalError("synthesized proof failed verification");
                if (opts.trace) {
                    *opts.trace << "],";
                    trace_term(*opts.trace, "result", next);
                    *opts.trace << "}\n";
                }
                return next;
            }
            if (opts.memo && !seen.insert(alpha_canonical_key(next)).second) continue;
            double p = best_dist[candidate_rule(c)];
            if (c.is_var) p /= nbinders;  // uniform choice among binders in scope
            double prio = cur.priority * p;
            if (opts.trace) {
                if (!first_push) *opts.trace << ",";
                first_push = false;
                *opts.trace << "{";
                trace_term(*opts.trace, "fill", next);
                *opts.trace << ",\"priority\":" << prio << "}";
            }
            open.push({next, prio, seq++, std::move(inf->obligations)});
            ++st.pushed;
        }
        if (opts.trace) *opts.trace << "]}\n";
    }
    return std::nullopt;  // space exhausted below the goal
}

// --------------------------------------------------------------------------
// exhaustive enumeration
// --------------------------------------------------------------------------

namespace {

struct EnumMemo {
    std::map<std::pair<int, int>, std::vector<TermPtr>> cells;

    const std::vector<TermPtr>& terms(int size, int depth) {
        auto key = std::make_pair(size, depth);
        auto it = cells.find(key);
        if (it != cells.end()) return it->second;
        std::vector<TermPtr> out;
        if (size >= 1) build(size, depth, out);
        return cells.emplace(key, std::move(out)).first->second;
    }

    void build(int size, int depth, std::vector<TermPtr>& out) {
        if (size == 1) {
            for (int i = 0; i < depth; ++i) out.push_back(var("x" + std::to_string(i)));
            return;
        }
        std::string b0 = "x" + std::to_string(depth);
        std::string b1 = "x" + std::to_string(depth + 1);
        int rest = size - 1;
        // context order matches the candidate order used everywhere else
        for (const TermPtr& body : terms(rest, depth + 1)) out.push_back(lam(b0, body));
        for (int i = 1; i < rest; ++i)
            for (const TermPtr& f : terms(i, depth))
                for (const TermPtr& a : terms(rest - i, depth)) out.push_back(app(f, a));
        for (int i = 1; i < rest; ++i)
            for (const TermPtr& a : terms(i, depth))
                for (const TermPtr& b : terms(rest - i, depth)) out.push_back(pair(a, b));
        for (int i = 1; i < rest; ++i)
            for (const TermPtr& s : terms(i, depth))
                for (const TermPtr& body : terms(rest - i, depth + 2))
                    out.push_back(casepair(s, b0, b1, body));
        for (const TermPtr& a : terms(rest, depth)) out.push_back(left(a));
        for (const TermPtr& a : terms(rest, depth)) out.push_back(right(a));
        for (int i = 1; i <= rest - 2; ++i)
            for (int j = 1; j <= rest - i - 1; ++j)
                for (const TermPtr& s : terms(i, depth))
                    for (const TermPtr& lb : terms(j, depth + 1))
                        for (const TermPtr& rb : terms(rest - i - j, depth + 1))
                            out.push_back(casesum(s, b0, lb, b0, rb));
    }
};

}  // namespace

std::vector<TermPtr> enumerate_closed_terms(int max_size) {
    EnumMemo memo;
    std::vector<TermPtr> out;
    for (int s = 1; s <= max_size; ++s)
        for (const TermPtr& t : memo.terms(s, 0)) out.push_back(t);
    return out;
}

std::optional<TermPtr> exhaustive_prove(const PropPtr& goal, int max_size) {
    EnumMemo memo;
    for (int s = 1; s <= max_size; ++s) {
        std::optional<TermPtr> best;
        std::string best_text;
        for (const TermPtr& t : memo.terms(s, 0)) {
            if (!is_normal(t)) continue;
            if (!typecheck({}, t, goal)) continue;
            std::string text = print_term(t);
            if (!best || text < best_text) {
                best = t;
                best_text = text;
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

}  // namespace proofsynth
