#pragma once

// Independent reference implementations used only by tests. Deliberately
// written with different structure from the library: plain unmemoized
// enumeration, explicit environment bookkeeping, and a lockstep matcher for
// the sum eta rule instead of anti-substitution.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proofsynth/ast.hpp"
#include "proofsynth/sexpr.hpp"
#include "proofsynth/typing.hpp"

namespace oracle {

using namespace proofsynth;

// ---- enumeration -----------------------------------------------------------

// every closed term of exactly `size` with `depth` enclosing binders named
// v0..v<depth-1>; new binders continue the scheme
inline std::vector<TermPtr> enum_exact(int size, int depth) {
    std::vector<TermPtr> out;
    if (size < 1) return out;
    if (size == 1) {
        for (int i = 0; i < depth; ++i) out.push_back(var("v" + std::to_string(i)));
        return out;
    }
    int rest = size - 1;
    std::string b = "v" + std::to_string(depth);
    std::string b2 = "v" + std::to_string(depth + 1);
    for (auto& body : enum_exact(rest, depth + 1)) out.push_back(lam(b, body));
    for (int i = 1; i < rest; ++i) {
        for (auto& f : enum_exact(i, depth))
            for (auto& a : enum_exact(rest - i, depth)) out.push_back(app(f, a));
    }
    for (int i = 1; i < rest; ++i) {
        for (auto& a : enum_exact(i, depth))
            for (auto& c : enum_exact(rest - i, depth)) out.push_back(pair(a, c));
    }
    for (int i = 1; i < rest; ++i) {
        for (auto& s : enum_exact(i, depth))
            for (auto& body : enum_exact(rest - i, depth + 2))
                out.push_back(casepair(s, b, b2, body));
    }
    for (auto& a : enum_exact(rest, depth)) out.push_back(left(a));
    for (auto& a : enum_exact(rest, depth)) out.push_back(right(a));
    for (int i = 1; i + 2 <= rest; ++i) {
        for (int j = 1; i + j + 1 <= rest; ++j) {
            for (auto& s : enum_exact(i, depth))
                for (auto& lb : enum_exact(j, depth + 1))
                    for (auto& rb : enum_exact(rest - i - j, depth + 1))
                        out.push_back(casesum(s, b, lb, b, rb));
        }
    }
    return out;
}

inline std::vector<TermPtr> enum_upto(int max_size) {
    std::vector<TermPtr> out;
    for (int s = 1; s <= max_size; ++s)
        for (auto& t : enum_exact(s, 0)) out.push_back(t);
    return out;
}

// ---- normality -------------------------------------------------------------

// free occurrence check with an explicit shadow list
inline bool occurs_free(const TermPtr& t, const std::string& x,
                        std::vector<std::string> shadow = {}) {
    switch (t->kind) {
        case TermKind::Hole: return false;
        case TermKind::Var: {
            for (auto& s : shadow)
                if (s == x) return false;
            return t->name == x;
        }
        default: break;
    }
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        auto sh = shadow;
        for (auto& b : binders_for_child(*t, i)) sh.push_back(b);
        if (occurs_free(term_child(t, i), x, sh)) return true;
    }
    return false;
}

// lockstep match: n1 = [left x / z]N and n2 = [right y / z]N for some N with
// x, y not free in N. env pairs binders of the two sides positionally.
inline bool sum_eta_match(const TermPtr& n1, const TermPtr& n2, const std::string& x,
                          const std::string& y,
                          std::vector<std::pair<std::string, std::string>> env = {},
                          bool x_shadowed = false, bool y_shadowed = false) {
    // a z-position: left side is (left x), right side is (right y)
    if (!x_shadowed && !y_shadowed && n1->kind == TermKind::Left &&
        n1->a->kind == TermKind::Var && n1->a->name == x && n2->kind == TermKind::Right &&
        n2->a->kind == TermKind::Var && n2->a->name == y)
        return true;
    if (n1->kind != n2->kind) return false;
    switch (n1->kind) {
        case TermKind::Hole: return true;
        case TermKind::Var: {
            if (!x_shadowed && n1->name == x) return false;  // stray free x
            if (!y_shadowed && n2->name == y) return false;
            // positional binder match
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                if (it->first == n1->name || it->second == n2->name)
                    return it->first == n1->name && it->second == n2->name;
            }
            return n1->name == n2->name;
        }
        default: break;
    }
    for (int i = 0; i < term_child_count(n1->kind); ++i) {
        auto e = env;
        bool xs = x_shadowed, ys = y_shadowed;
        auto b1 = binders_for_child(*n1, i);
        auto b2 = binders_for_child(*n2, i);
        for (size_t j = 0; j < b1.size(); ++j) {
            e.emplace_back(b1[j], b2[j]);
            if (b1[j] == x) xs = true;
            if (b2[j] == y) ys = true;
        }
        if (!sum_eta_match(term_child(n1, i), term_child(n2, i), x, y, e, xs, ys)) return false;
    }
    return true;
}

// is there a redex rooted exactly here?
inline bool redex_here(const TermPtr& t) {
    // beta
    if (t->kind == TermKind::App && t->a->kind == TermKind::Abs) return true;
    if (t->kind == TermKind::CasePair && t->a->kind == TermKind::Pair) return true;
    if (t->kind == TermKind::CaseSum &&
        (t->a->kind == TermKind::Left || t->a->kind == TermKind::Right))
        return true;
    // eta: lam x (M x), x not free in M
    if (t->kind == TermKind::Abs && t->a->kind == TermKind::App &&
        t->a->b->kind == TermKind::Var && t->a->b->name == t->name &&
        !occurs_free(t->a->a, t->name))
        return true;
    // eta: (pi1 L, pi2 L)
    if (t->kind == TermKind::Pair && t->a->kind == TermKind::CasePair &&
        t->b->kind == TermKind::CasePair) {
        const TermPtr& p1 = t->a;
        const TermPtr& p2 = t->b;
        bool first_proj = p1->b->kind == TermKind::Var && p1->b->name == p1->name &&
                          p1->name != p1->name2;
        bool second_proj = p2->b->kind == TermKind::Var && p2->b->name == p2->name2;
        if (first_proj && second_proj && alpha_eq(p1->a, p2->a)) return true;
    }
    // eta: casesum join
    if (t->kind == TermKind::CaseSum && sum_eta_match(t->b, t->c, t->name, t->name2)) return true;
    return false;
}

inline bool is_normal_oracle(const TermPtr& t) {
    if (redex_here(t)) return false;
    for (int i = 0; i < term_child_count(t->kind); ++i)
        if (!is_normal_oracle(term_child(t, i))) return false;
    return true;
}

// ---- small corpus oracle ----------------------------------------------------

// canonical proposition text -> minimal proof size, by brute enumeration
inline std::map<std::string, int> small_corpus_oracle(int max_size) {
    std::map<std::string, int> out;
    for (int s = 1; s <= max_size; ++s) {
        for (auto& t : enum_exact(s, 0)) {
            if (!is_normal_oracle(t)) continue;
            auto inf = infer_principal(t);
            if (!inf) continue;
            std::string key = print_prop(canonical_rename(inf->principal));
            auto it = out.find(key);
            if (it == out.end()) out.emplace(key, s);  // sizes ascend, so first hit is minimal
        }
    }
    return out;
}

}  // namespace oracle
