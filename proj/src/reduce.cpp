#include "proofsynth/reduce.hpp"

#include "proofsynth/errors.hpp"

namespace proofsynth {

namespace {

// ---- beta ----------------------------------------------------------------

std::optional<TermPtr> beta_contract(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::App:
            if (t->a->kind == TermKind::Abs)
                return substitute(t->a->a, t->a->name, t->b);
            break;
        case TermKind::CasePair:
            if (t->a->kind == TermKind::Pair)
                return substitute_parallel(t->b, {{t->name, t->a->a}, {t->name2, t->a->b}});
            break;
        case TermKind::CaseSum:
            if (t->a->kind == TermKind::Left) return substitute(t->b, t->name, t->a->a);
            if (t->a->kind == TermKind::Right) return substitute(t->c, t->name2, t->a->a);
            break;
        default: break;
    }
    return std::nullopt;
}

// does the node match a beta pattern at all (payloads/bodies may be holes)
bool beta_pattern(const Term& t) {
    switch (t.kind) {
        case TermKind::App: return t.a->kind == TermKind::Abs;
        case TermKind::CasePair: return t.a->kind == TermKind::Pair;
        case TermKind::CaseSum:
            return t.a->kind == TermKind::Left || t.a->kind == TermKind::Right;
        default: return false;
    }
}

// ---- eta -----------------------------------------------------------------

// lam x (M x) with x not free in M
bool eta_fun_pattern(const TermPtr& t, TermPtr* out) {
    if (t->kind != TermKind::Abs) return false;
    const TermPtr& body = t->a;
    if (body->kind != TermKind::App) return false;
    if (body->b->kind != TermKind::Var || body->b->name != t->name) return false;
    if (free_vars(body->a).count(t->name)) return false;
    if (out) *out = body->a;
    return true;
}

// casepair L x y (var x), i.e. a first projection; requires x != y since the
// rightmost binding wins when the binders collide
bool is_first_proj(const TermPtr& t, TermPtr* scrut) {
    if (t->kind != TermKind::CasePair) return false;
    if (t->b->kind != TermKind::Var || t->b->name != t->name || t->name == t->name2) return false;
    if (scrut) *scrut = t->a;
    return true;
}

// casepair L x y (var y), a second projection; fine when x == y too
bool is_second_proj(const TermPtr& t, TermPtr* scrut) {
    if (t->kind != TermKind::CasePair) return false;
    if (t->b->kind != TermKind::Var || t->b->name != t->name2) return false;
    if (scrut) *scrut = t->a;
    return true;
}

bool eta_pair_pattern(const TermPtr& t, TermPtr* s1, TermPtr* s2) {
    if (t->kind != TermKind::Pair) return false;
    return is_first_proj(t->a, s1) && is_second_proj(t->b, s2);
}

// replace every free-position (side (var x)) in t by (var z); z must not
// occur anywhere in t (free or as a binder) or it could be captured
TermPtr anti_subst(const TermPtr& t, TermKind side, const std::string& x, const std::string& z) {
    if (t->kind == side && t->a->kind == TermKind::Var && t->a->name == x) return var(z);
    if (t->kind == TermKind::Hole || t->kind == TermKind::Var) return t;
    TermPtr out = t;
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        auto binders = binders_for_child(*t, i);
        bool shadowed = false;
        for (auto& b : binders)
            if (b == x) shadowed = true;
        if (shadowed) continue;
        TermPtr nc = anti_subst(term_child(t, i), side, x, z);
        if (nc != term_child(t, i)) out = with_child(out, i, nc);
    }
    return out;
}

std::string fresh_eta_var(const TermPtr& a, const TermPtr& b) {
    std::set<std::string> avoid = all_names(a);
    for (auto& n : all_names(b)) avoid.insert(n);
    std::string z = "z";
    while (avoid.count(z)) z += '\'';
    return z;
}

// casesum M x N1 y N2 where N1 = [left x / z]N, N2 = [right y / z]N and
// x, y do not occur free in N. *out gets [M/z]N when it fires.
bool eta_sum_pattern(const TermPtr& t, TermPtr* out) {
    if (t->kind != TermKind::CaseSum) return false;
    std::string z = fresh_eta_var(t->b, t->c);
    TermPtr n1 = anti_subst(t->b, TermKind::Left, t->name, z);
    if (free_vars(n1).count(t->name)) return false;
    TermPtr n2 = anti_subst(t->c, TermKind::Right, t->name2, z);
    if (free_vars(n2).count(t->name2)) return false;
    if (!alpha_eq(n1, n2)) return false;
    if (out) *out = substitute(n1, z, t->a);
    return true;
}

std::optional<TermPtr> eta_contract(const TermPtr& t) {
    TermPtr out;
    if (eta_fun_pattern(t, &out)) return out;
    TermPtr s1, s2;
    if (eta_pair_pattern(t, &s1, &s2) && alpha_eq(s1, s2)) return s1;
    if (eta_sum_pattern(t, &out)) return out;
    return std::nullopt;
}

// ---- traversal -----------------------------------------------------------

template <class F>
std::optional<TermPtr> step_rec(const TermPtr& t, F&& contract) {
    if (auto r = contract(t)) return r;
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        if (auto r = step_rec(term_child(t, i), contract)) return with_child(t, i, *r);
    }
    return std::nullopt;
}

}  // namespace

std::optional<TermPtr> beta_step(const TermPtr& t) { return step_rec(t, beta_contract); }

std::optional<TermPtr> eta_step(const TermPtr& t) { return step_rec(t, eta_contract); }

bool is_normal(const TermPtr& t) { return !beta_step(t) && !eta_step(t); }

TermPtr normalize(const TermPtr& t, int max_steps) {
    TermPtr cur = t;
    for (int i = 0; i < max_steps; ++i) {
        if (auto r = beta_step(cur)) {
            cur = *r;
        } else if (auto r2 = eta_step(cur)) {
            cur = *r2;
        } else {
            return cur;
        }
    }
    throw InternalError("normalize: step budget exceeded");
}

namespace {

bool forced_at(const TermPtr& t) {
    if (beta_pattern(*t)) return true;

    // eta redexes are forced only once their side conditions can no longer be
    // broken by later fills
    if (t->kind == TermKind::Abs && t->a->kind == TermKind::App &&
        t->a->b->kind == TermKind::Var && t->a->b->name == t->name) {
        if (!has_holes(t->a->a) && !free_vars(t->a->a).count(t->name)) return true;
    }
    TermPtr s1, s2;
    if (eta_pair_pattern(t, &s1, &s2)) {
        if (!has_holes(s1) && !has_holes(s2) && alpha_eq(s1, s2)) return true;
    }
    if (t->kind == TermKind::CaseSum && !has_holes(t->b) && !has_holes(t->c)) {
        if (eta_sum_pattern(t, nullptr)) return true;
    }
    return false;
}

}  // namespace

bool has_forced_redex(const TermPtr& t) {
    if (forced_at(t)) return true;
    for (int i = 0; i < term_child_count(t->kind); ++i)
        if (has_forced_redex(term_child(t, i))) return true;
    return false;
}

}  // namespace proofsynth
