#include "proofsynth/typing.hpp"

#include <unordered_map>

#include "proofsynth/errors.hpp"

namespace proofsynth {

namespace {

// --------------------------------------------------------------------------
// unification arena. Types during inference are arena indices; metavariables
// get bound destructively (no backtracking is ever needed: a failed unify
// fails the whole inference).
// --------------------------------------------------------------------------

struct Arena {
    enum K { Rigid, Meta, Imp, Prod, Sum };
    struct N {
        K k;
        int a = -1, b = -1;  // children for Imp/Prod/Sum
        int bound = -1;      // Meta: index this meta was bound to, -1 if free
        std::string name;    // Rigid
    };
    std::vector<N> ns;

    int rigid(const std::string& s) {
        ns.push_back({Rigid, -1, -1, -1, s});
        return static_cast<int>(ns.size()) - 1;
    }
    int meta() {
        ns.push_back({Meta, -1, -1, -1, {}});
        return static_cast<int>(ns.size()) - 1;
    }
    int bin(K k, int a, int b) {
        ns.push_back({k, a, b, -1, {}});
        return static_cast<int>(ns.size()) - 1;
    }
    int from_prop(const PropPtr& p) {
        switch (p->kind) {
            case PropKind::Var: return rigid(p->name);
            case PropKind::Imp: return bin(Imp, from_prop(p->lhs), from_prop(p->rhs));
            case PropKind::Prod: return bin(Prod, from_prop(p->lhs), from_prop(p->rhs));
            case PropKind::Sum: return bin(Sum, from_prop(p->lhs), from_prop(p->rhs));
        }
        return -1;
    }

    int find(int t) {
        while (ns[t].k == Meta && ns[t].bound != -1) t = ns[t].bound;
        return t;
    }

    bool occurs(int m, int t) {
        t = find(t);
        if (t == m) return true;
        const N& n = ns[t];
        if (n.k == Imp || n.k == Prod || n.k == Sum) return occurs(m, n.a) || occurs(m, n.b);
        return false;
    }

    bool unify(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return true;
        if (ns[x].k == Meta) {
            if (occurs(x, y)) return false;
            ns[x].bound = y;
            return true;
        }
        if (ns[y].k == Meta) {
            if (occurs(y, x)) return false;
            ns[y].bound = x;
            return true;
        }
        if (ns[x].k != ns[y].k) return false;
        if (ns[x].k == Rigid) return ns[x].name == ns[y].name;
        return unify(ns[x].a, ns[y].a) && unify(ns[x].b, ns[y].b);
    }
};

// renders arena types back to Props; unbound metas become _0, _1, ... in the
// order this renderer first meets them, shared across one Render instance
struct Render {
    Arena& ar;
    std::unordered_map<int, std::string> meta_names;
    int next = 0;

    PropPtr operator()(int t) {
        t = ar.find(t);
        const Arena::N& n = ar.ns[t];
        switch (n.k) {
            case Arena::Rigid: return pvar(n.name);
            case Arena::Meta: {
                auto it = meta_names.find(t);
                if (it == meta_names.end())
                    it = meta_names.emplace(t, "_" + std::to_string(next++)).first;
                return pvar(it->second);
            }
            case Arena::Imp:
            case Arena::Prod:
            case Arena::Sum: {
                // sequence the recursion explicitly: argument evaluation order
                // is unspecified and meta naming must follow preorder
                PropPtr l = (*this)(n.a);
                PropPtr r = (*this)(n.b);
                return n.k == Arena::Imp ? pimp(l, r) : n.k == Arena::Prod ? pprod(l, r)
                                                                           : psum(l, r);
            }
        }
        return nullptr;
    }
};

// per-position record of the walked term; holds enough to rebuild an
// annotated tree or look up binder types along a path
struct Shadow {
    const Term* node;
    int type = -1;
    int binder_ty[2] = {-1, -1};
    int kids[3] = {-1, -1, -1};
};

struct UnifyFail {};

struct Walker {
    Arena ar;
    std::vector<Shadow> shadow;
    std::map<int, int> hole_ty;  // hole id -> type index

    using Env = std::vector<std::pair<std::string, int>>;

    int lookup(const Env& env, const std::string& n) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == n) return it->second;
        return -1;
    }

    // returns shadow index
    int go(const TermPtr& t, Env& env) {
        int idx = static_cast<int>(shadow.size());
        shadow.push_back({t.get()});
        int ty;
        switch (t->kind) {
            case TermKind::Hole: {
                ty = ar.meta();
                hole_ty[t->hole] = ty;
                break;
            }
            case TermKind::Var: {
                ty = lookup(env, t->name);
                if (ty < 0) throw UnifyFail{};  // unbound variable: no typing
                break;
            }
            case TermKind::Abs: {
                int a = ar.meta();
                shadow[idx].binder_ty[0] = a;
                env.emplace_back(t->name, a);
                int body = go(t->a, env);
                env.pop_back();
                shadow[idx].kids[0] = body;
                ty = ar.bin(Arena::Imp, a, shadow[body].type);
                break;
            }
            case TermKind::App: {
                int f = go(t->a, env);
                int u = go(t->b, env);
                shadow[idx].kids[0] = f;
                shadow[idx].kids[1] = u;
                int r = ar.meta();
                if (!ar.unify(shadow[f].type, ar.bin(Arena::Imp, shadow[u].type, r)))
                    throw UnifyFail{};
                ty = r;
                break;
            }
            case TermKind::Pair: {
                int a = go(t->a, env);
                int b = go(t->b, env);
                shadow[idx].kids[0] = a;
                shadow[idx].kids[1] = b;
                ty = ar.bin(Arena::Prod, shadow[a].type, shadow[b].type);
                break;
            }
            case TermKind::CasePair: {
                int s = go(t->a, env);
                shadow[idx].kids[0] = s;
                int a = ar.meta(), b = ar.meta();
                if (!ar.unify(shadow[s].type, ar.bin(Arena::Prod, a, b))) throw UnifyFail{};
                shadow[idx].binder_ty[0] = a;
                shadow[idx].binder_ty[1] = b;
                env.emplace_back(t->name, a);
                env.emplace_back(t->name2, b);
                int body = go(t->b, env);
                env.pop_back();
                env.pop_back();
                shadow[idx].kids[1] = body;
                ty = shadow[body].type;
                break;
            }
            case TermKind::Left: {
                int a = go(t->a, env);
                shadow[idx].kids[0] = a;
                ty = ar.bin(Arena::Sum, shadow[a].type, ar.meta());
                break;
            }
            case TermKind::Right: {
                int a = go(t->a, env);
                shadow[idx].kids[0] = a;
                ty = ar.bin(Arena::Sum, ar.meta(), shadow[a].type);
                break;
            }
            case TermKind::CaseSum: {
                int s = go(t->a, env);
                shadow[idx].kids[0] = s;
                int a = ar.meta(), b = ar.meta();
                if (!ar.unify(shadow[s].type, ar.bin(Arena::Sum, a, b))) throw UnifyFail{};
                shadow[idx].binder_ty[0] = a;
                shadow[idx].binder_ty[1] = b;
                env.emplace_back(t->name, a);
                int lb = go(t->b, env);
                env.pop_back();
                env.emplace_back(t->name2, b);
                int rb = go(t->c, env);
                env.pop_back();
                shadow[idx].kids[1] = lb;
                shadow[idx].kids[2] = rb;
                if (!ar.unify(shadow[lb].type, shadow[rb].type)) throw UnifyFail{};
                ty = shadow[lb].type;
                break;
            }
            default: throw InternalError("walker: unknown term kind");
        }
        shadow[idx].type = ty;
        return idx;
    }
};

// full inference run; ok=false encodes UNIFY_FAIL (including unbound vars)
struct Inference {
    bool ok = false;
    Walker w;
    int root = -1;  // shadow index 0 when ok
};

Inference infer_raw(const TermPtr& m, const TypingContext& ctx) {
    Inference inf;
    Walker::Env env;
    for (const auto& b : ctx) env.emplace_back(b.name, inf.w.ar.from_prop(b.type));
    try {
        inf.root = inf.w.go(m, env);
        inf.ok = true;
    } catch (const UnifyFail&) {
        inf.ok = false;
    }
    return inf;
}

PrincipalTyping render_result(Inference& inf) {
    Render r{inf.w.ar};
    PrincipalTyping out;
    out.principal = r(inf.w.shadow[inf.root].type);
    for (auto& [id, ty] : inf.w.hole_ty) out.obligations[id] = r(ty);
    return out;
}

}  // namespace

bool typecheck(const TypingContext& ctx, const TermPtr& m, const PropPtr& p) {
    Inference inf = infer_raw(m, ctx);
    if (!inf.ok) return false;
    return inf.w.ar.unify(inf.w.shadow[inf.root].type, inf.w.ar.from_prop(p));
}

std::optional<PrincipalTyping> infer_principal(const TermPtr& m) {
    Inference inf = infer_raw(m, {});
    if (!inf.ok) return std::nullopt;
    return render_result(inf);
}

std::optional<PrincipalTyping> infer_with_goal(const TermPtr& m, const PropPtr& goal) {
    Inference inf = infer_raw(m, {});
    if (!inf.ok) return std::nullopt;
    if (!inf.w.ar.unify(inf.w.shadow[inf.root].type, inf.w.ar.from_prop(goal)))
        return std::nullopt;
    return render_result(inf);
}

namespace {

TypedTermPtr annotate_rec(const TermPtr& t, const Walker& w, int idx, Render& r) {
    auto out = std::make_shared<TypedTerm>();
    out->node = t;
    out->type = r(w.shadow[idx].type);
    for (int i = 0; i < term_child_count(t->kind); ++i)
        out->children.push_back(annotate_rec(term_child(t, i), w, w.shadow[idx].kids[i], r));
    return std::const_pointer_cast<const TypedTerm>(out);
}

}  // namespace

TypedTermPtr annotate(const TermPtr& m, const PropPtr& p) {
    Inference inf = infer_raw(m, {});
    if (!inf.ok || !inf.w.ar.unify(inf.w.shadow[inf.root].type, inf.w.ar.from_prop(p)))
        throw IllTyped("annotate: term does not prove the proposition");
    Render r{inf.w.ar};
    return annotate_rec(m, inf.w, inf.root, r);
}

const TypedTerm* typed_at(const TypedTermPtr& t, const Path& rho) {
    const TypedTerm* cur = t.get();
    for (const auto& step : rho) {
        if (cur->node->kind != step.ctx.kind || step.child < 0 ||
            static_cast<size_t>(step.child) >= cur->children.size())
            throw BadPath("path does not address a node");
        cur = cur->children[step.child].get();
    }
    return cur;
}

Rule rule_at(const TypedTermPtr& t, const Path& rho) {
    const TypedTerm* n = typed_at(t, rho);
    if (n->node->kind == TermKind::Hole) throw HoleAtPath("rule_at: hole at path");
    return rule_of_term(n->node->kind);
}

TypingContext bound_vars_at(const TermPtr& m, const Path& rho) {
    // validate the path first so BadPath wins over IllTyped
    binder_names_at(m, rho);

    Inference inf = infer_raw(m, {});
    if (!inf.ok) throw IllTyped("bound_vars_at: term has no typing");
    Render r{inf.w.ar};
    TypingContext out;
    int idx = inf.root;
    for (const auto& step : rho) {
        const Shadow& s = inf.w.shadow[idx];
        const Term* node = s.node;
        auto names = binders_for_child(*node, step.child);
        if (names.size() >= 1) {
            // which binder slots feed this child scope
            if (node->kind == TermKind::Abs || node->kind == TermKind::CasePair) {
                out.push_back({names[0], r(s.binder_ty[0])});
                if (names.size() == 2) out.push_back({names[1], r(s.binder_ty[1])});
            } else if (node->kind == TermKind::CaseSum) {
                out.push_back({names[0], r(s.binder_ty[step.child == 1 ? 0 : 1])});
            }
        }
        idx = s.kids[step.child];
    }
    return out;
}

}  // namespace proofsynth
