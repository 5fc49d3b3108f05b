#include "proofsynth/ast.hpp"

#include <algorithm>
#include <map>

#include "proofsynth/errors.hpp"

namespace proofsynth {

// --------------------------------------------------------------------------
// propositions
// --------------------------------------------------------------------------

PropPtr pvar(std::string name) {
    auto p = std::make_shared<Prop>();
    p->kind = PropKind::Var;
    p->name = std::move(name);
    return p;
}

static PropPtr pbin(PropKind k, PropPtr l, PropPtr r) {
    auto p = std::make_shared<Prop>();
    p->kind = k;
    p->lhs = std::move(l);
    p->rhs = std::move(r);
    return p;
}

PropPtr pimp(PropPtr l, PropPtr r) { return pbin(PropKind::Imp, std::move(l), std::move(r)); }
PropPtr pprod(PropPtr l, PropPtr r) { return pbin(PropKind::Prod, std::move(l), std::move(r)); }
PropPtr psum(PropPtr l, PropPtr r) { return pbin(PropKind::Sum, std::move(l), std::move(r)); }

bool prop_eq(const PropPtr& a, const PropPtr& b) { return prop_compare(a, b) == 0; }

int prop_compare(const PropPtr& a, const PropPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (a->kind == PropKind::Var) return a->name.compare(b->name) < 0   ? -1
                                         : a->name.compare(b->name) > 0 ? 1
                                                                        : 0;
    if (int c = prop_compare(a->lhs, b->lhs)) return c;
    return prop_compare(a->rhs, b->rhs);
}

static void prop_vars_rec(const PropPtr& p, std::vector<std::string>& out) {
    if (p->kind == PropKind::Var) {
        if (std::find(out.begin(), out.end(), p->name) == out.end()) out.push_back(p->name);
        return;
    }
    prop_vars_rec(p->lhs, out);
    prop_vars_rec(p->rhs, out);
}

std::vector<std::string> prop_vars(const PropPtr& p) {
    std::vector<std::string> out;
    prop_vars_rec(p, out);
    return out;
}

std::string canonical_var_name(int k) {
    // a..z, aa, ab, ... (bijective base 26)
    std::string s;
    ++k;
    while (k > 0) {
        --k;
        s.push_back(static_cast<char>('a' + k % 26));
        k /= 26;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

static PropPtr rename_rec(const PropPtr& p, const std::map<std::string, std::string>& ren) {
    if (p->kind == PropKind::Var) return pvar(ren.at(p->name));
    return pbin(p->kind, rename_rec(p->lhs, ren), rename_rec(p->rhs, ren));
}

PropPtr canonical_rename(const PropPtr& p) {
    std::map<std::string, std::string> ren;
    int i = 0;
    for (const auto& v : prop_vars(p)) ren[v] = canonical_var_name(i++);
    return rename_rec(p, ren);
}

int prop_size(const PropPtr& p) {
    if (p->kind == PropKind::Var) return 1;
    return 1 + prop_size(p->lhs) + prop_size(p->rhs);
}

// --------------------------------------------------------------------------
// terms
// --------------------------------------------------------------------------

TermPtr hole(int id) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Hole;
    t->hole = id;
    return t;
}

TermPtr var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr lam(std::string binder, TermPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Abs;
    t->name = std::move(binder);
    t->a = std::move(body);
    return t;
}

TermPtr app(TermPtr fn, TermPtr arg) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::App;
    t->a = std::move(fn);
    t->b = std::move(arg);
    return t;
}

TermPtr pair(TermPtr fst, TermPtr snd) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Pair;
    t->a = std::move(fst);
    t->b = std::move(snd);
    return t;
}

TermPtr casepair(TermPtr scrut, std::string x, std::string y, TermPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::CasePair;
    t->name = std::move(x);
    t->name2 = std::move(y);
    t->a = std::move(scrut);
    t->b = std::move(body);
    return t;
}

TermPtr left(TermPtr payload) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Left;
    t->a = std::move(payload);
    return t;
}

TermPtr right(TermPtr payload) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Right;
    t->a = std::move(payload);
    return t;
}

TermPtr casesum(TermPtr scrut, std::string x, TermPtr lbody, std::string y, TermPtr rbody) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::CaseSum;
    t->name = std::move(x);
    t->name2 = std::move(y);
    t->a = std::move(scrut);
    t->b = std::move(lbody);
    t->c = std::move(rbody);
    return t;
}

int term_child_count(TermKind k) {
    switch (k) {
        case TermKind::Hole:
        case TermKind::Var: return 0;
        case TermKind::Abs:
        case TermKind::Left:
        case TermKind::Right: return 1;
        case TermKind::App:
        case TermKind::Pair:
        case TermKind::CasePair: return 2;
        case TermKind::CaseSum: return 3;
    }
    return 0;
}

TermPtr term_child(const TermPtr& t, int i) {
    switch (i) {
        case 0: return t->a;
        case 1: return t->b;
        case 2: return t->c;
        default: return nullptr;
    }
}

TermPtr with_child(const TermPtr& t, int i, TermPtr child) {
    auto n = std::make_shared<Term>(*t);
    switch (i) {
        case 0: n->a = std::move(child); break;
        case 1: n->b = std::move(child); break;
        case 2: n->c = std::move(child); break;
        default: throw InternalError("with_child: bad child index");
    }
    return n;
}

std::vector<std::string> binders_for_child(const Term& t, int i) {
    switch (t.kind) {
        case TermKind::Abs:
            return {t.name};
        case TermKind::CasePair:
            if (i == 1) return {t.name, t.name2};
            return {};
        case TermKind::CaseSum:
            if (i == 1) return {t.name};
            if (i == 2) return {t.name2};
            return {};
        default: return {};
    }
}

// --------------------------------------------------------------------------
// rules
// --------------------------------------------------------------------------

static const char* kRuleNames[kRuleCount] = {"Var",  "Abs",  "App",   "Pair",
                                             "CasePair", "Left", "Right", "CaseSum"};

const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(std::string_view s) {
    for (int i = 0; i < kRuleCount; ++i)
        if (s == kRuleNames[i]) return static_cast<Rule>(i);
    return std::nullopt;
}

Rule rule_of_term(TermKind k) {
    switch (k) {
        case TermKind::Var: return Rule::Var;
        case TermKind::Abs: return Rule::Abs;
        case TermKind::App: return Rule::App;
        case TermKind::Pair: return Rule::Pair;
        case TermKind::CasePair: return Rule::CasePair;
        case TermKind::Left: return Rule::Left;
        case TermKind::Right: return Rule::Right;
        case TermKind::CaseSum: return Rule::CaseSum;
        case TermKind::Hole: break;
    }
    throw InternalError("rule_of_term: hole has no rule");
}

// --------------------------------------------------------------------------
// contexts and paths
// --------------------------------------------------------------------------

int context_arity(TermKind k) { return term_child_count(k); }

const char* context_tag(TermKind k) {
    switch (k) {
        case TermKind::Abs: return "lam";
        case TermKind::App: return "app";
        case TermKind::Pair: return "pair";
        case TermKind::CasePair: return "casepair";
        case TermKind::Left: return "left";
        case TermKind::Right: return "right";
        case TermKind::CaseSum: return "casesum";
        default: throw InternalError("context_tag: not a context kind");
    }
}

std::optional<TermKind> context_kind_from_tag(std::string_view s) {
    for (TermKind k : context_kinds())
        if (s == context_tag(k)) return k;
    return std::nullopt;
}

const std::array<TermKind, 7>& context_kinds() {
    static const std::array<TermKind, 7> ks = {
        TermKind::Abs,  TermKind::App,   TermKind::Pair,   TermKind::CasePair,
        TermKind::Left, TermKind::Right, TermKind::CaseSum};
    return ks;
}

bool path_eq(const Path& a, const Path& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].ctx.kind != b[i].ctx.kind || a[i].child != b[i].child) return false;
    return true;
}

// --------------------------------------------------------------------------
// alpha-equivalence
// --------------------------------------------------------------------------

namespace {

// name -> binding level stack; rightmost binding of a name wins
struct AlphaEnv {
    std::vector<std::pair<std::string, int>> binds;
    int depth = 0;

    void push(const std::string& n) { binds.emplace_back(n, depth++); }
    void pop(int k) {
        binds.resize(binds.size() - k);
        depth -= k;
    }
    // level of the rightmost binding, or -1 when free
    int level(const std::string& n) const {
        for (auto it = binds.rbegin(); it != binds.rend(); ++it)
            if (it->first == n) return it->second;
        return -1;
    }
};

bool alpha_rec(const TermPtr& a, const TermPtr& b, AlphaEnv& ea, AlphaEnv& eb) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TermKind::Hole:
            return true;  // ids not significant
        case TermKind::Var: {
            int la = ea.level(a->name), lb = eb.level(b->name);
            if (la != lb) return false;
            return la >= 0 || a->name == b->name;  // both bound at same level, or same free name
        }
        case TermKind::Abs: {
            ea.push(a->name);
            eb.push(b->name);
            bool ok = alpha_rec(a->a, b->a, ea, eb);
            ea.pop(1);
            eb.pop(1);
            return ok;
        }
        case TermKind::App:
        case TermKind::Pair:
            return alpha_rec(a->a, b->a, ea, eb) && alpha_rec(a->b, b->b, ea, eb);
        case TermKind::CasePair: {
            if (!alpha_rec(a->a, b->a, ea, eb)) return false;
            ea.push(a->name);
            ea.push(a->name2);
            eb.push(b->name);
            eb.push(b->name2);
            bool ok = alpha_rec(a->b, b->b, ea, eb);
            ea.pop(2);
            eb.pop(2);
            return ok;
        }
        case TermKind::Left:
        case TermKind::Right:
            return alpha_rec(a->a, b->a, ea, eb);
        case TermKind::CaseSum: {
            if (!alpha_rec(a->a, b->a, ea, eb)) return false;
            ea.push(a->name);
            eb.push(b->name);
            bool ok = alpha_rec(a->b, b->b, ea, eb);
            ea.pop(1);
            eb.pop(1);
            if (!ok) return false;
            ea.push(a->name2);
            eb.push(b->name2);
            ok = alpha_rec(a->c, b->c, ea, eb);
            ea.pop(1);
            eb.pop(1);
            return ok;
        }
    }
    return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
    AlphaEnv ea, eb;
    return alpha_rec(a, b, ea, eb);
}

// --------------------------------------------------------------------------
// free variables / names
// --------------------------------------------------------------------------

static void free_vars_rec(const TermPtr& t, std::vector<std::string>& bound,
                          std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Hole: return;
        case TermKind::Var:
            if (std::find(bound.begin(), bound.end(), t->name) == bound.end())
                out.insert(t->name);
            return;
        default: break;
    }
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        auto bs = binders_for_child(*t, i);
        for (auto& b : bs) bound.push_back(b);
        free_vars_rec(term_child(t, i), bound, out);
        bound.resize(bound.size() - bs.size());
    }
}

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    free_vars_rec(t, bound, out);
    return out;
}

static void all_names_rec(const TermPtr& t, std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Hole: return;
        case TermKind::Var: out.insert(t->name); return;
        case TermKind::Abs: out.insert(t->name); break;
        case TermKind::CasePair:
        case TermKind::CaseSum:
            out.insert(t->name);
            out.insert(t->name2);
            break;
        default: break;
    }
    for (int i = 0; i < term_child_count(t->kind); ++i) all_names_rec(term_child(t, i), out);
}

std::set<std::string> all_names(const TermPtr& t) {
    std::set<std::string> out;
    all_names_rec(t, out);
    return out;
}

// --------------------------------------------------------------------------
// substitution
// --------------------------------------------------------------------------

namespace {

using SubstMap = std::vector<std::pair<std::string, TermPtr>>;

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string n = base;
    do {
        n += '\'';
    } while (avoid.count(n));
    return n;
}

// drop entries shadowed by binder b; returns the survivors
SubstMap without(const SubstMap& subs, const std::vector<std::string>& binders) {
    SubstMap out;
    for (auto& [x, n] : subs)
        if (std::find(binders.begin(), binders.end(), x) == binders.end()) out.emplace_back(x, n);
    return out;
}

TermPtr subst_rec(const TermPtr& m, const SubstMap& subs) {
    if (subs.empty()) return m;
    switch (m->kind) {
        case TermKind::Hole: return m;
        case TermKind::Var:
            // reverse scan: renames added for inner binders shadow outer entries
            for (auto it = subs.rbegin(); it != subs.rend(); ++it)
                if (m->name == it->first) return it->second;
            return m;
        default: break;
    }

    // rebuild the node lazily, handling binder renaming per child scope
    std::shared_ptr<Term> out;
    auto cloned = [&]() -> Term& {
        if (!out) out = std::make_shared<Term>(*m);
        return *out;
    };
    for (int i = 0; i < term_child_count(m->kind); ++i) {
        TermPtr child = term_child(m, i);
        auto binders = binders_for_child(*m, i);
        SubstMap live = without(subs, binders);
        if (live.empty()) continue;

        std::set<std::string> payload_fv;
        bool relevant = false;
        auto child_fv = free_vars(child);
        for (auto& [x, n] : live)
            if (child_fv.count(x)) {
                relevant = true;
                for (auto& v : free_vars(n)) payload_fv.insert(v);
            }
        if (!relevant) continue;

        std::set<std::string> avoid = payload_fv;
        for (auto& v : all_names(child)) avoid.insert(v);
        for (auto& [x, n] : live) avoid.insert(x);
        SubstMap live2 = live;
        std::vector<std::string> nb = binders;
        for (size_t j = 0; j < nb.size(); ++j) {
            if (payload_fv.count(nb[j])) {
                std::string fresh = fresh_name(nb[j], avoid);
                avoid.insert(fresh);
                live2.emplace_back(nb[j], var(fresh));
                nb[j] = fresh;
            }
        }
        TermPtr nc = subst_rec(child, live2);
        if (nc == child && nb == binders) continue;
        // write renamed binders back into the node
        if (nb != binders) {
            if (m->kind == TermKind::Abs) {
                cloned().name = nb[0];
            } else if (m->kind == TermKind::CasePair && i == 1) {
                cloned().name = nb[0];
                cloned().name2 = nb[1];
            } else if (m->kind == TermKind::CaseSum && i == 1) {
                cloned().name = nb[0];
            } else if (m->kind == TermKind::CaseSum && i == 2) {
                cloned().name2 = nb[0];
            }
        }
        switch (i) {
            case 0: cloned().a = nc; break;
            case 1: cloned().b = nc; break;
            case 2: cloned().c = nc; break;
        }
    }
    return out ? TermPtr(out) : m;
}

}  // namespace

TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& n) {
    return subst_rec(m, {{x, n}});
}

TermPtr substitute_parallel(const TermPtr& m,
                            const std::vector<std::pair<std::string, TermPtr>>& subs) {
    return subst_rec(m, subs);
}

// --------------------------------------------------------------------------
// sizes and holes
// --------------------------------------------------------------------------

int term_size(const TermPtr& t) {
    if (t->kind == TermKind::Hole) return 0;
    int n = 1;
    for (int i = 0; i < term_child_count(t->kind); ++i) n += term_size(term_child(t, i));
    return n;
}

int num_holes(const TermPtr& t) {
    if (t->kind == TermKind::Hole) return 1;
    int n = 0;
    for (int i = 0; i < term_child_count(t->kind); ++i) n += num_holes(term_child(t, i));
    return n;
}

bool has_holes(const TermPtr& t) {
    if (t->kind == TermKind::Hole) return true;
    for (int i = 0; i < term_child_count(t->kind); ++i)
        if (has_holes(term_child(t, i))) return true;
    return false;
}

int max_hole_id(const TermPtr& t) {
    if (t->kind == TermKind::Hole) return t->hole;
    int m = -1;
    for (int i = 0; i < term_child_count(t->kind); ++i)
        m = std::max(m, max_hole_id(term_child(t, i)));
    return m;
}

static OneDepthContext context_of(const Term& t) {
    return OneDepthContext{t.kind, t.name, t.name2};
}

static void holes_rec(const TermPtr& t, Path& path, std::vector<HoleLocation>& out) {
    if (t->kind == TermKind::Hole) {
        out.push_back({t->hole, path});
        return;
    }
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        path.push_back({context_of(*t), i});
        holes_rec(term_child(t, i), path, out);
        path.pop_back();
    }
}

std::vector<HoleLocation> holes(const TermPtr& t) {
    std::vector<HoleLocation> out;
    Path path;
    holes_rec(t, path, out);
    return out;
}

namespace {

// returns nullptr when h is absent below t
TermPtr fill_rec(const TermPtr& t, int h, const TermPtr& replacement) {
    if (t->kind == TermKind::Hole) return t->hole == h ? replacement : nullptr;
    for (int i = 0; i < term_child_count(t->kind); ++i) {
        if (TermPtr nc = fill_rec(term_child(t, i), h, replacement)) return with_child(t, i, nc);
    }
    return nullptr;
}

TermPtr context_instance(const OneDepthContext& c, int first_fresh) {
    switch (c.kind) {
        case TermKind::Abs: return lam(c.binder, hole(first_fresh));
        case TermKind::App: return app(hole(first_fresh), hole(first_fresh + 1));
        case TermKind::Pair: return pair(hole(first_fresh), hole(first_fresh + 1));
        case TermKind::CasePair:
            return casepair(hole(first_fresh), c.binder, c.binder2, hole(first_fresh + 1));
        case TermKind::Left: return left(hole(first_fresh));
        case TermKind::Right: return right(hole(first_fresh));
        case TermKind::CaseSum:
            return casesum(hole(first_fresh), c.binder, hole(first_fresh + 1), c.binder2,
                           hole(first_fresh + 2));
        default: throw InternalError("context_instance: not a context kind");
    }
}

}  // namespace

TermPtr fill(const TermPtr& m, int h, const std::string& var_name) {
    TermPtr r = fill_rec(m, h, var(var_name));
    if (!r) throw NoSuchHole("fill: no hole " + std::to_string(h));
    return r;
}

TermPtr fill(const TermPtr& m, int h, const OneDepthContext& c) {
    TermPtr r = fill_rec(m, h, context_instance(c, max_hole_id(m) + 1));
    if (!r) throw NoSuchHole("fill: no hole " + std::to_string(h));
    return r;
}

OneDepthContext make_context_at(const TermPtr& m, int h, TermKind kind) {
    for (const auto& loc : holes(m)) {
        if (loc.id != h) continue;
        int k = static_cast<int>(binder_names_at(m, loc.path).size());
        OneDepthContext c{kind, "", ""};
        switch (kind) {
            case TermKind::Abs: c.binder = "x" + std::to_string(k); break;
            case TermKind::CasePair:
                c.binder = "x" + std::to_string(k);
                c.binder2 = "x" + std::to_string(k + 1);
                break;
            case TermKind::CaseSum:
                c.binder = "x" + std::to_string(k);
                c.binder2 = "x" + std::to_string(k);
                break;
            default: break;
        }
        return c;
    }
    throw NoSuchHole("make_context_at: no hole " + std::to_string(h));
}

std::vector<std::string> binder_names_at(const TermPtr& m, const Path& rho) {
    std::vector<std::string> out;
    TermPtr cur = m;
    for (const auto& step : rho) {
        if (cur->kind == TermKind::Hole || cur->kind == TermKind::Var ||
            cur->kind != step.ctx.kind || step.child < 0 ||
            step.child >= term_child_count(cur->kind))
            throw BadPath("path does not address a node");
        for (auto& b : binders_for_child(*cur, step.child)) out.push_back(b);
        cur = term_child(cur, step.child);
    }
    return out;
}

std::optional<TermPtr> subterm_at(const TermPtr& m, const Path& rho) {
    TermPtr cur = m;
    for (const auto& step : rho) {
        if (step.child < 0 || step.child >= term_child_count(cur->kind) ||
            cur->kind != step.ctx.kind)
            return std::nullopt;
        cur = term_child(cur, step.child);
    }
    return cur;
}

// --------------------------------------------------------------------------
// canonical key
// --------------------------------------------------------------------------

namespace {

void canon_rec(const TermPtr& t, std::vector<std::pair<std::string, std::string>>& env, int depth,
               std::string& out) {
    auto lookup = [&](const std::string& n) -> std::string {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == n) return it->second;
        return "!" + n;  // free variable, kept distinguishable from binder names
    };
    switch (t->kind) {
        case TermKind::Hole: out += "(hole _)"; return;
        case TermKind::Var: out += "(var " + lookup(t->name) + ")"; return;
        case TermKind::Abs: {
            std::string b = "x" + std::to_string(depth);
            out += "(lam " + b + " ";
            env.emplace_back(t->name, b);
            canon_rec(t->a, env, depth + 1, out);
            env.pop_back();
            out += ")";
            return;
        }
        case TermKind::App:
        case TermKind::Pair: {
            out += t->kind == TermKind::App ? "(app " : "(pair ";
            canon_rec(t->a, env, depth, out);
            out += " ";
            canon_rec(t->b, env, depth, out);
            out += ")";
            return;
        }
        case TermKind::CasePair: {
            std::string b1 = "x" + std::to_string(depth), b2 = "x" + std::to_string(depth + 1);
            out += "(casepair ";
            canon_rec(t->a, env, depth, out);
            out += " " + b1 + " " + b2 + " ";
            env.emplace_back(t->name, b1);
            env.emplace_back(t->name2, b2);
            canon_rec(t->b, env, depth + 2, out);
            env.pop_back();
            env.pop_back();
            out += ")";
            return;
        }
        case TermKind::Left:
        case TermKind::Right: {
            out += t->kind == TermKind::Left ? "(left " : "(right ";
            canon_rec(t->a, env, depth, out);
            out += ")";
            return;
        }
        case TermKind::CaseSum: {
            std::string b = "x" + std::to_string(depth);
            out += "(casesum ";
            canon_rec(t->a, env, depth, out);
            out += " " + b + " ";
            env.emplace_back(t->name, b);
            canon_rec(t->b, env, depth + 1, out);
            env.pop_back();
            out += " " + b + " ";
            env.emplace_back(t->name2, b);
            canon_rec(t->c, env, depth + 1, out);
            env.pop_back();
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string alpha_canonical_key(const TermPtr& t) {
    std::string out;
    std::vector<std::pair<std::string, std::string>> env;
    canon_rec(t, env, 0, out);
    return out;
}

}  // namespace proofsynth
