#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace proofsynth {

// ---------------------------------------------------------------------------
// Propositions: a | P -> Q | P * Q | P + Q
// ---------------------------------------------------------------------------

enum class PropKind { Var, Imp, Prod, Sum };

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
    PropKind kind;
    std::string name;  // Var only
    PropPtr lhs, rhs;  // binary connectives only
};

PropPtr pvar(std::string name);
PropPtr pimp(PropPtr l, PropPtr r);
PropPtr pprod(PropPtr l, PropPtr r);
PropPtr psum(PropPtr l, PropPtr r);

bool prop_eq(const PropPtr& a, const PropPtr& b);
// total order, for use as a map key; -1/0/1
int prop_compare(const PropPtr& a, const PropPtr& b);
// variable names in first-occurrence (preorder) order, no duplicates
std::vector<std::string> prop_vars(const PropPtr& p);
// rename variables to a, b, ..., z, aa, ab, ... by first occurrence
PropPtr canonical_rename(const PropPtr& p);
// the k-th canonical variable name: 0 -> "a", 25 -> "z", 26 -> "aa"
std::string canonical_var_name(int k);
int prop_size(const PropPtr& p);  // node count

// ---------------------------------------------------------------------------
// Proof terms: holes, variables and the eight constructors
// ---------------------------------------------------------------------------

enum class TermKind { Hole, Var, Abs, App, Pair, CasePair, Left, Right, CaseSum };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Child slots by kind (this ordering is the child index used in paths):
//   Abs      a=body                                   (binder: name)
//   App      a=function, b=argument
//   Pair     a=first, b=second
//   CasePair a=scrutinee, b=body                      (binders: name, name2)
//   Left     a=payload
//   Right    a=payload
//   CaseSum  a=scrutinee, b=left body, c=right body   (binders: name, name2)
struct Term {
    TermKind kind;
    int hole = -1;      // Hole only
    std::string name;   // Var name; binder
    std::string name2;  // second binder
    TermPtr a, b, c;
};

TermPtr hole(int id);
TermPtr var(std::string name);
TermPtr lam(std::string binder, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr pair(TermPtr fst, TermPtr snd);
TermPtr casepair(TermPtr scrut, std::string x, std::string y, TermPtr body);
TermPtr left(TermPtr payload);
TermPtr right(TermPtr payload);
TermPtr casesum(TermPtr scrut, std::string x, TermPtr lbody, std::string y, TermPtr rbody);

int term_child_count(TermKind k);
TermPtr term_child(const TermPtr& t, int i);
TermPtr with_child(const TermPtr& t, int i, TermPtr child);
// binder names a child scope gains when descending into child i (0, 1 or 2 names)
std::vector<std::string> binders_for_child(const Term& t, int i);

// ---------------------------------------------------------------------------
// Inference rules (one per non-hole term constructor)
// ---------------------------------------------------------------------------

enum class Rule { Var = 0, Abs, App, Pair, CasePair, Left, Right, CaseSum };
constexpr int kRuleCount = 8;

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view s);
Rule rule_of_term(TermKind k);  // k must not be Hole

// ---------------------------------------------------------------------------
// One-depth contexts and paths
// ---------------------------------------------------------------------------

// A term constructor with every child slot replaced by a hole. Var/Hole are
// not contexts; the seven constructor kinds are.
struct OneDepthContext {
    TermKind kind;
    std::string binder, binder2;
};

int context_arity(TermKind k);
const char* context_tag(TermKind k);  // "lam", "app", ... as in the text formats
std::optional<TermKind> context_kind_from_tag(std::string_view s);
// all seven context kinds, in the fixed candidate order used everywhere
const std::array<TermKind, 7>& context_kinds();

struct PathStep {
    OneDepthContext ctx;
    int child;
};
// Root-to-node sequence of (enclosing context, child index). Binder names in
// the steps are informational; serialized paths carry only (tag, index).
using Path = std::vector<PathStep>;

bool path_eq(const Path& a, const Path& b);  // compares (kind, child) only

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

// alpha-equivalence; hole identifiers are ignored, binder names are not
// significant
bool alpha_eq(const TermPtr& a, const TermPtr& b);
std::set<std::string> free_vars(const TermPtr& t);
// every variable name that occurs anywhere (free, bound or as a binder)
std::set<std::string> all_names(const TermPtr& t);
// capture-avoiding [n/x]m; binders are renamed (trailing primes) when needed
TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& n);
// simultaneous capture-avoiding substitution
TermPtr substitute_parallel(const TermPtr& m,
                            const std::vector<std::pair<std::string, TermPtr>>& subs);

int term_size(const TermPtr& t);  // non-hole nodes; holes count zero
int num_holes(const TermPtr& t);
bool has_holes(const TermPtr& t);
int max_hole_id(const TermPtr& t);  // -1 when hole-free

struct HoleLocation {
    int id;
    Path path;
};
// all holes with their paths, in preorder (leftmost first)
std::vector<HoleLocation> holes(const TermPtr& t);

// replace hole h by a variable reference
TermPtr fill(const TermPtr& m, int h, const std::string& var_name);
// replace hole h by context c whose child slots become fresh holes numbered
// max_hole_id(m)+1, +2, ... in child order
TermPtr fill(const TermPtr& m, int h, const OneDepthContext& c);

// a context of the given kind targeted at hole h, binders named by the
// deterministic scheme: x<k> where k = number of binders in scope at h
// (CasePair's second binder gets x<k+1>; CaseSum's two branch binders both
// get x<k> since their scopes are disjoint)
OneDepthContext make_context_at(const TermPtr& m, int h, TermKind kind);

// binder names in scope at the node addressed by rho, outermost first;
// throws BadPath if rho does not address a node
std::vector<std::string> binder_names_at(const TermPtr& m, const Path& rho);
std::optional<TermPtr> subterm_at(const TermPtr& m, const Path& rho);

// printed form with binders renamed to the deterministic scheme and hole ids
// dropped; equal keys iff alpha-equivalent
std::string alpha_canonical_key(const TermPtr& t);

}  // namespace proofsynth
