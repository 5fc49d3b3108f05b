#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proofsynth/ast.hpp"

namespace proofsynth {

struct Binding {
    std::string name;
    PropPtr type;
};
// ordered; the rightmost binding of a name shadows earlier ones
using TypingContext = std::vector<Binding>;

// does ctx |- m : p hold? p must be ground (no metavariables exist in the
// Prop type; any variable is a rigid atom). Holes take any type.
bool typecheck(const TypingContext& ctx, const TermPtr& m, const PropPtr& p);

// Most general typing of a closed term. Residual metavariables are rendered
// as fresh propositional variables _0, _1, ... (ordinary atoms, beyond the
// corpus vocabulary), numbered in first-occurrence order over the principal
// proposition and then the obligations by hole id.
struct PrincipalTyping {
    PropPtr principal;
    std::map<int, PropPtr> obligations;  // hole id -> most general obligation
};
std::optional<PrincipalTyping> infer_principal(const TermPtr& m);
// same, but with the root type unified against a ground goal first; this is
// what the search uses, so obligations are as specific as the goal makes them
std::optional<PrincipalTyping> infer_with_goal(const TermPtr& m, const PropPtr& goal);

// a term in which every node carries a proposition annotation
struct TypedTerm;
using TypedTermPtr = std::shared_ptr<const TypedTerm>;
struct TypedTerm {
    TermPtr node;  // the subterm rooted here
    PropPtr type;
    std::vector<TypedTermPtr> children;
};

// requires typecheck({}, m, p); throws IllTyped otherwise
TypedTermPtr annotate(const TermPtr& m, const PropPtr& p);

// inference rule applied at the node rho addresses; throws BadPath/HoleAtPath
Rule rule_at(const TypedTermPtr& t, const Path& rho);
const TypedTerm* typed_at(const TypedTermPtr& t, const Path& rho);  // throws BadPath

// binders in scope at rho with their inferred types, outermost first;
// throws BadPath when rho is invalid and IllTyped when m has no typing
TypingContext bound_vars_at(const TermPtr& m, const Path& rho);

}  // namespace proofsynth
