#include "proofsynth/estimator.hpp"

#include "proofsynth/errors.hpp"

namespace proofsynth {

namespace {

double phi_rec(const TypedTerm& t, const RuleEstimator& est, const PropPtr& root, Path& rho,
               int nbound) {
    const Term& node = *t.node;
    if (node.kind == TermKind::Hole) throw Error("phi: term has holes");
    RuleDistribution d = est.classify(root, rho, t.type);
    if (node.kind == TermKind::Var) {
        if (nbound == 0) return 0.0;  // free variable; cannot arise in a closed proof
        return d[Rule::Var] / nbound;
    }
    double p = d[rule_of_term(node.kind)];
    for (int i = 0; i < term_child_count(node.kind); ++i) {
        rho.push_back({OneDepthContext{node.kind, node.name, node.name2}, i});
        p *= phi_rec(*t.children[i], est, root, rho,
                     nbound + static_cast<int>(binders_for_child(node, i).size()));
        rho.pop_back();
    }
    return p;
}

}  // namespace

double phi(const TypedTermPtr& t, const RuleEstimator& est, const PropPtr& root) {
    Path rho;
    return phi_rec(*t, est, root, rho, 0);
}

}  // namespace proofsynth
