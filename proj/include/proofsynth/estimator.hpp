#pragma once

#include <array>

#include "proofsynth/ast.hpp"
#include "proofsynth/typing.hpp"

namespace proofsynth {

// probability over the eight inference rules, indexed by Rule
struct RuleDistribution {
    std::array<double, kRuleCount> p{};

    double& operator[](Rule r) { return p[static_cast<int>(r)]; }
    double operator[](Rule r) const { return p[static_cast<int>(r)]; }

    // highest-probability rule; ties resolved by Rule order
    Rule argmax() const {
        int best = 0;
        for (int i = 1; i < kRuleCount; ++i)
            if (p[i] > p[best]) best = i;
        return static_cast<Rule>(best);
    }
    double max() const { return p[static_cast<int>(argmax())]; }
};

// Estimates which inference rule concludes the subproof at a position:
// conditioned on the goal proposition, the path from the root to the
// position, and the proof obligation (the type required there).
class RuleEstimator {
public:
    virtual ~RuleEstimator() = default;
    virtual RuleDistribution classify(const PropPtr& goal, const Path& rho,
                                      const PropPtr& obligation) const = 0;
};

// 1/8 everywhere; baseline and fallback
class UniformEstimator final : public RuleEstimator {
public:
    RuleDistribution classify(const PropPtr&, const Path&, const PropPtr&) const override {
        RuleDistribution d;
        d.p.fill(1.0 / kRuleCount);
        return d;
    }
};

// Likelihood of a complete proof under the estimator: the product over all
// nodes of the estimated probability of the node's rule given (root, path,
// node type); variable references additionally pick uniformly among the
// binders in scope. t must be hole-free (throws Error otherwise).
double phi(const TypedTermPtr& t, const RuleEstimator& est, const PropPtr& root);

}  // namespace proofsynth
