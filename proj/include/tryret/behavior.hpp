#pragma once

#include <algorithm>

#include "tryret/market.hpp"

// Backward-induction customer decision engine.  The game is solved from the
// last decision to the first: keep/return after the trial (third choice),
// try/not-try a misfit product (second choice), visit/not-visit the store
// (first choice).  Indifferent customers act in the retailer's favor: they
// visit, try, and keep.

namespace tryret {

enum class ReturnKind { AllKeep, AllReturn, ThresholdReturn };

// Keep/return rule for misfit customers who tried the product.
// ThresholdReturn carries beta_bar strictly in (0,1): tolerances below it
// return, the rest keep.  AllKeep <=> beta_bar <= 0, AllReturn <=> beta_bar >= 1.
struct ReturnRule {
    ReturnKind kind;
    double beta_bar;  // only meaningful for ThresholdReturn
};

struct BehaviorProfile {
    bool visits;
    bool tries_if_misfit;
    ReturnRule return_rule;
    double share_buy_p1;     // fraction of the unit population buying Product 1
    double share_buy_p2;     // = 1 - share_buy_p1
    double return_mass;      // fraction who try and then return
    double expected_utility; // ex-ante customer expected utility
};

namespace detail {

inline ReturnRule third_choice_impl(const Thresholds& t, double p1) {
    if (p1 <= t.all_keep) return {ReturnKind::AllKeep, 0.0};
    if (p1 >= t.all_return) return {ReturnKind::AllReturn, 1.0};
    return {ReturnKind::ThresholdReturn, t.beta_bar(p1)};
}

// Expected utility of a misfit customer who commits to the trial, before
// beta is revealed.  Piecewise in the return rule; the middle branch is the
// integral of max(keep, return) payoffs over beta.
inline double expected_trial_utility_impl(const MarketParams& p,
                                          const Thresholds& t,
                                          double r_customer, double p1) {
    const double return_payoff = p.v2 - p.p2_bar - r_customer * p.v1;
    switch (third_choice_impl(t, p1).kind) {
        case ReturnKind::AllKeep: return 0.5 * p.v1 - p1;
        case ReturnKind::AllReturn: return return_payoff;
        case ReturnKind::ThresholdReturn: break;
    }
    const double bb = t.beta_bar(p1);
    return (1.0 - bb) * (t.beta_tilde(p1) * p.v1 - p1) + bb * return_payoff;
}

inline bool second_choice_impl(const Thresholds& t, CaseLabel c, double p1) {
    return p1 <= t.trial_cutoff(c);
}

inline bool first_choice_impl(const MarketParams& p, const Thresholds& t,
                              double r_customer, double p1,
                              bool tries_if_misfit) {
    // Without a misfit trial the visit condition reduces algebraically to
    // p1 <= visit_limit; comparing against the landmark keeps the
    // indifference tie exact instead of one rounding error wide.
    if (!tries_if_misfit) return p1 <= t.visit_limit;
    const double outside = p.v2 - p.p2_bar;
    return p.alpha * (p.v1 - p1) +
               (1.0 - p.alpha) *
                   expected_trial_utility_impl(p, t, r_customer, p1) >=
           outside - utility_tie_slack(p);
}

// Full composition for an arbitrary customer-side return cost.
// beta_bar_offset shifts the threshold used for purchase shares; it exists
// solely as a fault-injection hook for the verification harness and is zero
// in normal operation.
inline BehaviorProfile solve_behavior_for_r(const MarketParams& p,
                                            double r_customer, double p1,
                                            double beta_bar_offset = 0.0) {
    const Thresholds t = thresholds_for_r(p, r_customer);
    const CaseLabel c = r_customer >= 0.5 ? CaseLabel::CaseI : CaseLabel::CaseII;

    BehaviorProfile b;
    b.return_rule = third_choice_impl(t, p1);
    b.tries_if_misfit = second_choice_impl(t, c, p1);
    b.visits = first_choice_impl(p, t, r_customer, p1, b.tries_if_misfit);

    const double outside = p.v2 - p.p2_bar;
    if (!b.visits) {
        b.share_buy_p1 = 0.0;
        b.share_buy_p2 = 1.0;
        b.return_mass = 0.0;
        b.expected_utility = outside;
        return b;
    }
    if (!b.tries_if_misfit) {
        b.share_buy_p1 = p.alpha;
        b.share_buy_p2 = 1.0 - p.alpha;
        b.return_mass = 0.0;
        b.expected_utility =
            p.alpha * (p.v1 - p1) + (1.0 - p.alpha) * outside;
        return b;
    }
    const double bb =
        std::clamp(t.beta_bar(p1) + beta_bar_offset, 0.0, 1.0);
    b.share_buy_p1 = p.alpha + (1.0 - p.alpha) * (1.0 - bb);
    b.share_buy_p2 = 1.0 - b.share_buy_p1;
    b.return_mass = (1.0 - p.alpha) * bb;
    b.expected_utility =
        p.alpha * (p.v1 - p1) +
        (1.0 - p.alpha) * expected_trial_utility_impl(p, t, r_customer, p1);
    return b;
}

}  // namespace detail

// Keep/return rule after the trial (last stage of the game).  The tie at
// p1 == all_keep resolves to keeping.
inline ReturnRule third_choice(const MarketParams& p, double p1) {
    return detail::third_choice_impl(thresholds(p), p1);
}

inline double expected_trial_utility(const MarketParams& p, double p1) {
    return detail::expected_trial_utility_impl(p, thresholds(p), p.r, p1);
}

// Whether a misfit customer tries the product.  Ties resolve to trying
// (store clerks recommend the trial).
inline bool second_choice(const MarketParams& p, double p1) {
    return detail::second_choice_impl(thresholds(p), case_of(p), p1);
}

// Whether customers visit the store, given the already-decided try choice.
// Taking the try decision as an argument keeps the induction order explicit.
// Ties resolve to visiting.
inline bool first_choice(const MarketParams& p, double p1,
                         bool tries_if_misfit) {
    return detail::first_choice_impl(p, thresholds(p), p.r, p1,
                                     tries_if_misfit);
}

inline BehaviorProfile solve_behavior(const MarketParams& p, double p1) {
    return detail::solve_behavior_for_r(p, p.r, p1);
}

}  // namespace tryret
