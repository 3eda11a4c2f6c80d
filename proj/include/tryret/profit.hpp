#pragma once

#include <stdexcept>
#include <vector>

#include "tryret/behavior.hpp"
#include "tryret/market.hpp"

// Retailer profit functions and the closed-form price optimizer.
//
// Across the behavior regions the profit takes four shapes:
//   Pi1    = p1                              everyone buys Product 1
//   Pi4    = gamma*p1 + (1-gamma)*p2_bar     trial region with returns,
//            gamma = alpha + (1-alpha)*(1-beta_bar); concave quadratic in p1
//   Pi3    = alpha*p1 + (1-alpha)*p2_bar     visits without misfit trials
//   Pi2bar = p2_bar                          nobody visits
//
// The optimum always sits on a region boundary or on the interior maximizer
// of the Pi4 quadratic, so the solver evaluates a small candidate set.

namespace tryret {

struct WrongCaseError : std::logic_error {
    using std::logic_error::logic_error;
};

enum class Regime { Pi1, Pi2bar, Pi3, Pi4 };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Pi1: return "Pi1";
        case Regime::Pi2bar: return "Pi2bar";
        case Regime::Pi3: return "Pi3";
        case Regime::Pi4: return "Pi4";
    }
    return "?";
}

struct ProfitQuote {
    double p1;
    double profit;
    Regime regime;
    double component_p1_sales;
    double component_p2_sales;
    double return_cost_borne_by_retailer;  // 0 unless the coverage policy is on
};

namespace detail {

inline Regime regime_of(const BehaviorProfile& b) {
    if (!b.visits) return Regime::Pi2bar;
    if (!b.tries_if_misfit) return Regime::Pi3;
    return b.return_rule.kind == ReturnKind::AllKeep ? Regime::Pi1
                                                     : Regime::Pi4;
}

inline ProfitQuote quote_from(const MarketParams& p, double p1,
                              const BehaviorProfile& b, bool coverage) {
    ProfitQuote q;
    q.p1 = p1;
    q.regime = regime_of(b);
    q.component_p1_sales = b.share_buy_p1 * p1;
    q.component_p2_sales = b.share_buy_p2 * p.p2_bar;
    q.return_cost_borne_by_retailer =
        coverage ? b.return_mass * p.r * p.v1 : 0.0;
    q.profit = q.component_p1_sales + q.component_p2_sales -
               q.return_cost_borne_by_retailer;
    return q;
}

}  // namespace detail

// Profit at a price.  Under the coverage policy customers decide as if their
// return cost were zero and the retailer pays r*v1 for every returned unit.
inline ProfitQuote profit_at(const MarketParams& p, double p1,
                             bool coverage = false) {
    const double r_customer = coverage ? 0.0 : p.r;
    const BehaviorProfile b = detail::solve_behavior_for_r(p, r_customer, p1);
    return detail::quote_from(p, p1, b, coverage);
}

// Unique maximizer of the Pi4 quadratic,
//   p1* = (alpha*v1 + (1-alpha)*((1+r)*v1 - v2 + 2*p2_bar)) / (2*(1-alpha)).
// Always exceeds the all-keep landmark.
inline double interior_maximizer(const MarketParams& p) {
    if (case_of(p) == CaseLabel::CaseI)
        throw WrongCaseError("interior_maximizer requires r < 1/2");
    return (p.alpha * p.v1 +
            (1.0 - p.alpha) * ((1.0 + p.r) * p.v1 - p.v2 + 2.0 * p.p2_bar)) /
           (2.0 * (1.0 - p.alpha));
}

// Signed gap p1* - trial_low_r.  Negative means the quadratic peaks inside
// the trial region (interior solution); increasing in both alpha and r.
inline double delta4(const MarketParams& p) {
    return interior_maximizer(p) - thresholds(p).trial_low_r;
}

// True iff the Pi4 maximum is interior (p1* strictly below the trial cutoff).
// Gaps within the tie band count as the corner; the two branches coincide
// there anyway.
inline bool interior_vs_corner(const MarketParams& p) {
    const double tie = 1e-9 * std::max(1.0, p.v1);
    return delta4(p) < -tie;
}

struct PricingSolution {
    double optimal_p1;
    double optimal_profit;
    Regime regime;
    BehaviorProfile behavior;
    std::vector<ProfitQuote> candidates;  // case-dictated set, positive prices
    bool interior_maximizer_used;
};

namespace detail {

// Argmax over candidates; an exact profit tie resolves to the lower,
// trial-inducing price.
inline PricingSolution pick_best(const MarketParams& p,
                                 std::vector<ProfitQuote> candidates,
                                 bool interior_used) {
    const ProfitQuote* best = &candidates.front();
    for (const ProfitQuote& q : candidates) {
        if (q.profit > best->profit ||
            (q.profit == best->profit && q.p1 < best->p1))
            best = &q;
    }
    PricingSolution s;
    s.optimal_p1 = best->p1;
    s.optimal_profit = best->profit;
    s.regime = best->regime;
    s.behavior = solve_behavior(p, best->p1);
    s.interior_maximizer_used = interior_used;
    s.candidates = std::move(candidates);
    return s;
}

}  // namespace detail

// Case I optimum: the trial price (1/2)v1 - v2 + p2_bar when positive, versus
// the no-trial price v1 - v2 + p2_bar.
inline PricingSolution optimize_case1(const MarketParams& p) {
    if (case_of(p) != CaseLabel::CaseI)
        throw WrongCaseError("optimize_case1 requires r >= 1/2");
    const Thresholds t = thresholds(p);
    std::vector<ProfitQuote> cands;
    if (t.trial_high_r > 0.0) cands.push_back(profit_at(p, t.trial_high_r));
    cands.push_back(profit_at(p, t.visit_limit));
    return detail::pick_best(p, std::move(cands), false);
}

// Case II optimum: all-keep price (if positive), the Pi4 candidate (interior
// maximizer or the corner at the trial cutoff), and the no-trial price.
inline PricingSolution optimize_case2(const MarketParams& p) {
    if (case_of(p) != CaseLabel::CaseII)
        throw WrongCaseError("optimize_case2 requires r < 1/2");
    const Thresholds t = thresholds(p);
    const bool interior = interior_vs_corner(p);
    std::vector<ProfitQuote> cands;
    if (t.all_keep > 0.0) cands.push_back(profit_at(p, t.all_keep));
    const double pi4_price = interior ? interior_maximizer(p) : t.trial_low_r;
    if (pi4_price > 0.0) cands.push_back(profit_at(p, pi4_price));
    cands.push_back(profit_at(p, t.visit_limit));
    return detail::pick_best(p, std::move(cands), interior);
}

inline PricingSolution optimize(const MarketParams& p) {
    return case_of(p) == CaseLabel::CaseI ? optimize_case1(p)
                                          : optimize_case2(p);
}

// Retailer-paid-return-fee comparison.  flat_fee_* report the alternative
// bookkeeping where a single flat fee r*v1 is charged instead of a fee per
// returned unit.
struct CoverageComparison {
    double profit_no_coverage;
    double profit_with_coverage;
    bool recommend_coverage;  // strict improvement; ties favor no coverage
    double optimal_p1_no_coverage;
    double optimal_p1_with_coverage;
    Regime regime_no_coverage;
    Regime regime_with_coverage;
    std::vector<ProfitQuote> covered_candidates;
    double flat_fee_profit;
    double flat_fee_p1;
};

namespace detail {

// Interior maximizer of the covered profit p1 - (1-alpha)*beta0*(p1 - p2_bar
// + fee), where beta0 is the zero-return-cost threshold and fee is the
// per-unit charge the retailer absorbs.
inline double covered_interior(const MarketParams& p, double fee) {
    return 0.5 * (p.v1 / (1.0 - p.alpha) - fee - p.v2) + p.p2_bar;
}

}  // namespace detail

inline CoverageComparison compare_coverage(const MarketParams& p) {
    const PricingSolution plain = optimize(p);
    const Thresholds t0 = detail::thresholds_for_r(p, 0.0);

    // With free customer returns the all-keep and no-trial regions vanish:
    // every visit-inducing price lands in the trial region, so the candidates
    // are the covered quadratic's peak, the corner at the trial/visit limit,
    // and pricing Product 1 out of the market entirely.  The corner price is
    // taken from the zero-return-cost thresholds so the tie rules see an
    // exact landmark.
    const double corner = t0.trial_low_r;
    std::vector<ProfitQuote> cands;
    const double interior = detail::covered_interior(p, p.r * p.v1);
    if (interior > 0.0 && interior < corner)
        cands.push_back(profit_at(p, interior, true));
    cands.push_back(profit_at(p, corner, true));
    cands.push_back(profit_at(p, corner + p.v1, true));
    const ProfitQuote* best = &cands.front();
    for (const ProfitQuote& q : cands) {
        if (q.profit > best->profit ||
            (q.profit == best->profit && q.p1 < best->p1))
            best = &q;
    }

    CoverageComparison c;
    c.profit_no_coverage = plain.optimal_profit;
    c.optimal_p1_no_coverage = plain.optimal_p1;
    c.regime_no_coverage = plain.regime;
    c.profit_with_coverage = best->profit;
    c.optimal_p1_with_coverage = best->p1;
    c.regime_with_coverage = best->regime;
    c.recommend_coverage = best->profit > plain.optimal_profit;

    // Flat-fee bookkeeping: maximize covered revenue, then subtract r*v1
    // once; pricing out avoids the fee altogether.
    const double rev_peak =
        std::clamp(detail::covered_interior(p, 0.0), 1e-12, corner);
    double flat_best = p.p2_bar;
    double flat_p1 = corner + p.v1;
    for (double cand : {rev_peak, corner}) {
        const ProfitQuote q = profit_at(p, cand, true);
        const double revenue = q.profit + q.return_cost_borne_by_retailer;
        const double flat = revenue - p.r * p.v1;
        if (flat > flat_best) {
            flat_best = flat;
            flat_p1 = cand;
        }
    }
    c.flat_fee_profit = flat_best;
    c.flat_fee_p1 = flat_p1;
    c.covered_candidates = std::move(cands);
    return c;
}

}  // namespace tryret
