#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

// Market primitives for the trial-and-return pricing game.
//
// Two substitute products: Product 1 is sold only in the physical store at a
// price the retailer controls; Product 2 is a generic good sold online at an
// exogenous competitive price.  A visiting customer learns immediately whether
// Product 1 fits (probability alpha).  A misfit customer may take it home for
// a trial, learn a tolerance level beta ~ Uniform[0,1), and either keep it or
// return it for a refund at cost r*v1.

namespace tryret {

enum class Field { v1, v2, p2_bar, alpha, r };

inline const char* to_string(Field f) {
    switch (f) {
        case Field::v1: return "v1";
        case Field::v2: return "v2";
        case Field::p2_bar: return "p2_bar";
        case Field::alpha: return "alpha";
        case Field::r: return "r";
    }
    return "?";
}

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A parameter outside its admissible interval.
struct OutOfRangeError : ValidationError {
    Field field;
    OutOfRangeError(Field f, const std::string& msg)
        : ValidationError(msg), field(f) {}
};

// v1 <= v2: the in-store product must be worth more than the online good.
struct OrderingError : ValidationError {
    OrderingError() : ValidationError("v1 must exceed v2") {}
};

struct MarketParams {
    double v1;      // value of Product 1, v1 > v2
    double v2;      // value of Product 2, v2 > 0
    double p2_bar;  // exogenous online price of Product 2, 0 <= p2_bar <= v2
    double alpha;   // fit probability, 0 < alpha < 1
    double r;       // return-cost fraction, 0 < r < 1 (return cost = r*v1)
};

// Returns the params unchanged or throws naming the violated invariant.
// p2_bar <= v2 keeps the outside option v2 - p2_bar nonnegative, so "buy
// Product 2" is always individually rational.
inline MarketParams validate(const MarketParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.v2) || p.v2 <= 0.0)
        throw OutOfRangeError(Field::v2, "v2 must be positive and finite");
    if (!finite(p.v1))
        throw OutOfRangeError(Field::v1, "v1 must be finite");
    if (p.v1 <= p.v2)
        throw OrderingError();
    if (!finite(p.p2_bar) || p.p2_bar < 0.0 || p.p2_bar > p.v2)
        throw OutOfRangeError(Field::p2_bar, "p2_bar must lie in [0, v2]");
    if (!finite(p.alpha) || p.alpha <= 0.0 || p.alpha >= 1.0)
        throw OutOfRangeError(Field::alpha, "alpha must lie in (0, 1)");
    if (!finite(p.r) || p.r <= 0.0 || p.r >= 1.0)
        throw OutOfRangeError(Field::r, "r must lie in (0, 1)");
    return p;
}

// CaseI: r >= 1/2 (high return cost), CaseII: r < 1/2.  The boundary r = 1/2
// belongs to Case I.
enum class CaseLabel { CaseI, CaseII };

inline CaseLabel case_of(const MarketParams& p) {
    return p.r >= 0.5 ? CaseLabel::CaseI : CaseLabel::CaseII;
}

inline const char* to_string(CaseLabel c) {
    return c == CaseLabel::CaseI ? "I" : "II";
}

// Price landmarks at which customer behavior switches, plus the return
// threshold evaluators.  Landmarks may be negative; they are reported as-is
// and feasibility (price > 0) is the pricing solver's concern.
//
//   all_keep     every trier keeps at or below this price     (beta_bar = 0)
//   trial_low_r  misfit-trial cutoff when r < 1/2             (Delta = 0)
//   trial_high_r misfit-trial cutoff when r >= 1/2
//   visit_limit  nobody visits the store above this price
//   all_return   every trier returns at or above this price   (beta_bar = 1)
struct Thresholds {
    double all_keep;
    double trial_low_r;
    double trial_high_r;
    double visit_limit;
    double all_return;
    double v1;

    // beta_bar(p1) = (p1 - p2_bar - r*v1 + v2)/v1, affine with slope 1/v1.
    // Anchoring at all_keep makes beta_bar(all_keep) == 0 exact.
    double beta_bar(double p1) const { return (p1 - all_keep) / v1; }

    // Mean tolerance among keepers when 0 < beta_bar < 1.
    double beta_tilde(double p1) const { return 0.5 * (1.0 + beta_bar(p1)); }

    double trial_cutoff(CaseLabel c) const {
        return c == CaseLabel::CaseI ? trial_high_r : trial_low_r;
    }

    std::array<double, 5> landmarks() const {
        return {all_keep, trial_low_r, trial_high_r, visit_limit, all_return};
    }
};

namespace detail {

// Slack for utility indifference comparisons: landmark prices are computed
// from rearranged expressions, so the two sides of a tie can differ by a few
// ulps.  The retailer-favored action (visit/try/keep) must win those ties.
inline double utility_tie_slack(const MarketParams& p) {
    return 1e-12 * std::max(1.0, p.v1 + p.v2);
}

// Thresholds for an arbitrary customer-side return cost fraction.  The
// retailer-paid-return-fee policy reuses this with r_customer = 0.
inline Thresholds thresholds_for_r(const MarketParams& p, double r_customer) {
    Thresholds t;
    t.v1 = p.v1;
    t.all_keep = r_customer * p.v1 - p.v2 + p.p2_bar;
    t.trial_low_r = t.all_keep + (1.0 - std::sqrt(2.0 * r_customer)) * p.v1;
    t.trial_high_r = 0.5 * p.v1 - p.v2 + p.p2_bar;
    t.visit_limit = p.v1 - p.v2 + p.p2_bar;
    t.all_return = t.all_keep + p.v1;  // beta_bar = 1 up to rounding
    return t;
}

}  // namespace detail

inline Thresholds thresholds(const MarketParams& p) {
    return detail::thresholds_for_r(p, p.r);
}

}  // namespace tryret
