#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "tryret/profit.hpp"

// Parameter sweeps: per-cell optimal regime over a 2-D parameter plane, and
// profit-vs-price curves with landmark annotations.

namespace tryret {

struct InvalidGridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AxisSpec {
    std::string name;
    double lo;
    double hi;
    int steps;

    double value(int i) const {
        return lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(steps - 1);
    }
};

struct GridSpec {
    int steps_x = 100;
    int steps_y = 100;
    double xlo = 0.0, xhi = 1.0;
    double ylo = 0.0, yhi = 1.0;
};

// Pi4 is split into corner/interior flavors to keep the two trial-region
// strategies distinguishable in map output.
enum class MapRegime { Pi1, Pi3, Pi4C, Pi4I, Pi2bar };

inline const char* to_string(MapRegime r) {
    switch (r) {
        case MapRegime::Pi1: return "Pi1";
        case MapRegime::Pi3: return "Pi3";
        case MapRegime::Pi4C: return "Pi4C";
        case MapRegime::Pi4I: return "Pi4I";
        case MapRegime::Pi2bar: return "Pi2bar";
    }
    return "?";
}

struct RegionCell {
    double x, y;
    MapRegime regime;
    double optimal_p1;
    double optimal_profit;
};

struct RegionMap {
    AxisSpec axis_x, axis_y;
    std::vector<std::pair<std::string, double>> fixed;
    std::vector<RegionCell> cells;  // row-major, x outer

    const RegionCell& at(int ix, int iy) const {
        return cells[static_cast<std::size_t>(ix) * axis_y.steps + iy];
    }
};

namespace detail {

inline MapRegime map_regime(const PricingSolution& s) {
    switch (s.regime) {
        case Regime::Pi1: return MapRegime::Pi1;
        case Regime::Pi3: return MapRegime::Pi3;
        case Regime::Pi2bar: return MapRegime::Pi2bar;
        case Regime::Pi4:
            return s.interior_maximizer_used ? MapRegime::Pi4I
                                             : MapRegime::Pi4C;
    }
    return MapRegime::Pi2bar;
}

// alpha and r live on open intervals; clamp grids away from the endpoints
// (the Pi4 maximizer has a 1/(1-alpha) factor).
constexpr double kGridEps = 1e-3;

inline void check_steps(const GridSpec& g) {
    if (g.steps_x < 2 || g.steps_y < 2)
        throw InvalidGridError("grid needs at least 2 steps per axis");
    if (!(g.xlo < g.xhi) || !(g.ylo < g.yhi))
        throw InvalidGridError("grid bounds must satisfy lo < hi");
}

}  // namespace detail

// Optimal-regime map over the (alpha, r) plane at fixed product values.
inline RegionMap sweep_alpha_r(double v1, double v2, double p2_bar,
                               const GridSpec& grid) {
    detail::check_steps(grid);
    const double eps = detail::kGridEps;
    RegionMap m;
    m.axis_x = {"alpha", std::clamp(grid.xlo, eps, 1.0 - eps),
                std::clamp(grid.xhi, eps, 1.0 - eps), grid.steps_x};
    m.axis_y = {"r", std::clamp(grid.ylo, eps, 1.0 - eps),
                std::clamp(grid.yhi, eps, 1.0 - eps), grid.steps_y};
    if (!(m.axis_x.lo < m.axis_x.hi) || !(m.axis_y.lo < m.axis_y.hi))
        throw InvalidGridError("alpha/r bounds collapse after clamping");
    m.fixed = {{"v1", v1}, {"v2", v2}, {"p2_bar", p2_bar}};
    m.cells.resize(static_cast<std::size_t>(grid.steps_x) * grid.steps_y);
    for (int ix = 0; ix < grid.steps_x; ++ix) {
        const double alpha = m.axis_x.value(ix);
        for (int iy = 0; iy < grid.steps_y; ++iy) {
            const double r = m.axis_y.value(iy);
            const MarketParams p = validate({v1, v2, p2_bar, alpha, r});
            const PricingSolution s = optimize(p);
            m.cells[static_cast<std::size_t>(ix) * grid.steps_y + iy] = {
                alpha, r, detail::map_regime(s), s.optimal_p1,
                s.optimal_profit};
        }
    }
    return m;
}

// Case I map over (alpha, v1/v2): where the trial price beats the no-trial
// price.  The analytic boundary is v1/v2 = (2-2alpha)/(1-2alpha).
inline RegionMap sweep_alpha_valueratio(double p2_bar, double v2, double r,
                                        const GridSpec& grid) {
    detail::check_steps(grid);
    if (r < 0.5)
        throw InvalidGridError("value-ratio sweep requires r >= 1/2");
    const double eps = detail::kGridEps;
    RegionMap m;
    m.axis_x = {"alpha", std::clamp(grid.xlo, eps, 1.0 - eps),
                std::clamp(grid.xhi, eps, 1.0 - eps), grid.steps_x};
    m.axis_y = {"value_ratio", std::max(grid.ylo, 1.0 + eps), grid.yhi,
                grid.steps_y};
    if (!(m.axis_x.lo < m.axis_x.hi) || !(m.axis_y.lo < m.axis_y.hi))
        throw InvalidGridError("alpha/ratio bounds collapse after clamping");
    m.fixed = {{"v2", v2}, {"p2_bar", p2_bar}, {"r", r}};
    m.cells.resize(static_cast<std::size_t>(grid.steps_x) * grid.steps_y);
    for (int ix = 0; ix < grid.steps_x; ++ix) {
        const double alpha = m.axis_x.value(ix);
        for (int iy = 0; iy < grid.steps_y; ++iy) {
            const double ratio = m.axis_y.value(iy);
            const MarketParams p =
                validate({ratio * v2, v2, p2_bar, alpha, r});
            const PricingSolution s = optimize_case1(p);
            m.cells[static_cast<std::size_t>(ix) * grid.steps_y + iy] = {
                alpha, ratio, detail::map_regime(s), s.optimal_p1,
                s.optimal_profit};
        }
    }
    return m;
}

struct ProfitCurve {
    struct Sample {
        double p1;
        double profit;
        Regime regime;
    };
    MarketParams params;
    std::vector<Sample> samples;  // sorted by p1
    std::vector<std::pair<std::string, double>> landmarks;
};

// Samples profit across [lo, hi]; every landmark inside the range becomes an
// exact sample point so regime switches land on the curve.
inline ProfitCurve profit_curve(const MarketParams& p, double lo, double hi,
                                int n_samples) {
    if (!(lo < hi) || n_samples < 2)
        throw InvalidGridError("curve range must satisfy lo < hi, n >= 2");
    const Thresholds t = thresholds(p);
    ProfitCurve c;
    c.params = p;
    c.landmarks = {{"all_keep", t.all_keep},
                   {"trial_low_r", t.trial_low_r},
                   {"trial_high_r", t.trial_high_r},
                   {"visit_limit", t.visit_limit},
                   {"all_return", t.all_return}};

    std::vector<double> prices;
    prices.reserve(static_cast<std::size_t>(n_samples) + 8);
    for (int i = 0; i < n_samples; ++i)
        prices.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n_samples - 1));
    for (const auto& [name, lm] : c.landmarks)
        if (lm >= lo && lm <= hi) prices.push_back(lm);
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

    c.samples.reserve(prices.size());
    for (double price : prices) {
        const ProfitQuote q = profit_at(p, price);
        c.samples.push_back({price, q.profit, q.regime});
    }
    return c;
}

}  // namespace tryret
