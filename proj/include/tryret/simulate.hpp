#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "tryret/market.hpp"
#include "tryret/profit.hpp"

// Independent verification engine.  Everything here re-derives customer
// decisions from raw payoffs: expected utilities come from quadrature over
// beta with the keep/return switch located by bisection, never from the
// closed-form threshold.  Sharing that logic with the behavior module would
// defeat the point of the cross-check.

namespace tryret {

struct InvalidConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SimConfig {
    std::uint64_t n_customers = 1'000'000;
    std::uint64_t seed = 42;
    double price_grid_step = 1e-4;
    int quadrature_points = 10'000;
};

inline void validate_config(const SimConfig& c) {
    if (c.n_customers < 1)
        throw InvalidConfigError("n_customers must be at least 1");
    if (!(c.price_grid_step > 0.0) || !std::isfinite(c.price_grid_step))
        throw InvalidConfigError("price_grid_step must be positive");
    if (c.quadrature_points < 100)
        throw InvalidConfigError("quadrature_points must be at least 100");
}

struct SimResult {
    double est_share_p1, se_share_p1;
    double est_share_p2, se_share_p2;
    double est_return_mass, se_return_mass;
    double est_profit, se_profit;
    std::uint64_t n;
    std::uint64_t seed;
};

namespace oracle {

// splitmix64, keyed per customer index so that any partition of the index
// range draws the same numbers as a serial run.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

struct CustomerDraw {
    double u_fit;
    double beta;
};

inline CustomerDraw draw_customer(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t base =
        seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    return {uniform01(mix64(base + 0x9E3779B97F4A7C15ULL)),
            uniform01(mix64(base + 0x3C6EF372FE94F82AULL))};
}

// Comparison slack for indifference points.  Landmark prices make the two
// sides of a tie differ by a few ulps; the retailer-favored action (visit,
// try, keep, buy Product 1) must win those.
inline double tie_eps(const MarketParams& p) {
    return 1e-12 * std::max(1.0, p.v1 + p.v2);
}

inline double keep_payoff(const MarketParams& p, double p1, double beta) {
    return beta * p.v1 - p1;
}

inline double return_payoff(const MarketParams& p, double r_customer) {
    return p.v2 - p.p2_bar - r_customer * p.v1;
}

// E[max(keep, return)] over beta ~ U[0,1).  The integrand is piecewise
// linear with one switch; bisection on the raw payoff difference locates it,
// then composite midpoint integrates each piece (exact for linear pieces).
inline double expected_try_payoff(const MarketParams& p, double r_customer,
                                  double p1, int points) {
    const double ret = return_payoff(p, r_customer);
    auto gap = [&](double beta) { return keep_payoff(p, p1, beta) - ret; };

    double kink;
    if (gap(0.0) >= 0.0) {
        kink = 0.0;
    } else if (gap(1.0) <= 0.0) {
        kink = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
        }
        kink = 0.5 * (lo + hi);
    }

    auto midpoint = [&](double a, double b, int n, auto&& f) {
        const double h = (b - a) / n;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
        return acc * h;
    };
    const int left = std::max(1, static_cast<int>(points * kink));
    const int right = std::max(1, points - left);
    double total = 0.0;
    if (kink > 0.0) total += midpoint(0.0, kink, left, [&](double) { return ret; });
    if (kink < 1.0)
        total += midpoint(kink, 1.0, right,
                          [&](double b) { return keep_payoff(p, p1, b); });
    return total;
}

// Deterministic replay of the whole game at a price: decisions by direct
// payoff comparison, masses from the bisected keep/return switch.
struct Replay {
    bool visits;
    bool tries;
    double kink;  // misfit return mass among triers
    double share_p1, share_p2, return_mass;
    double profit;
};

inline Replay replay(const MarketParams& p, double p1, int quad_points,
                     bool coverage = false) {
    const double r_customer = coverage ? 0.0 : p.r;
    const double eps = tie_eps(p);
    const double outside = p.v2 - p.p2_bar;

    Replay rp{};
    const double e_try = expected_try_payoff(p, r_customer, p1, quad_points);
    rp.tries = e_try >= outside - eps;
    const double continuation = rp.tries ? e_try : outside;
    rp.visits = p.alpha * (p.v1 - p1) + (1.0 - p.alpha) * continuation >=
                outside - eps;

    const double ret = return_payoff(p, r_customer);
    auto gap = [&](double beta) { return keep_payoff(p, p1, beta) - ret; };
    if (gap(0.0) >= -eps) {
        rp.kink = 0.0;
    } else if (gap(1.0) <= 0.0) {
        rp.kink = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
        }
        rp.kink = 0.5 * (lo + hi);
    }

    if (!rp.visits) {
        rp.share_p1 = 0.0;
    } else {
        const bool fit_buys = p.v1 - p1 >= outside - eps;
        rp.share_p1 = p.alpha * (fit_buys ? 1.0 : 0.0) +
                      (1.0 - p.alpha) * (rp.tries ? 1.0 - rp.kink : 0.0);
        rp.return_mass =
            rp.tries ? (1.0 - p.alpha) * rp.kink : 0.0;
    }
    rp.share_p2 = 1.0 - rp.share_p1;
    rp.profit = rp.share_p1 * p1 + rp.share_p2 * p.p2_bar -
                (coverage ? rp.return_mass * p.r * p.v1 : 0.0);
    return rp;
}

inline int thread_count() {
    if (const char* env = std::getenv("TRYRET_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    return 1;
}

}  // namespace oracle

// Monte Carlo replay of the game tree.  Results are accumulated as integer
// counts, so serial and threaded runs are bit-identical for a given seed.
inline SimResult simulate(const MarketParams& p, double p1,
                          const SimConfig& cfg, bool coverage = false) {
    validate_config(cfg);
    const double r_customer = coverage ? 0.0 : p.r;
    const double eps = oracle::tie_eps(p);
    const double outside = p.v2 - p.p2_bar;

    // Common (customer-independent) decisions, from quadrature.
    const double e_try =
        oracle::expected_try_payoff(p, r_customer, p1, cfg.quadrature_points);
    const bool tries = e_try >= outside - eps;
    const double continuation = tries ? e_try : outside;
    const bool visits =
        p.alpha * (p.v1 - p1) + (1.0 - p.alpha) * continuation >=
        outside - eps;
    const bool fit_buys = p.v1 - p1 >= outside - eps;
    const double ret_payoff = oracle::return_payoff(p, r_customer);

    struct Counts {
        std::uint64_t buy_p1 = 0;
        std::uint64_t returned = 0;
    };
    auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        Counts c;
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (!visits) continue;
            const auto d = oracle::draw_customer(cfg.seed, i);
            if (d.u_fit < p.alpha) {
                if (fit_buys) ++c.buy_p1;
                continue;
            }
            if (!tries) continue;
            if (oracle::keep_payoff(p, p1, d.beta) >= ret_payoff)
                ++c.buy_p1;
            else
                ++c.returned;
        }
        return c;
    };

    const std::uint64_t n = cfg.n_customers;
    int nthreads = oracle::thread_count();
    if (n < 10'000) nthreads = 1;
    Counts total;
    if (nthreads == 1) {
        total = run_chunk(0, n);
    } else {
        std::vector<Counts> parts(nthreads);
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) {
            const std::uint64_t lo = n * t / nthreads;
            const std::uint64_t hi = n * (t + 1) / nthreads;
            pool.emplace_back(
                [&, lo, hi, t] { parts[t] = run_chunk(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (const Counts& c : parts) {
            total.buy_p1 += c.buy_p1;
            total.returned += c.returned;
        }
    }

    const double nn = static_cast<double>(n);
    const std::uint64_t buy_p2 = n - total.buy_p1;
    const double cover_fee = coverage ? p.r * p.v1 : 0.0;

    SimResult r;
    r.n = n;
    r.seed = cfg.seed;
    r.est_share_p1 = static_cast<double>(total.buy_p1) / nn;
    r.est_share_p2 = static_cast<double>(buy_p2) / nn;
    r.est_return_mass = static_cast<double>(total.returned) / nn;

    auto bernoulli_se = [&](double phat) {
        if (n < 2) return 0.0;
        return std::sqrt(phat * (1.0 - phat) / (nn - 1.0));
    };
    r.se_share_p1 = bernoulli_se(r.est_share_p1);
    r.se_share_p2 = bernoulli_se(r.est_share_p2);
    r.se_return_mass = bernoulli_se(r.est_return_mass);

    // Per-customer profit takes at most three values; moments follow from
    // the counts exactly.
    const double v_buy1 = p1;
    const double v_buy2 = p.p2_bar;
    const double v_ret = p.p2_bar - cover_fee;
    const std::uint64_t buy_p2_direct = buy_p2 - total.returned;
    const double sum = static_cast<double>(total.buy_p1) * v_buy1 +
                       static_cast<double>(buy_p2_direct) * v_buy2 +
                       static_cast<double>(total.returned) * v_ret;
    const double sumsq = static_cast<double>(total.buy_p1) * v_buy1 * v_buy1 +
                         static_cast<double>(buy_p2_direct) * v_buy2 * v_buy2 +
                         static_cast<double>(total.returned) * v_ret * v_ret;
    r.est_profit = sum / nn;
    if (n < 2) {
        r.se_profit = 0.0;
    } else {
        const double var =
            std::max(0.0, (sumsq - nn * r.est_profit * r.est_profit) /
                              (nn - 1.0));
        r.se_profit = std::sqrt(var / nn);
    }
    return r;
}

// Brute-force argmax of the analytic profit over a dense price grid.  All
// landmark prices are evaluated exactly: the profit jumps there and the
// optimum usually sits on one.  Ties go to the lower price.
inline std::pair<double, double> grid_search_optimum(const MarketParams& p,
                                                     const SimConfig& cfg,
                                                     bool coverage = false) {
    validate_config(cfg);
    const Thresholds t = thresholds(p);
    const double hi = t.all_return + p.v1;

    std::vector<double> prices;
    prices.reserve(static_cast<std::size_t>(hi / cfg.price_grid_step) + 16);
    for (double x = cfg.price_grid_step; x <= hi; x += cfg.price_grid_step)
        prices.push_back(x);
    for (double lm : t.landmarks())
        if (lm > 0.0 && lm <= hi) prices.push_back(lm);
    if (coverage)
        for (double lm : detail::thresholds_for_r(p, 0.0).landmarks())
            if (lm > 0.0 && lm <= hi) prices.push_back(lm);

    double best_p = prices.front(), best_profit = -1e300;
    for (double price : prices) {
        const double profit = profit_at(p, price, coverage).profit;
        if (profit > best_profit ||
            (profit == best_profit && price < best_p)) {
            best_profit = profit;
            best_p = price;
        }
    }
    return {best_p, best_profit};
}

}  // namespace tryret
