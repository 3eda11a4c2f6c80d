// Command-line surface for the trial-and-return pricing engine.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 unwritable output path.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tryret/behavior.hpp"
#include "tryret/market.hpp"
#include "tryret/profit.hpp"
#include "tryret/render.hpp"
#include "tryret/simulate.hpp"
#include "tryret/sweep.hpp"

using nlohmann::json;
using namespace tryret;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFail = 1;
constexpr int kBadInput = 2;
constexpr int kIoError = 3;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file: " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ValidationError("config parse error: " + std::string(e.what()));
    }
}

const json* scope(const json& cfg, const char* key) {
    if (cfg.contains(key) && cfg[key].is_object()) return &cfg[key];
    return nullptr;
}

double num_or(const json* s, const char* key, double fallback) {
    if (s && s->contains(key) && (*s)[key].is_number())
        return (*s)[key].get<double>();
    return fallback;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << content;
    f.flush();
    return static_cast<bool>(f);
}

// Market flags shared by every subcommand; a JSON config supplies defaults,
// explicit flags win.
struct MarketFlags {
    double v1 = 0, v2 = 0, p2 = 0, alpha = 0, r = 0;
    CLI::Option *ov1 = nullptr, *ov2 = nullptr, *op2 = nullptr,
                *oalpha = nullptr, *orr = nullptr;

    void attach(CLI::App* cmd) {
        ov1 = cmd->add_option("--v1", v1, "value of Product 1");
        ov2 = cmd->add_option("--v2", v2, "value of Product 2");
        op2 = cmd->add_option("--p2", p2, "online price of Product 2 (default 0)");
        oalpha = cmd->add_option("--alpha", alpha, "fit probability in (0,1)");
        orr = cmd->add_option("--r", r, "return-cost fraction in (0,1)");
    }

    MarketParams resolve(const json& cfg) const {
        const json* m = scope(cfg, "market");
        auto need = [&](const CLI::Option* o, double v, const char* key) {
            if (o->count()) return v;
            if (m && m->contains(key) && (*m)[key].is_number())
                return (*m)[key].get<double>();
            throw ValidationError(std::string("missing required parameter --") +
                                  key);
        };
        MarketParams p;
        p.v1 = need(ov1, v1, "v1");
        p.v2 = need(ov2, v2, "v2");
        p.p2_bar = op2->count() ? p2 : num_or(m, "p2", 0.0);
        p.alpha = need(oalpha, alpha, "alpha");
        p.r = need(orr, r, "r");
        return validate(p);
    }
};

struct SimFlags {
    std::uint64_t n = 0, seed = 0;
    int quad = 0;
    double step = 0;
    CLI::Option *on = nullptr, *oseed = nullptr, *oquad = nullptr,
                *ostep = nullptr;

    void attach(CLI::App* cmd) {
        on = cmd->add_option("--n", n, "number of simulated customers");
        oseed = cmd->add_option("--seed", seed, "RNG seed");
        oquad = cmd->add_option("--quad", quad, "quadrature points");
        ostep = cmd->add_option("--step", step, "price grid step");
    }

    SimConfig resolve(const json& cfg, const MarketParams& p) const {
        const json* s = scope(cfg, "sim");
        SimConfig c;
        c.n_customers = on->count()
                            ? n
                            : static_cast<std::uint64_t>(
                                  num_or(s, "n", 1'000'000.0));
        c.seed = oseed->count()
                     ? seed
                     : static_cast<std::uint64_t>(num_or(s, "seed", 42.0));
        c.quadrature_points =
            oquad->count() ? quad
                           : static_cast<int>(
                                 num_or(s, "quadrature_points", 10'000.0));
        c.price_grid_step =
            ostep->count() ? step : num_or(s, "grid_step", 1e-4 * p.v1);
        validate_config(c);
        return c;
    }
};

json to_json(const MarketParams& p) {
    return {{"v1", p.v1}, {"v2", p.v2}, {"p2", p.p2_bar},
            {"alpha", p.alpha}, {"r", p.r}};
}

json to_json(const ReturnRule& r) {
    switch (r.kind) {
        case ReturnKind::AllKeep: return {{"kind", "all_keep"}};
        case ReturnKind::AllReturn: return {{"kind", "all_return"}};
        case ReturnKind::ThresholdReturn:
            return {{"kind", "threshold_return"}, {"beta_bar", r.beta_bar}};
    }
    return {};
}

json to_json(const BehaviorProfile& b) {
    return {{"visits", b.visits},
            {"tries_if_misfit", b.tries_if_misfit},
            {"return_rule", to_json(b.return_rule)},
            {"share_buy_p1", b.share_buy_p1},
            {"share_buy_p2", b.share_buy_p2},
            {"return_mass", b.return_mass},
            {"expected_utility", b.expected_utility}};
}

json to_json(const ProfitQuote& q) {
    return {{"p1", q.p1},
            {"profit", q.profit},
            {"regime", to_string(q.regime)},
            {"p1_sales", q.component_p1_sales},
            {"p2_sales", q.component_p2_sales},
            {"return_cost_borne_by_retailer",
             q.return_cost_borne_by_retailer}};
}

json to_json(const PricingSolution& s) {
    json cands = json::array();
    for (const auto& q : s.candidates) cands.push_back(to_json(q));
    return {{"optimal_p1", s.optimal_p1},
            {"optimal_profit", s.optimal_profit},
            {"regime", to_string(s.regime)},
            {"interior_maximizer_used", s.interior_maximizer_used},
            {"behavior", to_json(s.behavior)},
            {"candidates", cands}};
}

json to_json(const SimResult& r) {
    return {{"n", r.n},
            {"seed", r.seed},
            {"share_p1", {{"est", r.est_share_p1}, {"se", r.se_share_p1}}},
            {"share_p2", {{"est", r.est_share_p2}, {"se", r.se_share_p2}}},
            {"return_mass",
             {{"est", r.est_return_mass}, {"se", r.se_return_mass}}},
            {"profit", {{"est", r.est_profit}, {"se", r.se_profit}}}};
}

json to_json(const CoverageComparison& c) {
    json cands = json::array();
    for (const auto& q : c.covered_candidates) cands.push_back(to_json(q));
    return {{"profit_no_coverage", c.profit_no_coverage},
            {"profit_with_coverage", c.profit_with_coverage},
            {"recommend_coverage", c.recommend_coverage},
            {"optimal_p1_no_coverage", c.optimal_p1_no_coverage},
            {"optimal_p1_with_coverage", c.optimal_p1_with_coverage},
            {"regime_no_coverage", to_string(c.regime_no_coverage)},
            {"regime_with_coverage", to_string(c.regime_with_coverage)},
            {"covered_candidates", cands},
            {"flat_fee_profit", c.flat_fee_profit},
            {"flat_fee_p1", c.flat_fee_p1}};
}

int emit(const json& report, bool as_json, const std::string& out_path,
         const std::string& human) {
    if (!out_path.empty()) {
        if (!write_file(out_path, report.dump(2) + "\n")) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kIoError;
        }
    }
    if (as_json)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << human;
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_solve(const MarketParams& p, bool as_json,
              const std::string& out_path) {
    const PricingSolution s = optimize(p);
    std::string human;
    human += "case " + std::string(to_string(case_of(p))) + " market: v1=" +
             fmt12(p.v1) + " v2=" + fmt12(p.v2) + " p2=" + fmt12(p.p2_bar) +
             " alpha=" + fmt12(p.alpha) + " r=" + fmt12(p.r) + "\n";
    human += "candidates (price regime profit p1_sales p2_sales):\n";
    for (const auto& q : s.candidates) {
        human += (q.p1 == s.optimal_p1 ? "  * " : "    ");
        human += fmt12(q.p1) + "  " + to_string(q.regime) + "  " +
                 fmt12(q.profit) + "  " + fmt12(q.component_p1_sales) + "  " +
                 fmt12(q.component_p2_sales) + "\n";
    }
    human += "optimal: p1=" + fmt12(s.optimal_p1) +
             " profit=" + fmt12(s.optimal_profit) + " regime=" +
             to_string(s.regime) +
             (s.interior_maximizer_used ? " (interior maximizer)\n"
                                        : "\n");
    json rep = {{"market", to_json(p)},
                {"case", to_string(case_of(p))},
                {"solution", to_json(s)}};
    return emit(rep, as_json, out_path, human);
}

int cmd_profit(const MarketParams& p, double p1, bool coverage, bool as_json,
               const std::string& out_path) {
    const ProfitQuote q = profit_at(p, p1, coverage);
    const BehaviorProfile b =
        detail::solve_behavior_for_r(p, coverage ? 0.0 : p.r, p1);
    const Thresholds t = thresholds(p);
    std::string human;
    human += "p1=" + fmt12(q.p1) + " profit=" + fmt12(q.profit) + " regime=" +
             to_string(q.regime) + (coverage ? " (coverage on)\n" : "\n");
    human += "  revenue: p1_sales=" + fmt12(q.component_p1_sales) +
             " p2_sales=" + fmt12(q.component_p2_sales) + " return_fees=" +
             fmt12(q.return_cost_borne_by_retailer) + "\n";
    human += std::string("  behavior: ") + (b.visits ? "visits" : "no visit") +
             (b.tries_if_misfit ? ", tries if misfit" : ", no misfit trial") +
             "; shares p1=" + fmt12(b.share_buy_p1) + " p2=" +
             fmt12(b.share_buy_p2) + " returns=" + fmt12(b.return_mass) + "\n";
    human += "  landmarks: all_keep=" + fmt12(t.all_keep) + " trial=" +
             fmt12(t.trial_cutoff(case_of(p))) + " visit_limit=" +
             fmt12(t.visit_limit) + " all_return=" + fmt12(t.all_return) +
             "\n";
    json rep = {{"market", to_json(p)},
                {"coverage", coverage},
                {"quote", to_json(q)},
                {"behavior", to_json(b)},
                {"thresholds",
                 {{"all_keep", t.all_keep},
                  {"trial_low_r", t.trial_low_r},
                  {"trial_high_r", t.trial_high_r},
                  {"visit_limit", t.visit_limit},
                  {"all_return", t.all_return}}}};
    return emit(rep, as_json, out_path, human);
}

int cmd_simulate(const MarketParams& p, double p1, const SimConfig& cfg,
                 bool coverage, bool as_json, const std::string& out_path) {
    const SimResult r = simulate(p, p1, cfg, coverage);
    const ProfitQuote q = profit_at(p, p1, coverage);
    const BehaviorProfile b =
        detail::solve_behavior_for_r(p, coverage ? 0.0 : p.r, p1);
    std::string human;
    human += "simulated n=" + std::to_string(r.n) + " seed=" +
             std::to_string(r.seed) + " at p1=" + fmt12(p1) + "\n";
    human += "  share_p1 " + fmt12(r.est_share_p1) + " +/- " +
             fmt12(r.se_share_p1) + "  (analytic " + fmt12(b.share_buy_p1) +
             ")\n";
    human += "  share_p2 " + fmt12(r.est_share_p2) + " +/- " +
             fmt12(r.se_share_p2) + "\n";
    human += "  return_mass " + fmt12(r.est_return_mass) + " +/- " +
             fmt12(r.se_return_mass) + "\n";
    human += "  profit " + fmt12(r.est_profit) + " +/- " + fmt12(r.se_profit) +
             "  (analytic " + fmt12(q.profit) + ")\n";
    json rep = {{"market", to_json(p)},
                {"p1", p1},
                {"coverage", coverage},
                {"result", to_json(r)},
                {"analytic_profit", q.profit}};
    return emit(rep, as_json, out_path, human);
}

int cmd_coverage(const MarketParams& p, bool as_json,
                 const std::string& out_path) {
    const CoverageComparison c = compare_coverage(p);
    std::string human;
    human += "no coverage:   profit=" + fmt12(c.profit_no_coverage) +
             " at p1=" + fmt12(c.optimal_p1_no_coverage) + " (" +
             to_string(c.regime_no_coverage) + ")\n";
    human += "with coverage: profit=" + fmt12(c.profit_with_coverage) +
             " at p1=" + fmt12(c.optimal_p1_with_coverage) + " (" +
             to_string(c.regime_with_coverage) + ")\n";
    human += "flat-fee bookkeeping: profit=" + fmt12(c.flat_fee_profit) +
             " at p1=" + fmt12(c.flat_fee_p1) + "\n";
    human += std::string("recommend_coverage=") +
             (c.recommend_coverage ? "true" : "false") + "\n";
    json rep = {{"market", to_json(p)}, {"comparison", to_json(c)}};
    return emit(rep, as_json, out_path, human);
}

int cmd_sweep(const json& cfg, const MarketFlags& mf, const std::string& plane,
              int steps, int steps_x, int steps_y, double xlo, double xhi,
              double ylo, double yhi, const CLI::App* cmd,
              const std::string& out_path, std::string format) {
    const json* sw = scope(cfg, "sweep");
    auto pick = [&](const char* flag, double v, const char* key, double fb) {
        if (cmd->count(flag)) return v;
        return num_or(sw, key, fb);
    };
    GridSpec g;
    const double steps_d =
        cmd->count("--steps") ? steps : num_or(sw, "steps", 100);
    g.steps_x = cmd->count("--steps-x") ? steps_x
                                        : static_cast<int>(num_or(
                                              sw, "steps_x", steps_d));
    g.steps_y = cmd->count("--steps-y") ? steps_y
                                        : static_cast<int>(num_or(
                                              sw, "steps_y", steps_d));
    g.xlo = pick("--xlo", xlo, "xlo", 0.001);
    g.xhi = pick("--xhi", xhi, "xhi", 0.999);

    std::string plane_name = plane;
    if (plane_name.empty() && sw && sw->contains("plane"))
        plane_name = (*sw)["plane"].get<std::string>();
    if (plane_name.empty()) plane_name = "alpha-r";

    RegionMap m;
    const json* mk = scope(cfg, "market");
    auto need_fixed = [&](const CLI::Option* o, double v, const char* key) {
        if (o->count()) return v;
        if (mk && mk->contains(key) && (*mk)[key].is_number())
            return (*mk)[key].get<double>();
        throw ValidationError(std::string("missing required parameter --") +
                              key);
    };
    if (plane_name == "alpha-r") {
        g.ylo = pick("--ylo", ylo, "ylo", 0.001);
        g.yhi = pick("--yhi", yhi, "yhi", 0.999);
        const double v1 = need_fixed(mf.ov1, mf.v1, "v1");
        const double v2 = need_fixed(mf.ov2, mf.v2, "v2");
        const double p2 =
            mf.op2->count() ? mf.p2 : num_or(mk, "p2", 0.0);
        m = sweep_alpha_r(v1, v2, p2, g);
    } else if (plane_name == "alpha-ratio") {
        g.ylo = pick("--ylo", ylo, "ylo", 1.05);
        g.yhi = pick("--yhi", yhi, "yhi", 10.0);
        const double v2 = need_fixed(mf.ov2, mf.v2, "v2");
        const double p2 =
            mf.op2->count() ? mf.p2 : num_or(mk, "p2", 0.0);
        const double r = need_fixed(mf.orr, mf.r, "r");
        m = sweep_alpha_valueratio(p2, v2, r, g);
    } else {
        throw ValidationError("unknown sweep plane: " + plane_name +
                              " (use alpha-r or alpha-ratio)");
    }

    if (out_path.empty())
        throw ValidationError("sweep requires an output path (-o)");
    if (format.empty()) {
        const auto ext = std::filesystem::path(out_path).extension().string();
        format = ext.empty() ? "csv" : ext.substr(1);
    }
    const std::string doc = render(m, parse_format(format));
    if (!write_file(out_path, doc)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kIoError;
    }

    int counts[5] = {0, 0, 0, 0, 0};
    for (const auto& c : m.cells) counts[static_cast<int>(c.regime)]++;
    std::cout << "wrote " << out_path << ": " << m.axis_x.steps << "x"
              << m.axis_y.steps << " " << m.axis_x.name << "/" << m.axis_y.name
              << " map; cells Pi1=" << counts[0] << " Pi3=" << counts[1]
              << " Pi4C=" << counts[2] << " Pi4I=" << counts[3]
              << " Pi2bar=" << counts[4] << "\n";
    return kOk;
}

int cmd_curve(const json& cfg, const MarketParams& p, double pmin, double pmax,
              int samples, const CLI::App* cmd, const std::string& out_path,
              std::string format) {
    const json* cv = scope(cfg, "curve");
    const Thresholds t = thresholds(p);
    const double lo =
        cmd->count("--pmin") ? pmin : num_or(cv, "pmin", 0.0);
    const double hi = cmd->count("--pmax")
                          ? pmax
                          : num_or(cv, "pmax", t.all_return + 0.5 * p.v1);
    const int n = cmd->count("--samples")
                      ? samples
                      : static_cast<int>(num_or(cv, "samples", 400));
    const ProfitCurve c = profit_curve(p, lo, hi, n);

    if (out_path.empty())
        throw ValidationError("curve requires an output path (-o)");
    if (format.empty()) {
        const auto ext = std::filesystem::path(out_path).extension().string();
        format = ext.empty() ? "csv" : ext.substr(1);
    }
    const std::string doc = render(c, parse_format(format));
    if (!write_file(out_path, doc)) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kIoError;
    }
    std::cout << "wrote " << out_path << ": profit curve, " << c.samples.size()
              << " samples over [" << fmt12(lo) << ", " << fmt12(hi) << "]\n";
    return kOk;
}

// Oracle-vs-closed-form verification suite.  Statistical checks are marked
// inconclusive when the 3-sigma band is too wide to say anything.
int cmd_verify(const MarketParams& p, const SimConfig& cfg, double beta_fault,
               bool as_json, const std::string& out_path) {
    struct Check {
        std::string name;
        double price;
        std::string status;
        double observed, expected, tolerance;
    };
    std::vector<Check> checks;
    auto add = [&](const std::string& name, double price, bool pass,
                   bool inconclusive, double obs, double exp, double tol) {
        checks.push_back({name, price,
                          inconclusive ? "inconclusive"
                                       : (pass ? "pass" : "fail"),
                          obs, exp, tol});
    };

    const Thresholds t = thresholds(p);
    std::vector<double> boundaries;
    for (double lm : t.landmarks())
        if (lm > 0.0) boundaries.push_back(lm);
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                     boundaries.end());
    std::vector<double> prices;
    double prev = 0.0;
    for (double b : boundaries) {
        if (b > prev) prices.push_back(0.5 * (prev + b));
        prices.push_back(b);
        prev = b;
    }
    prices.push_back(prev + 0.5 * p.v1);

    const double util_scale = std::max(1.0, p.v1 + p.v2);
    for (double p1 : prices) {
        const BehaviorProfile analytic =
            detail::solve_behavior_for_r(p, p.r, p1, beta_fault);
        const ProfitQuote quote =
            detail::quote_from(p, p1, analytic, false);

        // Deterministic oracle replay.
        const auto rp = oracle::replay(p, p1, cfg.quadrature_points);
        const double dtol = 1e-9 * util_scale;
        add("share_p1_replay", p1,
            std::abs(rp.share_p1 - analytic.share_buy_p1) <= dtol, false,
            rp.share_p1, analytic.share_buy_p1, dtol);
        add("profit_replay", p1, std::abs(rp.profit - quote.profit) <= dtol,
            false, rp.profit, quote.profit, dtol);

        // Quadrature vs the closed-form expected trial utility.
        const double eq = oracle::expected_try_payoff(p, p.r, p1,
                                                      cfg.quadrature_points);
        const double ec = expected_trial_utility(p, p1);
        add("expected_utility_quadrature", p1, std::abs(eq - ec) <= 1e-9,
            false, eq, ec, 1e-9);

        // Monte Carlo 3-sigma checks.
        const SimResult sim = simulate(p, p1, cfg);
        auto mc = [&](const std::string& name, double est, double se,
                      double expct, double scale) {
            const double band = 3.0 * se;
            const bool inconclusive = band > 0.1 * scale;
            add(name, p1, std::abs(est - expct) <= band, inconclusive, est,
                expct, band);
        };
        mc("share_p1_mc", sim.est_share_p1, sim.se_share_p1,
           analytic.share_buy_p1, 1.0);
        mc("return_mass_mc", sim.est_return_mass, sim.se_return_mass,
           analytic.return_mass, 1.0);
        mc("profit_mc", sim.est_profit, sim.se_profit, quote.profit,
           std::max(1.0, std::abs(quote.profit)));
    }

    // Trial indifference at the case cutoff: expected trial utility equals
    // the outside option there.
    const double cutoff = t.trial_cutoff(case_of(p));
    add("trial_indifference", cutoff,
        std::abs(expected_trial_utility(p, cutoff) - (p.v2 - p.p2_bar)) <=
            1e-12 * util_scale,
        false, expected_trial_utility(p, cutoff), p.v2 - p.p2_bar,
        1e-12 * util_scale);

    // Grid argmax vs the closed-form optimum.
    const PricingSolution sol = optimize(p);
    const auto [gp, gprofit] = grid_search_optimum(p, cfg);
    add("optimum_price_grid", sol.optimal_p1,
        std::abs(gp - sol.optimal_p1) <= cfg.price_grid_step + 1e-12, false,
        gp, sol.optimal_p1, cfg.price_grid_step);
    add("optimum_profit_grid", sol.optimal_p1,
        std::abs(gprofit - sol.optimal_profit) <= 1e-6, false, gprofit,
        sol.optimal_profit, 1e-6);

    int failures = 0, inconclusive = 0;
    for (const auto& c : checks) {
        if (c.status == "fail") ++failures;
        if (c.status == "inconclusive") ++inconclusive;
    }

    std::string human;
    for (const auto& c : checks)
        human += "[" + c.status + "] " + c.name + " @ p1=" + fmt12(c.price) +
                 "  observed=" + fmt12(c.observed) + " expected=" +
                 fmt12(c.expected) + " tol=" + fmt12(c.tolerance) + "\n";
    human += std::to_string(checks.size()) + " checks, " +
             std::to_string(failures) + " failures, " +
             std::to_string(inconclusive) + " inconclusive\n";

    json jchecks = json::array();
    for (const auto& c : checks)
        jchecks.push_back({{"name", c.name},
                           {"price", c.price},
                           {"status", c.status},
                           {"observed", c.observed},
                           {"expected", c.expected},
                           {"tolerance", c.tolerance}});
    json rep = {{"market", to_json(p)},
                {"n", cfg.n_customers},
                {"seed", cfg.seed},
                {"checks", jchecks},
                {"failures", failures},
                {"inconclusive", inconclusive},
                {"passed", failures == 0}};
    const int rc = emit(rep, as_json, out_path, human);
    if (rc != kOk) return rc;
    return failures == 0 ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pricing engine for in-store products with a home-trial "
                 "return option"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "JSON config file; explicit flags override its values")
        ->expected(1);

    struct Sub {
        CLI::App* cmd;
        MarketFlags mf;
        SimFlags sf;
        double p1 = 0;
        bool coverage = false;
        bool as_json = false;
        std::string out, format;
        std::string plane;
        int steps = 100, steps_x = 100, steps_y = 100, samples = 400;
        double xlo = 0.001, xhi = 0.999, ylo = 0.001, yhi = 0.999;
        double pmin = 0, pmax = 0;
        double beta_fault = 0.0;
    };

    auto make = [&](const char* name, const char* desc) {
        Sub s;
        s.cmd = app.add_subcommand(name, desc);
        s.mf.attach(s.cmd);
        s.cmd->add_flag("--json", s.as_json, "print a JSON report");
        s.cmd->add_option("-o,--output", s.out, "output file path");
        return s;
    };

    Sub solve = make("solve", "optimal price, profit and regime");
    Sub profit = make("profit", "profit and behavior at a given price");
    profit.cmd->add_option("--p1", profit.p1, "price of Product 1")
        ->required();
    profit.cmd->add_flag("--coverage", profit.coverage,
                         "retailer pays return fees");
    Sub simulate_cmd = make("simulate", "Monte Carlo replay at a price");
    simulate_cmd.cmd->add_option("--p1", simulate_cmd.p1, "price of Product 1")
        ->required();
    simulate_cmd.cmd->add_flag("--coverage", simulate_cmd.coverage,
                               "retailer pays return fees");
    simulate_cmd.sf.attach(simulate_cmd.cmd);
    Sub coverage = make("coverage",
                        "compare optimal profit with and without retailer-paid "
                        "return fees");
    Sub sweep = make("sweep", "optimal-regime map over a parameter plane");
    sweep.cmd->add_option("--plane", sweep.plane,
                          "alpha-r (default) or alpha-ratio");
    sweep.cmd->add_option("--steps", sweep.steps, "cells per axis");
    sweep.cmd->add_option("--steps-x", sweep.steps_x, "cells on the x axis");
    sweep.cmd->add_option("--steps-y", sweep.steps_y, "cells on the y axis");
    sweep.cmd->add_option("--xlo", sweep.xlo, "x axis lower bound");
    sweep.cmd->add_option("--xhi", sweep.xhi, "x axis upper bound");
    sweep.cmd->add_option("--ylo", sweep.ylo, "y axis lower bound");
    sweep.cmd->add_option("--yhi", sweep.yhi, "y axis upper bound");
    sweep.cmd->add_option("--format", sweep.format, "csv or svg");
    Sub curve = make("curve", "profit-vs-price curve");
    curve.cmd->add_option("--pmin", curve.pmin, "lowest price sampled");
    curve.cmd->add_option("--pmax", curve.pmax, "highest price sampled");
    curve.cmd->add_option("--samples", curve.samples, "sample count");
    curve.cmd->add_option("--format", curve.format, "csv or svg");
    Sub verify = make("verify", "run the oracle-vs-closed-form check suite");
    verify.sf.attach(verify.cmd);
    verify.cmd
        ->add_option("--inject-beta-fault", verify.beta_fault,
                     "perturb the closed-form return threshold (test hook)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        const json cfg = load_config(config_path);
        if (solve.cmd->parsed())
            return cmd_solve(solve.mf.resolve(cfg), solve.as_json, solve.out);
        if (profit.cmd->parsed())
            return cmd_profit(profit.mf.resolve(cfg),
                              profit.cmd->count("--p1")
                                  ? profit.p1
                                  : num_or(&cfg, "p1", profit.p1),
                              profit.coverage, profit.as_json, profit.out);
        if (simulate_cmd.cmd->parsed()) {
            const MarketParams p = simulate_cmd.mf.resolve(cfg);
            return cmd_simulate(p,
                                simulate_cmd.cmd->count("--p1")
                                    ? simulate_cmd.p1
                                    : num_or(&cfg, "p1", simulate_cmd.p1),
                                simulate_cmd.sf.resolve(cfg, p),
                                simulate_cmd.coverage, simulate_cmd.as_json,
                                simulate_cmd.out);
        }
        if (coverage.cmd->parsed())
            return cmd_coverage(coverage.mf.resolve(cfg), coverage.as_json,
                                coverage.out);
        if (sweep.cmd->parsed())
            return cmd_sweep(cfg, sweep.mf, sweep.plane, sweep.steps,
                             sweep.steps_x, sweep.steps_y, sweep.xlo,
                             sweep.xhi, sweep.ylo, sweep.yhi, sweep.cmd,
                             sweep.out.empty()
                                 ? (cfg.contains("output")
                                        ? cfg["output"].get<std::string>()
                                        : sweep.out)
                                 : sweep.out,
                             sweep.format);
        if (curve.cmd->parsed()) {
            const MarketParams p = curve.mf.resolve(cfg);
            return cmd_curve(cfg, p, curve.pmin, curve.pmax, curve.samples,
                             curve.cmd,
                             curve.out.empty()
                                 ? (cfg.contains("output")
                                        ? cfg["output"].get<std::string>()
                                        : curve.out)
                                 : curve.out,
                             curve.format);
        }
        if (verify.cmd->parsed()) {
            const MarketParams p = verify.mf.resolve(cfg);
            return cmd_verify(p, verify.sf.resolve(cfg, p), verify.beta_fault,
                              verify.as_json, verify.out);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const InvalidConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const InvalidGridError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const UnsupportedFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const WrongCaseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kBadInput;
}
