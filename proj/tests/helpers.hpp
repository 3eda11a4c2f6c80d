#pragma once

#include <optional>
#include <random>

#include "tryret/market.hpp"

namespace testutil {

// Random valid market draws with moderate magnitudes (v1 stays below ~13 so
// absolute tolerances in the 1e-12 range are meaningful).
inline tryret::MarketParams random_params(
    std::mt19937_64& rng,
    std::optional<tryret::CaseLabel> want = std::nullopt) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    tryret::MarketParams p;
    p.v2 = 0.5 + 1.5 * u(rng);
    p.v1 = p.v2 * (1.1 + 4.9 * u(rng));
    p.p2_bar = u(rng) * p.v2;
    p.alpha = 0.02 + 0.96 * u(rng);
    if (want == tryret::CaseLabel::CaseI)
        p.r = 0.5 + 0.48 * u(rng);
    else if (want == tryret::CaseLabel::CaseII)
        p.r = 0.02 + 0.46 * u(rng);
    else
        p.r = 0.02 + 0.96 * u(rng);
    return tryret::validate(p);
}

}  // namespace testutil
