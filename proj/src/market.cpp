#include "phdnet/market.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "phdnet/error.hpp"

namespace phdnet::graph {

namespace {

constexpr int kMaxGraduationLag = 3;

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0, 1]");
    }
}

std::string institution_id(std::size_t tier, std::size_t index, std::size_t tier_count) {
    const int tier_width = tier_count >= 10 ? 2 : 1;
    char buf[48];
    std::snprintf(buf, sizeof buf, "t%0*zu_u%03zu", tier_width, tier + 1, index + 1);
    return buf;
}

}  // namespace

ingest::InstitutionRegistry SyntheticMarket::registry() const {
    std::vector<ingest::Institution> entries;
    std::size_t tagged = 0;
    for (std::size_t i = 0; i < institutions.size(); ++i) {
        ingest::Institution e{institutions[i], institutions[i], {}, false, {}};
        e.tags.insert("tier" + std::to_string(tier_of[i] + 1));
        if (tier_of[i] == 0 && tagged < 2) {
            e.tags.insert(tagged == 0 ? "tsinghua" : "peking");
            ++tagged;
        }
        entries.push_back(std::move(e));
    }
    return ingest::InstitutionRegistry(std::move(entries));
}

SyntheticMarket synthesize_market(const MarketSpec& spec) {
    const std::size_t tiers = spec.tier_sizes.size();
    if (tiers == 0) {
        throw ConfigError("market needs at least one tier");
    }
    if (std::find(spec.tier_sizes.begin(), spec.tier_sizes.end(), 0U) != spec.tier_sizes.end()) {
        throw ConfigError("every tier needs at least one institution");
    }
    if (spec.hire_rates.size() != 1 && spec.hire_rates.size() != tiers) {
        throw ConfigError("hire_rates must hold one rate or one per tier");
    }
    for (double r : spec.hire_rates) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ConfigError("hire rates must be finite and non-negative");
        }
    }
    check_probability(spec.downward_bias, "downward_bias");
    check_probability(spec.self_loop_probability, "self_loop_probability");
    check_probability(spec.overseas_probability, "overseas_probability");
    if (spec.start_year > spec.end_year || spec.start_year - kMaxGraduationLag < ingest::kMinYear ||
        spec.end_year > ingest::kMaxYear) {
        throw ConfigError("market year range must satisfy 1903 <= start <= end <= 2100");
    }

    SyntheticMarket market;
    for (std::size_t t = 0; t < tiers; ++t) {
        for (std::size_t k = 0; k < spec.tier_sizes[t]; ++k) {
            market.institutions.push_back(institution_id(t, k, tiers));
            market.tier_of.push_back(t);
        }
    }
    // Institutions stay sorted by id; wide tiers break the zero padding.
    std::vector<std::size_t> order(market.institutions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return market.institutions[a] < market.institutions[b]; });
    {
        std::vector<std::string> ids;
        std::vector<std::size_t> tier_of;
        for (auto i : order) {
            ids.push_back(market.institutions[i]);
            tier_of.push_back(market.tier_of[i]);
        }
        market.institutions = std::move(ids);
        market.tier_of = std::move(tier_of);
    }

    const std::size_t n = market.institutions.size();
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> lag(1, kMaxGraduationLag);

    std::vector<std::size_t> candidates;
    candidates.reserve(n);
    std::size_t person = 0;
    for (int year = spec.start_year; year <= spec.end_year; ++year) {
        for (std::size_t u = 0; u < n; ++u) {
            const std::size_t tier = market.tier_of[u];
            const double rate = spec.hire_rates.size() == 1 ? spec.hire_rates[0] : spec.hire_rates[tier];
            std::poisson_distribution<int> hires(rate);
            const int count = rate > 0.0 ? hires(rng) : 0;
            for (int h = 0; h < count; ++h) {
                std::string trainer;
                if (unit(rng) < spec.self_loop_probability) {
                    trainer = market.institutions[u];
                } else if (unit(rng) < spec.overseas_probability) {
                    trainer = std::string(ingest::kOverseasId);
                } else {
                    const bool upward_or_level = unit(rng) < spec.downward_bias || tier + 1 == tiers;
                    candidates.clear();
                    for (std::size_t v = 0; v < n; ++v) {
                        const bool eligible = upward_or_level ? market.tier_of[v] <= tier : market.tier_of[v] > tier;
                        if (v != u && eligible) {
                            candidates.push_back(v);
                        }
                    }
                    if (candidates.empty()) {
                        continue;
                    }
                    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
                    trainer = market.institutions[candidates[pick(rng)]];
                }
                char key[24];
                std::snprintf(key, sizeof key, "p%07zu", ++person);
                market.records.push_back(ingest::HireRecord{
                    key, std::move(trainer), market.institutions[u], year - lag(rng), year});
            }
        }
    }
    return market;
}

}  // namespace phdnet::graph
