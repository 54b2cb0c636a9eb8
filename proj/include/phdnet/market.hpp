#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phdnet/ingest.hpp"

namespace phdnet::graph {

/// Parameters of a synthetic tiered academic labour market. Tier 0 is the
/// most prestigious. Each year every institution in tier t makes
/// Poisson(hire_rates[t]) hires.
struct MarketSpec {
    std::vector<std::size_t> tier_sizes;
    /// One rate per tier, or a single rate shared by all tiers.
    std::vector<double> hire_rates{1.0};
    /// Probability a domestic hire comes from the same or a higher tier.
    double downward_bias = 0.9;
    double self_loop_probability = 0.05;
    double overseas_probability = 0.05;
    int start_year = 2000;
    int end_year = 2021;
    std::uint64_t seed = 1;
};

struct SyntheticMarket {
    std::vector<ingest::HireRecord> records;
    /// Domestic institution ids, sorted; tier_of is index-aligned.
    std::vector<std::string> institutions;
    std::vector<std::size_t> tier_of;

    /// Registry for the generated ids. The first two tier-0 institutions
    /// carry the "tsinghua" and "peking" tags.
    [[nodiscard]] ingest::InstitutionRegistry registry() const;
};

/// Deterministic for a fixed spec. Each hire is a self-hire with
/// self_loop_probability, otherwise an overseas hire with
/// overseas_probability, otherwise a domestic hire whose trainer is drawn
/// uniformly from the other institutions in tiers <= t (probability
/// downward_bias) or in tiers > t. Every record satisfies the strict year
/// rule. Throws ConfigError on an invalid spec.
SyntheticMarket synthesize_market(const MarketSpec& spec);

}  // namespace phdnet::graph
