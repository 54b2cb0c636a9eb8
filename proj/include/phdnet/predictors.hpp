#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phdnet/ingest.hpp"
#include "phdnet/network.hpp"

namespace phdnet::stats {

/// Hiring profile of one employer. Ratios share the employer's total hires
/// T(u) as denominator and are 0 when T(u) = 0.
struct PredictorRow {
    std::string node;
    double self_ratio = 0.0;
    double overseas_ratio = 0.0;
    double new_ratio = 0.0;  // hires with employment year in (reference - 5, reference]
    std::uint64_t n = 0;     // T(u)
    /// Hires from the tsinghua/peking tagged nodes; absent when no node carries those tags.
    std::optional<double> tspek_ratio;
};

struct PredictorPanel {
    std::vector<PredictorRow> rows;
    int reference_year = 0;

    static const std::vector<std::string>& labels();
    /// Predictor columns in labels() order. Throws ConfigError when the
    /// Tsinghua-Peking ratio could not be computed.
    [[nodiscard]] std::vector<std::vector<double>> columns() const;
};

inline constexpr int kRecentYears = 5;

/// Ids tagged "tsinghua" or "peking"; empty unless both tags are present.
std::vector<std::string> elite_ids(const ingest::InstitutionRegistry& registry);

/// Panel rows follow `node_subset` order. `network` should cover the full
/// record range; `records` must be the canonical records it was built from.
PredictorPanel compute_predictors(std::span<const ingest::HireRecord> records, const graph::ExchangeNetwork& network,
                                  std::span<const std::string> node_subset, int reference_year,
                                  std::span<const std::string> elite);

}  // namespace phdnet::stats
