#include "phdnet/predictors.hpp"

#include <algorithm>
#include <map>

#include "phdnet/error.hpp"

namespace phdnet::stats {

const std::vector<std::string>& PredictorPanel::labels() {
    static const std::vector<std::string> names = {"self_ratio", "overseas_ratio", "new_ratio", "n", "tspek_ratio"};
    return names;
}

std::vector<std::vector<double>> PredictorPanel::columns() const {
    std::vector<std::vector<double>> cols(labels().size());
    for (const auto& row : rows) {
        if (!row.tspek_ratio) {
            throw ConfigError("tspek_ratio needs registry entries tagged 'tsinghua' and 'peking'");
        }
        cols[0].push_back(row.self_ratio);
        cols[1].push_back(row.overseas_ratio);
        cols[2].push_back(row.new_ratio);
        cols[3].push_back(static_cast<double>(row.n));
        cols[4].push_back(*row.tspek_ratio);
    }
    return cols;
}

std::vector<std::string> elite_ids(const ingest::InstitutionRegistry& registry) {
    auto ids = registry.ids_with_tag("tsinghua");
    auto peking = registry.ids_with_tag("peking");
    if (ids.empty() || peking.empty()) {
        return {};
    }
    for (auto& id : peking) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            ids.push_back(std::move(id));
        }
    }
    return ids;
}

PredictorPanel compute_predictors(std::span<const ingest::HireRecord> records, const graph::ExchangeNetwork& network,
                                  std::span<const std::string> node_subset, int reference_year,
                                  std::span<const std::string> elite) {
    if (node_subset.empty()) {
        throw DimensionError("node subset is empty");
    }
    std::map<std::string, std::uint64_t> recent;
    for (const auto& r : records) {
        if (r.employment_year > reference_year - kRecentYears && r.employment_year <= reference_year &&
            network.window().contains(r.employment_year)) {
            ++recent[r.employer_unit];
        }
    }

    const auto overseas = network.index_of(ingest::kOverseasId);
    std::vector<std::size_t> elite_index;
    for (const auto& id : elite) {
        if (auto idx = network.index_of(id)) {
            elite_index.push_back(*idx);
        }
    }

    PredictorPanel panel;
    panel.reference_year = reference_year;
    for (const auto& node : node_subset) {
        PredictorRow row;
        row.node = node;
        if (!elite.empty()) {
            row.tspek_ratio = 0.0;
        }
        const auto u = network.index_of(node);
        const std::uint64_t total = u ? network.hires_by(*u) : 0;
        row.n = total;
        if (total > 0) {
            const auto t = static_cast<double>(total);
            row.self_ratio = static_cast<double>(network.weight(*u, *u)) / t;
            row.overseas_ratio = overseas ? static_cast<double>(network.weight(*u, *overseas)) / t : 0.0;
            const auto it = recent.find(node);
            row.new_ratio = it == recent.end() ? 0.0 : static_cast<double>(it->second) / t;
            if (row.tspek_ratio) {
                std::uint64_t from_elite = 0;
                for (auto e : elite_index) {
                    from_elite += network.weight(*u, e);
                }
                row.tspek_ratio = static_cast<double>(from_elite) / t;
            }
        }
        panel.rows.push_back(std::move(row));
    }
    return panel;
}

}  // namespace phdnet::stats
