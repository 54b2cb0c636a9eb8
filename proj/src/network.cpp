#include "phdnet/network.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "phdnet/error.hpp"

namespace phdnet::graph {

SliceMode parse_slice_mode(std::string_view text) {
    if (text == "windowed") {
        return SliceMode::windowed;
    }
    if (text == "cumulative") {
        return SliceMode::cumulative;
    }
    throw ConfigError("unknown slice mode '" + std::string(text) + "' (expected windowed or cumulative)");
}

std::string_view to_string(SliceMode mode) {
    return mode == SliceMode::windowed ? "windowed" : "cumulative";
}

ExchangeNetwork::ExchangeNetwork(std::vector<std::string> nodes, std::vector<std::uint64_t> weights, Window window)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), window_(window) {
    if (weights_.size() != nodes_.size() * nodes_.size()) {
        throw ConfigError("weight matrix size does not match node count");
    }
    if (std::adjacent_find(nodes_.begin(), nodes_.end(), std::greater_equal<>{}) != nodes_.end()) {
        throw ConfigError("network nodes must be unique and sorted");
    }
}

std::optional<std::size_t> ExchangeNetwork::index_of(std::string_view id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::uint64_t ExchangeNetwork::hires_by(std::size_t employer) const {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        sum += weight(employer, j);
    }
    return sum;
}

std::uint64_t ExchangeNetwork::total_weight() const {
    std::uint64_t sum = 0;
    for (auto w : weights_) {
        sum += w;
    }
    return sum;
}

ExchangeNetwork build_network(std::span<const ingest::HireRecord> records, const ingest::InstitutionRegistry& registry,
                              const Window& window, const BuildOptions& options) {
    if (window.start_year > window.end_year) {
        throw ConfigError("window start " + std::to_string(window.start_year) + " is after end " +
                          std::to_string(window.end_year));
    }
    const bool keep_all = options.nodes == NodePolicy::keep_all ||
                          (options.nodes == NodePolicy::by_mode && window.mode == SliceMode::cumulative);

    std::set<std::string> ids;
    for (const auto& e : registry.entries()) {
        if (e.tags.contains(std::string(ingest::kAlwaysIncludeTag))) {
            ids.insert(e.is_overseas ? std::string(ingest::kOverseasId) : e.canonical_id);
        }
    }
    for (const auto& r : records) {
        if (keep_all || window.contains(r.employment_year)) {
            ids.insert(r.employer_unit);
            ids.insert(r.degree_unit);
        }
    }

    std::vector<std::string> nodes(ids.begin(), ids.end());
    const std::size_t n = nodes.size();
    std::vector<std::uint64_t> weights(n * n, 0);
    auto index = [&](const std::string& id) {
        return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    };
    for (const auto& r : records) {
        if (window.contains(r.employment_year)) {
            ++weights[index(r.employer_unit) * n + index(r.degree_unit)];
        }
    }
    return ExchangeNetwork(std::move(nodes), std::move(weights), window);
}

std::vector<Window> slice_windows(std::span<const ingest::HireRecord> records, std::span<const int> boundaries,
                                  SliceMode mode) {
    if (boundaries.empty()) {
        throw ConfigError("at least one slice boundary is required");
    }
    if (std::adjacent_find(boundaries.begin(), boundaries.end(), std::greater_equal<>{}) != boundaries.end()) {
        throw ConfigError("slice boundaries must be strictly increasing");
    }
    int first = boundaries.front();
    for (const auto& r : records) {
        first = std::min(first, r.employment_year);
    }

    std::vector<Window> windows;
    int start = first;
    for (int b : boundaries) {
        windows.push_back(Window{mode == SliceMode::windowed ? start : first, b, mode});
        start = b + 1;
    }
    return windows;
}

std::vector<ExchangeNetwork> slice(std::span<const ingest::HireRecord> records,
                                   const ingest::InstitutionRegistry& registry, std::span<const int> boundaries,
                                   SliceMode mode, const BuildOptions& options) {
    std::vector<ExchangeNetwork> out;
    for (const auto& w : slice_windows(records, boundaries, mode)) {
        out.push_back(build_network(records, registry, w, options));
    }
    return out;
}

NetworkStats network_stats(const ExchangeNetwork& network) {
    NetworkStats s;
    const std::size_t n = network.size();
    s.node_count = n;
    std::vector<std::size_t> in_degree(n, 0);
    std::vector<std::size_t> out_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = network.weight(i, j);
            if (w == 0) {
                continue;
            }
            s.total_weight += w;
            ++s.directed_edge_count;
            ++out_degree[i];
            ++in_degree[j];
            if (i == j) {
                ++s.self_loop_count;
            }
        }
    }
    std::size_t in_sum = 0;
    std::size_t out_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        in_sum += in_degree[i];
        out_sum += out_degree[i];
        if (in_degree[i] == 0 && out_degree[i] == 0) {
            ++s.isolated_node_count;
        }
    }
    if (n > 0) {
        s.mean_in_degree = static_cast<double>(in_sum) / static_cast<double>(n);
        s.mean_out_degree = static_cast<double>(out_sum) / static_cast<double>(n);
    }
    return s;
}

}  // namespace phdnet::graph
