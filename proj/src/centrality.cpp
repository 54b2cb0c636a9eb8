#include "phdnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phdnet/error.hpp"

namespace phdnet::centrality {

namespace {

/// Peels nodes whose in-edges all come from already peeled nodes (Kahn's
/// algorithm on the vote direction). What remains is every node on a cycle,
/// self-loops included, plus everything a cycle votes for. Peeled nodes have
/// an exact zero in the dominant eigenvector of W^T.
std::vector<bool> unreachable_from_cycles(const graph::ExchangeNetwork& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> in_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.weight(i, j) > 0) {
                ++in_degree[j];
            }
        }
    }
    std::vector<bool> peeled(n, false);
    std::vector<std::size_t> ready;
    for (std::size_t j = 0; j < n; ++j) {
        if (in_degree[j] == 0) {
            ready.push_back(j);
        }
    }
    while (!ready.empty()) {
        const auto i = ready.back();
        ready.pop_back();
        peeled[i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (g.weight(i, j) > 0 && --in_degree[j] == 0) {
                ready.push_back(j);
            }
        }
    }
    return peeled;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

void CentralityOptions::validate() const {
    if (!(tolerance > 0.0)) {
        throw ConfigError("centrality tolerance must be positive");
    }
    if (!(damping >= 0.0 && damping < 1.0)) {
        throw ConfigError("damping must lie in [0, 1)");
    }
    if (max_iterations == 0) {
        throw ConfigError("max_iterations must be positive");
    }
}

std::optional<double> CentralityResult::score(std::string_view node) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) {
        return std::nullopt;
    }
    return scores[static_cast<std::size_t>(it - nodes.begin())];
}

CentralityResult eigenvector_centrality(const graph::ExchangeNetwork& network, const CentralityOptions& options) {
    options.validate();
    const std::size_t n = network.size();
    CentralityResult result;
    result.nodes = network.nodes();
    result.scores.assign(n, 0.0);

    const auto total = network.total_weight();
    if (n == 0 || total == 0) {
        result.converged = true;
        return result;
    }
    std::vector<double> x(n, 1.0);
    if (options.damping == 0.0) {
        const auto peeled = unreachable_from_cycles(network);
        if (std::all_of(peeled.begin(), peeled.end(), [](bool p) { return p; })) {
            return result;  // nilpotent
        }
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = peeled[j] ? 0.0 : 1.0;
        }
    }

    // Column-major copy of M so that (M^T x)[j] reads column j contiguously.
    const double keep = 1.0 - options.damping;
    const double teleport = options.damping * static_cast<double>(total) / static_cast<double>(n * n);
    std::vector<double> columns(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            columns[j * n + i] = keep * static_cast<double>(network.weight(i, j)) + teleport;
        }
    }
    auto multiply_transpose = [&](std::span<const double> x, std::span<double> out) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = dot({columns.data() + j * n, n}, x);
        }
    };

    std::vector<double> z(n);
    std::vector<double> next(n);
    double lambda = 0.0;
    double previous_change = 0.0;
    for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
        multiply_transpose(x, z);
        lambda = dot(x, z) / dot(x, x);
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = z[j] + lambda * x[j];
            norm = std::max(norm, std::abs(next[j]));
        }
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] /= norm;
            change = std::max(change, std::abs(next[j] - x[j]));
        }
        x.swap(next);
        result.iterations_used = iter;
        // Geometric convergence leaves roughly change * rho / (1 - rho) to go,
        // with rho estimated from successive changes.
        const double rho = previous_change > 0.0 ? change / previous_change : 1.0;
        previous_change = change;
        const bool settled = change <= 64 * std::numeric_limits<double>::epsilon() ||
                             (rho < 1.0 && change * rho / (1.0 - rho) < options.tolerance);
        if (change < options.tolerance && settled) {
            result.converged = true;
            break;
        }
    }

    multiply_transpose(x, z);
    result.dominant_value = dot(x, z) / dot(x, x);
    const double top = *std::max_element(x.begin(), x.end());
    for (std::size_t j = 0; j < n; ++j) {
        result.scores[j] = std::max(0.0, x[j] / top);
    }
    return result;
}

std::vector<std::string> ranking(const CentralityResult& result) {
    std::vector<std::size_t> order(result.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    auto key = [&](std::size_t i) { return std::llround(result.scores[i] * 1e12); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ka = key(a);
        const auto kb = key(b);
        return ka != kb ? ka > kb : result.nodes[a] < result.nodes[b];
    });
    std::vector<std::string> ids;
    ids.reserve(order.size());
    for (auto i : order) {
        ids.push_back(result.nodes[i]);
    }
    return ids;
}

std::optional<std::size_t> CentralitySeries::index_of(std::string_view node) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || *it != node) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - nodes.begin());
}

std::vector<double> CentralitySeries::row(std::size_t node) const {
    std::vector<double> out;
    out.reserve(columns.size());
    for (const auto& c : columns) {
        out.push_back(c.scores[node]);
    }
    return out;
}

CentralitySeries centrality_series(std::span<const ingest::HireRecord> records,
                                   const ingest::InstitutionRegistry& registry, std::span<const int> cut_points,
                                   const CentralityOptions& options, graph::SliceMode mode) {
    options.validate();
    const auto networks =
        graph::slice(records, registry, cut_points, mode, graph::BuildOptions{graph::NodePolicy::keep_all});
    CentralitySeries series;
    series.cut_points.assign(cut_points.begin(), cut_points.end());
    series.nodes = networks.front().nodes();
    series.columns.resize(networks.size());
    for (std::size_t c = 0; c < networks.size(); ++c) {
        series.columns[c] = eigenvector_centrality(networks[c], options);
    }
    return series;
}

}  // namespace phdnet::centrality
