#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phdnet/network.hpp"

namespace phdnet::centrality {

struct CentralityOptions {
    /// Stop once the L-infinity change between normalized iterates drops below
    /// this and the remaining error extrapolated from the contraction rate does too.
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
    /// Weight of a uniform teleport term; 0 is plain eigenvector centrality.
    double damping = 0.0;

    /// Throws ConfigError unless tolerance > 0, 0 <= damping < 1, max_iterations > 0.
    void validate() const;
};

struct CentralityResult {
    std::vector<std::string> nodes;
    std::vector<double> scores;  // max-normalized, index-aligned with nodes
    double dominant_value = 0.0;
    std::size_t iterations_used = 0;
    bool converged = false;

    [[nodiscard]] std::optional<double> score(std::string_view node) const;
};

/// Eigenvector centrality where a node's score accumulates over edges
/// pointing into it: lambda * x[j] = sum_i M[i][j] * x[i] with
/// M = (1 - d) W + d * (total_weight / n^2). Self-loops are ordinary edges.
///
/// The iteration runs on M^T + c I with c the current Rayleigh estimate,
/// which shares M^T's eigenvectors and removes the oscillation of periodic
/// graphs. An acyclic graph with d = 0 has a nilpotent matrix and no
/// dominant eigenvector; it is reported with converged = false and zero
/// scores. Without damping, nodes no cycle can reach score exactly 0. An all-zero network yields zero scores with converged = true.
CentralityResult eigenvector_centrality(const graph::ExchangeNetwork& network, const CentralityOptions& options = {});

/// Node ids by descending score; equal scores (to 12 decimals) fall back
/// to id order.
std::vector<std::string> ranking(const CentralityResult& result);

/// Scores of one shared node set at each cut point.
struct CentralitySeries {
    std::vector<std::string> nodes;
    std::vector<int> cut_points;
    std::vector<CentralityResult> columns;

    [[nodiscard]] double score(std::size_t node, std::size_t column) const { return columns[column].scores[node]; }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view node) const;
    /// Scores of one node across all cut points.
    [[nodiscard]] std::vector<double> row(std::size_t node) const;
};

/// Builds one network per cut point (cumulative by default) over the node set
/// of the whole record set and scores each. Nodes with no activity yet score 0.
CentralitySeries centrality_series(std::span<const ingest::HireRecord> records,
                                   const ingest::InstitutionRegistry& registry, std::span<const int> cut_points,
                                   const CentralityOptions& options = {},
                                   graph::SliceMode mode = graph::SliceMode::cumulative);

}  // namespace phdnet::centrality
