#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phdnet/ingest.hpp"

namespace phdnet::graph {

enum class SliceMode { windowed, cumulative };

SliceMode parse_slice_mode(std::string_view text);
std::string_view to_string(SliceMode mode);

/// Employment-year window. Cumulative windows ignore `start_year`.
struct Window {
    int start_year = ingest::kMinYear;
    int end_year = ingest::kMaxYear;
    SliceMode mode = SliceMode::cumulative;

    [[nodiscard]] bool contains(int year) const noexcept {
        return year <= end_year && (mode == SliceMode::cumulative || year >= start_year);
    }
    friend bool operator==(const Window&, const Window&) = default;
};

/// Which institutions become nodes of a built network.
enum class NodePolicy {
    by_mode,      // keep_all for cumulative windows, active_only for windowed ones
    keep_all,     // every institution in the record set
    active_only,  // only institutions with a hire inside the window
};

struct BuildOptions {
    NodePolicy nodes = NodePolicy::by_mode;
};

/// Weighted directed hiring network. weight(i, j) counts doctorates employer
/// i hired from trainer j; the diagonal holds self-hires. Nodes are sorted
/// lexicographically by canonical id.
class ExchangeNetwork {
public:
    ExchangeNetwork() = default;
    /// `weights` is row-major n*n. Throws ConfigError when nodes are not
    /// strictly increasing or the matrix has the wrong size.
    ExchangeNetwork(std::vector<std::string> nodes, std::vector<std::uint64_t> weights, Window window = {});

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] bool empty() const noexcept { return nodes_.empty(); }
    [[nodiscard]] const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const std::uint64_t> weights() const noexcept { return weights_; }
    [[nodiscard]] const Window& window() const noexcept { return window_; }

    [[nodiscard]] std::uint64_t weight(std::size_t employer, std::size_t trainer) const {
        return weights_[employer * nodes_.size() + trainer];
    }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view id) const;
    /// Total hires made by employer i (row sum).
    [[nodiscard]] std::uint64_t hires_by(std::size_t employer) const;
    [[nodiscard]] std::uint64_t total_weight() const;

    /// Equality on (nodes, weights); the window is metadata.
    friend bool operator==(const ExchangeNetwork& a, const ExchangeNetwork& b) {
        return a.nodes_ == b.nodes_ && a.weights_ == b.weights_;
    }

private:
    std::vector<std::string> nodes_;
    std::vector<std::uint64_t> weights_;
    Window window_;
};

/// Counts canonicalized, admitted records whose employment year falls in
/// `window`. Registry entries tagged kAlwaysIncludeTag are always nodes.
ExchangeNetwork build_network(std::span<const ingest::HireRecord> records, const ingest::InstitutionRegistry& registry,
                              const Window& window = {}, const BuildOptions& options = {});

/// Windowed: periods (first, b0], (b0, b1], ... where `first` is the earliest
/// employment year on record. Cumulative: one network per cut point.
/// Throws ConfigError unless boundaries are strictly increasing.
std::vector<ExchangeNetwork> slice(std::span<const ingest::HireRecord> records,
                                   const ingest::InstitutionRegistry& registry, std::span<const int> boundaries,
                                   SliceMode mode, const BuildOptions& options = {});

std::vector<Window> slice_windows(std::span<const ingest::HireRecord> records, std::span<const int> boundaries,
                                  SliceMode mode);

struct NetworkStats {
    std::size_t node_count = 0;
    std::size_t directed_edge_count = 0;  // ordered pairs with weight > 0, self-loops included
    std::uint64_t total_weight = 0;
    double mean_in_degree = 0.0;
    double mean_out_degree = 0.0;
    std::size_t isolated_node_count = 0;
    std::size_t self_loop_count = 0;
};

NetworkStats network_stats(const ExchangeNetwork& network);

enum class ExportFormat { edge_list, dot, graphml };

/// Accepts "csv"/"edges" (edge list), "dot", "graphml".
ExportFormat parse_export_format(std::string_view text);
std::string_view file_extension(ExportFormat format);

/// Edge list rows are `source,target,weight` with source = employer. Nodes
/// without any positive edge are written as `id,id,0` so the node set
/// survives a round trip.
std::string export_network(const ExchangeNetwork& network, ExportFormat format);

/// Reads the edge-list format back. Zero-weight rows only declare nodes;
/// repeated pairs accumulate. Throws DataError on malformed rows.
ExchangeNetwork import_edge_list(std::istream& in);

}  // namespace phdnet::graph
