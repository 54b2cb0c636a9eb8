#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "phdnet/centrality.hpp"
#include "phdnet/correlation.hpp"
#include "phdnet/ingest.hpp"
#include "phdnet/network.hpp"
#include "phdnet/predictors.hpp"
#include "phdnet/regression.hpp"

namespace phdnet::cli {

using nlohmann::json;

/// Hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Reads a whole file; throws DataError naming `role` when it cannot be opened.
std::string read_file(const std::filesystem::path& path, const std::string& role);

/// Collects output files in memory and writes them only on commit, each via
/// a temporary file renamed into place.
class OutputSet {
public:
    void add(std::string name, std::string content);
    void commit(const std::filesystem::path& dir) const;
    [[nodiscard]] const std::map<std::string, std::string>& files() const noexcept { return files_; }

private:
    std::map<std::string, std::string> files_;
};

std::string fixed(double value, int decimals);

json to_json(const ingest::IngestDiagnostics& d);
json to_json(const graph::Window& w);
json to_json(const graph::NetworkStats& s);
json to_json(const centrality::CentralityResult& r, bool with_scores);
json to_json(const stats::RegressionReport& r);
json to_json(const stats::CorrelationReport& r);

std::string centrality_csv(const centrality::CentralitySeries& series);
std::string regression_csv(const stats::RegressionReport& r);
std::string panel_csv(const stats::PredictorPanel& panel);
std::string network_json(const graph::ExchangeNetwork& network);

}  // namespace phdnet::cli
