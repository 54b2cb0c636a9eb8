#include "report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"

namespace phdnet::cli {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path, const std::string& role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + role + " file '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sha256_file(const fs::path& path) {
    const auto bytes = read_file(path, "input");
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw DataError("sha256 failed for '" + path.string() + "'");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

void OutputSet::add(std::string name, std::string content) {
    files_[std::move(name)] = std::move(content);
}

void OutputSet::commit(const fs::path& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    for (const auto& [name, content] : files_) {
        const auto target = dir / name;
        auto tmp = target;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            if (!out) {
                throw DataError("cannot write '" + tmp.string() + "'");
            }
        }
        fs::rename(tmp, target, ec);
        if (ec) {
            throw DataError("cannot move '" + tmp.string() + "' into place: " + ec.message());
        }
    }
}

std::string fixed(double value, int decimals) {
    if (std::isnan(value)) {
        return "NaN";
    }
    if (std::isinf(value)) {
        return value > 0 ? "Inf" : "-Inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    // "-0.000" reads as a sign error in tables.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

json to_json(const ingest::IngestDiagnostics& d) {
    json rejected = json::array();
    for (const auto& r : d.rejected) {
        rejected.push_back({{"row_index", r.row_index}, {"reason", r.reason}});
    }
    return {{"total_rows", d.total_rows},
            {"admitted", d.admitted},
            {"deduplicated", d.deduplicated},
            {"rejected", rejected},
            {"unregistered", d.unregistered}};
}

json to_json(const graph::Window& w) {
    json j{{"end_year", w.end_year}, {"mode", graph::to_string(w.mode)}};
    if (w.mode == graph::SliceMode::windowed) {
        j["start_year"] = w.start_year;
    }
    return j;
}

json to_json(const graph::NetworkStats& s) {
    return {{"node_count", s.node_count},
            {"directed_edge_count", s.directed_edge_count},
            {"total_weight", s.total_weight},
            {"mean_in_degree", s.mean_in_degree},
            {"mean_out_degree", s.mean_out_degree},
            {"isolated_node_count", s.isolated_node_count},
            {"self_loop_count", s.self_loop_count}};
}

json to_json(const centrality::CentralityResult& r, bool with_scores) {
    json j{{"converged", r.converged}, {"dominant_value", r.dominant_value}, {"iterations_used", r.iterations_used}};
    if (with_scores) {
        json scores = json::object();
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            scores[r.nodes[i]] = r.scores[i];
        }
        j["scores"] = std::move(scores);
    }
    return j;
}

namespace {

json coefficient_json(const stats::Coefficient& c) {
    json j{{"term", c.label}, {"B", c.b}, {"SE", c.std_error}, {"t", c.t}, {"p", c.p}};
    j["Beta"] = c.beta ? json(*c.beta) : json(nullptr);
    j["VIF"] = c.vif ? json(*c.vif) : json(nullptr);
    return j;
}

}  // namespace

json to_json(const stats::RegressionReport& r) {
    json coefficients = json::array();
    coefficients.push_back(coefficient_json(r.intercept));
    for (const auto& c : r.predictors) {
        coefficients.push_back(coefficient_json(c));
    }
    json j{{"n", r.n},
           {"coefficients", coefficients},
           {"R2", r.r_squared},
           {"adj_R2", r.adj_r_squared},
           {"F", r.f_statistic},
           {"F_df", {r.df_model, r.df_residual}},
           {"F_p", r.f_p}};
    j["DW"] = r.durbin_watson ? json(*r.durbin_watson) : json(nullptr);
    return j;
}

json to_json(const stats::CorrelationReport& r) {
    return {{"r", r.r}, {"n", r.n}, {"t", r.t}, {"p", r.p}};
}

std::string centrality_csv(const centrality::CentralitySeries& series) {
    std::ostringstream out;
    out << "node";
    for (int year : series.cut_points) {
        out << ",ec_" << year;
    }
    out << '\n';
    for (std::size_t i = 0; i < series.nodes.size(); ++i) {
        out << csv::escape_field(series.nodes[i]);
        for (std::size_t c = 0; c < series.columns.size(); ++c) {
            out << ',' << fixed(series.score(i, c), 4);
        }
        out << '\n';
    }
    return out.str();
}

std::string regression_csv(const stats::RegressionReport& r) {
    std::ostringstream out;
    out << "term,B,SE,Beta,t,p,VIF,R2,adj_R2,F,F_df,F_p,DW,n\n";
    auto optional = [](const std::optional<double>& v) { return v ? fixed(*v, 3) : std::string{}; };
    auto row = [&](const stats::Coefficient& c, bool model) {
        out << csv::escape_field(c.label) << ',' << fixed(c.b, 3) << ',' << fixed(c.std_error, 3) << ','
            << optional(c.beta) << ',' << fixed(c.t, 3) << ',' << fixed(c.p, 3) << ',' << optional(c.vif);
        if (model) {
            out << ',' << fixed(r.r_squared, 3) << ',' << fixed(r.adj_r_squared, 3) << ',' << fixed(r.f_statistic, 3)
                << ",\"(" << r.df_model << ',' << r.df_residual << ")\"," << fixed(r.f_p, 3) << ','
                << optional(r.durbin_watson) << ',' << r.n;
        } else {
            out << ",,,,,,,";
        }
        out << '\n';
    };
    row(r.intercept, true);
    for (const auto& c : r.predictors) {
        row(c, false);
    }
    return out.str();
}

std::string panel_csv(const stats::PredictorPanel& panel) {
    std::ostringstream out;
    out << "node";
    for (const auto& label : stats::PredictorPanel::labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (const auto& row : panel.rows) {
        out << csv::escape_field(row.node) << ',' << fixed(row.self_ratio, 6) << ',' << fixed(row.overseas_ratio, 6)
            << ',' << fixed(row.new_ratio, 6) << ',' << row.n << ','
            << (row.tspek_ratio ? fixed(*row.tspek_ratio, 6) : std::string{}) << '\n';
    }
    return out.str();
}

std::string network_json(const graph::ExchangeNetwork& network) {
    json edges = json::array();
    for (std::size_t i = 0; i < network.size(); ++i) {
        for (std::size_t j = 0; j < network.size(); ++j) {
            if (const auto w = network.weight(i, j); w > 0) {
                edges.push_back({{"source", network.nodes()[i]}, {"target", network.nodes()[j]}, {"weight", w}});
            }
        }
    }
    json j{{"directed", true}, {"nodes", network.nodes()}, {"edges", edges}, {"window", to_json(network.window())}};
    return j.dump(2) + "\n";
}

}  // namespace phdnet::cli
