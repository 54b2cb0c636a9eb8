#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"
#include "phdnet/network.hpp"

namespace phdnet::graph {

namespace {

std::string dot_quote(std::string_view id) {
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::vector<bool> has_edge(const ExchangeNetwork& g) {
    std::vector<bool> touched(g.size(), false);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g.weight(i, j) > 0) {
                touched[i] = touched[j] = true;
            }
        }
    }
    return touched;
}

std::string edge_list(const ExchangeNetwork& g) {
    std::ostringstream out;
    out << "source,target,weight\n";
    const auto touched = has_edge(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& src = g.nodes()[i];
        if (!touched[i]) {
            out << csv::escape_field(src) << ',' << csv::escape_field(src) << ",0\n";
            continue;
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (const auto w = g.weight(i, j); w > 0) {
                out << csv::escape_field(src) << ',' << csv::escape_field(g.nodes()[j]) << ',' << w << '\n';
            }
        }
    }
    return out.str();
}

std::string dot(const ExchangeNetwork& g) {
    std::ostringstream out;
    out << "digraph exchange {\n";
    for (const auto& id : g.nodes()) {
        out << "  " << dot_quote(id) << ";\n";
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (const auto w = g.weight(i, j); w > 0) {
                out << "  " << dot_quote(g.nodes()[i]) << " -> " << dot_quote(g.nodes()[j]) << " [weight=" << w
                    << "];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

std::string graphml(const ExchangeNetwork& g) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
        << "  <graph id=\"exchange\" edgedefault=\"directed\">\n";
    for (const auto& id : g.nodes()) {
        out << "    <node id=\"" << xml_escape(id) << "\"/>\n";
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (const auto w = g.weight(i, j); w > 0) {
                out << "    <edge source=\"" << xml_escape(g.nodes()[i]) << "\" target=\""
                    << xml_escape(g.nodes()[j]) << "\"><data key=\"weight\">" << w << "</data></edge>\n";
            }
        }
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

}  // namespace

ExportFormat parse_export_format(std::string_view text) {
    if (text == "csv" || text == "edges") {
        return ExportFormat::edge_list;
    }
    if (text == "dot") {
        return ExportFormat::dot;
    }
    if (text == "graphml") {
        return ExportFormat::graphml;
    }
    throw ConfigError("unknown export format '" + std::string(text) + "' (expected csv, dot or graphml)");
}

std::string_view file_extension(ExportFormat format) {
    switch (format) {
        case ExportFormat::edge_list: return ".csv";
        case ExportFormat::dot: return ".dot";
        case ExportFormat::graphml: return ".graphml";
    }
    return "";
}

std::string export_network(const ExchangeNetwork& network, ExportFormat format) {
    switch (format) {
        case ExportFormat::edge_list: return edge_list(network);
        case ExportFormat::dot: return dot(network);
        case ExportFormat::graphml: return graphml(network);
    }
    throw ConfigError("unsupported export format");
}

ExchangeNetwork import_edge_list(std::istream& in) {
    if (!in) {
        throw DataError("edge list stream is not readable");
    }
    csv::Reader reader(in, ',', true);
    const auto header = reader.next();
    if (!header) {
        return {};
    }
    if (header->size() < 3 || csv::trim((*header)[0]) != "source" || csv::trim((*header)[1]) != "target" ||
        csv::trim((*header)[2]) != "weight") {
        throw DataError("edge list header must be 'source,target,weight'");
    }

    std::set<std::string> ids;
    std::map<std::pair<std::string, std::string>, std::uint64_t> edges;
    while (auto row = reader.next()) {
        if (row->size() != 3) {
            throw DataError("edge list line " + std::to_string(reader.line_number()) + ": expected 3 fields");
        }
        const auto src = csv::trim((*row)[0]);
        const auto dst = csv::trim((*row)[1]);
        const auto w_text = csv::trim((*row)[2]);
        std::uint64_t w = 0;
        const auto* end = w_text.data() + w_text.size();
        const auto [ptr, ec] = std::from_chars(w_text.data(), end, w);
        if (src.empty() || dst.empty() || w_text.empty() || ec != std::errc{} || ptr != end) {
            throw DataError("edge list line " + std::to_string(reader.line_number()) + ": malformed row");
        }
        ids.insert(src);
        ids.insert(dst);
        if (w > 0) {
            edges[{src, dst}] += w;
        }
    }

    std::vector<std::string> nodes(ids.begin(), ids.end());
    const std::size_t n = nodes.size();
    std::vector<std::uint64_t> weights(n * n, 0);
    auto index = [&](const std::string& id) {
        return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    };
    for (const auto& [key, w] : edges) {
        weights[index(key.first) * n + index(key.second)] = w;
    }
    return ExchangeNetwork(std::move(nodes), std::move(weights));
}

}  // namespace phdnet::graph
