#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "phdnet/centrality.hpp"
#include "phdnet/cli.hpp"
#include "phdnet/correlation.hpp"
#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"
#include "phdnet/grades.hpp"
#include "phdnet/ingest.hpp"
#include "phdnet/market.hpp"
#include "phdnet/network.hpp"
#include "phdnet/predictors.hpp"
#include "phdnet/regression.hpp"
#include "phdnet/series.hpp"
#include "report_io.hpp"

namespace phdnet::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string command;
    std::string records;
    std::string registry;
    std::string out;
    std::string subset;
    std::string validation;
    std::string year_rule = "strict";
    std::vector<int> boundaries{2000, 2007, 2014, 2021};
    std::string mode = "cumulative";
    double damping = 0.0;
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
    int reference_year = 2021;
    std::size_t trend_window = 2;
    std::uint64_t seed = 1;
    std::vector<std::string> formats;
    char delimiter = ',';
    // validate
    int round3_year = 2014;
    int round4_year = 2021;
    // synth
    std::vector<std::size_t> tiers{5, 10, 20, 40};
    std::vector<double> rates{1.0, 2.0, 3.0, 4.0};
    double bias = 0.9;
    double self_loop = 0.05;
    double overseas = 0.05;
    int start_year = 2000;
    int end_year = 2021;
    // export
    std::optional<int> window_start;
    std::optional<int> window_end;

    [[nodiscard]] centrality::CentralityOptions centrality() const {
        centrality::CentralityOptions o;
        o.damping = damping;
        o.tolerance = tolerance;
        o.max_iterations = max_iterations;
        o.validate();
        return o;
    }
};

struct Input {
    std::string role;
    std::string path;
};

class Command {
public:
    Command(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    void ingest();
    void analyze();
    void regress();
    void validate();
    void synth();
    void export_network();

private:
    const std::string& require(const std::string& value, const char* flag) const {
        if (value.empty()) {
            throw ConfigError(std::string(flag) + " is required for '" + cfg_.command + "'");
        }
        return value;
    }

    const ingest::InstitutionRegistry& registry() {
        if (!registry_) {
            if (cfg_.registry.empty()) {
                registry_.emplace();
            } else {
                inputs_.push_back({"registry", cfg_.registry});
                std::istringstream in(read_file(cfg_.registry, "registry"));
                registry_ = ingest::InstitutionRegistry::load_csv(in);
            }
        }
        return *registry_;
    }

    ingest::IngestResult load_records() {
        const auto& path = require(cfg_.records, "--records");
        const auto& reg = registry();
        inputs_.push_back({"records", path});
        std::istringstream in(read_file(path, "records"));
        ingest::Schema schema;
        schema.delimiter = cfg_.delimiter;
        return ingest::ingest(in, reg, ingest::parse_year_rule(cfg_.year_rule), schema);
    }

    json provenance() const {
        json inputs = json::array();
        for (const auto& in : inputs_) {
            inputs.push_back({{"role", in.role}, {"path", in.path}, {"sha256", sha256_file(in.path)}});
        }
        json config{{"year_rule", cfg_.year_rule},
                    {"boundaries", cfg_.boundaries},
                    {"mode", cfg_.mode},
                    {"damping", cfg_.damping},
                    {"tolerance", cfg_.tolerance},
                    {"max_iterations", cfg_.max_iterations},
                    {"reference_year", cfg_.reference_year},
                    {"trend_window", cfg_.trend_window},
                    {"seed", cfg_.seed},
                    {"formats", cfg_.formats}};
        return {{"tool", "phdnet"}, {"version", kVersion}, {"command", cfg_.command}, {"inputs", inputs},
                {"config", config}};
    }

    void add_json(const std::string& name, json body) {
        body["provenance"] = provenance();
        outputs_.add(name, body.dump(2) + "\n");
    }

    void commit() {
        outputs_.add("provenance.json", provenance().dump(2) + "\n");
        outputs_.commit(require(cfg_.out, "--out"));
    }

    bool wants(const std::string& format) const {
        return std::find(cfg_.formats.begin(), cfg_.formats.end(), format) != cfg_.formats.end();
    }

    void add_network_exports(const graph::ExchangeNetwork& network, const std::string& stem,
                             const std::vector<std::string>& formats) {
        for (const auto& f : formats) {
            if (f == "json") {
                outputs_.add(stem + ".json", network_json(network));
                continue;
            }
            const auto format = graph::parse_export_format(f);
            outputs_.add(stem + std::string(graph::file_extension(format)), graph::export_network(network, format));
        }
    }

    void warn_unconverged(const centrality::CentralityResult& r, const std::string& what) {
        if (!r.converged) {
            err_ << "warning: centrality for " << what << " did not converge after " << r.iterations_used
                 << " iterations\n";
        }
    }

    std::vector<std::string> read_subset() {
        const auto& path = require(cfg_.subset, "--subset");
        inputs_.push_back({"subset", path});
        std::istringstream in(read_file(path, "subset"));
        std::vector<std::string> nodes;
        std::set<std::string> seen;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            auto name = csv::trim(line);
            if (name.empty() || name.front() == '#') {
                continue;
            }
            if (first && name == "node") {
                first = false;
                continue;
            }
            first = false;
            auto id = registry().resolve(name).value_or(name);
            if (seen.insert(id).second) {
                nodes.push_back(std::move(id));
            }
        }
        return nodes;
    }

    const RunConfig& cfg_;
    std::ostream& out_;
    std::ostream& err_;
    std::optional<ingest::InstitutionRegistry> registry_;
    std::vector<Input> inputs_;
    OutputSet outputs_;
};

void Command::ingest() {
    require(cfg_.out, "--out");
    const auto result = load_records();
    add_json("diagnostics.json", to_json(result.diagnostics));
    std::ostringstream records;
    ingest::write_records_csv(records, result.records);
    outputs_.add("records.csv", records.str());
    commit();
    const auto& d = result.diagnostics;
    out_ << "rows " << d.total_rows << ", admitted " << d.admitted << ", rejected " << d.rejected.size()
         << ", deduplicated " << d.deduplicated << ", unregistered names " << d.unregistered.size() << '\n';
}

void Command::analyze() {
    require(cfg_.out, "--out");
    const auto options = cfg_.centrality();
    const auto mode = graph::parse_slice_mode(cfg_.mode);
    const auto data = load_records();
    const auto& reg = registry();
    const auto formats = cfg_.formats.empty() ? std::vector<std::string>{"csv"} : cfg_.formats;

    const auto whole = graph::build_network(data.records, reg);
    const auto windows = graph::slice_windows(data.records, cfg_.boundaries, graph::SliceMode::windowed);
    json slices = json::array();
    for (const auto& w : windows) {
        const auto net = graph::build_network(data.records, reg, w);
        slices.push_back({{"window", to_json(w)}, {"stats", to_json(graph::network_stats(net))}});
        add_network_exports(net, "network_" + std::to_string(w.start_year) + "_" + std::to_string(w.end_year),
                            formats);
    }
    add_network_exports(whole, "network_all", formats);
    add_json("stats.json", {{"whole", {{"window", to_json(whole.window())},
                                       {"stats", to_json(graph::network_stats(whole))}}},
                            {"slices", slices},
                            {"ingest", to_json(data.diagnostics)}});

    const auto series = centrality::centrality_series(data.records, reg, cfg_.boundaries, options, mode);
    const auto overall = centrality::eigenvector_centrality(whole, options);
    warn_unconverged(overall, "the whole network");
    json columns = json::array();
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        warn_unconverged(series.columns[c], "cut point " + std::to_string(series.cut_points[c]));
        auto col = to_json(series.columns[c], false);
        col["cut_point"] = series.cut_points[c];
        columns.push_back(std::move(col));
    }
    json scores = json::object();
    for (std::size_t i = 0; i < series.nodes.size(); ++i) {
        scores[series.nodes[i]] = series.row(i);
    }
    add_json("centrality.json", {{"mode", cfg_.mode},
                                 {"cut_points", series.cut_points},
                                 {"columns", columns},
                                 {"scores", scores},
                                 {"whole", to_json(overall, true)}});
    outputs_.add("centrality.csv", centrality_csv(series));
    commit();
    out_ << "nodes " << whole.size() << ", hires " << whole.total_weight() << ", slices " << windows.size() << '\n';
}

void Command::regress() {
    require(cfg_.out, "--out");
    const auto options = cfg_.centrality();
    const auto mode = graph::parse_slice_mode(cfg_.mode);
    const auto data = load_records();
    const auto& reg = registry();
    const auto subset = read_subset();

    const auto whole = graph::build_network(data.records, reg);
    const auto overall = centrality::eigenvector_centrality(whole, options);
    warn_unconverged(overall, "the whole network");
    const auto panel = stats::compute_predictors(data.records, whole, subset, cfg_.reference_year,
                                                 stats::elite_ids(reg));
    const auto columns = panel.columns();

    std::vector<double> levels;
    for (const auto& node : subset) {
        levels.push_back(overall.score(node).value_or(0.0));
    }
    const auto level_report = stats::ols_fit(columns, levels, stats::PredictorPanel::labels());

    const auto series = centrality::centrality_series(data.records, reg, cfg_.boundaries, options, mode);
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        warn_unconverged(series.columns[c], "cut point " + std::to_string(series.cut_points[c]));
    }
    std::vector<double> trends;
    for (const auto& node : subset) {
        const auto idx = series.index_of(node);
        const auto row = idx ? series.row(*idx) : std::vector<double>(series.cut_points.size(), 0.0);
        trends.push_back(stats::trend_statistic(row, cfg_.trend_window));
    }
    const auto trend_report = stats::ols_fit(columns, trends, stats::PredictorPanel::labels());

    const bool csv_out = cfg_.formats.empty() || wants("csv");
    const bool json_out = cfg_.formats.empty() || wants("json");
    outputs_.add("panel.csv", panel_csv(panel));
    if (json_out) {
        add_json("regression_levels.json", {{"dependent", "ec_all"}, {"report", to_json(level_report)}});
        add_json("regression_trend.json", {{"dependent", "ec_trend"},
                                           {"trend_window", cfg_.trend_window},
                                           {"report", to_json(trend_report)}});
    }
    if (csv_out) {
        outputs_.add("regression_levels.csv", regression_csv(level_report));
        outputs_.add("regression_trend.csv", regression_csv(trend_report));
    }
    commit();
    out_ << "levels: R2 " << fixed(level_report.r_squared, 3) << ", F(" << level_report.df_model << ','
         << level_report.df_residual << ")=" << fixed(level_report.f_statistic, 3) << "; trend: R2 "
         << fixed(trend_report.r_squared, 3) << '\n';
}

void Command::validate() {
    require(cfg_.out, "--out");
    const auto options = cfg_.centrality();
    const auto mode = graph::parse_slice_mode(cfg_.mode);
    const auto data = load_records();
    const auto& reg = registry();
    const auto& path = require(cfg_.validation, "--validation");
    inputs_.push_back({"validation", path});

    std::vector<int> cuts{cfg_.round3_year, cfg_.round4_year};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto series = centrality::centrality_series(data.records, reg, cuts, options, mode);
    auto column_of = [&](int year) {
        return static_cast<std::size_t>(std::find(cuts.begin(), cuts.end(), year) - cuts.begin());
    };
    for (std::size_t c = 0; c < series.columns.size(); ++c) {
        warn_unconverged(series.columns[c], "cut point " + std::to_string(series.cut_points[c]));
    }

    std::istringstream in(read_file(path, "validation"));
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header) {
        throw DataError("validation file is empty");
    }
    auto locate = [&](const std::string& name) {
        for (std::size_t i = 0; i < header->size(); ++i) {
            if (csv::trim((*header)[i]) == name) {
                return i;
            }
        }
        throw ConfigError("validation header is missing column '" + name + "'");
    };
    const auto node_col = locate("node");
    const auto r3_col = locate("grade_round3");
    const auto r4_col = locate("grade_round4");
    const auto gras_col = locate("gras_score");

    std::vector<double> ec3, ec4, rank3, rank4, gras;
    std::size_t total = 0;
    std::vector<std::size_t> dropped_lines;
    while (auto row = reader.next()) {
        ++total;
        const auto line = reader.line_number();
        auto cell = [&](std::size_t col) { return col < row->size() ? csv::trim((*row)[col]) : std::string{}; };
        const auto name = cell(node_col);
        const auto id = reg.resolve(name).value_or(name);
        const auto idx = series.index_of(id);
        const auto gras_text = cell(gras_col);
        if (name.empty() || !idx || gras_text.empty()) {
            dropped_lines.push_back(line);
            continue;
        }
        int g3 = 0;
        int g4 = 0;
        try {
            g3 = stats::grade_to_rank(cell(r3_col));
            g4 = stats::grade_to_rank(cell(r4_col));
        } catch (const DataError& e) {
            throw DataError("validation line " + std::to_string(line) + ": " + e.what());
        }
        double score = 0.0;
        try {
            std::size_t used = 0;
            score = std::stod(gras_text, &used);
            if (used != gras_text.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw DataError("validation line " + std::to_string(line) + ": gras_score '" + gras_text +
                            "' is not a number");
        }
        ec3.push_back(series.score(*idx, column_of(cfg_.round3_year)));
        ec4.push_back(series.score(*idx, column_of(cfg_.round4_year)));
        rank3.push_back(g3);
        rank4.push_back(g4);
        gras.push_back(score);
    }

    struct Pairing {
        std::string ec;
        std::string criterion;
        const std::vector<double>& x;
        const std::vector<double>& y;
    };
    const std::string ec3_name = "ec_" + std::to_string(cfg_.round3_year);
    const std::string ec4_name = "ec_" + std::to_string(cfg_.round4_year);
    const std::vector<Pairing> pairings{{ec3_name, "grade_round3", ec3, rank3},
                                        {ec4_name, "grade_round4", ec4, rank4},
                                        {ec4_name, "gras_score", ec4, gras}};
    json results = json::array();
    std::ostringstream table;
    table << "ec,criterion,r,n,t,p\n";
    for (const auto& p : pairings) {
        const auto report = stats::pearson(p.x, p.y);
        auto j = to_json(report);
        j["ec"] = p.ec;
        j["criterion"] = p.criterion;
        results.push_back(std::move(j));
        table << p.ec << ',' << p.criterion << ',' << fixed(report.r, 4) << ',' << report.n << ','
              << fixed(report.t, 3) << ',' << fixed(report.p, 3) << '\n';
        out_ << p.ec << " vs " << p.criterion << ": r=" << fixed(report.r, 4) << " (n=" << report.n << ")\n";
    }
    const bool csv_out = cfg_.formats.empty() || wants("csv");
    const bool json_out = cfg_.formats.empty() || wants("json");
    if (json_out) {
        add_json("validation.json", {{"rows", total},
                                     {"dropped_incomplete", dropped_lines.size()},
                                     {"dropped_lines", dropped_lines},
                                     {"pairings", results}});
    }
    if (csv_out) {
        outputs_.add("validation.csv", table.str());
    }
    commit();
}

void Command::synth() {
    require(cfg_.out, "--out");
    graph::MarketSpec spec;
    spec.tier_sizes = cfg_.tiers;
    spec.hire_rates = cfg_.rates;
    spec.downward_bias = cfg_.bias;
    spec.self_loop_probability = cfg_.self_loop;
    spec.overseas_probability = cfg_.overseas;
    spec.start_year = cfg_.start_year;
    spec.end_year = cfg_.end_year;
    spec.seed = cfg_.seed;
    const auto market = graph::synthesize_market(spec);

    std::ostringstream records;
    ingest::write_records_csv(records, market.records);
    outputs_.add("records.csv", records.str());
    std::ostringstream registry;
    market.registry().write_csv(registry);
    outputs_.add("registry.csv", registry.str());
    std::ostringstream tiers;
    tiers << "node,tier\n";
    for (std::size_t i = 0; i < market.institutions.size(); ++i) {
        tiers << market.institutions[i] << ',' << market.tier_of[i] + 1 << '\n';
    }
    outputs_.add("tiers.csv", tiers.str());
    commit();
    out_ << "institutions " << market.institutions.size() << ", records " << market.records.size() << '\n';
}

void Command::export_network() {
    require(cfg_.out, "--out");
    const auto data = load_records();
    graph::Window window;
    if (cfg_.window_end) {
        window.end_year = *cfg_.window_end;
    }
    if (cfg_.window_start) {
        window.start_year = *cfg_.window_start;
        window.mode = graph::SliceMode::windowed;
    }
    const auto network = graph::build_network(data.records, registry(), window);
    add_network_exports(network, "network", cfg_.formats.empty() ? std::vector<std::string>{"csv"} : cfg_.formats);
    commit();
    out_ << "nodes " << network.size() << ", edges " << graph::network_stats(network).directed_edge_count << '\n';
}

void add_shared_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--records", cfg.records, "Hire records CSV");
    app.add_option("--registry", cfg.registry, "Institution registry CSV");
    app.add_option("--out", cfg.out, "Output directory");
    app.add_option("--boundaries", cfg.boundaries, "Slice cut-point years")->delimiter(',')->capture_default_str();
    app.add_option("--mode", cfg.mode, "Slice mode for centrality series")
        ->check(CLI::IsMember({"windowed", "cumulative"}))
        ->capture_default_str();
    app.add_option("--damping", cfg.damping, "Uniform teleport weight in [0,1)")->capture_default_str();
    app.add_option("--tol", cfg.tolerance, "Power-iteration tolerance")->capture_default_str();
    app.add_option("--max-iter", cfg.max_iterations, "Power-iteration cap")->capture_default_str();
    app.add_option("--year-rule", cfg.year_rule, "First-post year rule")
        ->check(CLI::IsMember({"strict", "inclusive"}))
        ->capture_default_str();
    app.add_option("--subset", cfg.subset, "Node subset file, one id per line");
    app.add_option("--reference-year", cfg.reference_year, "Reference year for the newcomer ratio")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    app.add_option("--format", cfg.formats, "Output formats")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json", "dot", "graphml"}));
    app.add_option("--delimiter", cfg.delimiter, "Records field delimiter")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Doctoral hiring network toolkit", "phdnet"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "key=value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();
    add_shared_options(app, cfg);

    auto* ingest_cmd = app.add_subcommand("ingest", "Clean and canonicalize hire records");
    auto* analyze_cmd = app.add_subcommand("analyze", "Network statistics, centrality series and exports");
    auto* regress_cmd = app.add_subcommand("regress", "Predictor regressions on centrality level and trend");
    regress_cmd->add_option("--trend-window", cfg.trend_window, "Moving-average window for the trend")
        ->capture_default_str();
    auto* validate_cmd = app.add_subcommand("validate", "Correlate centrality with external evaluations");
    validate_cmd->add_option("--validation", cfg.validation, "CSV node,grade_round3,grade_round4,gras_score");
    validate_cmd->add_option("--round3-year", cfg.round3_year, "Cut point paired with round-3 grades")
        ->capture_default_str();
    validate_cmd->add_option("--round4-year", cfg.round4_year, "Cut point paired with round-4 grades and GRAS")
        ->capture_default_str();
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic tiered hiring market");
    synth_cmd->add_option("--tiers", cfg.tiers, "Institutions per tier, top first")->delimiter(',');
    synth_cmd->add_option("--rates", cfg.rates, "Mean hires per institution-year, per tier")->delimiter(',');
    synth_cmd->add_option("--bias", cfg.bias, "Probability of hiring from the same or a higher tier")
        ->capture_default_str();
    synth_cmd->add_option("--self-loop", cfg.self_loop, "Self-hire probability")->capture_default_str();
    synth_cmd->add_option("--overseas", cfg.overseas, "Overseas-trainer probability")->capture_default_str();
    synth_cmd->add_option("--start-year", cfg.start_year, "First hiring year")->capture_default_str();
    synth_cmd->add_option("--end-year", cfg.end_year, "Last hiring year")->capture_default_str();
    auto* export_cmd = app.add_subcommand("export", "Export one network window");
    export_cmd->add_option("--start-year", cfg.window_start, "Window start; omit for a cumulative window");
    export_cmd->add_option("--end-year", cfg.window_end, "Window end");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config);
    }

    const std::vector<std::pair<CLI::App*, void (Command::*)()>> table{
        {ingest_cmd, &Command::ingest},     {analyze_cmd, &Command::analyze}, {regress_cmd, &Command::regress},
        {validate_cmd, &Command::validate}, {synth_cmd, &Command::synth},     {export_cmd, &Command::export_network},
    };
    try {
        for (const auto& [sub, handler] : table) {
            if (sub->parsed()) {
                cfg.command = sub->get_name();
                Command command(cfg, out, err);
                std::invoke(handler, command);
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::data);
    }
    return 0;
}

}  // namespace phdnet::cli
