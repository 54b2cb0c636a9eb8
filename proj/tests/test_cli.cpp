#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "phdnet/centrality.hpp"
#include "phdnet/cli.hpp"
#include "phdnet/ingest.hpp"
#include "phdnet/registry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("phdnet_cli_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    [[nodiscard]] std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome phdnet_run(std::vector<std::string> args) {
    args.insert(args.begin(), "phdnet");
    std::ostringstream out;
    std::ostringstream err;
    const int code = phdnet::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json(const std::string& path) { return json::parse(slurp(path)); }

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        files[entry.path().filename().string()] = slurp(entry.path().string());
    }
    return files;
}

/// Synthetic market written into `dir`: records.csv, registry.csv, tiers.csv.
void synth(const TempDir& dir, const std::string& tiers = "3,6,9", const std::string& rates = "1,2,3",
           const std::string& seed = "3") {
    const auto r = phdnet_run({"synth", "--out", dir.path.string(), "--tiers", tiers, "--rates", rates,
                               "--seed", seed});
    REQUIRE_MESSAGE(r.code == 0, r.err);
}

}  // namespace

TEST_CASE("ingest subcommand") {
    TempDir out;
    SUBCASE("fixture") {
        const auto r = phdnet_run({"ingest", "--records", PHDNET_TEST_DATA "/records_10.csv", "--registry",
                                   PHDNET_TEST_DATA "/registry.csv", "--out", out.path.string()});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto d = read_json(out / "diagnostics.json");
        CHECK(d["admitted"].get<int>() == 6);
        CHECK(d["rejected"].size() == 3);
        CHECK(d["provenance"]["inputs"].size() == 2);
        CHECK(d["provenance"]["inputs"][0]["sha256"].get<std::string>().size() == 64);
        CHECK(fs::exists(out / "records.csv"));
        CHECK(fs::exists(out / "provenance.json"));
    }
    SUBCASE("two bad rows under the inclusive rule") {
        const auto r = phdnet_run({"ingest", "--records", PHDNET_TEST_DATA "/records_10.csv", "--registry",
                                   PHDNET_TEST_DATA "/registry.csv", "--year-rule", "inclusive", "--out",
                                   out.path.string()});
        REQUIRE(r.code == 0);
        const auto d = read_json(out / "diagnostics.json");
        CHECK(d["rejected"].size() == 2);
        CHECK(d["rejected"][0]["reason"] == "non-integer employment_year");
    }
    SUBCASE("missing file leaves no output") {
        const auto target = out / "nested";
        const auto r = phdnet_run({"ingest", "--records", out / "absent.csv", "--out", target});
        CHECK(r.code == 2);
        CHECK(r.err.find("absent.csv") != std::string::npos);
        CHECK_FALSE(fs::exists(target));
    }
    SUBCASE("usage errors exit 1") {
        CHECK(phdnet_run({"ingest", "--records", PHDNET_TEST_DATA "/records_10.csv"}).code == 1);
        CHECK(phdnet_run({"bogus"}).code == 1);
        CHECK(phdnet_run({"analyze", "--mode", "rolling"}).code == 1);
        CHECK(phdnet_run({"ingest", "--records", PHDNET_TEST_DATA "/records_10.csv", "--year-rule", "loose",
                          "--out", out.path.string()})
                  .code == 1);
        CHECK(phdnet_run({"--version"}).code == 0);
    }
}

TEST_CASE("analyze subcommand") {
    TempDir data;
    synth(data);
    TempDir out;
    const std::vector<std::string> args{"analyze",     "--records",  data / "records.csv",
                                        "--registry",  data / "registry.csv",
                                        "--boundaries", "2000,2007,2014,2021",
                                        "--format",    "csv,dot,graphml",
                                        "--out",       out.path.string()};
    const auto r = phdnet_run(args);
    REQUIRE_MESSAGE(r.code == 0, r.err);

    const auto stats = read_json(out / "stats.json");
    REQUIRE(stats["slices"].size() == 4);
    CHECK(stats["slices"][1]["window"]["start_year"] == 2001);
    CHECK(stats["slices"][3]["window"]["end_year"] == 2021);
    const auto header = slurp(out / "centrality.csv").substr(0, slurp(out / "centrality.csv").find('\n'));
    CHECK(header == "node,ec_2000,ec_2007,ec_2014,ec_2021");
    CHECK(fs::exists(out / "network_2015_2021.graphml"));
    CHECK(fs::exists(out / "network_all.dot"));
    CHECK(fs::exists(out / "network_2001_2007.csv"));

    // the whole-network export conserves every admitted record
    std::ifstream edges(out / "network_all.csv");
    const auto imported = phdnet::graph::import_edge_list(edges);
    CHECK(imported.total_weight() == stats["ingest"]["admitted"].get<std::uint64_t>());

    SUBCASE("deterministic") {
        TempDir again;
        auto args2 = args;
        args2.back() = again.path.string();
        REQUIRE(phdnet_run(args2).code == 0);
        CHECK(directory_bytes(out.path) == directory_bytes(again.path));
    }
    SUBCASE("flags override the config file") {
        TempDir cfg_out;
        write(cfg_out / "run.ini", "mode=windowed\ndamping=0.5\nboundaries=2010,2021\n");
        const auto c = phdnet_run({"analyze", "--config", cfg_out / "run.ini", "--records", data / "records.csv",
                                   "--damping", "0.1", "--out", cfg_out / "res"});
        REQUIRE_MESSAGE(c.code == 0, c.err);
        const auto prov = read_json(cfg_out / "res/provenance.json");
        CHECK(prov["config"]["mode"] == "windowed");
        CHECK(prov["config"]["damping"].get<double>() == doctest::Approx(0.1));
        CHECK(prov["config"]["boundaries"] == json::array({2010, 2021}));
    }
}

TEST_CASE("analyze on empty records") {
    TempDir out;
    write(out / "empty.csv", "person,degree_unit,employer_unit,graduation_year,employment_year\n");
    const auto r = phdnet_run({"analyze", "--records", out / "empty.csv", "--out", out / "res"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto stats = read_json(out / "res/stats.json");
    CHECK(stats["whole"]["stats"]["node_count"] == 0);
    CHECK(slurp(out / "res/centrality.csv") == "node,ec_2000,ec_2007,ec_2014,ec_2021\n");
}

TEST_CASE("regress subcommand") {
    TempDir data;
    synth(data, "5,10,20,40", "1,2,3,4", "4");
    TempDir out;
    std::string subset = "node\n";
    for (int t = 1; t <= 4; ++t) {
        for (int u = 1; u <= 5; ++u) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "t%d_u%03d\n", t, u);
            subset += buf;
        }
    }
    write(out / "subset.txt", subset);
    const auto r = phdnet_run({"regress", "--records", data / "records.csv", "--registry", data / "registry.csv",
                               "--subset", out / "subset.txt", "--out", out / "res"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto levels = read_json(out / "res/regression_levels.json");
    const auto& report = levels["report"];
    CHECK(report["n"] == 20);
    CHECK(report["F_df"] == json::array({5, 14}));
    CHECK(report["coefficients"].size() == 6);
    for (const char* key : {"R2", "adj_R2", "F", "F_p", "DW"}) {
        CHECK(report[key].is_number());
    }
    for (std::size_t k = 1; k < report["coefficients"].size(); ++k) {
        const auto& c = report["coefficients"][k];
        for (const char* key : {"B", "SE", "Beta", "t", "p", "VIF"}) {
            CHECK(c[key].is_number());
        }
    }
    CHECK(fs::exists(out / "res/regression_trend.csv"));
    const auto csv = slurp(out / "res/regression_levels.csv");
    CHECK(csv.rfind("term,B,SE,Beta,t,p,VIF,R2,adj_R2,F,F_df,F_p,DW,n\n", 0) == 0);

    SUBCASE("a single node is too few") {
        write(out / "one.txt", "t1_u001\n");
        const auto one = phdnet_run({"regress", "--records", data / "records.csv", "--registry",
                                     data / "registry.csv", "--subset", out / "one.txt", "--out", out / "one"});
        CHECK(one.code == 2);
        CHECK_FALSE(fs::exists(out / "one"));
    }
    SUBCASE("missing subset flag") {
        CHECK(phdnet_run({"regress", "--records", data / "records.csv", "--out", out / "x"}).code == 1);
    }
}

TEST_CASE("regress names collinear predictors") {
    TempDir dir;
    std::ostringstream records;
    records << "person,degree_unit,employer_unit,graduation_year,employment_year\n";
    int person = 0;
    for (int i = 1; i <= 8; ++i) {
        const std::string node = "n" + std::to_string(i);
        for (int h = 0; h < i; ++h) {
            records << "p" << person++ << ',' << node << ',' << node << ",2000,2002\n";
            records << "p" << person++ << ",Abroad," << node << ",2000,2003\n";
        }
        for (int h = 0; h < (i * 3) % 5 + 1; ++h) {
            records << "p" << person++ << ",T," << node << ",2005," << 2006 + h * 3 << '\n';
        }
        records << "p" << person++ << ",P," << node << ",2010,2019\n";
    }
    write(dir / "records.csv", records.str());
    write(dir / "registry.csv", "canonical_id,display_name,aliases,is_overseas,tags\n"
                                "abroad,Abroad,,true,\nT,T,,false,tsinghua\nP,P,,false,peking\n");
    write(dir / "subset.txt", "n1\nn2\nn3\nn4\nn5\nn6\nn7\nn8\n");
    const auto r = phdnet_run({"regress", "--records", dir / "records.csv", "--registry", dir / "registry.csv",
                               "--subset", dir / "subset.txt", "--out", dir / "res"});
    CHECK(r.code == 3);
    CHECK(r.err.find("self_ratio") != std::string::npos);
    CHECK(r.err.find("overseas_ratio") != std::string::npos);
}

TEST_CASE("validate subcommand") {
    TempDir data;
    synth(data);
    TempDir out;
    const std::vector<std::string> base{"validate", "--records", data / "records.csv", "--registry",
                                        data / "registry.csv"};
    SUBCASE("three incomplete rows of twenty") {
        auto args = base;
        args.insert(args.end(), {"--validation", PHDNET_TEST_DATA "/validation_20.csv", "--out", out / "v"});
        const auto r = phdnet_run(args);
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto v = read_json(out / "v/validation.json");
        CHECK(v["rows"] == 20);
        CHECK(v["dropped_incomplete"] == 3);
        REQUIRE(v["pairings"].size() == 3);
        for (const auto& p : v["pairings"]) {
            CHECK(p["n"] == 17);
        }
        CHECK(v["pairings"][0]["ec"] == "ec_2014");
        CHECK(v["pairings"][0]["criterion"] == "grade_round3");
        CHECK(slurp(out / "v/validation.csv").find("ec_2014,grade_round3,") != std::string::npos);
    }
    SUBCASE("a GRAS column equal to EC correlates perfectly") {
        std::ifstream rin(data / "records.csv");
        std::ifstream gin(data / "registry.csv");
        const auto reg = phdnet::ingest::InstitutionRegistry::load_csv(gin);
        const auto records = phdnet::ingest::ingest(rin, reg).records;
        const std::vector<int> cuts{2014, 2021};
        const auto series = phdnet::centrality::centrality_series(records, reg, cuts);
        std::ostringstream table;
        table << "node,grade_round3,grade_round4,gras_score\n";
        const char* grades[] = {"A+", "A", "B+", "B", "C"};
        for (std::size_t i = 0; i < series.nodes.size(); ++i) {
            char score[32];
            std::snprintf(score, sizeof score, "%.17g", series.score(i, 1));
            table << series.nodes[i] << ',' << grades[i % 5] << ',' << grades[(i + 2) % 5] << ',' << score << '\n';
        }
        write(out / "gras.csv", table.str());
        auto args = base;
        args.insert(args.end(), {"--validation", out / "gras.csv", "--out", out / "g"});
        const auto r = phdnet_run(args);
        REQUIRE_MESSAGE(r.code == 0, r.err);
        const auto v = read_json(out / "g/validation.json");
        CHECK(v["pairings"][2]["criterion"] == "gras_score");
        CHECK(v["pairings"][2]["r"].get<double>() == 1.0);
    }
    SUBCASE("unknown grade token points at the line") {
        write(out / "bad.csv", "node,grade_round3,grade_round4,gras_score\nt1_u001,A,A,1\nt1_u002,Z,A,2\n");
        auto args = base;
        args.insert(args.end(), {"--validation", out / "bad.csv", "--out", out / "b"});
        const auto r = phdnet_run(args);
        CHECK(r.code == 2);
        CHECK(r.err.find("line 3") != std::string::npos);
        CHECK_FALSE(fs::exists(out / "b"));
    }
}

TEST_CASE("synth and export subcommands") {
    TempDir a;
    TempDir b;
    synth(a);
    synth(b);
    CHECK(directory_bytes(a.path) == directory_bytes(b.path));

    TempDir out;
    const auto r = phdnet_run({"export", "--records", a / "records.csv", "--start-year", "2008", "--end-year", "2014",
                               "--format", "dot", "--out", out.path.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(slurp(out / "network.dot").rfind("digraph", 0) == 0);
    CHECK(phdnet_run({"synth", "--tiers", "0", "--out", out / "bad"}).code == 1);
}
