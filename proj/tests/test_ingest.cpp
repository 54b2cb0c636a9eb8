#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"
#include "phdnet/ingest.hpp"
#include "phdnet/registry.hpp"

using namespace phdnet;
using namespace phdnet::ingest;

namespace {

InstitutionRegistry fixture_registry() {
    std::ifstream in(PHDNET_TEST_DATA "/registry.csv");
    REQUIRE(in);
    return InstitutionRegistry::load_csv(in);
}

HireRecord rec(std::string key, std::string trainer, std::string employer, int grad, int emp) {
    return HireRecord{std::move(key), std::move(trainer), std::move(employer), grad, emp};
}

}  // namespace

TEST_CASE("csv splitting honours quotes") {
    CHECK(csv::split_line("a,\"b,c\",d") == csv::Row{"a", "b,c", "d"});
    CHECK(csv::split_line("\"say \"\"hi\"\"\",x") == csv::Row{"say \"hi\"", "x"});
    CHECK(csv::split_line("a;b", ';') == csv::Row{"a", "b"});
    CHECK(csv::split_line("") == csv::Row{""});
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("#x") == "\"#x\"");
    CHECK(csv::split_line(csv::join_row({"x,y", "q\"", ""})) == csv::Row{"x,y", "q\"", ""});
}

TEST_CASE("csv reader strips BOM, CR and blank lines") {
    std::istringstream in("\xEF\xBB\xBFh1,h2\r\n\r\n1,2\r\n# note\n3,4\n");
    csv::Reader reader(in, ',', true);
    CHECK(*reader.next() == csv::Row{"h1", "h2"});
    CHECK(*reader.next() == csv::Row{"1", "2"});
    CHECK(reader.line_number() == 3);
    CHECK(*reader.next() == csv::Row{"3", "4"});
    CHECK_FALSE(reader.next().has_value());
}

TEST_CASE("registry loads aliases, tags and the overseas node") {
    const auto reg = fixture_registry();
    CHECK(reg.resolve("清华大学") == "tsinghua_u");
    CHECK(reg.resolve(" Tsinghua University ") == "tsinghua_u");
    CHECK(reg.resolve("Harvard") == std::string(kOverseasId));
    CHECK_FALSE(reg.resolve("Unknown College").has_value());
    CHECK(reg.ids_with_tag("peking") == std::vector<std::string>{"peking_u"});
    REQUIRE(reg.find(kOverseasId) != nullptr);
    CHECK(reg.find(kOverseasId)->is_overseas);

    std::ostringstream out;
    reg.write_csv(out);
    std::istringstream back(out.str());
    const auto again = InstitutionRegistry::load_csv(back);
    CHECK(again.entries().size() == reg.entries().size());
    CHECK(again.resolve("北京大学") == "peking_u");
}

TEST_CASE("registry rejects duplicate ids and conflicting aliases") {
    std::istringstream dup_id("canonical_id,display_name,aliases,is_overseas,tags\na,A,,false,\na,B,,false,\n");
    CHECK_THROWS_AS(InstitutionRegistry::load_csv(dup_id), ConfigError);
    std::istringstream dup_alias("canonical_id,display_name,aliases,is_overseas,tags\na,A,X,false,\nb,B,X,false,\n");
    CHECK_THROWS_AS(InstitutionRegistry::load_csv(dup_alias), ConfigError);
    std::istringstream bad_flag("canonical_id,display_name,aliases,is_overseas,tags\na,A,,maybe,\n");
    CHECK_THROWS_AS(InstitutionRegistry::load_csv(bad_flag), ConfigError);
}

TEST_CASE("parse_records maps fields and rejects malformed rows") {
    SUBCASE("direct field mapping") {
        std::istringstream in(
            "person,degree_unit,employer_unit,graduation_year,employment_year\na,Tsinghua,Nankai,2005,2006\n");
        const auto parsed = parse_records(in);
        REQUIRE(parsed.records.size() == 1);
        CHECK(parsed.records[0].record == rec("a", "Tsinghua", "Nankai", 2005, 2006));
    }
    SUBCASE("non-integer year") {
        std::istringstream in(
            "person,degree_unit,employer_unit,graduation_year,employment_year\nb,Tsinghua,Nankai,2005,abc\n");
        const auto parsed = parse_records(in);
        CHECK(parsed.records.empty());
        REQUIRE(parsed.diagnostics.rejected.size() == 1);
        CHECK(parsed.diagnostics.rejected[0].reason == "non-integer employment_year");
        CHECK(parsed.diagnostics.rejected[0].row_index == 0);
    }
    SUBCASE("ten-row fixture with two malformed rows") {
        std::ifstream in(PHDNET_TEST_DATA "/records_10.csv");
        const auto parsed = parse_records(in);
        CHECK(parsed.diagnostics.total_rows == 10);
        CHECK(parsed.records.size() == 8);
        CHECK(parsed.diagnostics.rejected.size() == 2);
        CHECK(parsed.diagnostics.rejected[0].row_index == 1);
        CHECK(parsed.diagnostics.rejected[1].row_index == 6);
        CHECK(parsed.diagnostics.rejected[1].reason == "missing degree_unit");
        // row order preserved
        CHECK(parsed.records.front().row_index == 0);
        CHECK(parsed.records.back().row_index == 9);
    }
    SUBCASE("out-of-range years and short rows") {
        std::istringstream in("person,degree_unit,employer_unit,graduation_year,employment_year\n"
                              "a,X,Y,1899,1950\nb,X,Y,2000\nc,X,Y, 2001 ,2002\n");
        const auto parsed = parse_records(in);
        CHECK(parsed.records.size() == 1);
        CHECK(parsed.records[0].record.graduation_year == 2001);
        CHECK(parsed.diagnostics.rejected.size() == 2);
    }
    SUBCASE("custom schema and delimiter") {
        std::istringstream in("emp;deg;who;gy;ey\nNankai;Tsinghua;k;2001;2003\n");
        Schema schema{"who", "deg", "emp", "gy", "ey", ';'};
        const auto parsed = parse_records(in, schema);
        REQUIRE(parsed.records.size() == 1);
        CHECK(parsed.records[0].record == rec("k", "Tsinghua", "Nankai", 2001, 2003));
    }
    SUBCASE("no person column") {
        std::istringstream in("degree_unit,employer_unit,graduation_year,employment_year\nX,Y,2000,2001\n");
        Schema schema;
        schema.person.clear();
        const auto parsed = parse_records(in, schema);
        REQUIRE(parsed.records.size() == 1);
        CHECK_FALSE(parsed.records[0].record.person_key.has_value());
    }
    SUBCASE("missing schema column is a configuration error") {
        std::istringstream in("person,degree_unit,graduation_year,employment_year\n");
        CHECK_THROWS_AS(parse_records(in), ConfigError);
    }
}

TEST_CASE("validate_record applies the year rule") {
    CHECK(validate_record(rec("a", "X", "Y", 2005, 2006), YearRule::strict));
    const auto same_year = validate_record(rec("a", "X", "Y", 2006, 2006), YearRule::strict);
    CHECK_FALSE(same_year);
    CHECK_FALSE(same_year.reason.empty());
    CHECK(validate_record(rec("a", "X", "Y", 2006, 2006), YearRule::inclusive));
    CHECK_FALSE(validate_record(rec("a", "X", "Y", 2007, 2006), YearRule::inclusive));
    CHECK(parse_year_rule("inclusive") == YearRule::inclusive);
    CHECK_THROWS_AS(parse_year_rule("loose"), ConfigError);
}

TEST_CASE("canonicalize resolves aliases, folds overseas units, registers unknowns") {
    const auto reg = fixture_registry();
    std::set<std::string> unknown;
    CHECK(canonicalize(rec("a", "Harvard", "Nankai", 2000, 2001), reg, &unknown).degree_unit == "OVERSEAS");
    const auto alias = canonicalize(rec("a", "清华大学", "Fudan", 2000, 2001), reg, &unknown);
    CHECK(alias.degree_unit == "tsinghua_u");
    CHECK(alias.employer_unit == "fudan_u");
    CHECK(unknown.empty());
    const auto fresh = canonicalize(rec("a", "Unknown College", "Fudan", 2000, 2001), reg, &unknown);
    CHECK(fresh.degree_unit == "Unknown College");
    CHECK(unknown == std::set<std::string>{"Unknown College"});
}

TEST_CASE("deduplicate keeps the first record per person, employer and year") {
    const std::vector<HireRecord> twins{rec("p", "X", "Y", 2000, 2001), rec("p", "X", "Y", 2000, 2001)};
    std::size_t removed = 9;
    CHECK(deduplicate(twins, &removed).size() == 1);
    CHECK(removed == 1);

    const std::vector<HireRecord> moved{rec("p", "X", "Y", 2000, 2001), rec("p", "X", "Y", 2000, 2002)};
    CHECK(deduplicate(moved, &removed).size() == 2);
    CHECK(removed == 0);

    CHECK(deduplicate(std::vector<HireRecord>{}, &removed).empty());
    CHECK(removed == 0);

    const std::vector<HireRecord> keyed_first{rec("p", "X", "Y", 2000, 2001), rec("p", "Z", "Y", 1999, 2001)};
    const auto kept = deduplicate(keyed_first, &removed);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].degree_unit == "X");

    std::vector<HireRecord> anonymous{rec("", "X", "Y", 2000, 2001), rec("", "X", "Y", 2000, 2001)};
    anonymous[0].person_key.reset();
    anonymous[1].person_key.reset();
    CHECK(deduplicate(anonymous, &removed).size() == 2);
}

TEST_CASE("ingest pipeline over the fixture") {
    const auto reg = fixture_registry();
    std::ifstream in(PHDNET_TEST_DATA "/records_10.csv");
    const auto result = ingest::ingest(in, reg);
    const auto& d = result.diagnostics;
    CHECK(d.total_rows == 10);
    CHECK(d.admitted == 6);
    CHECK(d.rejected.size() == 3);  // two malformed rows and a same-year appointment
    CHECK(d.deduplicated == 1);
    CHECK(d.reconciles());
    CHECK(d.unregistered == std::set<std::string>{"Unknown College"});
    CHECK(result.records.size() == d.admitted);
    CHECK(result.records[0] == rec("a", "tsinghua_u", "nankai_u", 2005, 2006));
    CHECK(result.records[2].degree_unit == "OVERSEAS");

    std::ifstream again(PHDNET_TEST_DATA "/records_10.csv");
    const auto inclusive = ingest::ingest(again, reg, YearRule::inclusive);
    CHECK(inclusive.diagnostics.admitted == 7);
    CHECK(inclusive.diagnostics.reconciles());

    std::ostringstream cleaned;
    write_records_csv(cleaned, result.records);
    std::istringstream reread(cleaned.str());
    const auto round = ingest::ingest(reread, reg);
    CHECK(round.records == result.records);
}

// Property tests over generated record files.
namespace {

std::string random_records_csv(std::mt19937_64& rng, std::size_t rows) {
    const std::vector<std::string> names{"Tsinghua", "清华大学", "Peking", "Nankai", "Fudan", "Harvard",
                                         "Unknown College", "Mystery U", ""};
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    std::uniform_int_distribution<int> year(1995, 2022);
    std::uniform_int_distribution<int> lag(-2, 4);
    std::uniform_int_distribution<int> corrupt(0, 19);
    std::uniform_int_distribution<int> person(0, 30);
    std::ostringstream out;
    out << "person,degree_unit,employer_unit,graduation_year,employment_year\n";
    for (std::size_t r = 0; r < rows; ++r) {
        const int grad = year(rng);
        std::string emp = std::to_string(grad + lag(rng));
        const int c = corrupt(rng);
        if (c == 0) {
            emp = "x" + emp;
        } else if (c == 1) {
            emp = "3000";
        }
        out << "p" << person(rng) << ',' << csv::escape_field(names[pick(rng)]) << ','
            << csv::escape_field(names[pick(rng)]) << ',' << grad << ',' << emp << '\n';
    }
    return out.str();
}

}  // namespace

TEST_CASE("property: diagnostics reconcile and the strict rule holds") {
    const auto reg = fixture_registry();
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> size(0, 60);
        std::istringstream in(random_records_csv(rng, size(rng)));
        const auto rule = trial % 2 == 0 ? YearRule::strict : YearRule::inclusive;
        const auto result = ingest::ingest(in, reg, rule);
        REQUIRE(result.diagnostics.reconciles());
        REQUIRE(result.records.size() == result.diagnostics.admitted);
        for (const auto& r : result.records) {
            if (rule == YearRule::strict) {
                REQUIRE(r.employment_year > r.graduation_year);
            } else {
                REQUIRE(r.employment_year >= r.graduation_year);
            }
        }
    }
}

TEST_CASE("property: canonicalize is idempotent") {
    const auto reg = fixture_registry();
    std::mt19937_64 rng(77);
    std::istringstream in(random_records_csv(rng, 400));
    const auto parsed = parse_records(in);
    for (const auto& raw : parsed.records) {
        const auto once = canonicalize(raw.record, reg);
        REQUIRE(canonicalize(once, reg) == once);
    }
}
