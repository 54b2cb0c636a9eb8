#include "phdnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <tuple>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"

namespace phdnet::ingest {

namespace {

std::optional<int> parse_year(const std::string& text) {
    const auto t = csv::trim(text);
    int value = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

std::size_t locate(const csv::Row& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (csv::trim(header[i]) == name) {
            return i;
        }
    }
    throw ConfigError("records header is missing column '" + name + "'");
}

}  // namespace

YearRule parse_year_rule(std::string_view text) {
    if (text == "strict") {
        return YearRule::strict;
    }
    if (text == "inclusive") {
        return YearRule::inclusive;
    }
    throw ConfigError("unknown year rule '" + std::string(text) + "' (expected strict or inclusive)");
}

ParsedRecords parse_records(std::istream& in, const Schema& schema) {
    if (!in) {
        throw DataError("records stream is not readable");
    }
    csv::Reader reader(in, schema.delimiter);
    ParsedRecords out;
    const auto header = reader.next();
    if (!header) {
        if (in.bad()) {
            throw DataError("records stream is not readable");
        }
        return out;
    }

    constexpr std::size_t no_column = static_cast<std::size_t>(-1);
    const std::size_t person_col = schema.person.empty() ? no_column : locate(*header, schema.person);
    const std::size_t degree_col = locate(*header, schema.degree_unit);
    const std::size_t employer_col = locate(*header, schema.employer_unit);
    const std::size_t grad_col = locate(*header, schema.graduation_year);
    const std::size_t emp_col = locate(*header, schema.employment_year);

    std::size_t row_index = 0;
    while (auto row = reader.next()) {
        const std::size_t index = row_index++;
        ++out.diagnostics.total_rows;
        auto reject = [&](std::string reason) { out.diagnostics.rejected.push_back({index, std::move(reason)}); };
        auto cell = [&](std::size_t col) -> std::optional<std::string> {
            if (col >= row->size()) {
                return std::nullopt;
            }
            return csv::trim((*row)[col]);
        };

        HireRecord rec;
        if (person_col != no_column) {
            if (auto p = cell(person_col); p && !p->empty()) {
                rec.person_key = std::move(*p);
            }
        }
        const auto degree = cell(degree_col);
        const auto employer = cell(employer_col);
        const auto grad = cell(grad_col);
        const auto emp = cell(emp_col);
        if (!degree || degree->empty()) {
            reject("missing degree_unit");
            continue;
        }
        if (!employer || employer->empty()) {
            reject("missing employer_unit");
            continue;
        }
        if (!grad || grad->empty()) {
            reject("missing graduation_year");
            continue;
        }
        if (!emp || emp->empty()) {
            reject("missing employment_year");
            continue;
        }
        const auto grad_year = parse_year(*grad);
        if (!grad_year) {
            reject("non-integer graduation_year");
            continue;
        }
        const auto emp_year = parse_year(*emp);
        if (!emp_year) {
            reject("non-integer employment_year");
            continue;
        }
        if (*grad_year < kMinYear || *grad_year > kMaxYear) {
            reject("graduation_year out of range [1900, 2100]");
            continue;
        }
        if (*emp_year < kMinYear || *emp_year > kMaxYear) {
            reject("employment_year out of range [1900, 2100]");
            continue;
        }
        rec.degree_unit = *degree;
        rec.employer_unit = *employer;
        rec.graduation_year = *grad_year;
        rec.employment_year = *emp_year;
        out.records.push_back({index, std::move(rec)});
    }
    if (in.bad()) {
        throw DataError("error while reading records stream");
    }
    out.diagnostics.admitted = out.records.size();
    return out;
}

Verdict validate_record(const HireRecord& record, YearRule rule) {
    const bool ok = rule == YearRule::strict ? record.employment_year > record.graduation_year
                                             : record.employment_year >= record.graduation_year;
    if (ok) {
        return {};
    }
    return {false, "employment_year " + std::to_string(record.employment_year) +
                       (rule == YearRule::strict ? " not later than" : " earlier than") + " graduation_year " +
                       std::to_string(record.graduation_year)};
}

HireRecord canonicalize(const HireRecord& record, const InstitutionRegistry& registry,
                        std::set<std::string>* unregistered) {
    auto map = [&](const std::string& name) {
        if (auto id = registry.resolve(name)) {
            return *id;
        }
        auto fresh = csv::trim(name);
        if (unregistered) {
            unregistered->insert(fresh);
        }
        return fresh;
    };
    HireRecord out = record;
    out.degree_unit = map(record.degree_unit);
    out.employer_unit = map(record.employer_unit);
    return out;
}

std::vector<HireRecord> deduplicate(std::span<const HireRecord> records, std::size_t* removed) {
    std::set<std::tuple<std::string, std::string, int>> seen;
    std::vector<HireRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        if (r.person_key && !seen.emplace(*r.person_key, r.employer_unit, r.employment_year).second) {
            continue;
        }
        out.push_back(r);
    }
    if (removed) {
        *removed = records.size() - out.size();
    }
    return out;
}

IngestResult ingest(std::istream& in, const InstitutionRegistry& registry, YearRule rule, const Schema& schema) {
    auto parsed = parse_records(in, schema);
    IngestResult result;
    result.diagnostics = std::move(parsed.diagnostics);
    auto& diag = result.diagnostics;

    std::vector<HireRecord> admitted;
    admitted.reserve(parsed.records.size());
    for (auto& raw : parsed.records) {
        if (auto verdict = validate_record(raw.record, rule); !verdict) {
            diag.rejected.push_back({raw.row_index, std::move(verdict.reason)});
            continue;
        }
        admitted.push_back(canonicalize(raw.record, registry, &diag.unregistered));
    }
    std::sort(diag.rejected.begin(), diag.rejected.end(),
              [](const Rejection& a, const Rejection& b) { return a.row_index < b.row_index; });

    result.records = deduplicate(admitted, &diag.deduplicated);
    diag.admitted = result.records.size();
    return result;
}

void write_records_csv(std::ostream& out, std::span<const HireRecord> records) {
    const Schema schema;
    out << csv::join_row({schema.person, schema.degree_unit, schema.employer_unit, schema.graduation_year,
                          schema.employment_year})
        << '\n';
    for (const auto& r : records) {
        out << csv::join_row({r.person_key.value_or(""), r.degree_unit, r.employer_unit,
                              std::to_string(r.graduation_year), std::to_string(r.employment_year)})
            << '\n';
    }
}

}  // namespace phdnet::ingest
