#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "phdnet/registry.hpp"

namespace phdnet::ingest {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

/// One doctoral graduate's first teaching appointment.
struct HireRecord {
    std::optional<std::string> person_key;
    std::string degree_unit;    // trainer
    std::string employer_unit;  // hirer
    int graduation_year = 0;
    int employment_year = 0;

    friend bool operator==(const HireRecord&, const HireRecord&) = default;
};

/// Column names for the five record fields. An empty `person` column name
/// means the source carries no person key.
struct Schema {
    std::string person = "person";
    std::string degree_unit = "degree_unit";
    std::string employer_unit = "employer_unit";
    std::string graduation_year = "graduation_year";
    std::string employment_year = "employment_year";
    char delimiter = ',';
};

enum class YearRule {
    strict,     // employment_year > graduation_year
    inclusive,  // employment_year >= graduation_year
};

YearRule parse_year_rule(std::string_view text);

struct Rejection {
    std::size_t row_index = 0;  // 0-based data row, header excluded
    std::string reason;
};

struct IngestDiagnostics {
    std::size_t total_rows = 0;
    std::size_t admitted = 0;
    std::vector<Rejection> rejected;
    std::size_t deduplicated = 0;
    /// Names not found in the registry and registered under their own text.
    std::set<std::string> unregistered;

    [[nodiscard]] bool reconciles() const noexcept {
        return admitted + rejected.size() + deduplicated == total_rows;
    }
};

struct RawRecord {
    std::size_t row_index = 0;
    HireRecord record;
};

struct ParsedRecords {
    std::vector<RawRecord> records;
    IngestDiagnostics diagnostics;
};

/// Reads a header row then one record per row. Malformed rows are rejected
/// with a reason; throws DataError if the stream is unreadable and
/// ConfigError if a schema column is absent from the header.
ParsedRecords parse_records(std::istream& in, const Schema& schema = {});

struct Verdict {
    bool admitted = true;
    std::string reason;

    explicit operator bool() const noexcept { return admitted; }
};

Verdict validate_record(const HireRecord& record, YearRule rule = YearRule::strict);

/// Replaces unit names with canonical ids. Overseas entries collapse into
/// kOverseasId; unknown names keep their text as a fresh id and are added to
/// `unregistered` when given. Idempotent.
HireRecord canonicalize(const HireRecord& record, const InstitutionRegistry& registry,
                        std::set<std::string>* unregistered = nullptr);

/// Collapses records sharing (person_key, employer_unit, employment_year),
/// keeping the first. Records without a person key are never collapsed.
std::vector<HireRecord> deduplicate(std::span<const HireRecord> records, std::size_t* removed = nullptr);

struct IngestResult {
    std::vector<HireRecord> records;
    IngestDiagnostics diagnostics;
};

/// parse -> validate -> canonicalize -> deduplicate.
IngestResult ingest(std::istream& in, const InstitutionRegistry& registry, YearRule rule = YearRule::strict,
                    const Schema& schema = {});

/// Writes records with the default schema header.
void write_records_csv(std::ostream& out, std::span<const HireRecord> records);

}  // namespace phdnet::ingest
