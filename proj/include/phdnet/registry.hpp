#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phdnet::ingest {

/// Reserved id of the node that aggregates every overseas degree-awarding unit.
inline constexpr std::string_view kOverseasId = "OVERSEAS";
/// Registry tag that keeps an institution in every built network, active or not.
inline constexpr std::string_view kAlwaysIncludeTag = "always-include";

struct Institution {
    std::string canonical_id;
    std::string display_name;
    std::vector<std::string> aliases;
    bool is_overseas = false;
    std::set<std::string> tags;
};

/// Canonical institution identities. Lookups match canonical ids, display
/// names and aliases exactly (after trimming); no fuzzy matching.
class InstitutionRegistry {
public:
    /// Empty registry holding only the overseas node.
    InstitutionRegistry();
    /// Throws ConfigError on duplicate ids or a name claimed by two entries.
    explicit InstitutionRegistry(std::vector<Institution> entries);

    /// Columns `canonical_id,display_name,aliases,is_overseas,tags`; list
    /// cells are pipe-separated.
    static InstitutionRegistry load_csv(std::istream& in);

    /// Canonical id for a name, with overseas entries folded into kOverseasId.
    /// Inverse of load_csv; the synthetic overseas entry is written too.
    void write_csv(std::ostream& out) const;

    [[nodiscard]] std::optional<std::string> resolve(std::string_view name) const;
    [[nodiscard]] const Institution* find(std::string_view canonical_id) const;
    [[nodiscard]] std::vector<std::string> ids_with_tag(std::string_view tag) const;
    [[nodiscard]] const std::vector<Institution>& entries() const noexcept { return entries_; }

private:
    std::vector<Institution> entries_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace phdnet::ingest
