#include "phdnet/registry.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"

namespace phdnet::ingest {

namespace {

Institution overseas_entry() {
    return Institution{std::string(kOverseasId), "Overseas institutions", {}, true, {}};
}

bool parse_bool(const std::string& cell, std::size_t line) {
    const auto v = csv::trim(cell);
    if (v == "true" || v == "TRUE" || v == "True" || v == "1") {
        return true;
    }
    if (v == "false" || v == "FALSE" || v == "False" || v == "0" || v.empty()) {
        return false;
    }
    throw ConfigError("registry line " + std::to_string(line) + ": is_overseas must be true/false, got '" +
                      v + "'");
}

}  // namespace

InstitutionRegistry::InstitutionRegistry() : InstitutionRegistry(std::vector<Institution>{}) {}

InstitutionRegistry::InstitutionRegistry(std::vector<Institution> entries) : entries_(std::move(entries)) {
    const bool has_overseas = std::any_of(entries_.begin(), entries_.end(),
                                          [](const Institution& e) { return e.canonical_id == kOverseasId; });
    if (!has_overseas) {
        entries_.push_back(overseas_entry());
    }

    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto& e = entries_[i];
        e.canonical_id = csv::trim(e.canonical_id);
        if (e.canonical_id.empty()) {
            throw ConfigError("registry entry " + std::to_string(i) + " has an empty canonical_id");
        }
        if (e.canonical_id == kOverseasId) {
            e.is_overseas = true;
        }
        if (!by_id_.emplace(e.canonical_id, i).second) {
            throw ConfigError("duplicate canonical_id '" + e.canonical_id + "' in registry");
        }
    }

    auto claim = [this](const std::string& raw, std::size_t owner) {
        const auto name = csv::trim(raw);
        if (name.empty()) {
            return;
        }
        auto [it, inserted] = by_name_.emplace(name, owner);
        if (!inserted && it->second != owner) {
            throw ConfigError("name '" + name + "' maps to both '" + entries_[it->second].canonical_id +
                              "' and '" + entries_[owner].canonical_id + "'");
        }
    };
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        claim(entries_[i].canonical_id, i);
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        claim(entries_[i].display_name, i);
        for (const auto& alias : entries_[i].aliases) {
            claim(alias, i);
        }
    }
}

InstitutionRegistry InstitutionRegistry::load_csv(std::istream& in) {
    if (!in) {
        throw DataError("registry stream is not readable");
    }
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header) {
        return InstitutionRegistry{};
    }
    const std::vector<std::string> required = {"canonical_id", "display_name", "aliases", "is_overseas", "tags"};
    std::vector<std::size_t> column(required.size());
    for (std::size_t r = 0; r < required.size(); ++r) {
        const auto it = std::find_if(header->begin(), header->end(),
                                     [&](const std::string& h) { return csv::trim(h) == required[r]; });
        if (it == header->end()) {
            throw ConfigError("registry header is missing column '" + required[r] + "'");
        }
        column[r] = static_cast<std::size_t>(it - header->begin());
    }

    std::vector<Institution> entries;
    while (auto row = reader.next()) {
        auto cell = [&](std::size_t r) -> std::string {
            return column[r] < row->size() ? (*row)[column[r]] : std::string{};
        };
        Institution e;
        e.canonical_id = csv::trim(cell(0));
        e.display_name = csv::trim(cell(1));
        e.aliases = csv::split_list(cell(2), '|');
        e.is_overseas = parse_bool(cell(3), reader.line_number());
        for (auto& tag : csv::split_list(cell(4), '|')) {
            e.tags.insert(std::move(tag));
        }
        entries.push_back(std::move(e));
    }
    return InstitutionRegistry(std::move(entries));
}

void InstitutionRegistry::write_csv(std::ostream& out) const {
    auto join = [](const auto& items) {
        std::string s;
        for (const auto& item : items) {
            if (!s.empty()) {
                s.push_back('|');
            }
            s += item;
        }
        return s;
    };
    out << "canonical_id,display_name,aliases,is_overseas,tags\n";
    for (const auto& e : entries_) {
        out << csv::join_row({e.canonical_id, e.display_name, join(e.aliases), e.is_overseas ? "true" : "false",
                              join(e.tags)})
            << '\n';
    }
}

std::optional<std::string> InstitutionRegistry::resolve(std::string_view name) const {
    const auto it = by_name_.find(csv::trim(name));
    if (it == by_name_.end()) {
        return std::nullopt;
    }
    const auto& e = entries_[it->second];
    return e.is_overseas ? std::string(kOverseasId) : e.canonical_id;
}

const Institution* InstitutionRegistry::find(std::string_view canonical_id) const {
    const auto it = by_id_.find(std::string(canonical_id));
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> InstitutionRegistry::ids_with_tag(std::string_view tag) const {
    std::vector<std::string> ids;
    for (const auto& e : entries_) {
        if (e.tags.contains(std::string(tag))) {
            ids.push_back(e.is_overseas ? std::string(kOverseasId) : e.canonical_id);
        }
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace phdnet::ingest
