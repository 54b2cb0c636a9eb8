#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phdnet::csv {

using Row = std::vector<std::string>;

/// Splits one line into fields. Double-quoted fields may contain the
/// delimiter and doubled quotes; embedded newlines are not supported.
Row split_line(std::string_view line, char delimiter = ',');

/// Minimal streaming reader: strips a UTF-8 BOM and trailing CR, skips blank
/// lines. Lines starting with '#' are skipped when `allow_comments` is set.
class Reader {
public:
    explicit Reader(std::istream& in, char delimiter = ',', bool allow_comments = false);

    std::optional<Row> next();
    /// 1-based physical line number of the row last returned.
    [[nodiscard]] std::size_t line_number() const noexcept { return line_; }

private:
    std::istream& in_;
    char delimiter_;
    bool allow_comments_;
    std::size_t line_ = 0;
};

std::string escape_field(std::string_view field, char delimiter = ',');
std::string join_row(const Row& row, char delimiter = ',');

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep);

}  // namespace phdnet::csv
