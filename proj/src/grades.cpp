#include "phdnet/grades.hpp"

#include <algorithm>
#include <set>

#include "phdnet/csv.hpp"
#include "phdnet/error.hpp"

namespace phdnet::stats {

GradeScale::GradeScale(std::vector<std::string> ordered_grades) : grades_(std::move(ordered_grades)) {
    std::set<std::string> unique(grades_.begin(), grades_.end());
    if (unique.size() != grades_.size() || unique.contains("")) {
        throw ConfigError("grade scale entries must be unique and non-empty");
    }
}

const GradeScale& GradeScale::standard() {
    static const GradeScale scale({"C-", "C", "C+", "B-", "B", "B+", "A-", "A", "A+"});
    return scale;
}

int grade_to_rank(std::string_view grade, const GradeScale& scale) {
    auto token = csv::trim(grade);
    if (token.empty()) {
        return 0;
    }
    constexpr std::string_view unicode_minus = "\xE2\x88\x92";
    if (const auto pos = token.find(unicode_minus); pos != std::string::npos) {
        token.replace(pos, unicode_minus.size(), "-");
    }
    const auto it = std::find(scale.grades_.begin(), scale.grades_.end(), token);
    if (it == scale.grades_.end()) {
        throw DataError("unknown grade '" + std::string(grade) + "'");
    }
    return static_cast<int>(it - scale.grades_.begin()) + 1;
}

}  // namespace phdnet::stats
