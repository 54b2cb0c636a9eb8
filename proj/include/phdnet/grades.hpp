#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace phdnet::stats {

/// Ordered letter grades mapped to ranks 1..N; blank means no participation (0).
class GradeScale {
public:
    explicit GradeScale(std::vector<std::string> ordered_grades);

    /// C-, C, C+, B-, B, B+, A-, A, A+ -> 1..9.
    static const GradeScale& standard();

    [[nodiscard]] const std::vector<std::string>& grades() const noexcept { return grades_; }

private:
    std::vector<std::string> grades_;
    friend int grade_to_rank(std::string_view, const GradeScale&);
};

/// Rank of a grade, 0 for an empty cell. Unknown tokens throw DataError.
/// U+2212 MINUS SIGN is accepted in place of '-'.
int grade_to_rank(std::string_view grade, const GradeScale& scale = GradeScale::standard());

}  // namespace phdnet::stats
