#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/coloring.hpp"
#include "gallai/encode.hpp"
#include "gallai/patterns.hpp"

namespace gallai {

enum class ViolationDetail { AllZero, AllOne, Unbalanced, EvenParity };
std::string_view to_string(ViolationDetail detail);

struct Violation {
    Configuration configuration;
    ViolationDetail detail;
    int black_count = 0;
};

struct Verdict {
    std::optional<Violation> violation;
    bool ok() const noexcept { return !violation.has_value(); }
};

// Scans the family directly (no CNF, no solver) and reports the first
// configuration, in enumeration order, that breaks the constraint.
Verdict check(const Coloring& coloring, FamilyId family, ConstraintKind constraint);

// Every violated configuration, for diagnostics.
std::vector<Violation> check_all(const Coloring& coloring, FamilyId family, ConstraintKind constraint);

// "Violation(AllOne) at (0,0) (1,0) (0,1) (1,1)" or "Ok".
std::string describe(const Verdict& verdict, const GridSpec& grid);

} // namespace gallai
