#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "gallai/encode.hpp"
#include "gallai/patterns.hpp"

namespace gallai {

// A bundled coloring together with the family and constraint it avoids.
struct Fixture {
    std::string_view name;
    std::string_view description;
    FamilyId family;
    ConstraintKind constraint;
    std::string_view text; // coloring file format
};

std::span<const Fixture> fixtures();
std::optional<Fixture> find_fixture(std::string_view name);

} // namespace gallai
