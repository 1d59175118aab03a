#include "gallai/oracle.hpp"

namespace gallai {

std::string_view to_string(ViolationDetail detail) {
    switch (detail) {
    case ViolationDetail::AllZero: return "AllZero";
    case ViolationDetail::AllOne: return "AllOne";
    case ViolationDetail::Unbalanced: return "Unbalanced";
    case ViolationDetail::EvenParity: return "EvenParity";
    }
    return "?";
}

namespace {

std::optional<Violation> inspect(const Coloring& coloring, const Configuration& c, ConstraintKind constraint) {
    int black = 0;
    for (CellIndex v : c.vertices()) black += coloring.bits()[v - 1];
    const int n = static_cast<int>(c.size);
    if (admits(constraint, black, n)) return std::nullopt;
    ViolationDetail detail{};
    switch (constraint) {
    case ConstraintKind::NotMonochromatic:
        detail = black == 0 ? ViolationDetail::AllZero : ViolationDetail::AllOne;
        break;
    case ConstraintKind::BalancedTwoTwo: detail = ViolationDetail::Unbalanced; break;
    case ConstraintKind::OddParity: detail = ViolationDetail::EvenParity; break;
    }
    return Violation{c, detail, black};
}

void require_compatible(const Coloring& coloring, FamilyId family, ConstraintKind constraint) {
    require_kind(coloring.grid(), family);
    require_arity(family, constraint);
}

} // namespace

Verdict check(const Coloring& coloring, FamilyId family, ConstraintKind constraint) {
    require_compatible(coloring, family, constraint);
    Verdict verdict;
    for_each_configuration(coloring.grid(), family, [&](const Configuration& c) {
        verdict.violation = inspect(coloring, c, constraint);
        return !verdict.violation.has_value();
    });
    return verdict;
}

std::vector<Violation> check_all(const Coloring& coloring, FamilyId family, ConstraintKind constraint) {
    require_compatible(coloring, family, constraint);
    std::vector<Violation> out;
    for_each_configuration(coloring.grid(), family, [&](const Configuration& c) {
        if (auto v = inspect(coloring, c, constraint)) out.push_back(*v);
        return true;
    });
    return out;
}

std::string describe(const Verdict& verdict, const GridSpec& grid) {
    if (verdict.ok()) return "Ok";
    const auto& v = *verdict.violation;
    std::string s = "Violation(" + std::string(to_string(v.detail));
    if (v.detail == ViolationDetail::Unbalanced) s += ", black=" + std::to_string(v.black_count);
    s += ") at";
    for (CellIndex idx : v.configuration.vertices()) {
        const Cell c = cell_of(grid, idx);
        s += " (" + std::to_string(c.x) + "," + std::to_string(c.y);
        if (grid.kind() == LatticeKind::Cubic) s += "," + std::to_string(c.z);
        s += ")";
    }
    return s;
}

} // namespace gallai
