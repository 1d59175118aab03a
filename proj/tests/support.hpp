#pragma once

#include <vector>

#include "gallai/encode.hpp"
#include "gallai/patterns.hpp"

namespace testing_support {

using namespace gallai;

// Every (family, constraint) pair the encoder accepts.
inline std::vector<std::pair<FamilyId, ConstraintKind>> family_constraint_pairs() {
    std::vector<FamilyId> families;
    for (auto k : {FamilyKind::TriAll, FamilyKind::TriUp, FamilyKind::TriDown, FamilyKind::TriUpDown, FamilyKind::SqAll,
                   FamilyKind::SqAxis, FamilyKind::Hexagon, FamilyKind::Cube}) {
        families.push_back(FamilyId::make(k));
    }
    for (int k = 2; k <= 3; ++k) {
        for (auto kind : {FamilyKind::RectHom, FamilyKind::RectHomRot, FamilyKind::RectHomBoth, FamilyKind::RectSim}) {
            families.push_back(FamilyId::make(kind, k));
        }
    }
    std::vector<std::pair<FamilyId, ConstraintKind>> out;
    for (FamilyId f : families) {
        out.emplace_back(f, ConstraintKind::NotMonochromatic);
        if (arity(f) == 4) {
            out.emplace_back(f, ConstraintKind::BalancedTwoTwo);
            out.emplace_back(f, ConstraintKind::OddParity);
        }
    }
    return out;
}

// Largest m whose grid has at most max_cells cells.
inline int max_m(LatticeKind kind, std::uint64_t max_cells) {
    int m = 1;
    while (GridSpec(kind, m + 1).cell_count() <= max_cells) ++m;
    return m;
}

inline Coloring coloring_from_mask(const GridSpec& grid, std::uint64_t mask) {
    Coloring c(grid);
    for (CellIndex i = 1; i <= grid.cell_count(); ++i) c.set(i, (mask >> (i - 1)) & 1u);
    return c;
}

// Satisfiability by trying every assignment of the variables.
inline bool brute_sat(const Cnf& cnf) {
    const std::uint32_t n = cnf.n_vars;
    std::vector<int> a(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::uint32_t v = 0; v < n; ++v) a[v] = ((mask >> v) & 1u) ? int(v + 1) : -int(v + 1);
        if (satisfies(cnf, a)) return true;
    }
    return false;
}

inline std::uint64_t brute_count(const Cnf& cnf) {
    const std::uint32_t n = cnf.n_vars;
    std::vector<int> a(n);
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::uint32_t v = 0; v < n; ++v) a[v] = ((mask >> v) & 1u) ? int(v + 1) : -int(v + 1);
        count += satisfies(cnf, a);
    }
    return count;
}

} // namespace testing_support
