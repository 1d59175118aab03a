#include <algorithm>

#include "gallai/solve.hpp"

namespace gallai {

void F2System::add_row(std::span<const CellIndex> vars, std::uint8_t value) {
    std::vector<std::uint64_t> row((n_vars + 63) / 64, 0);
    for (CellIndex v : vars) {
        if (v < 1 || v > n_vars) throw Error(ErrorCode::InvalidArgument, "variable out of range in F2 row");
        row[(v - 1) / 64] ^= std::uint64_t{1} << ((v - 1) % 64);
    }
    rows.push_back(std::move(row));
    rhs.push_back(value & 1u);
}

std::uint32_t F2Solution::nullity() const noexcept { return n_vars - rank; }

std::optional<std::uint64_t> F2Solution::solution_count() const noexcept {
    if (!feasible) return 0;
    if (nullity() >= 64) return std::nullopt;
    return std::uint64_t{1} << nullity();
}

F2System f2_build(const GridSpec& grid, FamilyId family) {
    require_kind(grid, family);
    if (arity(family) != 4 || grid.kind() != LatticeKind::Square2D) {
        throw Error(ErrorCode::ArityMismatch, "parity systems need 4-vertex square-grid families");
    }
    F2System system;
    system.n_vars = static_cast<std::uint32_t>(grid.cell_count());
    for_each_configuration(grid, family, [&](const Configuration& c) {
        system.add_row(c.vertices(), 1);
        return true;
    });
    return system;
}

F2Solution f2_solve(const F2System& system) {
    F2Solution result;
    result.n_vars = system.n_vars;
    auto rows = system.rows;
    auto rhs = system.rhs;
    const std::size_t words = (system.n_vars + 63) / 64;
    auto bit = [](const std::vector<std::uint64_t>& row, std::uint32_t col) {
        return (row[col / 64] >> (col % 64)) & 1u;
    };

    std::vector<std::uint32_t> pivot_cols;
    std::size_t r = 0;
    for (std::uint32_t col = 0; col < system.n_vars && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && !bit(rows[p], col)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && bit(rows[i], col)) {
                for (std::size_t w = 0; w < words; ++w) rows[i][w] ^= rows[r][w];
                rhs[i] ^= rhs[r];
            }
        }
        pivot_cols.push_back(col);
        ++r;
    }
    result.rank = static_cast<std::uint32_t>(r);
    // Remaining rows are zero; any with RHS 1 reads 0 = 1.
    for (std::size_t i = r; i < rows.size(); ++i) {
        if (rhs[i]) return result;
    }
    result.feasible = true;
    result.solution.assign(system.n_vars, 0);
    for (std::size_t i = 0; i < r; ++i) result.solution[pivot_cols[i]] = rhs[i];
    return result;
}

} // namespace gallai
