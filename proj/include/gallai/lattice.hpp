#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/error.hpp"

namespace gallai {

// The four grid geometries. Triangular cells use level coordinates: (x, y)
// with y the level and 0 <= x <= y the position inside the level.
enum class LatticeKind { Square2D, Triangular, HexWindow, Cubic };

std::string_view to_string(LatticeKind kind);
LatticeKind parse_lattice_kind(std::string_view name);

// 1-based, doubles as the DIMACS variable number of the cell.
using CellIndex = std::uint32_t;

struct Cell {
    int x = 0;
    int y = 0;
    int z = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

class GridSpec {
public:
    GridSpec(LatticeKind kind, int m) : kind_(kind), m_(m) {
        if (m < 1) {
            throw Error(ErrorCode::InvalidArgument, "grid edge must be >= 1, got " + std::to_string(m));
        }
    }

    LatticeKind kind() const noexcept { return kind_; }
    int m() const noexcept { return m_; }

    std::uint64_t cell_count() const noexcept {
        const auto m = static_cast<std::uint64_t>(m_);
        switch (kind_) {
        case LatticeKind::Triangular: return m * (m + 1) / 2;
        case LatticeKind::Cubic: return m * m * m;
        case LatticeKind::Square2D:
        case LatticeKind::HexWindow: return m * m;
        }
        return 0;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    LatticeKind kind_;
    int m_;
};

std::string to_string(const GridSpec& grid);

inline bool contains(const GridSpec& grid, const Cell& c) noexcept {
    const int m = grid.m();
    switch (grid.kind()) {
    case LatticeKind::Square2D:
        return c.z == 0 && c.x >= 0 && c.y >= 0 && c.x < m && c.y < m;
    case LatticeKind::Triangular:
        return c.z == 0 && c.x >= 0 && c.x <= c.y && c.y < m;
    case LatticeKind::HexWindow:
        return c.z == 0 && c.x >= 0 && c.y >= 0 && c.x < 2 * m && c.y < m && ((c.x - c.y) & 1) == 0;
    case LatticeKind::Cubic:
        return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < m && c.y < m && c.z < m;
    }
    return false;
}

// Index of a cell already known to be valid; no checking.
inline CellIndex index_of_unchecked(const GridSpec& grid, const Cell& c) noexcept {
    const auto m = static_cast<std::uint32_t>(grid.m());
    const auto x = static_cast<std::uint32_t>(c.x);
    const auto y = static_cast<std::uint32_t>(c.y);
    switch (grid.kind()) {
    case LatticeKind::Square2D: return y * m + x + 1;
    case LatticeKind::Triangular: return y * (y + 1) / 2 + x + 1;
    case LatticeKind::HexWindow: return y * m + (x - (y & 1)) / 2 + 1;
    case LatticeKind::Cubic: return static_cast<std::uint32_t>(c.z) * m * m + y * m + x + 1;
    }
    return 0;
}

CellIndex index_of(const GridSpec& grid, const Cell& cell);
Cell cell_of(const GridSpec& grid, CellIndex idx);

// All cells in canonical order; the i-th cell has index i + 1.
std::vector<Cell> cells(const GridSpec& grid);

} // namespace gallai
