#include "gallai/lattice.hpp"

#include <cmath>

namespace gallai {

std::string_view to_string(LatticeKind kind) {
    switch (kind) {
    case LatticeKind::Square2D: return "square";
    case LatticeKind::Triangular: return "tri";
    case LatticeKind::HexWindow: return "hex";
    case LatticeKind::Cubic: return "cube";
    }
    return "?";
}

LatticeKind parse_lattice_kind(std::string_view name) {
    if (name == "square") return LatticeKind::Square2D;
    if (name == "tri") return LatticeKind::Triangular;
    if (name == "hex") return LatticeKind::HexWindow;
    if (name == "cube") return LatticeKind::Cubic;
    throw Error(ErrorCode::InvalidArgument, "unknown lattice kind '" + std::string(name) + "'");
}

std::string to_string(const GridSpec& grid) {
    return std::string(to_string(grid.kind())) + " " + std::to_string(grid.m());
}

CellIndex index_of(const GridSpec& grid, const Cell& cell) {
    if (!contains(grid, cell)) {
        throw Error(ErrorCode::InvalidCell, "cell (" + std::to_string(cell.x) + "," + std::to_string(cell.y) + "," +
                                                std::to_string(cell.z) + ") not in " + to_string(grid));
    }
    return index_of_unchecked(grid, cell);
}

Cell cell_of(const GridSpec& grid, CellIndex idx) {
    if (idx < 1 || idx > grid.cell_count()) {
        throw Error(ErrorCode::InvalidCell, "index " + std::to_string(idx) + " out of range for " + to_string(grid));
    }
    const std::uint64_t i = idx - 1;
    const auto m = static_cast<std::uint64_t>(grid.m());
    switch (grid.kind()) {
    case LatticeKind::Square2D:
        return {static_cast<int>(i % m), static_cast<int>(i / m), 0};
    case LatticeKind::Triangular: {
        auto y = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(i) + 1.0) - 1.0) / 2.0);
        while (y * (y + 1) / 2 > i) --y;
        while ((y + 1) * (y + 2) / 2 <= i) ++y;
        return {static_cast<int>(i - y * (y + 1) / 2), static_cast<int>(y), 0};
    }
    case LatticeKind::HexWindow: {
        const auto y = i / m;
        const auto t = i % m;
        return {static_cast<int>((y & 1) + 2 * t), static_cast<int>(y), 0};
    }
    case LatticeKind::Cubic:
        return {static_cast<int>(i % m), static_cast<int>((i / m) % m), static_cast<int>(i / (m * m))};
    }
    return {};
}

std::vector<Cell> cells(const GridSpec& grid) {
    std::vector<Cell> out;
    out.reserve(grid.cell_count());
    const int m = grid.m();
    switch (grid.kind()) {
    case LatticeKind::Square2D:
        for (int y = 0; y < m; ++y)
            for (int x = 0; x < m; ++x) out.push_back({x, y, 0});
        break;
    case LatticeKind::Triangular:
        for (int y = 0; y < m; ++y)
            for (int x = 0; x <= y; ++x) out.push_back({x, y, 0});
        break;
    case LatticeKind::HexWindow:
        for (int y = 0; y < m; ++y)
            for (int t = 0; t < m; ++t) out.push_back({(y & 1) + 2 * t, y, 0});
        break;
    case LatticeKind::Cubic:
        for (int z = 0; z < m; ++z)
            for (int y = 0; y < m; ++y)
                for (int x = 0; x < m; ++x) out.push_back({x, y, z});
        break;
    }
    return out;
}

} // namespace gallai
