#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/lattice.hpp"

namespace gallai {

// Total map cell -> {0,1}; bit i-1 holds the color of cell index i (1 = black).
class Coloring {
public:
    explicit Coloring(GridSpec grid) : grid_(grid), bits_(grid.cell_count(), 0) {}
    Coloring(GridSpec grid, std::vector<std::uint8_t> bits);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::uint8_t at(CellIndex idx) const { return bits_.at(idx - 1); }
    std::uint8_t at(const Cell& cell) const { return at(index_of(grid_, cell)); }
    void set(CellIndex idx, std::uint8_t color) { bits_.at(idx - 1) = color ? 1 : 0; }
    void set(const Cell& cell, std::uint8_t color) { set(index_of(grid_, cell), color); }

    std::size_t black_count() const noexcept;
    Coloring flipped() const;

    friend bool operator==(const Coloring&, const Coloring&) = default;
    friend bool operator<(const Coloring& a, const Coloring& b) { return a.bits_ < b.bits_; }

private:
    GridSpec grid_;
    std::vector<std::uint8_t> bits_;
};

struct ColoringFile {
    Coloring coloring;
    std::optional<int> k;
};

// Text format: line 1 "<kind> <m> [k]", then one line of 0/1 characters per
// canonical row (triangular row y has y+1 characters, cubes are m blocks of
// m rows separated by blank lines). A trailing newline is required.
ColoringFile parse_coloring_file(std::string_view text);
inline Coloring parse_coloring(std::string_view text) { return parse_coloring_file(text).coloring; }

std::string render_coloring(const Coloring& coloring, std::optional<int> k = std::nullopt);

} // namespace gallai
