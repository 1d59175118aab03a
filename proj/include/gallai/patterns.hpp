#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/lattice.hpp"

namespace gallai {

enum class FamilyKind {
    TriAll,      // every equilateral triangle (E_m)
    TriUp,       // axis-parallel, upward (Delta_m)
    TriDown,     // axis-parallel, downward (Nabla_m)
    TriUpDown,   // union of the two above
    SqAll,       // axis-parallel and skew squares (F_m)
    SqAxis,      // axis-parallel squares
    RectHom,     // d x kd axis-parallel rectangles (A_m^(k))
    RectHomRot,  // kd x d axis-parallel rectangles (B_m^(k))
    RectHomBoth, // A_m^(k) u B_m^(k)
    RectSim,     // rectangles similar to 1 x k in every orientation (C_m^(k))
    Hexagon,     // regular hexagons in the hex window
    Cube,        // axis-parallel cubes
};

struct FamilyId {
    FamilyKind kind = FamilyKind::SqAxis;
    int k = 0; // side ratio; only meaningful for the Rect* kinds

    static FamilyId make(FamilyKind kind, int k = 0);

    bool is_rect() const noexcept {
        return kind == FamilyKind::RectHom || kind == FamilyKind::RectHomRot || kind == FamilyKind::RectHomBoth ||
               kind == FamilyKind::RectSim;
    }

    friend bool operator==(const FamilyId&, const FamilyId&) = default;
};

LatticeKind lattice_of(FamilyId family) noexcept;
int arity(FamilyId family) noexcept;

// Command-line style names: tri-all, sq-axis, rect-hom, ...
std::string_view family_name(FamilyKind kind);
std::string to_string(FamilyId family);
FamilyId parse_family(std::string_view name, int k = 0);

// One forbidden figure: a sorted set of cell indices. params holds the
// generating parameters ((i,j,a) / (i,j,a,b) / (i,j,d) / (x,y,s) / (x,y,z,s)).
struct Configuration {
    FamilyId family;
    std::array<int, 4> params{};
    std::array<CellIndex, 8> verts{};
    std::uint8_t size = 0;

    std::span<const CellIndex> vertices() const noexcept { return {verts.data(), size}; }

    friend bool operator<(const Configuration& a, const Configuration& b) noexcept;
};

// Return false to stop the enumeration early.
using ConfigurationVisitor = std::function<bool(const Configuration&)>;

// Streams every configuration of the family contained in the grid, each
// exactly once, in lexicographic order of vertex lists. Returns false if the
// visitor stopped the scan.
bool for_each_configuration(const GridSpec& grid, FamilyId family, const ConfigurationVisitor& visit);

std::vector<Configuration> enumerate(const GridSpec& grid, FamilyId family);
std::uint64_t count(const GridSpec& grid, FamilyId family);

// Throws KindMismatch when the family lives on another lattice.
void require_kind(const GridSpec& grid, FamilyId family);

// Line-oriented text: header "# family=<id> k=<k> kind=<kind> m=<m>", then one
// configuration per line as space-separated indices.
std::string write_configurations(const GridSpec& grid, FamilyId family, std::span<const Configuration> configs);

} // namespace gallai
