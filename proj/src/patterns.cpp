#include "gallai/patterns.hpp"

#include <algorithm>
#include <initializer_list>

namespace gallai {

namespace {

struct FamilyInfo {
    FamilyKind kind;
    std::string_view name;
};

constexpr std::array<FamilyInfo, 12> kFamilies{{
    {FamilyKind::TriAll, "tri-all"},
    {FamilyKind::TriUp, "tri-up"},
    {FamilyKind::TriDown, "tri-down"},
    {FamilyKind::TriUpDown, "tri-up-down"},
    {FamilyKind::SqAll, "sq-all"},
    {FamilyKind::SqAxis, "sq-axis"},
    {FamilyKind::RectHom, "rect-hom"},
    {FamilyKind::RectHomRot, "rect-hom-rot"},
    {FamilyKind::RectHomBoth, "rect-hom-both"},
    {FamilyKind::RectSim, "rect-sim"},
    {FamilyKind::Hexagon, "hexagon"},
    {FamilyKind::Cube, "cube"},
}};

// Collects the configurations whose minimal vertex is one base cell, then
// sorts them; concatenating the per-base batches in base order yields the
// global lexicographic order.
class Batch {
public:
    Batch(const GridSpec& grid, FamilyId family) : grid_(grid), family_(family) {}

    // Adds the candidate if every vertex lies in the grid and, when
    // require_min_base is set, the first vertex is the strict minimum.
    void add(std::initializer_list<Cell> vertices, std::array<int, 4> params, bool require_min_base) {
        Configuration c;
        c.family = family_;
        c.params = params;
        for (const Cell& v : vertices) {
            if (!contains(grid_, v)) return;
            c.verts[c.size++] = index_of_unchecked(grid_, v);
        }
        if (require_min_base) {
            for (std::uint8_t i = 1; i < c.size; ++i) {
                if (c.verts[i] <= c.verts[0]) return;
            }
        }
        std::sort(c.verts.begin(), c.verts.begin() + c.size);
        items_.push_back(c);
    }

    bool flush(const ConfigurationVisitor& visit) {
        if (items_.size() > 1) std::sort(items_.begin(), items_.end());
        for (const auto& c : items_) {
            if (!visit(c)) {
                items_.clear();
                return false;
            }
        }
        items_.clear();
        return true;
    }

private:
    GridSpec grid_;
    FamilyId family_;
    std::vector<Configuration> items_;
};

void triangle_batch(Batch& batch, FamilyKind kind, int m, int px, int py) {
    const bool up = kind == FamilyKind::TriUp || kind == FamilyKind::TriUpDown;
    const bool down = kind == FamilyKind::TriDown || kind == FamilyKind::TriUpDown;
    if (up) {
        // {(i,j), (i+a,j), (i,j-a)} has minimal vertex (i, j-a).
        for (int a = 1; py + a < m; ++a) {
            const int i = px, j = py + a;
            batch.add({{i, j - a}, {i, j}, {i + a, j}}, {i, j, a, 0}, false);
        }
    }
    if (down) {
        // {(i,j), (i-a,j-a), (i,j-a)} has minimal vertex (i-a, j-a).
        for (int a = 1; px + a <= py && py + a < m; ++a) {
            const int i = px + a, j = py + a;
            batch.add({{i - a, j - a}, {i, j - a}, {i, j}}, {i, j, a, 0}, false);
        }
    }
    if (kind == FamilyKind::TriAll) {
        for (int a = -(m - 1); a <= m - 1; ++a) {
            for (int b = -(m - 1); b <= m - 1; ++b) {
                if (a == 0 && b == 0) continue;
                batch.add({{px, py}, {px - a, py + b}, {px + b, py + a + b}}, {px, py, a, b}, true);
            }
        }
    }
}

void square_batch(Batch& batch, FamilyId family, int m, int i, int j) {
    const int k = family.k;
    switch (family.kind) {
    case FamilyKind::SqAxis:
        for (int a = 1; i + a < m && j + a < m; ++a) {
            batch.add({{i, j}, {i + a, j}, {i + a, j + a}, {i, j + a}}, {i, j, a, 0}, false);
        }
        break;
    case FamilyKind::SqAll:
        for (int a = -(m - 1); a <= m - 1; ++a) {
            for (int b = -(m - 1); b <= m - 1; ++b) {
                if (a == 0 && b == 0) continue;
                batch.add({{i, j}, {i + b, j - a}, {i + a + b, j + b - a}, {i + a, j + b}}, {i, j, a, b}, true);
            }
        }
        break;
    case FamilyKind::RectHom:
    case FamilyKind::RectHomRot:
    case FamilyKind::RectHomBoth:
        if (family.kind != FamilyKind::RectHomRot) {
            for (int d = 1; i + d < m && j + k * d < m; ++d) {
                batch.add({{i, j}, {i + d, j}, {i, j + k * d}, {i + d, j + k * d}}, {i, j, d, 0}, false);
            }
        }
        if (family.kind != FamilyKind::RectHom) {
            for (int d = 1; i + k * d < m && j + d < m; ++d) {
                batch.add({{i, j}, {i + k * d, j}, {i, j + d}, {i + k * d, j + d}}, {i, j, d, 0}, false);
            }
        }
        break;
    case FamilyKind::RectSim:
        // From the minimal vertex p exactly one of v = k*rot(-90)(u) and
        // v = k*rot(+90)(u) runs along the long side; trying both keeps the
        // set family identical to the u=(a,b), v=(kb,-ka) parametrization.
        for (int a = -(m - 1); a <= m - 1; ++a) {
            for (int b = -(m - 1); b <= m - 1; ++b) {
                if (a == 0 && b == 0) continue;
                batch.add({{i, j}, {i + a, j + b}, {i + k * b, j - k * a}, {i + a + k * b, j + b - k * a}},
                          {i, j, a, b}, true);
                // Same rectangle as generated from base p+u with u' = -u.
                batch.add({{i, j}, {i + a, j + b}, {i - k * b, j + k * a}, {i + a - k * b, j + b + k * a}},
                          {i + a, j + b, -a, -b}, true);
            }
        }
        break;
    default:
        break;
    }
}

} // namespace

FamilyId FamilyId::make(FamilyKind kind, int k) {
    FamilyId f{kind, 0};
    if (f.is_rect()) {
        if (k < 2) throw Error(ErrorCode::InvalidArgument, "rectangle families need k >= 2");
        f.k = k;
    }
    return f;
}

LatticeKind lattice_of(FamilyId family) noexcept {
    switch (family.kind) {
    case FamilyKind::TriAll:
    case FamilyKind::TriUp:
    case FamilyKind::TriDown:
    case FamilyKind::TriUpDown: return LatticeKind::Triangular;
    case FamilyKind::Hexagon: return LatticeKind::HexWindow;
    case FamilyKind::Cube: return LatticeKind::Cubic;
    default: return LatticeKind::Square2D;
    }
}

int arity(FamilyId family) noexcept {
    switch (lattice_of(family)) {
    case LatticeKind::Triangular: return 3;
    case LatticeKind::HexWindow: return 6;
    case LatticeKind::Cubic: return 8;
    case LatticeKind::Square2D: return 4;
    }
    return 0;
}

std::string_view family_name(FamilyKind kind) {
    for (const auto& info : kFamilies) {
        if (info.kind == kind) return info.name;
    }
    return "?";
}

std::string to_string(FamilyId family) {
    std::string s(family_name(family.kind));
    if (family.is_rect()) s += "(k=" + std::to_string(family.k) + ")";
    return s;
}

FamilyId parse_family(std::string_view name, int k) {
    for (const auto& info : kFamilies) {
        if (info.name == name) return FamilyId::make(info.kind, k);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

bool operator<(const Configuration& a, const Configuration& b) noexcept {
    return std::lexicographical_compare(a.verts.begin(), a.verts.begin() + a.size, b.verts.begin(),
                                        b.verts.begin() + b.size);
}

void require_kind(const GridSpec& grid, FamilyId family) {
    if (lattice_of(family) != grid.kind()) {
        throw Error(ErrorCode::KindMismatch, "family " + to_string(family) + " needs a " +
                                                 std::string(to_string(lattice_of(family))) + " grid, got " +
                                                 to_string(grid));
    }
}

bool for_each_configuration(const GridSpec& grid, FamilyId family, const ConfigurationVisitor& visit) {
    require_kind(grid, family);
    const int m = grid.m();
    Batch batch(grid, family);
    switch (grid.kind()) {
    case LatticeKind::Triangular:
        for (int y = 0; y < m; ++y) {
            for (int x = 0; x <= y; ++x) {
                triangle_batch(batch, family.kind, m, x, y);
                if (!batch.flush(visit)) return false;
            }
        }
        break;
    case LatticeKind::Square2D:
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                square_batch(batch, family, m, i, j);
                if (!batch.flush(visit)) return false;
            }
        }
        break;
    case LatticeKind::HexWindow:
        for (int y = 0; y < m; ++y) {
            for (int t = 0; t < m; ++t) {
                const int x = (y & 1) + 2 * t;
                for (int s = 1; y + 2 * s < m; ++s) {
                    batch.add({{x, y},
                               {x + 2 * s, y},
                               {x, y + 2 * s},
                               {x + 2 * s, y + 2 * s},
                               {x - s, y + s},
                               {x + 3 * s, y + s}},
                              {x, y, s, 0}, false);
                }
                if (!batch.flush(visit)) return false;
            }
        }
        break;
    case LatticeKind::Cubic: {
        // Batches are already sorted (second vertex grows with s), so cubes
        // are emitted directly.
        Configuration c;
        c.family = family;
        c.size = 8;
        const auto mm = static_cast<CellIndex>(m);
        for (int z = 0; z < m; ++z) {
            for (int y = 0; y < m; ++y) {
                for (int x = 0; x < m; ++x) {
                    const CellIndex base = index_of_unchecked(grid, {x, y, z});
                    for (int s = 1; std::max({x, y, z}) + s < m; ++s) {
                        const auto us = static_cast<CellIndex>(s);
                        const CellIndex dy = us * mm, dz = us * mm * mm;
                        c.verts = {base,          base + us,          base + dy,      base + dy + us,
                                   base + dz,     base + dz + us,     base + dz + dy, base + dz + dy + us};
                        c.params = {x, y, z, s};
                        if (!visit(c)) return false;
                    }
                }
            }
        }
        break;
    }
    }
    return true;
}

std::vector<Configuration> enumerate(const GridSpec& grid, FamilyId family) {
    std::vector<Configuration> out;
    for_each_configuration(grid, family, [&](const Configuration& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

std::uint64_t count(const GridSpec& grid, FamilyId family) {
    std::uint64_t n = 0;
    for_each_configuration(grid, family, [&](const Configuration&) {
        ++n;
        return true;
    });
    return n;
}

std::string write_configurations(const GridSpec& grid, FamilyId family, std::span<const Configuration> configs) {
    std::string out = "# family=" + std::string(family_name(family.kind)) + " k=" + std::to_string(family.k) +
                      " kind=" + std::string(to_string(grid.kind())) + " m=" + std::to_string(grid.m()) + "\n";
    for (const auto& c : configs) {
        bool first = true;
        for (CellIndex v : c.vertices()) {
            if (!first) out += ' ';
            out += std::to_string(v);
            first = false;
        }
        out += '\n';
    }
    return out;
}

} // namespace gallai
