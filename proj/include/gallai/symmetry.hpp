#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gallai/coloring.hpp"
#include "gallai/lattice.hpp"
#include "gallai/patterns.hpp"

namespace gallai {

enum class Generator { Sigma, Rho };

// Word over {sigma, rho}, optionally composed with the color flip. The word
// g1 g2 ... gn denotes the cell map c -> g1(g2(...gn(c))).
struct GroupElement {
    std::vector<Generator> word;
    bool flip = false;

    std::string to_string() const;
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

// Square2D: sigma(x,y) = (y,x), rho(x,y) = (m-1-y, x).
// Triangular: sigma(x,y) = (y-x, y), rho(x,y) = (m-1-y, m-1-y+x).
Cell apply_generator(const GridSpec& grid, Generator g, const Cell& c);

// perm[i-1] = index of lambda(cell i). Throws UnsupportedKind for hex/cube.
std::vector<CellIndex> cell_permutation(const GridSpec& grid, const GroupElement& element);

// The 6 (Triangular) or 8 (Square2D) geometric elements, identity first.
std::vector<GroupElement> dihedral_elements(LatticeKind kind);

// result(c) = input(lambda(c)), then flipped if element.flip.
Coloring apply(const GroupElement& element, const Coloring& coloring);

// True when the permutation maps every configuration of the family onto a
// configuration of the same family.
bool stabilizes(const GridSpec& grid, FamilyId family, std::span<const CellIndex> perm);

struct OrbitClass {
    Coloring representative; // lexicographically least member of the orbit
    std::size_t size = 0;    // number of input colorings in the class
};

struct OrbitReport {
    std::vector<OrbitClass> classes; // sorted by representative
    bool with_flip = false;
    std::size_t total = 0;

    std::vector<std::size_t> class_sizes() const;
};

// Least element of the orbit of the coloring.
Coloring canonical_form(const Coloring& coloring, bool with_flip);

// threads > 1 computes canonical forms on worker threads; the report does not
// depend on the thread count or on input order.
OrbitReport classify(std::span<const Coloring> solutions, bool with_flip, unsigned threads = 1);

std::string to_json(const OrbitReport& report);

} // namespace gallai
