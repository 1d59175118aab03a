#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/coloring.hpp"
#include "gallai/lattice.hpp"
#include "gallai/patterns.hpp"

namespace gallai {

enum class ConstraintKind { NotMonochromatic, BalancedTwoTwo, OddParity };
enum class SymmetryBreakMode { None, FixOrigin, LexLeader };

std::string_view to_string(ConstraintKind c);
std::string_view to_string(SymmetryBreakMode mode);
ConstraintKind parse_constraint(std::string_view name);
SymmetryBreakMode parse_break_mode(std::string_view name);

// Whether a configuration with `black` black vertices out of `arity` is allowed.
constexpr bool admits(ConstraintKind c, int black, int arity) noexcept {
    switch (c) {
    case ConstraintKind::NotMonochromatic: return black != 0 && black != arity;
    case ConstraintKind::BalancedTwoTwo: return black == 2;
    case ConstraintKind::OddParity: return (black & 1) == 1;
    }
    return false;
}

// Throws ArityMismatch if the constraint cannot apply to the family.
void require_arity(FamilyId family, ConstraintKind constraint);

using Clause = std::vector<int>;

// Bare clause set, as read from or written to DIMACS.
struct Cnf {
    std::uint32_t n_vars = 0;
    std::vector<Clause> clauses;

    friend bool operator==(const Cnf&, const Cnf&) = default;
};

struct InstanceMeta {
    GridSpec grid;
    FamilyId family;
    ConstraintKind constraint;
    SymmetryBreakMode break_mode;
};

struct CnfInstance {
    Cnf cnf;
    InstanceMeta meta;
    std::uint64_t configuration_count = 0;

    const GridSpec& grid() const noexcept { return meta.grid; }
};

struct CnfHeader {
    std::uint32_t n_vars = 0;
    std::uint64_t n_clauses = 0;
    std::uint64_t configuration_count = 0;
};

// Clause stream in DIMACS order: per configuration (enumeration order) the
// constraint's clauses, then the symmetry-breaking clauses.
using ClauseVisitor = std::function<void(std::span<const int>)>;
CnfHeader for_each_clause(const InstanceMeta& meta, const ClauseVisitor& visit);

// Header numbers without materializing clauses. For LexLeader this builds the
// breaking clauses (they are small) to count auxiliary variables.
CnfHeader cnf_header(const InstanceMeta& meta);

CnfInstance build_cnf(const GridSpec& grid, FamilyId family, ConstraintKind constraint, SymmetryBreakMode mode);

// Lex-leader breaking clauses for the dihedral elements that stabilize the
// family; auxiliary variables start at first_aux. Empty for hex/cube grids.
struct LexLeaderClauses {
    std::vector<Clause> clauses;
    std::uint32_t n_aux = 0;
    std::vector<std::string> generators;
};
LexLeaderClauses lex_leader_clauses(const GridSpec& grid, FamilyId family, std::uint32_t first_aux);

// DIMACS text. The instance overload prefixes "c" metadata lines.
std::string write_dimacs(const Cnf& cnf);
std::string write_dimacs(const CnfInstance& instance);
void write_dimacs(std::ostream& out, const CnfInstance& instance);
// Streams a DIMACS file without holding the clause list in memory.
CnfHeader stream_dimacs(std::ostream& out, const InstanceMeta& meta);

struct DimacsFile {
    Cnf cnf;
    std::optional<InstanceMeta> meta; // recovered from a "c gallai" line, if present
};
DimacsFile parse_dimacs(std::string_view text);

// Coloring from a solver assignment (signed literals, any order). Variables
// above the grid's cell count are ignored.
Coloring decode_witness(const GridSpec& grid, std::span<const int> assignment);
inline Coloring decode_witness(const CnfInstance& instance, std::span<const int> assignment) {
    return decode_witness(instance.grid(), assignment);
}

// Signed-literal assignment of a coloring (cell i -> +i if black else -i).
std::vector<int> encode_coloring(const Coloring& coloring);

bool satisfies(const Cnf& cnf, std::span<const int> assignment);

} // namespace gallai
