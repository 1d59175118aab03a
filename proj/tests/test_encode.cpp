#include "doctest.h"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "gallai/encode.hpp"
#include "gallai/oracle.hpp"
#include "gallai/solve.hpp"
#include "gallai/symmetry.hpp"
#include "support.hpp"

using namespace gallai;
using namespace testing_support;

namespace {

CnfInstance sq_axis(int m, SymmetryBreakMode mode = SymmetryBreakMode::None,
                    ConstraintKind c = ConstraintKind::NotMonochromatic) {
    return build_cnf(GridSpec(LatticeKind::Square2D, m), FamilyId::make(FamilyKind::SqAxis), c, mode);
}

} // namespace

TEST_CASE("unit square instance") {
    const auto inst = sq_axis(2);
    CHECK(inst.cnf.n_vars == 4);
    REQUIRE(inst.cnf.clauses.size() == 2);
    CHECK(inst.cnf.clauses[0] == Clause{1, 2, 3, 4});
    CHECK(inst.cnf.clauses[1] == Clause{-1, -2, -3, -4});
    CHECK(write_dimacs(inst.cnf) == "p cnf 4 2\n1 2 3 4 0\n-1 -2 -3 -4 0\n");
    const std::string text = write_dimacs(inst);
    CHECK(text.starts_with("c "));
    CHECK(text.find("p cnf 4 2\n1 2 3 4 0\n-1 -2 -3 -4 0\n") != std::string::npos);
}

TEST_CASE("empty family") {
    const auto inst = sq_axis(1);
    CHECK(write_dimacs(inst.cnf) == "p cnf 1 0\n");
    CHECK(inst.configuration_count == 0);
}

TEST_CASE("fix-origin appends the origin unit clause last") {
    const auto inst = sq_axis(3, SymmetryBreakMode::FixOrigin);
    CHECK(inst.cnf.clauses.size() == 2 * 5 + 1);
    CHECK(inst.cnf.clauses.back() == Clause{-1});
    const auto tri = build_cnf(GridSpec(LatticeKind::Triangular, 4), FamilyId::make(FamilyKind::TriAll),
                               ConstraintKind::NotMonochromatic, SymmetryBreakMode::FixOrigin);
    CHECK(tri.cnf.clauses.back() == Clause{-1});
}

TEST_CASE("rectangle instance sizes") {
    struct Row {
        FamilyKind kind;
        int k, m;
        std::uint32_t vars;
        std::uint64_t rects, clauses;
    };
    for (const Row& r : {Row{FamilyKind::RectHomBoth, 2, 23, 529, 4554, 9109},
                         Row{FamilyKind::RectHomBoth, 3, 27, 729, 5112, 10225},
                         Row{FamilyKind::RectHomBoth, 4, 28, 784, 4256, 8513},
                         Row{FamilyKind::RectHom, 2, 27, 729, 3744, 7489},
                         Row{FamilyKind::RectHom, 5, 66, 4356, 24687, 49375}}) {
        const auto inst = build_cnf(GridSpec(LatticeKind::Square2D, r.m), FamilyId::make(r.kind, r.k),
                                    ConstraintKind::NotMonochromatic, SymmetryBreakMode::FixOrigin);
        CHECK(inst.cnf.n_vars == r.vars);
        CHECK(inst.configuration_count == r.rects);
        CHECK(inst.cnf.clauses.size() == r.clauses);
        const auto header = cnf_header(inst.meta);
        CHECK(header.n_vars == r.vars);
        CHECK(header.n_clauses == r.clauses);
    }
}

TEST_CASE("clauses are well formed") {
    for (const auto& [f, c] : family_constraint_pairs()) {
        for (auto mode : {SymmetryBreakMode::None, SymmetryBreakMode::FixOrigin, SymmetryBreakMode::LexLeader}) {
            const int m = lattice_of(f) == LatticeKind::Cubic ? 3 : 5;
            const auto inst = build_cnf(GridSpec(lattice_of(f), m), f, c, mode);
            for (const Clause& cl : inst.cnf.clauses) {
                REQUIRE_FALSE(cl.empty());
                std::set<int> vars;
                for (int lit : cl) {
                    CHECK(lit != 0);
                    CHECK(static_cast<std::uint32_t>(std::abs(lit)) <= inst.cnf.n_vars);
                    CHECK(vars.insert(std::abs(lit)).second);
                }
            }
        }
    }
}

TEST_CASE("clause counts per constraint") {
    const GridSpec g(LatticeKind::Square2D, 4);
    const FamilyId f = FamilyId::make(FamilyKind::SqAll);
    const auto n = count(g, f);
    CHECK(build_cnf(g, f, ConstraintKind::NotMonochromatic, SymmetryBreakMode::None).cnf.clauses.size() == 2 * n);
    CHECK(build_cnf(g, f, ConstraintKind::BalancedTwoTwo, SymmetryBreakMode::None).cnf.clauses.size() == 8 * n);
    CHECK(build_cnf(g, f, ConstraintKind::OddParity, SymmetryBreakMode::None).cnf.clauses.size() == 8 * n);
    CHECK_THROWS_AS(build_cnf(GridSpec(LatticeKind::Triangular, 3), FamilyId::make(FamilyKind::TriAll),
                              ConstraintKind::BalancedTwoTwo, SymmetryBreakMode::None),
                    Error);
    CHECK_THROWS_AS(build_cnf(GridSpec(LatticeKind::Triangular, 3), FamilyId::make(FamilyKind::SqAll),
                              ConstraintKind::NotMonochromatic, SymmetryBreakMode::None),
                    Error);
}

TEST_CASE("balanced and parity truth tables on four variables") {
    const auto bal = sq_axis(2, SymmetryBreakMode::None, ConstraintKind::BalancedTwoTwo);
    const auto par = sq_axis(2, SymmetryBreakMode::None, ConstraintKind::OddParity);
    CHECK(bal.cnf.clauses.size() == 8);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(bal.cnf.clauses[i].size() == 3);
        CHECK(std::all_of(bal.cnf.clauses[i].begin(), bal.cnf.clauses[i].end(), [](int l) { return l < 0; }));
        CHECK(std::all_of(bal.cnf.clauses[i + 4].begin(), bal.cnf.clauses[i + 4].end(), [](int l) { return l > 0; }));
    }
    int balanced = 0, odd = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        const auto a = encode_coloring(coloring_from_mask(GridSpec(LatticeKind::Square2D, 2), mask));
        const int weight = std::popcount(mask);
        CHECK(satisfies(bal.cnf, a) == (weight == 2));
        CHECK(satisfies(par.cnf, a) == (weight % 2 == 1));
        balanced += satisfies(bal.cnf, a);
        odd += satisfies(par.cnf, a);
    }
    CHECK(balanced == 6);
    CHECK(odd == 8);
}

TEST_CASE("CNF and oracle agree on every coloring of every small grid") {
    for (const auto& [f, c] : family_constraint_pairs()) {
        const LatticeKind kind = lattice_of(f);
        for (int m = 1; m <= max_m(kind, 16); ++m) {
            const GridSpec g(kind, m);
            const auto inst = build_cnf(g, f, c, SymmetryBreakMode::None);
            std::uint64_t disagreements = 0;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.cell_count()); ++mask) {
                const Coloring col = coloring_from_mask(g, mask);
                disagreements += satisfies(inst.cnf, encode_coloring(col)) != check(col, f, c).ok();
            }
            INFO(to_string(f), " ", to_string(c), " m=", m);
            CHECK(disagreements == 0);
        }
    }
}

TEST_CASE("fix-origin and lex-leader preserve satisfiability") {
    for (const auto& [f, c] : family_constraint_pairs()) {
        const LatticeKind kind = lattice_of(f);
        for (int m = 1; m <= max_m(kind, 20); ++m) {
            const GridSpec g(kind, m);
            const bool none = brute_sat(build_cnf(g, f, c, SymmetryBreakMode::None).cnf);
            INFO(to_string(f), " ", to_string(c), " m=", m);
            CHECK(solve_embedded(build_cnf(g, f, c, SymmetryBreakMode::FixOrigin).cnf).status ==
                  (none ? SolveStatus::Sat : SolveStatus::Unsat));
            if (g.cell_count() <= 16) {
                CHECK(solve_embedded(build_cnf(g, f, c, SymmetryBreakMode::LexLeader).cnf).status ==
                      (none ? SolveStatus::Sat : SolveStatus::Unsat));
            }
        }
    }
}

TEST_CASE("lex-leader keeps the canonical member of every orbit") {
    struct Case {
        LatticeKind kind;
        FamilyId f;
        int m;
    };
    for (const Case& cs : {Case{LatticeKind::Square2D, FamilyId::make(FamilyKind::SqAll), 3},
                           Case{LatticeKind::Square2D, FamilyId::make(FamilyKind::SqAxis), 4},
                           Case{LatticeKind::Square2D, FamilyId::make(FamilyKind::RectHom, 2), 4},
                           Case{LatticeKind::Square2D, FamilyId::make(FamilyKind::RectHomBoth, 2), 4},
                           Case{LatticeKind::Triangular, FamilyId::make(FamilyKind::TriUpDown), 4},
                           Case{LatticeKind::Triangular, FamilyId::make(FamilyKind::TriAll), 3}}) {
        const GridSpec g(cs.kind, cs.m);
        const auto none = build_cnf(g, cs.f, ConstraintKind::NotMonochromatic, SymmetryBreakMode::None);
        const auto lex = build_cnf(g, cs.f, ConstraintKind::NotMonochromatic, SymmetryBreakMode::LexLeader);
        CHECK(lex.cnf.n_vars >= none.cnf.n_vars);
        // Least member of each orbit under the family's stabilizer and the flip.
        std::vector<GroupElement> group;
        for (const auto& e : dihedral_elements(cs.kind)) {
            if (!stabilizes(g, cs.f, cell_permutation(g, e))) continue;
            group.push_back(e);
            group.push_back({e.word, true});
        }
        std::set<std::vector<std::uint8_t>> canon;
        for_each_model(none.cnf, [&](std::span<const std::uint8_t> model) {
            const Coloring c(g, {model.begin(), model.end()});
            Coloring least = c;
            for (const auto& e : group) least = std::min(least, apply(e, c));
            canon.emplace(least.bits().begin(), least.bits().end());
        });
        for (const auto& bits : canon) {
            Cnf fixed = lex.cnf;
            for (CellIndex i = 1; i <= g.cell_count(); ++i) fixed.clauses.push_back({bits[i - 1] ? int(i) : -int(i)});
            INFO(to_string(cs.f), " m=", cs.m);
            CHECK(solve_embedded(fixed).status == SolveStatus::Sat);
        }
    }
}

TEST_CASE("DIMACS round trip") {
    for (const auto& [f, c] : family_constraint_pairs()) {
        for (auto mode : {SymmetryBreakMode::None, SymmetryBreakMode::FixOrigin, SymmetryBreakMode::LexLeader}) {
            const GridSpec g(lattice_of(f), lattice_of(f) == LatticeKind::Cubic ? 3 : 5);
            const auto inst = build_cnf(g, f, c, mode);
            const std::string text = write_dimacs(inst);
            const DimacsFile parsed = parse_dimacs(text);
            CHECK(parsed.cnf == inst.cnf);
            REQUIRE(parsed.meta.has_value());
            CHECK(parsed.meta->grid == g);
            CHECK(parsed.meta->family == f);
            CHECK(parsed.meta->constraint == c);
            CHECK(parsed.meta->break_mode == mode);
            CHECK(write_dimacs(CnfInstance{parsed.cnf, *parsed.meta, inst.configuration_count}) == text);
            std::ostringstream streamed;
            stream_dimacs(streamed, inst.meta);
            CHECK(streamed.str() == text);
            CHECK(write_dimacs(build_cnf(g, f, c, mode)) == text);
        }
    }
}

TEST_CASE("DIMACS parser rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), Error);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), Error);
    const auto ok = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n");
    CHECK(ok.cnf.clauses == std::vector<Clause>{{1, -2, 3}, {-1}});
    CHECK_FALSE(ok.meta.has_value());
}

TEST_CASE("witness decoding") {
    const auto inst = sq_axis(2);
    const Coloring one = decode_witness(inst, std::vector<int>{1, -2, -3, -4});
    CHECK(one.black_count() == 1);
    CHECK(one.at(Cell{0, 0}) == 1);
    const std::vector<int> mixed{-1, 2, 3, -4};
    CHECK(satisfies(inst.cnf, mixed));
    CHECK(check(decode_witness(inst, mixed), FamilyId::make(FamilyKind::SqAxis), ConstraintKind::NotMonochromatic).ok());
    CHECK_THROWS_AS(decode_witness(inst, std::vector<int>{1, 2, 3}), Error);
    CHECK(decode_witness(inst, std::vector<int>{4, -3, 2, -1, 7, -8}).black_count() == 2);
    const Coloring c = coloring_from_mask(GridSpec(LatticeKind::Square2D, 3), 0b101100111);
    CHECK(decode_witness(c.grid(), encode_coloring(c)) == c);
}
