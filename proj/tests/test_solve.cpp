#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <unistd.h>

#include "gallai/encode.hpp"
#include "gallai/solve.hpp"
#include "support.hpp"

using namespace gallai;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

Cnf random_cnf(std::mt19937& rng, std::uint32_t n, std::size_t clauses, int width) {
    Cnf cnf;
    cnf.n_vars = n;
    std::uniform_int_distribution<int> var(1, static_cast<int>(n));
    std::bernoulli_distribution sign(0.5);
    for (std::size_t i = 0; i < clauses; ++i) {
        std::set<int> used;
        Clause c;
        while (static_cast<int>(c.size()) < std::min<int>(width, static_cast<int>(n))) {
            const int v = var(rng);
            if (!used.insert(v).second) continue;
            c.push_back(sign(rng) ? v : -v);
        }
        cnf.clauses.push_back(c);
    }
    return cnf;
}

CnfInstance instance(LatticeKind kind, FamilyKind f, int m, ConstraintKind c = ConstraintKind::NotMonochromatic,
                     SymmetryBreakMode mode = SymmetryBreakMode::None, int k = 0) {
    return build_cnf(GridSpec(kind, m), FamilyId::make(f, k), c, mode);
}

// Fresh scratch directory per test.
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gallai-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string script(const fs::path& dir, const std::string& name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream(p) << "#!/bin/sh\n" << body;
    fs::permissions(p, fs::perms::owner_all);
    return p.string();
}

} // namespace

TEST_CASE("embedded solver agrees with exhaustive search") {
    std::mt19937 rng(12345);
    int sat = 0, unsat = 0;
    for (int round = 0; round < 600; ++round) {
        const std::uint32_t n = 3 + round % 14;
        const int width = 2 + round % 3;
        const std::size_t m = static_cast<std::size_t>(n * (width == 2 ? 1.0 : width == 3 ? 4.3 : 9.8));
        const Cnf cnf = random_cnf(rng, n, m, width);
        const bool truth = brute_sat(cnf);
        SolverConfig config;
        config.seed = round;
        const SolveOutcome out = solve_embedded(cnf, config);
        CHECK(out.status == (truth ? SolveStatus::Sat : SolveStatus::Unsat));
        if (out.status == SolveStatus::Sat) CHECK(satisfies(cnf, out.witness));
        (truth ? sat : unsat)++;
    }
    CHECK(sat > 100);
    CHECK(unsat > 100);
}

TEST_CASE("small decided instances") {
    CHECK(solve_embedded(Cnf{1, {}}).status == SolveStatus::Sat);
    CHECK(solve_embedded(Cnf{2, {{1}, {-1}}}).status == SolveStatus::Unsat);
    CHECK(solve_embedded(instance(LatticeKind::Square2D, FamilyKind::SqAxis, 2).cnf).status == SolveStatus::Sat);
    CHECK(solve_embedded(instance(LatticeKind::Triangular, FamilyKind::TriAll, 4).cnf).status == SolveStatus::Unsat);
    CHECK(solve_embedded(instance(LatticeKind::Triangular, FamilyKind::TriAll, 3).cnf).status == SolveStatus::Sat);
    CHECK(solve_embedded(instance(LatticeKind::Square2D, FamilyKind::SqAll, 7).cnf).status == SolveStatus::Unsat);
}

TEST_CASE("unsatisfiability is monotone around thresholds") {
    struct Case {
        LatticeKind kind;
        FamilyKind f;
        int k, m0;
    };
    for (const Case& c : {Case{LatticeKind::Triangular, FamilyKind::TriAll, 0, 4},
                          Case{LatticeKind::Triangular, FamilyKind::TriUpDown, 0, 5},
                          Case{LatticeKind::Square2D, FamilyKind::SqAll, 0, 7},
                          Case{LatticeKind::Square2D, FamilyKind::RectSim, 2, 8}}) {
        for (int m = c.m0 - 1; m <= c.m0 + 1; ++m) {
            const auto inst = instance(c.kind, c.f, m, ConstraintKind::NotMonochromatic, SymmetryBreakMode::FixOrigin, c.k);
            CHECK(solve_embedded(inst.cnf).status == (m < c.m0 ? SolveStatus::Sat : SolveStatus::Unsat));
        }
    }
}

TEST_CASE("budgets give Unknown and runs are deterministic") {
    const auto hard = instance(LatticeKind::Square2D, FamilyKind::SqAll, 7);
    SolverConfig tight;
    tight.conflict_budget = 1;
    CHECK(solve_embedded(hard.cnf, tight).status == SolveStatus::Unknown);
    SolverConfig config;
    config.seed = 7;
    const auto a = solve_embedded(hard.cnf, config);
    const auto b = solve_embedded(hard.cnf, config);
    CHECK(a.stats.conflicts == b.stats.conflicts);
    CHECK(a.stats.decisions == b.stats.decisions);
    const auto sat = instance(LatticeKind::Square2D, FamilyKind::SqAll, 6);
    CHECK(solve_embedded(sat.cnf, config).witness == solve_embedded(sat.cnf, config).witness);
}

TEST_CASE("model counts") {
    CHECK(count_models(instance(LatticeKind::Square2D, FamilyKind::SqAll, 4)) == 5006);
    CHECK(count_models(instance(LatticeKind::Triangular, FamilyKind::TriAll, 3)) == 18);
    CHECK(count_models(instance(LatticeKind::Square2D, FamilyKind::SqAxis, 2, ConstraintKind::BalancedTwoTwo)) == 6);
    CHECK(count_models(Cnf{4, {}}) == 16);
    CHECK(count_models(Cnf{3, {{1}, {-1}}}) == 0);
    CHECK_THROWS_AS(count_models(instance(LatticeKind::Square2D, FamilyKind::SqAxis, 3, ConstraintKind::NotMonochromatic,
                                          SymmetryBreakMode::LexLeader)),
                    Error);
    CountConfig small;
    small.max_vars = 8;
    CHECK_THROWS_AS(count_models(instance(LatticeKind::Square2D, FamilyKind::SqAxis, 3), small), Error);
    small.max_vars = 64;
    small.max_models = 100;
    CHECK_THROWS_AS(count_models(instance(LatticeKind::Square2D, FamilyKind::SqAll, 4), small), Error);
}

TEST_CASE("model counting agrees with exhaustive counting") {
    std::mt19937 rng(99);
    for (int round = 0; round < 300; ++round) {
        const std::uint32_t n = 2 + round % 15;
        const Cnf cnf = random_cnf(rng, n, n * (1 + round % 4), 2 + round % 3);
        CHECK(count_models(cnf) == brute_count(cnf));
        std::set<std::vector<std::uint8_t>> models;
        for_each_model(cnf, [&](std::span<const std::uint8_t> m) {
            std::vector<int> a;
            for (std::uint32_t v = 0; v < n; ++v) a.push_back(m[v] ? int(v + 1) : -int(v + 1));
            CHECK(satisfies(cnf, a));
            models.emplace(m.begin(), m.end());
        });
        CHECK(models.size() == brute_count(cnf));
    }
}

TEST_CASE("fixing the origin halves the model count") {
    for (const auto& [f, c] : family_constraint_pairs()) {
        const LatticeKind kind = lattice_of(f);
        for (int m = 1; m <= max_m(kind, 20); ++m) {
            const GridSpec g(kind, m);
            const auto none = build_cnf(g, f, c, SymmetryBreakMode::None);
            const auto fixed = build_cnf(g, f, c, SymmetryBreakMode::FixOrigin);
            // Halving needs the solution set closed under the color flip;
            // a flipped coloring differs from the original in every cell.
            bool closed = true;
            for_each_model(none.cnf, [&](std::span<const std::uint8_t> model) {
                std::vector<int> flipped;
                for (std::uint32_t v = 0; v < none.cnf.n_vars; ++v) flipped.push_back(model[v] ? -int(v + 1) : int(v + 1));
                closed &= satisfies(none.cnf, flipped);
            });
            INFO(to_string(f), " ", to_string(c), " m=", m);
            CHECK(closed);
            CHECK(2 * count_models(fixed) == count_models(none));
        }
    }
}

TEST_CASE("parity systems") {
    const auto s3 = f2_build(GridSpec(LatticeKind::Square2D, 3), FamilyId::make(FamilyKind::SqAxis));
    CHECK(s3.rows.size() == 5);
    CHECK(s3.n_vars == 9);
    CHECK_FALSE(f2_solve(s3).feasible);
    const auto s2 = f2_solve(f2_build(GridSpec(LatticeKind::Square2D, 2), FamilyId::make(FamilyKind::SqAxis)));
    CHECK(s2.feasible);
    CHECK(s2.solution_count() == 8u);
    CHECK(f2_build(GridSpec(LatticeKind::Square2D, 1), FamilyId::make(FamilyKind::SqAxis)).rows.empty());
    F2System empty;
    empty.n_vars = 4;
    CHECK(f2_solve(empty).solution_count() == 16u);
    CHECK_THROWS_AS(f2_build(GridSpec(LatticeKind::Triangular, 3), FamilyId::make(FamilyKind::TriAll)), Error);
    CHECK_THROWS_AS(f2_build(GridSpec(LatticeKind::HexWindow, 5), FamilyId::make(FamilyKind::Hexagon)), Error);
}

TEST_CASE("elimination agrees with exhaustive enumeration") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 400; ++round) {
        F2System sys;
        sys.n_vars = 1 + round % 16;
        const int rows = round % 20;
        std::uniform_int_distribution<int> var(1, static_cast<int>(sys.n_vars));
        std::vector<std::vector<CellIndex>> eqs;
        std::vector<int> rhs;
        for (int r = 0; r < rows; ++r) {
            std::set<CellIndex> vs;
            for (int t = 0; t < 1 + round % 5; ++t) vs.insert(var(rng));
            eqs.emplace_back(vs.begin(), vs.end());
            rhs.push_back(rng() & 1);
            sys.add_row(eqs.back(), rhs.back());
        }
        std::uint64_t solutions = 0;
        for (std::uint64_t mask = 0; mask < (1u << sys.n_vars); ++mask) {
            bool ok = true;
            for (std::size_t r = 0; r < eqs.size() && ok; ++r) {
                int parity = 0;
                for (CellIndex v : eqs[r]) parity ^= (mask >> (v - 1)) & 1;
                ok = parity == rhs[r];
            }
            solutions += ok;
        }
        const auto sol = f2_solve(sys);
        CHECK(sol.feasible == (solutions > 0));
        CHECK(sol.solution_count().value_or(0) == solutions);
        if (sol.feasible) {
            for (std::size_t r = 0; r < eqs.size(); ++r) {
                int parity = 0;
                for (CellIndex v : eqs[r]) parity ^= sol.solution[v - 1];
                CHECK(parity == rhs[r]);
            }
        }
    }
}

TEST_CASE("solver output parsing") {
    const auto sat = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 10, 3);
    CHECK(sat.status == SolveStatus::Sat);
    CHECK(sat.witness == std::vector<int>{1, -2, 3});
    CHECK(parse_solver_output("", 20, 3).status == SolveStatus::Unsat);
    CHECK(parse_solver_output("", 10, 0).status == SolveStatus::Sat);
    CHECK(parse_solver_output("s UNKNOWN\n", 0, 3).status == SolveStatus::Unknown);
    auto code = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([] { parse_solver_output("", 1, 3); }) == ErrorCode::SolverCrash);
    CHECK(code([] { parse_solver_output("", 0, 3); }) == ErrorCode::MalformedOutput);
    CHECK(code([] { parse_solver_output("s MAYBE\n", 0, 3); }) == ErrorCode::MalformedOutput);
    CHECK(code([] { parse_solver_output("s SATISFIABLE\nv 1 2\n", 10, 2); }) == ErrorCode::MalformedOutput);
    CHECK(code([] { parse_solver_output("s SATISFIABLE\nv 1 0\n", 10, 2); }) == ErrorCode::MalformedOutput);
    CHECK(code([] { parse_solver_output("s SATISFIABLE\ns UNSATISFIABLE\n", 10, 2); }) == ErrorCode::MalformedOutput);
    CHECK(code([] { parse_solver_output("s UNSATISFIABLE\n", 10, 2); }) == ErrorCode::MalformedOutput);
    const SolveOutcome round = parse_solver_output(competition_output(sat), 10, 3);
    CHECK(round.witness == sat.witness);
}

TEST_CASE("external solver process") {
    const fs::path dir = scratch("external");
    const Cnf unit_square = instance(LatticeKind::Square2D, FamilyKind::SqAxis, 2).cnf;
    auto code = [](const Cnf& cnf, const SolverConfig& c) {
        try {
            solve_external(cnf, c);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    SolverConfig config;
    config.engine = Engine::External;

    SUBCASE("the toolkit's own CLI as a solver") {
        config.command = std::string(GALLAI_CLI_PATH) + " solve --in {cnf}";
        const auto out = solve(unit_square, config);
        CHECK(out.status == SolveStatus::Sat);
        CHECK(satisfies(unit_square, out.witness));
        const Cnf phi4 = instance(LatticeKind::Triangular, FamilyKind::TriAll, 4).cnf;
        CHECK(solve(phi4, config).status == SolveStatus::Unsat);
    }
    SUBCASE("appended paths and proof collection") {
        config.command = "sh " + script(dir, "unsat.sh", "echo 'd 1 0' > \"$2\"\necho 's UNSATISFIABLE'\nexit 20\n");
        config.drat_requested = true;
        const auto out = solve_external(unit_square, config);
        CHECK(out.status == SolveStatus::Unsat);
        REQUIRE(out.proof_path.has_value());
        CHECK(fs::exists(*out.proof_path));
    }
    SUBCASE("templated proof placeholder") {
        config.work_dir = (dir / "work").string();
        config.command = script(dir, "t.sh", "echo 'd 2 0' > \"$1\"\nexit 20\n") + " {proof}";
        config.drat_requested = true;
        const auto out = solve_external(unit_square, config);
        CHECK(out.status == SolveStatus::Unsat);
        CHECK(out.proof_path == (dir / "work" / "proof.drat").string());
        CHECK(fs::exists(dir / "work" / "instance.cnf"));
    }
    SUBCASE("crash") {
        config.command = script(dir, "crash.sh", "exit 3\n");
        CHECK(code(unit_square, config) == ErrorCode::SolverCrash);
    }
    SUBCASE("garbage") {
        config.command = script(dir, "garbage.sh", "echo 's PERHAPS'\n");
        CHECK(code(unit_square, config) == ErrorCode::MalformedOutput);
    }
    SUBCASE("invalid witness") {
        config.command = script(dir, "liar.sh", "echo 's SATISFIABLE'\necho 'v 1 2 3 4 0'\nexit 10\n");
        CHECK(code(unit_square, config) == ErrorCode::MalformedOutput);
    }
    SUBCASE("missing executable") {
        config.command = (dir / "no-such-solver").string();
        CHECK(code(unit_square, config) == ErrorCode::MissingExecutable);
        config.command.clear();
        CHECK(code(unit_square, config) == ErrorCode::MissingExecutable);
    }
    SUBCASE("timeout") {
        config.command = script(dir, "slow.sh", "sleep 30\n");
        config.time_budget_s = 0.3;
        const auto out = solve_external(unit_square, config);
        CHECK(out.status == SolveStatus::Unknown);
        CHECK(out.stats.wall_ms < 10'000);
    }
    fs::remove_all(dir);
}
