#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gallai/encode.hpp"

namespace gallai {

enum class SolveStatus { Sat, Unsat, Unknown };
std::string_view to_string(SolveStatus status);

enum class Engine { Embedded, External };

struct SolverConfig {
    Engine engine = Engine::Embedded;
    // External only. "{cnf}" and "{proof}" are substituted when present;
    // otherwise the CNF path (and the proof path when a proof is requested)
    // are appended as arguments.
    std::string command;
    double time_budget_s = 0.0; // 0 = unlimited
    std::optional<std::uint64_t> conflict_budget;
    bool drat_requested = false;
    std::uint64_t seed = 0;
    // Where external runs leave their files; empty = a fresh temp directory.
    std::string work_dir;
};

struct SolveStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    double wall_ms = 0.0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Unknown;
    std::vector<int> witness; // Sat only: one signed literal per variable, in order
    std::optional<std::string> proof_path;
    SolveStats stats;
};

// Conflict-driven clause learning: two watched literals, VSIDS branching with
// phase saving, first-UIP learning with minimization, Luby restarts, learnt
// clause reduction. Sat witnesses are re-checked against the input.
SolveOutcome solve_embedded(const Cnf& cnf, const SolverConfig& config = {});

// Runs `<command> <cnf-path> [<proof-path>]` and reads SAT-competition output.
// Throws SolverCrash, MalformedOutput or MissingExecutable.
SolveOutcome solve_external(const Cnf& cnf, const SolverConfig& config);

SolveOutcome solve(const Cnf& cnf, const SolverConfig& config);

// Parses "s ..." / "v ..." solver output; exit_code 10/20 is accepted when the
// status line is missing.
SolveOutcome parse_solver_output(std::string_view text, int exit_code, std::uint32_t n_vars);

// SAT-competition style output for an outcome ("s ..." plus "v ..." lines).
std::string competition_output(const SolveOutcome& outcome);

struct CountConfig {
    std::uint32_t max_vars = 64;
    std::uint64_t max_models = 10'000'000;
};

// Exact number of satisfying assignments over all variables. Requires break
// mode None or FixOrigin. Throws BudgetExceeded beyond the configured limits.
std::uint64_t count_models(const CnfInstance& instance, const CountConfig& config = {});
std::uint64_t count_models(const Cnf& cnf, const CountConfig& config = {});

// Calls visit with every model (one 0/1 value per variable, index 0 = var 1).
// Throws BudgetExceeded after max_models models.
void for_each_model(const Cnf& cnf, const std::function<void(std::span<const std::uint8_t>)>& visit,
                    const CountConfig& config = {});

// Linear system over F2: each row is a coefficient bit vector and a RHS bit.
struct F2System {
    std::uint32_t n_vars = 0;
    std::vector<std::vector<std::uint64_t>> rows; // packed, bit j of var j+1
    std::vector<std::uint8_t> rhs;

    void add_row(std::span<const CellIndex> vars, std::uint8_t value);
};

struct F2Solution {
    bool feasible = false;
    std::uint32_t rank = 0;
    std::vector<std::uint8_t> solution; // one 0/1 value per variable, free variables 0
    std::uint32_t nullity() const noexcept;
    // 2^(n - rank) when it fits in 64 bits.
    std::optional<std::uint64_t> solution_count() const noexcept;

    std::uint32_t n_vars = 0;
};

// One odd-parity equation per configuration.
F2System f2_build(const GridSpec& grid, FamilyId family);
F2Solution f2_solve(const F2System& system);

} // namespace gallai
