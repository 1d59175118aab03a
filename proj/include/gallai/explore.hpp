#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gallai/coloring.hpp"
#include "gallai/encode.hpp"
#include "gallai/patterns.hpp"
#include "gallai/solve.hpp"

namespace gallai {

struct ExtensionOptions {
    unsigned threads = 1;
    // Keep every solution of this size (for symmetry classification).
    std::optional<int> collect_m;
};

struct ExtensionReport {
    std::vector<std::pair<int, std::uint64_t>> counts; // (m, solutions), m = 1, 2, ...
    std::optional<int> first_empty_m;
    std::vector<Coloring> collected; // sorted; only with collect_m

    std::optional<std::uint64_t> count_at(int m) const;
};

// Layer-by-layer extension of all avoiding colorings. A square grid grows by
// one row and one column, a triangular grid by one level; only the
// configurations whose last cell is the new cell are tested. Counts are over
// all colorings. Stops at m_max or after the first size with no solution.
ExtensionReport brute_extend(LatticeKind kind, FamilyId family, ConstraintKind constraint, int m_max,
                             const ExtensionOptions& options = {});

enum class SearchOutcome { Found, LimitReached, SolverUnknown };
std::string_view to_string(SearchOutcome outcome);

struct SearchStep {
    int m = 0;
    SolveStatus status = SolveStatus::Unknown;
    std::uint64_t configurations = 0;
    double wall_ms = 0.0;
};

struct GallaiReport {
    FamilyId family;
    ConstraintKind constraint = ConstraintKind::NotMonochromatic;
    SearchOutcome outcome = SearchOutcome::LimitReached;
    std::vector<SearchStep> steps; // in the order they were solved
    std::optional<int> m0;         // least m with an unsatisfiable instance
    std::optional<Coloring> witness; // largest satisfiable size seen, oracle-checked
    std::optional<std::string> proof_path;
};

using SearchProgress = std::function<void(const SearchStep&)>;

// Solves the fix-origin instance for m = m_start, m_start + 1, ... until the
// first Unsat. If m_start is already Unsat, smaller sizes are solved until a
// satisfiable one supplies the witness. Never skips an Unknown.
GallaiReport gallai_search(FamilyId family, ConstraintKind constraint, const SolverConfig& solver, int m_start,
                           int m_limit, const SearchProgress& progress = {});

// {family, k, constraint, outcome, results:[{m, status, count, wall_ms}], m0?, witness_file?, proof_file?}
std::string to_json(const GallaiReport& report, const std::optional<std::string>& witness_file = std::nullopt);

struct SetComparison {
    bool equal = false;
    std::uint64_t first_count = 0;
    std::uint64_t second_count = 0;
    // A coloring in the symmetric difference when the sets differ.
    std::optional<Coloring> witness;
    bool witness_in_first = false;
};

SetComparison compare_solution_sets(FamilyId first, FamilyId second, ConstraintKind constraint, int m,
                                    const CountConfig& budget = {});

} // namespace gallai
