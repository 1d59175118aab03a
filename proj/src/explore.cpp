#include "gallai/explore.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gallai/oracle.hpp"

namespace gallai {

std::optional<std::uint64_t> ExtensionReport::count_at(int m) const {
    for (const auto& [size, n] : counts) {
        if (size == m) return n;
    }
    return std::nullopt;
}

namespace {

// Cells of the largest grid listed so that every smaller grid is a prefix:
// square shells max(x,y) = s in the order (s,0..s), (0..s-1,s); triangular
// levels in canonical order.
std::vector<CellIndex> layer_order(const GridSpec& grid) {
    std::vector<CellIndex> order;
    order.reserve(grid.cell_count());
    if (grid.kind() == LatticeKind::Triangular) {
        for (CellIndex i = 1; i <= grid.cell_count(); ++i) order.push_back(i);
        return order;
    }
    for (int s = 0; s < grid.m(); ++s) {
        for (int y = 0; y <= s; ++y) order.push_back(index_of_unchecked(grid, {s, y, 0}));
        for (int x = 0; x < s; ++x) order.push_back(index_of_unchecked(grid, {x, s, 0}));
    }
    return order;
}

class Extender {
public:
    Extender(LatticeKind kind, FamilyId family, ConstraintKind constraint, int m_max, std::optional<int> collect_m)
        : grid_(kind, m_max), constraint_(constraint), arity_(arity(family)), m_max_(m_max), collect_m_(collect_m) {
        order_ = layer_order(grid_);
        n_ = order_.size();
        std::vector<std::uint32_t> pos_of(grid_.cell_count() + 1);
        for (std::uint32_t p = 0; p < n_; ++p) pos_of[order_[p]] = p;

        ends_m_.assign(n_ + 1, 0);
        for (int m = 1; m <= m_max; ++m) ends_m_[GridSpec(kind, m).cell_count()] = m;

        bucket_.resize(n_);
        for_each_configuration(grid_, family, [&](const Configuration& c) {
            std::array<std::uint32_t, 8> pos{};
            for (std::size_t i = 0; i < c.size; ++i) pos[i] = pos_of[c.verts[i]];
            std::sort(pos.begin(), pos.begin() + c.size);
            auto& b = bucket_[pos[c.size - 1]];
            b.insert(b.end(), pos.begin(), pos.begin() + c.size - 1);
            return true;
        });

        if (collect_m_) {
            const GridSpec small(kind, *collect_m_);
            for (std::uint32_t p = 0; p < small.cell_count(); ++p) {
                collect_index_.push_back(index_of(small, cell_of(grid_, order_[p])));
            }
        }
    }

    struct Partial {
        std::vector<std::uint64_t> counts; // indexed by m
        std::vector<Coloring> collected;
    };

    ExtensionReport run(unsigned threads) {
        Partial total{std::vector<std::uint64_t>(m_max_ + 1, 0), {}};

        // Breadth-first over a short prefix, then independent depth-first
        // searches below each surviving prefix.
        std::vector<std::vector<std::uint8_t>> frontier{{}};
        const std::size_t wanted = 8 * std::max(1u, threads);
        std::uint32_t depth = 0;
        while (depth < n_ && !frontier.empty() && frontier.size() < wanted) {
            std::vector<std::vector<std::uint8_t>> next;
            for (auto& prefix : frontier) {
                prefix.resize(n_);
                for (std::uint8_t c : {0, 1}) {
                    if (!admissible(prefix, depth, c)) continue;
                    prefix[depth] = c;
                    record(prefix, depth + 1, total);
                    next.emplace_back(prefix.begin(), prefix.begin() + depth + 1);
                }
            }
            frontier = std::move(next);
            ++depth;
        }

        if (depth < n_ && !frontier.empty()) {
            const unsigned workers = std::max(1u, std::min<unsigned>(threads, frontier.size()));
            std::vector<Partial> partial(workers, Partial{std::vector<std::uint64_t>(m_max_ + 1, 0), {}});
            std::atomic<std::size_t> next{0};
            auto work = [&](unsigned w) {
                std::vector<std::uint8_t> assign(n_);
                for (std::size_t i = next++; i < frontier.size(); i = next++) {
                    std::copy(frontier[i].begin(), frontier[i].end(), assign.begin());
                    dfs(assign, depth, partial[w]);
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::jthread> pool;
                for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            }
            for (auto& p : partial) {
                for (int m = 1; m <= m_max_; ++m) total.counts[m] += p.counts[m];
                std::move(p.collected.begin(), p.collected.end(), std::back_inserter(total.collected));
            }
        }

        ExtensionReport report;
        for (int m = 1; m <= m_max_; ++m) {
            report.counts.emplace_back(m, total.counts[m]);
            if (total.counts[m] == 0) {
                report.first_empty_m = m;
                break;
            }
        }
        std::sort(total.collected.begin(), total.collected.end());
        report.collected = std::move(total.collected);
        return report;
    }

private:
    bool admissible(const std::vector<std::uint8_t>& assign, std::uint32_t p, std::uint8_t color) const {
        const auto& b = bucket_[p];
        const std::size_t w = static_cast<std::size_t>(arity_) - 1;
        for (std::size_t i = 0; i < b.size(); i += w) {
            int black = color;
            for (std::size_t j = 0; j < w; ++j) black += assign[b[i + j]];
            if (!admits(constraint_, black, arity_)) return false;
        }
        return true;
    }

    // Called once assign[0, filled) is complete and consistent.
    void record(const std::vector<std::uint8_t>& assign, std::uint32_t filled, Partial& out) const {
        const int m = ends_m_[filled];
        if (m == 0) return;
        ++out.counts[m];
        if (collect_m_ && *collect_m_ == m) {
            Coloring c(GridSpec(grid_.kind(), m));
            for (std::uint32_t p = 0; p < filled; ++p) c.set(collect_index_[p], assign[p]);
            out.collected.push_back(std::move(c));
        }
    }

    void dfs(std::vector<std::uint8_t>& assign, std::uint32_t p, Partial& out) const {
        if (p == n_) return;
        for (std::uint8_t c : {0, 1}) {
            if (!admissible(assign, p, c)) continue;
            assign[p] = c;
            record(assign, p + 1, out);
            dfs(assign, p + 1, out);
        }
    }

    GridSpec grid_;
    ConstraintKind constraint_;
    int arity_;
    int m_max_;
    std::optional<int> collect_m_;
    std::vector<CellIndex> order_;
    std::uint32_t n_ = 0;
    std::vector<int> ends_m_;
    // bucket_[p]: the other positions of every configuration whose last position is p, arity-1 per entry.
    std::vector<std::vector<std::uint32_t>> bucket_;
    std::vector<CellIndex> collect_index_;
};

} // namespace

ExtensionReport brute_extend(LatticeKind kind, FamilyId family, ConstraintKind constraint, int m_max,
                             const ExtensionOptions& options) {
    if (kind != LatticeKind::Square2D && kind != LatticeKind::Triangular) {
        throw Error(ErrorCode::UnsupportedKind, "layer extension runs on square and triangular grids only");
    }
    if (m_max < 1) throw Error(ErrorCode::InvalidArgument, "m_max must be >= 1");
    if (lattice_of(family) != kind) {
        throw Error(ErrorCode::KindMismatch, to_string(family) + " does not live on a " + std::string(to_string(kind)) +
                                                 " grid");
    }
    require_arity(family, constraint);
    if (options.collect_m && (*options.collect_m < 1 || *options.collect_m > m_max)) {
        throw Error(ErrorCode::InvalidArgument, "collect size outside [1, m_max]");
    }
    Extender e(kind, family, constraint, m_max, options.collect_m);
    return e.run(options.threads);
}

std::string_view to_string(SearchOutcome outcome) {
    switch (outcome) {
    case SearchOutcome::Found: return "found";
    case SearchOutcome::LimitReached: return "limit-reached";
    case SearchOutcome::SolverUnknown: return "solver-unknown";
    }
    return "?";
}

GallaiReport gallai_search(FamilyId family, ConstraintKind constraint, const SolverConfig& solver, int m_start,
                           int m_limit, const SearchProgress& progress) {
    if (m_start < 1) throw Error(ErrorCode::InvalidArgument, "m_start must be >= 1");
    require_arity(family, constraint);

    GallaiReport report;
    report.family = family;
    report.constraint = constraint;
    int witness_m = 0;

    // Returns the status at m, recording the step and any witness.
    auto attempt = [&](int m) {
        const GridSpec grid(lattice_of(family), m);
        const auto instance = build_cnf(grid, family, constraint, SymmetryBreakMode::FixOrigin);
        SolverConfig config = solver;
        if (!config.work_dir.empty()) config.work_dir = (std::filesystem::path(config.work_dir) / ("m" + std::to_string(m))).string();
        const auto start = std::chrono::steady_clock::now();
        const SolveOutcome outcome = solve(instance.cnf, config);
        SearchStep step{m, outcome.status, instance.configuration_count,
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()};
        if (outcome.status == SolveStatus::Sat && m > witness_m) {
            Coloring witness = decode_witness(instance, outcome.witness);
            const Verdict verdict = check(witness, family, constraint);
            if (!verdict.ok()) {
                throw std::logic_error("solver witness at m=" + std::to_string(m) + " fails the oracle: " +
                                       describe(verdict, grid));
            }
            report.witness = std::move(witness);
            witness_m = m;
        }
        if (outcome.status == SolveStatus::Unsat) report.proof_path = outcome.proof_path;
        report.steps.push_back(step);
        if (progress) progress(step);
        return outcome.status;
    };

    for (int m = m_start; m <= m_limit; ++m) {
        const SolveStatus status = attempt(m);
        if (status == SolveStatus::Unknown) {
            report.outcome = SearchOutcome::SolverUnknown;
            return report;
        }
        if (status == SolveStatus::Sat) continue;
        report.m0 = m;
        for (int down = m - 1; witness_m == 0 && down >= 1; --down) {
            const SolveStatus s = attempt(down);
            if (s == SolveStatus::Unknown) {
                report.outcome = SearchOutcome::SolverUnknown;
                return report;
            }
            if (s == SolveStatus::Unsat) report.m0 = down;
        }
        report.outcome = SearchOutcome::Found;
        return report;
    }
    report.outcome = SearchOutcome::LimitReached;
    return report;
}

std::string to_json(const GallaiReport& report, const std::optional<std::string>& witness_file) {
    nlohmann::ordered_json j;
    j["family"] = family_name(report.family.kind);
    j["k"] = report.family.k;
    j["constraint"] = to_string(report.constraint);
    j["outcome"] = to_string(report.outcome);
    auto results = nlohmann::ordered_json::array();
    for (const auto& s : report.steps) {
        nlohmann::ordered_json r;
        r["m"] = s.m;
        r["status"] = to_string(s.status);
        r["count"] = s.configurations;
        r["wall_ms"] = s.wall_ms;
        results.push_back(std::move(r));
    }
    j["results"] = std::move(results);
    if (report.m0) j["m0"] = *report.m0;
    if (witness_file) j["witness_file"] = *witness_file;
    if (report.proof_path) j["proof_file"] = *report.proof_path;
    return j.dump(2);
}

SetComparison compare_solution_sets(FamilyId first, FamilyId second, ConstraintKind constraint, int m,
                                    const CountConfig& budget) {
    if (lattice_of(first) != lattice_of(second)) {
        throw Error(ErrorCode::KindMismatch, to_string(first) + " and " + to_string(second) + " use different grids");
    }
    const GridSpec grid(lattice_of(first), m);
    auto solutions = [&](FamilyId family) {
        const auto instance = build_cnf(grid, family, constraint, SymmetryBreakMode::None);
        std::set<std::vector<std::uint8_t>> out;
        for_each_model(instance.cnf, [&](std::span<const std::uint8_t> model) { out.emplace(model.begin(), model.end()); },
                       budget);
        return out;
    };
    const auto a = solutions(first);
    const auto b = solutions(second);
    SetComparison result;
    result.first_count = a.size();
    result.second_count = b.size();
    result.equal = a == b;
    if (!result.equal) {
        auto ia = a.begin();
        auto ib = b.begin();
        while (ia != a.end() || ib != b.end()) {
            if (ib == b.end() || (ia != a.end() && *ia < *ib)) {
                result.witness = Coloring(grid, *ia);
                result.witness_in_first = true;
                break;
            }
            if (ia == a.end() || *ib < *ia) {
                result.witness = Coloring(grid, *ib);
                result.witness_in_first = false;
                break;
            }
            ++ia;
            ++ib;
        }
    }
    return result;
}

} // namespace gallai
