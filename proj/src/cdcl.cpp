#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>

#include "gallai/solve.hpp"

namespace gallai {

namespace {

using Lit = std::uint32_t; // 2 * var + (negated ? 1 : 0), var 0-based
using CRef = std::uint32_t;

constexpr CRef kNoReason = std::numeric_limits<CRef>::max();
constexpr Lit kNoLit = std::numeric_limits<Lit>::max();

constexpr Lit from_dimacs(int lit) noexcept {
    return 2u * static_cast<Lit>((lit < 0 ? -lit : lit) - 1) + (lit < 0 ? 1u : 0u);
}
constexpr Lit negate(Lit l) noexcept { return l ^ 1u; }
constexpr std::uint32_t var_of(Lit l) noexcept { return l >> 1; }

enum : std::int8_t { kFalse = -1, kUndef = 0, kTrue = 1 };

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

// Max-heap of variables ordered by activity.
class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& activity) : act_(activity) {}

    void resize(std::size_t n) { pos_.assign(n, -1); }
    bool empty() const { return heap_.empty(); }
    bool contains(std::uint32_t v) const { return pos_[v] >= 0; }

    void insert(std::uint32_t v) {
        if (contains(v)) return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(heap_.size() - 1);
    }
    void increased(std::uint32_t v) {
        if (contains(v)) up(static_cast<std::size_t>(pos_[v]));
    }
    std::uint32_t pop() {
        const std::uint32_t top = heap_.front();
        heap_.front() = heap_.back();
        pos_[heap_.front()] = 0;
        heap_.pop_back();
        pos_[top] = -1;
        if (!heap_.empty()) down(0);
        return top;
    }

private:
    bool before(std::uint32_t a, std::uint32_t b) const {
        return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
    }
    void up(std::size_t i) {
        const std::uint32_t v = heap_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!before(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = static_cast<int>(i);
    }
    void down(std::size_t i) {
        const std::uint32_t v = heap_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap_.size()) break;
            if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], v)) break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        pos_[v] = static_cast<int>(i);
    }

    const std::vector<double>& act_;
    std::vector<std::uint32_t> heap_;
    std::vector<int> pos_;
};

class CdclSolver {
public:
    CdclSolver(std::uint32_t n_vars, std::uint64_t seed) : n_(n_vars), heap_(activity_) {
        assigns_.assign(n_, kUndef);
        level_.assign(n_, 0);
        reason_.assign(n_, kNoReason);
        phase_.assign(n_, 1);
        seen_.assign(n_, 0);
        activity_.assign(n_, 0.0);
        watches_.resize(2 * static_cast<std::size_t>(n_));
        heap_.resize(n_);
        if (seed != 0) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> jitter(0.0, 1e-5);
            for (auto& a : activity_) a = jitter(rng);
        }
        for (std::uint32_t v = 0; v < n_; ++v) heap_.insert(v);
    }

    void add_clause(std::span<const int> dimacs) {
        if (!ok_) return;
        std::vector<Lit> lits;
        lits.reserve(dimacs.size());
        for (int d : dimacs) lits.push_back(from_dimacs(d));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 1; i < lits.size(); ++i) {
            if (lits[i] == negate(lits[i - 1])) return; // tautology
        }
        if (lits.empty()) {
            ok_ = false;
        } else if (lits.size() == 1) {
            if (value(lits[0]) == kFalse) ok_ = false;
            else if (value(lits[0]) == kUndef) enqueue(lits[0], kNoReason);
        } else {
            const CRef c = alloc(lits, false, 0);
            originals_.push_back(c);
            attach(c);
        }
    }

    SolveStatus solve(const SolverConfig& config, SolveStats& stats) {
        start_ = std::chrono::steady_clock::now();
        time_budget_s_ = config.time_budget_s;
        conflict_budget_ = config.conflict_budget;
        SolveStatus status = SolveStatus::Unknown;
        if (!ok_ || propagate() != kNoReason) {
            status = SolveStatus::Unsat;
        } else {
            max_learnts_ = std::max<double>(static_cast<double>(originals_.size()) / 3.0, 2000.0);
            for (int restart = 0;; ++restart) {
                const auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * 100.0);
                status = search(budget);
                if (status != SolveStatus::Unknown || out_of_budget()) break;
                ++stats_.restarts;
                if (static_cast<double>(learnts_.size()) >= max_learnts_) {
                    reduce_db();
                    max_learnts_ *= 1.1;
                }
            }
        }
        stats = stats_;
        return status;
    }

    std::vector<int> model() const {
        std::vector<int> out(n_);
        for (std::uint32_t v = 0; v < n_; ++v) {
            const int d = static_cast<int>(v + 1);
            out[v] = assigns_[v] == kTrue ? d : -d;
        }
        return out;
    }

private:
    // Arena layout per clause: [size, flags | lbd << 2, activity bits, lits...].
    static constexpr std::uint32_t kLearnt = 1, kDeleted = 2;

    CRef alloc(const std::vector<Lit>& lits, bool learnt, std::uint32_t lbd) {
        const auto ref = static_cast<CRef>(arena_.size());
        arena_.push_back(static_cast<std::uint32_t>(lits.size()));
        arena_.push_back((learnt ? kLearnt : 0u) | (lbd << 2));
        arena_.push_back(0);
        arena_.insert(arena_.end(), lits.begin(), lits.end());
        return ref;
    }
    std::uint32_t size(CRef c) const { return arena_[c]; }
    Lit* lits(CRef c) { return &arena_[c + 3]; }
    bool is_learnt(CRef c) const { return (arena_[c + 1] & kLearnt) != 0; }
    std::uint32_t lbd(CRef c) const { return arena_[c + 1] >> 2; }
    float activity(CRef c) const { return std::bit_cast<float>(arena_[c + 2]); }
    void set_activity(CRef c, float a) { arena_[c + 2] = std::bit_cast<std::uint32_t>(a); }

    void attach(CRef c) {
        Lit* l = lits(c);
        watches_[l[0]].push_back({c, l[1]});
        watches_[l[1]].push_back({c, l[0]});
    }

    std::int8_t value(Lit l) const {
        const std::int8_t v = assigns_[var_of(l)];
        return (l & 1u) ? static_cast<std::int8_t>(-v) : v;
    }

    std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

    void enqueue(Lit l, CRef reason) {
        const std::uint32_t v = var_of(l);
        assigns_[v] = (l & 1u) ? kFalse : kTrue;
        level_[v] = decision_level();
        reason_[v] = reason;
        trail_.push_back(l);
    }

    // Returns the conflicting clause or kNoReason.
    CRef propagate() {
        CRef conflict = kNoReason;
        while (qhead_ < trail_.size()) {
            const Lit p = trail_[qhead_++];
            const Lit false_lit = negate(p);
            auto& ws = watches_[false_lit];
            ++stats_.propagations;
            std::size_t i = 0, j = 0;
            const std::size_t end = ws.size();
            while (i < end) {
                const Watch w = ws[i];
                if (value(w.blocker) == kTrue) {
                    ws[j++] = ws[i++];
                    continue;
                }
                Lit* c = lits(w.cref);
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                ++i;
                const Lit first = c[0];
                const Watch updated{w.cref, first};
                if (first != w.blocker && value(first) == kTrue) {
                    ws[j++] = updated;
                    continue;
                }
                const std::uint32_t n = size(w.cref);
                bool moved = false;
                for (std::uint32_t k = 2; k < n; ++k) {
                    if (value(c[k]) != kFalse) {
                        c[1] = c[k];
                        c[k] = false_lit;
                        watches_[c[1]].push_back(updated);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = updated;
                if (value(first) == kFalse) {
                    conflict = w.cref;
                    qhead_ = trail_.size();
                    while (i < end) ws[j++] = ws[i++];
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
        }
        return conflict;
    }

    void bump_var(std::uint32_t v) {
        if ((activity_[v] += var_inc_) > 1e100) {
            for (auto& a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        heap_.increased(v);
    }

    void bump_clause(CRef c) {
        const float a = activity(c) + static_cast<float>(cla_inc_);
        set_activity(c, a);
        if (a > 1e20f) {
            for (CRef l : learnts_) set_activity(l, activity(l) * 1e-20f);
            cla_inc_ *= 1e-20;
        }
    }

    std::uint32_t abstract_level(std::uint32_t v) const { return 1u << (level_[v] & 31u); }

    bool redundant(Lit p, std::uint32_t abstract_levels) {
        analyze_stack_.clear();
        analyze_stack_.push_back(p);
        const std::size_t top = analyze_toclear_.size();
        while (!analyze_stack_.empty()) {
            const CRef r = reason_[var_of(analyze_stack_.back())];
            analyze_stack_.pop_back();
            Lit* c = lits(r);
            const std::uint32_t n = size(r);
            for (std::uint32_t i = 1; i < n; ++i) {
                const Lit q = c[i];
                const std::uint32_t v = var_of(q);
                if (seen_[v] || level_[v] == 0) continue;
                if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
                    seen_[v] = 1;
                    analyze_stack_.push_back(q);
                    analyze_toclear_.push_back(q);
                } else {
                    for (std::size_t k = top; k < analyze_toclear_.size(); ++k) seen_[var_of(analyze_toclear_[k])] = 0;
                    analyze_toclear_.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    void analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& bt_level, std::uint32_t& lbd_out) {
        learnt.clear();
        learnt.push_back(kNoLit);
        int path = 0;
        Lit p = kNoLit;
        std::size_t index = trail_.size();
        CRef c = conflict;
        do {
            if (is_learnt(c)) bump_clause(c);
            Lit* cl = lits(c);
            const std::uint32_t n = size(c);
            for (std::uint32_t j = (p == kNoLit ? 0 : 1); j < n; ++j) {
                const Lit q = cl[j];
                const std::uint32_t v = var_of(q);
                if (!seen_[v] && level_[v] > 0) {
                    bump_var(v);
                    seen_[v] = 1;
                    if (level_[v] >= decision_level()) ++path;
                    else learnt.push_back(q);
                }
            }
            while (!seen_[var_of(trail_[--index])]) {
            }
            p = trail_[index];
            c = reason_[var_of(p)];
            seen_[var_of(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = negate(p);

        // Recursive minimization.
        analyze_toclear_.assign(learnt.begin(), learnt.end());
        std::uint32_t levels = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var_of(learnt[i]));
        std::size_t keep = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i) {
            const std::uint32_t v = var_of(learnt[i]);
            if (reason_[v] == kNoReason || !redundant(learnt[i], levels)) learnt[keep++] = learnt[i];
        }
        learnt.resize(keep);

        bt_level = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i) {
                if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
            }
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[var_of(learnt[1])];
        }
        for (Lit l : analyze_toclear_) seen_[var_of(l)] = 0;

        // Literal block distance.
        ++lbd_stamp_;
        if (lbd_seen_.size() < decision_level() + 1) lbd_seen_.resize(decision_level() + 1, 0);
        lbd_out = 0;
        for (Lit l : learnt) {
            const std::uint32_t lv = level_[var_of(l)];
            if (lbd_seen_[lv] != lbd_stamp_) {
                lbd_seen_[lv] = lbd_stamp_;
                ++lbd_out;
            }
        }
    }

    void cancel_until(std::uint32_t lvl) {
        if (decision_level() <= lvl) return;
        for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
            const std::uint32_t v = var_of(trail_[i]);
            assigns_[v] = kUndef;
            reason_[v] = kNoReason;
            phase_[v] = static_cast<std::uint8_t>(trail_[i] & 1u);
            heap_.insert(v);
        }
        trail_.resize(trail_lim_[lvl]);
        trail_lim_.resize(lvl);
        qhead_ = trail_.size();
    }

    Lit pick_branch() {
        while (!heap_.empty()) {
            const std::uint32_t v = heap_.pop();
            if (assigns_[v] == kUndef) {
                ++stats_.decisions;
                return 2u * v + phase_[v];
            }
        }
        return kNoLit;
    }

    bool out_of_budget() {
        if (conflict_budget_ && stats_.conflicts >= *conflict_budget_) return true;
        if (time_budget_s_ > 0.0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
            if (elapsed.count() >= time_budget_s_) return true;
        }
        return false;
    }

    SolveStatus search(std::uint64_t conflict_limit) {
        std::uint64_t local_conflicts = 0;
        std::vector<Lit> learnt;
        for (;;) {
            const CRef conflict = propagate();
            if (conflict != kNoReason) {
                ++stats_.conflicts;
                ++local_conflicts;
                if (decision_level() == 0) return SolveStatus::Unsat;
                std::uint32_t bt = 0, lbd = 0;
                analyze(conflict, learnt, bt, lbd);
                cancel_until(bt);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    const CRef c = alloc(learnt, true, lbd);
                    learnts_.push_back(c);
                    attach(c);
                    bump_clause(c);
                    enqueue(learnt[0], c);
                }
                var_inc_ /= 0.95;
                cla_inc_ /= 0.999;
                if ((stats_.conflicts & 255u) == 0 && out_of_budget()) {
                    cancel_until(0);
                    return SolveStatus::Unknown;
                }
            } else {
                if (local_conflicts >= conflict_limit) {
                    cancel_until(0);
                    return SolveStatus::Unknown;
                }
                const Lit next = pick_branch();
                if (next == kNoLit) return SolveStatus::Sat;
                trail_lim_.push_back(trail_.size());
                enqueue(next, kNoReason);
            }
        }
    }

    // Called at decision level 0, where no learnt clause is a reason that
    // analysis can reach; drops half of the learnt clauses and compacts.
    void reduce_db() {
        std::vector<CRef> sorted = learnts_;
        std::sort(sorted.begin(), sorted.end(), [&](CRef a, CRef b) {
            if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
            return activity(a) < activity(b);
        });
        const std::size_t remove = sorted.size() / 2;
        std::size_t removed = 0;
        for (CRef c : sorted) {
            if (removed >= remove) break;
            if (lbd(c) <= 2 || size(c) <= 2) continue;
            arena_[c + 1] |= kDeleted;
            ++removed;
        }
        for (std::uint32_t v = 0; v < n_; ++v) reason_[v] = kNoReason;

        std::vector<std::uint32_t> fresh;
        fresh.reserve(arena_.size());
        auto copy = [&](CRef c) {
            const auto ref = static_cast<CRef>(fresh.size());
            fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + 3 + size(c));
            return ref;
        };
        for (auto& c : originals_) c = copy(c);
        std::vector<CRef> kept;
        for (CRef c : learnts_) {
            if (!(arena_[c + 1] & kDeleted)) kept.push_back(copy(c));
        }
        learnts_ = std::move(kept);
        arena_ = std::move(fresh);
        for (auto& ws : watches_) ws.clear();
        for (CRef c : originals_) attach(c);
        for (CRef c : learnts_) attach(c);
    }

    struct Watch {
        CRef cref;
        Lit blocker;
    };

    std::uint32_t n_;
    bool ok_ = true;
    std::vector<std::uint32_t> arena_;
    std::vector<CRef> originals_, learnts_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<std::uint32_t> level_;
    std::vector<CRef> reason_;
    std::vector<std::uint8_t> phase_, seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    VarHeap heap_;
    double var_inc_ = 1.0, cla_inc_ = 1.0;
    double max_learnts_ = 0.0;
    std::vector<Lit> analyze_stack_, analyze_toclear_;
    std::vector<std::uint64_t> lbd_seen_;
    std::uint64_t lbd_stamp_ = 0;
    SolveStats stats_;
    std::chrono::steady_clock::time_point start_;
    double time_budget_s_ = 0.0;
    std::optional<std::uint64_t> conflict_budget_;
};

} // namespace

std::string_view to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::Sat: return "SATISFIABLE";
    case SolveStatus::Unsat: return "UNSATISFIABLE";
    case SolveStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

SolveOutcome solve_embedded(const Cnf& cnf, const SolverConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome outcome;
    CdclSolver solver(cnf.n_vars, config.seed);
    for (const auto& c : cnf.clauses) solver.add_clause(c);
    outcome.status = solver.solve(config, outcome.stats);
    if (outcome.status == SolveStatus::Sat) {
        outcome.witness = solver.model();
        if (!satisfies(cnf, outcome.witness)) {
            throw std::logic_error("embedded solver produced a witness that violates the formula");
        }
    }
    outcome.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

} // namespace gallai
