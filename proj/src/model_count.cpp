#include <cstdlib>

#include "gallai/solve.hpp"

namespace gallai {

namespace {

// Exhaustive DPLL over the clause set with unit propagation. A branch whose
// clauses are all satisfied contributes 2^(unassigned variables) models.
class ModelEnumerator {
public:
    ModelEnumerator(const Cnf& cnf, const CountConfig& config) : cnf_(cnf), config_(config) {
        if (cnf.n_vars > config.max_vars) {
            throw Error(ErrorCode::BudgetExceeded, "model counting limited to " + std::to_string(config.max_vars) +
                                                       " variables, instance has " + std::to_string(cnf.n_vars));
        }
        const std::size_t n = cnf.n_vars;
        occ_.resize(2 * n);
        value_.assign(n, -1);
        sat_.assign(cnf.clauses.size(), 0);
        false_.assign(cnf.clauses.size(), 0);
        for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
            if (cnf.clauses[c].empty()) empty_clause_ = true;
            for (int lit : cnf.clauses[c]) occ_[index(lit)].push_back(static_cast<std::uint32_t>(c));
        }
        open_ = cnf.clauses.size();
    }

    // visit == nullptr: count only.
    std::uint64_t run(const std::function<void(std::span<const std::uint8_t>)>* visit) {
        visit_ = visit;
        count_ = 0;
        if (empty_clause_) return 0;
        // Unit clauses of the input seed the first propagation.
        for (std::size_t c = 0; c < cnf_.clauses.size(); ++c) {
            if (cnf_.clauses[c].size() == 1) {
                const int lit = cnf_.clauses[c][0];
                const int v = value_[var(lit)];
                if (v == -1) {
                    if (!assign(lit)) return 0;
                } else if (v != (lit > 0 ? 1 : 0)) {
                    return 0;
                }
            }
        }
        if (!propagate()) return 0;
        recurse();
        return count_;
    }

private:
    static std::size_t var(int lit) { return static_cast<std::size_t>(std::abs(lit)) - 1; }
    static std::size_t index(int lit) { return 2 * var(lit) + (lit < 0 ? 1 : 0); }

    bool lit_true(int lit) const {
        const int v = value_[var(lit)];
        return v != -1 && (v == 1) == (lit > 0);
    }

    // Returns false on conflict; state stays consistent for undo either way.
    bool assign(int lit) {
        value_[var(lit)] = lit > 0 ? 1 : 0;
        trail_.push_back(lit);
        bool ok = true;
        for (std::uint32_t c : occ_[index(lit)]) {
            if (sat_[c]++ == 0) --open_;
        }
        for (std::uint32_t c : occ_[index(-lit)]) {
            ++false_[c];
            if (sat_[c] == 0) {
                const auto size = cnf_.clauses[c].size();
                if (false_[c] == size) ok = false;
                else if (false_[c] + 1 == size) pending_.push_back(c);
            }
        }
        return ok;
    }

    void unassign_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const int lit = trail_.back();
            trail_.pop_back();
            for (std::uint32_t c : occ_[index(lit)]) {
                if (--sat_[c] == 0) ++open_;
            }
            for (std::uint32_t c : occ_[index(-lit)]) --false_[c];
            value_[var(lit)] = -1;
        }
    }

    bool propagate() {
        while (!pending_.empty()) {
            const std::uint32_t c = pending_.back();
            pending_.pop_back();
            if (sat_[c] != 0) continue;
            int unit = 0;
            for (int lit : cnf_.clauses[c]) {
                if (value_[var(lit)] == -1) {
                    unit = lit;
                    break;
                }
            }
            if (unit == 0) {
                pending_.clear();
                return false;
            }
            if (!assign(unit)) {
                pending_.clear();
                return false;
            }
        }
        return true;
    }

    void recurse() {
        if (open_ == 0) {
            const std::size_t free = cnf_.n_vars - trail_.size();
            if (visit_ == nullptr) {
                if (free >= 64) throw Error(ErrorCode::BudgetExceeded, "model count exceeds 64 bits");
                add(std::uint64_t{1} << free);
            } else {
                emit_models();
            }
            return;
        }
        int branch = 0;
        for (std::size_t c = 0; c < cnf_.clauses.size() && branch == 0; ++c) {
            if (sat_[c] != 0) continue;
            for (int lit : cnf_.clauses[c]) {
                if (value_[var(lit)] == -1) {
                    branch = std::abs(lit);
                    break;
                }
            }
        }
        for (int lit : {-branch, branch}) {
            const std::size_t mark = trail_.size();
            if (assign(lit) && propagate()) recurse();
            pending_.clear();
            unassign_to(mark);
        }
    }

    void add(std::uint64_t n) {
        count_ += n;
        if (count_ > config_.max_models) {
            throw Error(ErrorCode::BudgetExceeded, "more than " + std::to_string(config_.max_models) + " models");
        }
    }

    void emit_models() {
        std::vector<std::size_t> free;
        for (std::size_t v = 0; v < value_.size(); ++v) {
            if (value_[v] == -1) free.push_back(v);
        }
        std::vector<std::uint8_t> model(value_.size());
        for (std::size_t v = 0; v < value_.size(); ++v) model[v] = value_[v] == 1 ? 1 : 0;
        const std::uint64_t combos = free.size() >= 64 ? 0 : std::uint64_t{1} << free.size();
        if (combos == 0) throw Error(ErrorCode::BudgetExceeded, "too many free variables to enumerate");
        for (std::uint64_t mask = 0; mask < combos; ++mask) {
            for (std::size_t i = 0; i < free.size(); ++i) model[free[i]] = (mask >> i) & 1u;
            add(1);
            (*visit_)(model);
        }
    }

    const Cnf& cnf_;
    CountConfig config_;
    std::vector<std::vector<std::uint32_t>> occ_;
    std::vector<int> value_;
    std::vector<std::size_t> sat_, false_;
    std::vector<int> trail_;
    std::vector<std::uint32_t> pending_;
    std::size_t open_ = 0;
    bool empty_clause_ = false;
    std::uint64_t count_ = 0;
    const std::function<void(std::span<const std::uint8_t>)>* visit_ = nullptr;
};

} // namespace

std::uint64_t count_models(const Cnf& cnf, const CountConfig& config) {
    ModelEnumerator e(cnf, config);
    return e.run(nullptr);
}

std::uint64_t count_models(const CnfInstance& instance, const CountConfig& config) {
    if (instance.meta.break_mode == SymmetryBreakMode::LexLeader) {
        throw Error(ErrorCode::InvalidArgument, "model counting over lex-leader instances would count auxiliary "
                                                "variables; use break mode none or fix-origin");
    }
    return count_models(instance.cnf, config);
}

void for_each_model(const Cnf& cnf, const std::function<void(std::span<const std::uint8_t>)>& visit,
                    const CountConfig& config) {
    ModelEnumerator e(cnf, config);
    e.run(&visit);
}

} // namespace gallai
