#include "gallai/encode.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <set>
#include <sstream>

#include "gallai/symmetry.hpp"

namespace gallai {

std::string_view to_string(ConstraintKind c) {
    switch (c) {
    case ConstraintKind::NotMonochromatic: return "not-mono";
    case ConstraintKind::BalancedTwoTwo: return "balanced";
    case ConstraintKind::OddParity: return "odd-parity";
    }
    return "?";
}

std::string_view to_string(SymmetryBreakMode mode) {
    switch (mode) {
    case SymmetryBreakMode::None: return "none";
    case SymmetryBreakMode::FixOrigin: return "fix-origin";
    case SymmetryBreakMode::LexLeader: return "lex-leader";
    }
    return "?";
}

ConstraintKind parse_constraint(std::string_view name) {
    if (name == "not-mono") return ConstraintKind::NotMonochromatic;
    if (name == "balanced") return ConstraintKind::BalancedTwoTwo;
    if (name == "odd-parity") return ConstraintKind::OddParity;
    throw Error(ErrorCode::InvalidArgument, "unknown constraint '" + std::string(name) + "'");
}

SymmetryBreakMode parse_break_mode(std::string_view name) {
    if (name == "none") return SymmetryBreakMode::None;
    if (name == "fix-origin") return SymmetryBreakMode::FixOrigin;
    if (name == "lex-leader") return SymmetryBreakMode::LexLeader;
    throw Error(ErrorCode::InvalidArgument, "unknown symmetry-break mode '" + std::string(name) + "'");
}

void require_arity(FamilyId family, ConstraintKind constraint) {
    if (constraint != ConstraintKind::NotMonochromatic && arity(family) != 4) {
        throw Error(ErrorCode::ArityMismatch, std::string(to_string(constraint)) + " needs 4-vertex configurations; " +
                                                  to_string(family) + " has " + std::to_string(arity(family)));
    }
}

namespace {

void emit_configuration_clauses(ConstraintKind constraint, std::span<const CellIndex> v, const ClauseVisitor& visit) {
    std::array<int, 8> lits{};
    const std::size_t n = v.size();
    switch (constraint) {
    case ConstraintKind::NotMonochromatic:
        for (std::size_t i = 0; i < n; ++i) lits[i] = static_cast<int>(v[i]);
        visit({lits.data(), n});
        for (std::size_t i = 0; i < n; ++i) lits[i] = -static_cast<int>(v[i]);
        visit({lits.data(), n});
        break;
    case ConstraintKind::BalancedTwoTwo:
        // No three vertices black, then no three vertices white.
        for (int sign : {-1, 1}) {
            for (std::size_t skip = 4; skip-- > 0;) {
                std::size_t w = 0;
                for (std::size_t i = 0; i < 4; ++i) {
                    if (i != skip) lits[w++] = sign * static_cast<int>(v[i]);
                }
                visit({lits.data(), 3});
            }
        }
        break;
    case ConstraintKind::OddParity:
        // One clause per even-weight assignment, falsified exactly by it.
        for (unsigned alpha = 0; alpha < 16; ++alpha) {
            if (__builtin_popcount(alpha) % 2 != 0) continue;
            for (std::size_t i = 0; i < 4; ++i) {
                const int var = static_cast<int>(v[i]);
                lits[i] = (alpha >> i) & 1u ? -var : var;
            }
            visit({lits.data(), 4});
        }
        break;
    }
}

std::uint64_t clauses_per_configuration(ConstraintKind constraint) {
    return constraint == ConstraintKind::NotMonochromatic ? 2 : 8;
}

// Chained encoding of x <=lex x o perm over variables 1..n.
// e_i is forced true when the first i positions agree; at an agreeing prefix
// the next position must satisfy x_i <= x_perm(i).
void append_lex_chain(std::span<const CellIndex> perm, std::uint32_t& next_var, std::vector<Clause>& out) {
    int prefix = 0; // 0 means "true" (empty prefix)
    std::vector<std::size_t> moved;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] != i + 1) moved.push_back(i);
    }
    for (std::size_t n = 0; n < moved.size(); ++n) {
        const int x = static_cast<int>(moved[n] + 1);
        const int y = static_cast<int>(perm[moved[n]]);
        auto with_prefix = [&](std::initializer_list<int> lits) {
            Clause c;
            if (prefix != 0) c.push_back(-prefix);
            c.insert(c.end(), lits);
            out.push_back(std::move(c));
        };
        with_prefix({-x, y});
        if (n + 1 == moved.size()) break;
        const int e = static_cast<int>(next_var++);
        with_prefix({x, y, e});
        with_prefix({-x, -y, e});
        prefix = e;
    }
}

} // namespace

LexLeaderClauses lex_leader_clauses(const GridSpec& grid, FamilyId family, std::uint32_t first_aux) {
    LexLeaderClauses result;
    if (grid.kind() != LatticeKind::Square2D && grid.kind() != LatticeKind::Triangular) return result;

    const auto elements = dihedral_elements(grid.kind());
    std::vector<std::vector<CellIndex>> perms;
    for (const auto& e : elements) perms.push_back(cell_permutation(grid, e));
    const std::vector<CellIndex>& identity = perms.front();

    // Greedy generating set of the family's stabilizer subgroup.
    std::set<std::vector<CellIndex>> generated{identity};
    auto close = [&]() {
        bool grew = true;
        while (grew) {
            grew = false;
            const std::vector<std::vector<CellIndex>> current(generated.begin(), generated.end());
            for (const auto& a : current) {
                for (const auto& b : current) {
                    std::vector<CellIndex> ab(a.size());
                    for (std::size_t i = 0; i < a.size(); ++i) ab[i] = a[b[i] - 1];
                    grew |= generated.insert(std::move(ab)).second;
                }
            }
        }
    };

    std::uint32_t next_var = first_aux;
    for (std::size_t g = 1; g < elements.size(); ++g) {
        if (generated.contains(perms[g])) continue;
        if (!stabilizes(grid, family, perms[g])) continue;
        generated.insert(perms[g]);
        close();
        append_lex_chain(perms[g], next_var, result.clauses);
        result.generators.push_back(elements[g].to_string());
    }
    result.n_aux = next_var - first_aux;
    return result;
}

CnfHeader for_each_clause(const InstanceMeta& meta, const ClauseVisitor& visit) {
    require_kind(meta.grid, meta.family);
    require_arity(meta.family, meta.constraint);
    CnfHeader header;
    header.n_vars = static_cast<std::uint32_t>(meta.grid.cell_count());
    std::uint64_t clauses = 0;
    auto counting = [&](std::span<const int> c) {
        ++clauses;
        visit(c);
    };
    for_each_configuration(meta.grid, meta.family, [&](const Configuration& c) {
        ++header.configuration_count;
        emit_configuration_clauses(meta.constraint, c.vertices(), counting);
        return true;
    });
    if (meta.break_mode != SymmetryBreakMode::None) {
        const int origin = -1; // cell index 1 is the origin on every lattice
        counting({&origin, 1});
    }
    if (meta.break_mode == SymmetryBreakMode::LexLeader) {
        const auto lex = lex_leader_clauses(meta.grid, meta.family, header.n_vars + 1);
        for (const auto& c : lex.clauses) counting(c);
        header.n_vars += lex.n_aux;
    }
    header.n_clauses = clauses;
    return header;
}

CnfHeader cnf_header(const InstanceMeta& meta) {
    require_kind(meta.grid, meta.family);
    require_arity(meta.family, meta.constraint);
    CnfHeader header;
    header.n_vars = static_cast<std::uint32_t>(meta.grid.cell_count());
    header.configuration_count = count(meta.grid, meta.family);
    header.n_clauses = header.configuration_count * clauses_per_configuration(meta.constraint);
    if (meta.break_mode != SymmetryBreakMode::None) ++header.n_clauses;
    if (meta.break_mode == SymmetryBreakMode::LexLeader) {
        const auto lex = lex_leader_clauses(meta.grid, meta.family, header.n_vars + 1);
        header.n_clauses += lex.clauses.size();
        header.n_vars += lex.n_aux;
    }
    return header;
}

CnfInstance build_cnf(const GridSpec& grid, FamilyId family, ConstraintKind constraint, SymmetryBreakMode mode) {
    CnfInstance inst{{}, {grid, family, constraint, mode}, 0};
    const auto header = for_each_clause(inst.meta, [&](std::span<const int> c) {
        inst.cnf.clauses.emplace_back(c.begin(), c.end());
    });
    inst.cnf.n_vars = header.n_vars;
    inst.configuration_count = header.configuration_count;
    return inst;
}

namespace {

class LineWriter {
public:
    explicit LineWriter(std::ostream& out) : out_(out) {}
    ~LineWriter() { flush(); }

    void clause(std::span<const int> lits) {
        for (int lit : lits) {
            put_int(lit);
            buf_.push_back(' ');
        }
        buf_ += "0\n";
        if (buf_.size() > (1u << 16)) flush();
    }
    void text(std::string_view s) { buf_ += s; }
    void flush() {
        out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        buf_.clear();
    }

private:
    void put_int(int v) {
        char tmp[16];
        auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof tmp, v);
        buf_.append(tmp, ptr);
    }

    std::ostream& out_;
    std::string buf_;
};

std::string meta_comment(const InstanceMeta& meta, std::uint64_t configurations) {
    std::string s = "c gallai kind=" + std::string(to_string(meta.grid.kind())) + " m=" + std::to_string(meta.grid.m()) +
                    " family=" + std::string(family_name(meta.family.kind)) + " k=" + std::to_string(meta.family.k) +
                    " constraint=" + std::string(to_string(meta.constraint)) +
                    " break=" + std::string(to_string(meta.break_mode)) + "\n";
    s += "c configurations=" + std::to_string(configurations) + "\n";
    return s;
}

void write_body(LineWriter& w, const Cnf& cnf) {
    w.text("p cnf " + std::to_string(cnf.n_vars) + " " + std::to_string(cnf.clauses.size()) + "\n");
    for (const auto& c : cnf.clauses) w.clause(c);
}

} // namespace

std::string write_dimacs(const Cnf& cnf) {
    std::ostringstream out;
    {
        LineWriter w(out);
        write_body(w, cnf);
    }
    return out.str();
}

void write_dimacs(std::ostream& out, const CnfInstance& instance) {
    LineWriter w(out);
    w.text(meta_comment(instance.meta, instance.configuration_count));
    write_body(w, instance.cnf);
}

std::string write_dimacs(const CnfInstance& instance) {
    std::ostringstream out;
    write_dimacs(out, instance);
    return out.str();
}

CnfHeader stream_dimacs(std::ostream& out, const InstanceMeta& meta) {
    const auto header = cnf_header(meta);
    LineWriter w(out);
    w.text(meta_comment(meta, header.configuration_count));
    w.text("p cnf " + std::to_string(header.n_vars) + " " + std::to_string(header.n_clauses) + "\n");
    const auto streamed = for_each_clause(meta, [&](std::span<const int> c) { w.clause(c); });
    if (streamed.n_clauses != header.n_clauses || streamed.n_vars != header.n_vars) {
        throw std::logic_error("streamed clause count disagrees with header");
    }
    return header;
}

namespace {

std::optional<InstanceMeta> parse_meta(std::string_view line) {
    // c gallai kind=.. m=.. family=.. k=.. constraint=.. break=..
    std::istringstream in{std::string(line)};
    std::string tok;
    in >> tok >> tok;
    if (tok != "gallai") return std::nullopt;
    std::string kind, family, constraint, brk;
    int m = 0, k = 0;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (key == "kind") kind = value;
        else if (key == "m") m = std::atoi(value.c_str());
        else if (key == "family") family = value;
        else if (key == "k") k = std::atoi(value.c_str());
        else if (key == "constraint") constraint = value;
        else if (key == "break") brk = value;
    }
    try {
        return InstanceMeta{GridSpec(parse_lattice_kind(kind), m), parse_family(family, k),
                            parse_constraint(constraint), parse_break_mode(brk)};
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace

DimacsFile parse_dimacs(std::string_view text) {
    DimacsFile file;
    bool have_header = false;
    std::uint64_t declared_clauses = 0;
    Clause current;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line[0] == 'c') {
            if (!file.meta && line.starts_with("c gallai ")) file.meta = parse_meta(line);
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream in{std::string(line)};
            std::string p, fmt;
            long long vars = -1, clauses = -1;
            in >> p >> fmt >> vars >> clauses;
            if (fmt != "cnf" || vars < 0 || clauses < 0 || have_header) {
                throw Error(ErrorCode::ParseError, "bad problem line " + std::to_string(line_no));
            }
            file.cnf.n_vars = static_cast<std::uint32_t>(vars);
            declared_clauses = static_cast<std::uint64_t>(clauses);
            have_header = true;
            continue;
        }
        if (!have_header) throw Error(ErrorCode::ParseError, "clause before problem line at " + std::to_string(line_no));
        const char* p = line.data();
        const char* const e = line.data() + line.size();
        while (p < e) {
            while (p < e && (*p == ' ' || *p == '\t')) ++p;
            if (p == e) break;
            int lit = 0;
            auto [next, ec] = std::from_chars(p, e, lit);
            if (ec != std::errc{}) throw Error(ErrorCode::ParseError, "bad literal at line " + std::to_string(line_no));
            p = next;
            if (lit == 0) {
                file.cnf.clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (static_cast<std::uint32_t>(std::abs(lit)) > file.cnf.n_vars) {
                    throw Error(ErrorCode::ParseError, "literal " + std::to_string(lit) + " exceeds variable count");
                }
                current.push_back(lit);
            }
        }
    }
    if (!have_header) throw Error(ErrorCode::ParseError, "missing problem line");
    if (!current.empty()) throw Error(ErrorCode::ParseError, "unterminated clause at end of input");
    if (file.cnf.clauses.size() != declared_clauses) {
        throw Error(ErrorCode::ParseError, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                               std::to_string(file.cnf.clauses.size()));
    }
    return file;
}

Coloring decode_witness(const GridSpec& grid, std::span<const int> assignment) {
    const auto n = grid.cell_count();
    std::vector<std::uint8_t> bits(n, 0);
    std::vector<bool> seen(n, false);
    for (int lit : assignment) {
        const auto var = static_cast<std::uint64_t>(std::abs(lit));
        if (var == 0 || var > n) continue;
        bits[var - 1] = lit > 0 ? 1 : 0;
        seen[var - 1] = true;
    }
    for (std::uint64_t i = 0; i < n; ++i) {
        if (!seen[i]) {
            throw Error(ErrorCode::IncompleteAssignment, "variable " + std::to_string(i + 1) + " is unassigned");
        }
    }
    return Coloring(grid, std::move(bits));
}

std::vector<int> encode_coloring(const Coloring& coloring) {
    std::vector<int> out;
    const auto bits = coloring.bits();
    out.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const int var = static_cast<int>(i + 1);
        out.push_back(bits[i] ? var : -var);
    }
    return out;
}

bool satisfies(const Cnf& cnf, std::span<const int> assignment) {
    std::vector<std::int8_t> value(cnf.n_vars + 1, 0);
    for (int lit : assignment) {
        const auto var = static_cast<std::uint32_t>(std::abs(lit));
        if (var >= 1 && var <= cnf.n_vars) value[var] = lit > 0 ? 1 : -1;
    }
    for (const auto& c : cnf.clauses) {
        bool sat = false;
        for (int lit : c) {
            const auto v = value[static_cast<std::size_t>(std::abs(lit))];
            if ((lit > 0 && v == 1) || (lit < 0 && v == -1)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

} // namespace gallai
