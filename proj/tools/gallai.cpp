#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "gallai/coloring.hpp"
#include "gallai/encode.hpp"
#include "gallai/explore.hpp"
#include "gallai/fixtures.hpp"
#include "gallai/oracle.hpp"
#include "gallai/patterns.hpp"
#include "gallai/solve.hpp"
#include "gallai/symmetry.hpp"

namespace fs = std::filesystem;
using namespace gallai;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr const char* kSolverEnv = "GALLAI_SOLVER";

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to the file, or to stdout for "" and "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

// A coloring argument is a file path or the name of a bundled fixture.
struct LoadedColoring {
    ColoringFile file;
    std::optional<Fixture> fixture;
};

LoadedColoring load_coloring(const std::string& arg) {
    if (fs::exists(arg)) return {parse_coloring_file(read_text(arg)), std::nullopt};
    if (auto f = find_fixture(arg)) return {parse_coloring_file(f->text), f};
    throw Error(ErrorCode::InvalidArgument, "'" + arg + "' is neither a file nor a bundled fixture");
}

FamilyId resolve_family(const std::string& name, int k, const std::string& kind) {
    const FamilyId family = parse_family(name, k);
    if (!kind.empty() && parse_lattice_kind(kind) != lattice_of(family)) {
        throw Error(ErrorCode::KindMismatch, to_string(family) + " does not live on a " + kind + " grid");
    }
    return family;
}

SolverConfig solver_config(const std::string& engine, const std::string& command, double timeout,
                           std::optional<std::uint64_t> conflicts, bool drat, std::uint64_t seed,
                           const std::string& work_dir) {
    SolverConfig config;
    if (engine == "external") {
        config.engine = Engine::External;
        config.command = command;
        if (config.command.empty()) {
            if (const char* env = std::getenv(kSolverEnv)) config.command = env;
        }
        if (config.command.empty()) {
            throw CLI::ValidationError("--solver-cmd", std::string("external engine needs --solver-cmd or $") + kSolverEnv);
        }
    } else if (drat) {
        throw CLI::ValidationError("--drat", "proofs are only collected from an external solver");
    }
    config.time_budget_s = timeout;
    config.conflict_budget = conflicts;
    config.drat_requested = drat;
    config.seed = seed;
    config.work_dir = work_dir;
    return config;
}

// Filled circle = black = 1, open circle = white = 0.
std::string render_svg(const Coloring& coloring) {
    const GridSpec& grid = coloring.grid();
    const int m = grid.m();
    constexpr double unit = 20.0;
    constexpr double r = 6.0;
    struct Dot {
        double x, y;
        bool black;
    };
    std::vector<Dot> dots;
    double width = 0, height = 0;
    const auto all = cells(grid);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Cell& c = all[i];
        double px = 0, py = 0;
        switch (grid.kind()) {
        case LatticeKind::Square2D:
            px = c.x;
            py = m - 1 - c.y;
            break;
        case LatticeKind::Triangular:
            px = 0.5 * ((m - 1 - c.y) + 2 * c.x);
            py = c.y * 0.8660254037844386;
            break;
        case LatticeKind::HexWindow:
            px = 0.5 * c.x;
            py = (m - 1 - c.y) * 0.8660254037844386;
            break;
        case LatticeKind::Cubic:
            px = c.z * (m + 1) + c.x;
            py = m - 1 - c.y;
            break;
        }
        dots.push_back({unit * (px + 1), unit * (py + 1), coloring.bits()[i] != 0});
        width = std::max(width, unit * (px + 2));
        height = std::max(height, unit * (py + 2));
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    for (const auto& d : dots) {
        out << "  <circle cx=\"" << d.x << "\" cy=\"" << d.y << "\" r=\"" << r << "\" "
            << (d.black ? "fill=\"black\"" : "fill=\"white\" stroke=\"black\" stroke-width=\"1\"") << "/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string format_counts(const ExtensionReport& report) {
    std::string line;
    for (const auto& [m, n] : report.counts) {
        if (m < 2) continue;
        if (!line.empty()) line += ' ';
        line += std::to_string(m) + ":" + std::to_string(n);
    }
    return line + "\n";
}

std::vector<Coloring> read_solutions_dir(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Coloring> out;
    for (const auto& p : files) out.push_back(parse_coloring(read_text(p.string())));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gallai homothety/similarity number toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--threads", threads, "worker thread cap")->check(CLI::PositiveNumber);

    // gen
    auto* gen = app.add_subcommand("gen", "write the DIMACS instance for a family on a grid");
    std::string gen_kind, gen_family, gen_constraint = "not-mono", gen_break = "none", gen_out;
    int gen_k = 0, gen_m = 0;
    gen->add_option("--kind", gen_kind, "square | tri | hex | cube (checked against the family)");
    gen->add_option("--family", gen_family)->required();
    gen->add_option("--k", gen_k, "side ratio of rect-* families");
    gen->add_option("--m", gen_m)->required()->check(CLI::PositiveNumber);
    gen->add_option("--constraint", gen_constraint, "not-mono | balanced | odd-parity");
    gen->add_option("--break", gen_break, "none | fix-origin | lex-leader");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // solve
    auto* slv = app.add_subcommand("solve", "decide a DIMACS instance");
    std::string slv_in, slv_engine = "embedded", slv_cmd, slv_witness, slv_work;
    double slv_timeout = 0;
    std::optional<std::uint64_t> slv_conflicts;
    std::uint64_t slv_seed = 0;
    bool slv_drat = false;
    slv->add_option("--in", slv_in, "DIMACS file")->required();
    slv->add_option("--engine", slv_engine)->check(CLI::IsMember({"embedded", "external"}));
    slv->add_option("--solver-cmd", slv_cmd, std::string("external command; default $") + kSolverEnv);
    slv->add_option("--timeout", slv_timeout, "seconds, 0 = none")->check(CLI::NonNegativeNumber);
    slv->add_option("--conflicts", slv_conflicts, "conflict budget (embedded)");
    slv->add_option("--seed", slv_seed);
    slv->add_flag("--drat", slv_drat, "ask the external solver for a DRAT proof");
    slv->add_option("--witness", slv_witness, "write the decoded coloring here (needs c gallai metadata)");
    slv->add_option("--work-dir", slv_work, "keep external solver files here");

    // search
    auto* srch = app.add_subcommand("search", "locate the least unsatisfiable grid size");
    std::string s_family, s_constraint = "not-mono", s_engine = "embedded", s_cmd, s_out, s_witness, s_work;
    int s_k = 0, s_start = 1, s_limit = 0;
    double s_timeout = 0;
    bool s_drat = false;
    srch->add_option("--family", s_family)->required();
    srch->add_option("--k", s_k);
    srch->add_option("--constraint", s_constraint);
    srch->add_option("--start", s_start)->check(CLI::PositiveNumber);
    srch->add_option("--limit", s_limit, "largest m to try")->required()->check(CLI::PositiveNumber);
    srch->add_option("--engine", s_engine)->check(CLI::IsMember({"embedded", "external"}));
    srch->add_option("--solver-cmd", s_cmd);
    srch->add_option("--timeout", s_timeout, "seconds per size, 0 = none")->check(CLI::NonNegativeNumber);
    srch->add_flag("--drat", s_drat);
    srch->add_option("--out", s_out, "JSON report file (default stdout)");
    srch->add_option("--witness-out", s_witness, "write the witness coloring here");
    srch->add_option("--work-dir", s_work);

    // brute
    auto* brute = app.add_subcommand("brute", "count avoiding colorings by layer extension");
    std::string b_kind, b_family, b_constraint = "not-mono", b_dir;
    int b_k = 0, b_mmax = 0;
    std::optional<int> b_collect;
    brute->add_option("--kind", b_kind);
    brute->add_option("--family", b_family)->required();
    brute->add_option("--k", b_k);
    brute->add_option("--constraint", b_constraint);
    brute->add_option("--mmax", b_mmax)->required()->check(CLI::PositiveNumber);
    brute->add_option("--collect", b_collect, "write every solution of this size to --out-dir");
    brute->add_option("--out-dir", b_dir);

    // count
    auto* cnt = app.add_subcommand("count", "number of configurations of a family on a grid");
    std::string c_family, c_kind;
    int c_k = 0, c_m = 0;
    cnt->add_option("--family", c_family)->required();
    cnt->add_option("--kind", c_kind);
    cnt->add_option("--k", c_k);
    cnt->add_option("--m", c_m)->required()->check(CLI::PositiveNumber);

    // classify
    auto* cls = app.add_subcommand("classify", "partition solutions into symmetry classes");
    std::string cl_dir, cl_family, cl_constraint = "not-mono", cl_out;
    int cl_k = 0;
    std::optional<int> cl_m;
    bool cl_flip = false;
    cls->add_option("--solutions-dir", cl_dir, "directory of coloring files");
    cls->add_option("--family", cl_family, "enumerate the solutions in-process instead");
    cls->add_option("--k", cl_k);
    cls->add_option("--constraint", cl_constraint);
    cls->add_option("--m", cl_m);
    cls->add_flag("--flip", cl_flip, "also identify color-flipped colorings");
    cls->add_option("--out", cl_out, "JSON report file (default stdout)");

    // verify
    auto* ver = app.add_subcommand("verify", "check a coloring against a family");
    std::string v_coloring, v_family, v_constraint;
    std::optional<int> v_k;
    bool v_all = false;
    ver->add_option("--coloring", v_coloring, "file or fixture name")->required();
    ver->add_option("--family", v_family, "default: the fixture's family");
    ver->add_option("--k", v_k, "default: k from the coloring header");
    ver->add_option("--constraint", v_constraint);
    ver->add_flag("--all", v_all, "list every violation");

    // render
    auto* ren = app.add_subcommand("render", "draw a coloring");
    std::string r_coloring, r_format = "ascii", r_out;
    ren->add_option("--coloring", r_coloring, "file or fixture name")->required();
    ren->add_option("--format", r_format)->check(CLI::IsMember({"ascii", "svg"}));
    ren->add_option("--out", r_out);

    // fixtures
    auto* fix = app.add_subcommand("fixtures", "bundled figure colorings");
    bool f_list = false;
    std::string f_emit, f_out;
    auto* f_list_opt = fix->add_flag("--list", f_list);
    auto* f_emit_opt = fix->add_option("--emit", f_emit, "fixture name");
    f_list_opt->excludes(f_emit_opt);
    fix->add_option("--out", f_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            const FamilyId family = resolve_family(gen_family, gen_k, gen_kind);
            const InstanceMeta meta{GridSpec(lattice_of(family), gen_m), family, parse_constraint(gen_constraint),
                                    parse_break_mode(gen_break)};
            require_arity(family, meta.constraint);
            if (gen_out.empty() || gen_out == "-") {
                stream_dimacs(std::cout, meta);
            } else {
                std::ofstream out(gen_out, std::ios::binary);
                if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + gen_out + "'");
                stream_dimacs(out, meta);
            }
            return 0;
        }

        if (*slv) {
            const auto config = solver_config(slv_engine, slv_cmd, slv_timeout, slv_conflicts, slv_drat, slv_seed, slv_work);
            const DimacsFile file = parse_dimacs(read_text(slv_in));
            const SolveOutcome outcome = solve(file.cnf, config);
            std::cout << competition_output(outcome);
            if (outcome.proof_path) std::cout << "c proof " << *outcome.proof_path << "\n";
            std::cout << "c conflicts " << outcome.stats.conflicts << " decisions " << outcome.stats.decisions
                      << " wall_ms " << outcome.stats.wall_ms << "\n";
            if (!slv_witness.empty() && outcome.status == SolveStatus::Sat) {
                if (!file.meta) throw Error(ErrorCode::InvalidArgument, "instance has no grid metadata to decode");
                const auto k = file.meta->family.is_rect() ? std::optional<int>(file.meta->family.k) : std::nullopt;
                emit(slv_witness, render_coloring(decode_witness(file.meta->grid, outcome.witness), k));
            }
            switch (outcome.status) {
            case SolveStatus::Sat: return kExitSat;
            case SolveStatus::Unsat: return kExitUnsat;
            case SolveStatus::Unknown: return kExitUnknown;
            }
        }

        if (*srch) {
            const FamilyId family = parse_family(s_family, s_k);
            if (s_start > s_limit) throw CLI::ValidationError("--start", "must not exceed --limit");
            const auto config = solver_config(s_engine, s_cmd, s_timeout, std::nullopt, s_drat, 0, s_work);
            const auto report = gallai_search(family, parse_constraint(s_constraint), config, s_start, s_limit,
                                              [](const SearchStep& s) {
                                                  std::cerr << "m=" << s.m << " " << to_string(s.status) << " ("
                                                            << s.wall_ms << " ms)\n";
                                              });
            std::optional<std::string> witness_file;
            if (!s_witness.empty() && report.witness) {
                emit(s_witness, render_coloring(*report.witness,
                                                family.is_rect() ? std::optional<int>(family.k) : std::nullopt));
                witness_file = s_witness;
            }
            emit(s_out, to_json(report, witness_file) + "\n");
            return report.outcome == SearchOutcome::SolverUnknown ? kExitUnknown : 0;
        }

        if (*brute) {
            const FamilyId family = resolve_family(b_family, b_k, b_kind);
            if (b_collect && b_dir.empty()) throw CLI::ValidationError("--collect", "needs --out-dir");
            ExtensionOptions options;
            options.threads = threads;
            options.collect_m = b_collect;
            const auto report =
                brute_extend(lattice_of(family), family, parse_constraint(b_constraint), b_mmax, options);
            std::cout << format_counts(report);
            if (b_collect) {
                fs::create_directories(b_dir);
                std::size_t i = 0;
                for (const auto& c : report.collected) {
                    char name[32];
                    std::snprintf(name, sizeof name, "sol_%07zu.txt", ++i);
                    emit((fs::path(b_dir) / name).string(), render_coloring(c));
                }
            }
            return 0;
        }

        if (*cnt) {
            const FamilyId family = resolve_family(c_family, c_k, c_kind);
            std::cout << count(GridSpec(lattice_of(family), c_m), family) << "\n";
            return 0;
        }

        if (*cls) {
            std::vector<Coloring> solutions;
            if (!cl_dir.empty() == !cl_family.empty()) {
                throw CLI::ValidationError("classify", "give exactly one of --solutions-dir or --family");
            }
            if (!cl_dir.empty()) {
                solutions = read_solutions_dir(cl_dir);
            } else {
                if (!cl_m) throw CLI::ValidationError("--m", "required with --family");
                const FamilyId family = parse_family(cl_family, cl_k);
                ExtensionOptions options;
                options.threads = threads;
                options.collect_m = *cl_m;
                solutions = brute_extend(lattice_of(family), family, parse_constraint(cl_constraint), *cl_m, options)
                                .collected;
            }
            emit(cl_out, to_json(classify(solutions, cl_flip, threads)) + "\n");
            return 0;
        }

        if (*ver) {
            const auto loaded = load_coloring(v_coloring);
            FamilyId family;
            if (!v_family.empty()) {
                family = parse_family(v_family, v_k.value_or(loaded.file.k.value_or(0)));
            } else if (loaded.fixture) {
                family = loaded.fixture->family;
            } else {
                throw CLI::ValidationError("--family", "required for coloring files");
            }
            ConstraintKind constraint = ConstraintKind::NotMonochromatic;
            if (!v_constraint.empty()) constraint = parse_constraint(v_constraint);
            else if (loaded.fixture && v_family.empty()) constraint = loaded.fixture->constraint;

            const Coloring& coloring = loaded.file.coloring;
            if (v_all) {
                const auto violations = check_all(coloring, family, constraint);
                for (const auto& v : violations) std::cout << describe(Verdict{v}, coloring.grid()) << "\n";
                if (violations.empty()) std::cout << "Ok\n";
                return violations.empty() ? 0 : kExitViolation;
            }
            const Verdict verdict = check(coloring, family, constraint);
            std::cout << describe(verdict, coloring.grid()) << "\n";
            return verdict.ok() ? 0 : kExitViolation;
        }

        if (*ren) {
            const auto loaded = load_coloring(r_coloring);
            emit(r_out, r_format == "svg" ? render_svg(loaded.file.coloring)
                                          : render_coloring(loaded.file.coloring, loaded.file.k));
            return 0;
        }

        if (*fix) {
            if (f_list) {
                for (const auto& f : fixtures()) {
                    std::cout << f.name << "\t" << to_string(f.family) << "\t" << to_string(f.constraint) << "\t"
                              << f.description << "\n";
                }
                return 0;
            }
            if (f_emit.empty()) throw CLI::ValidationError("fixtures", "give --list or --emit <name>");
            const auto f = find_fixture(f_emit);
            if (!f) throw CLI::ValidationError("--emit", "no fixture named '" + f_emit + "'");
            emit(f_out, std::string(f->text));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
