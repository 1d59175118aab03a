#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "gallai/solve.hpp"

namespace gallai {

namespace fs = std::filesystem;

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ChildResult {
    int exit_code = -1;
    bool timed_out = false;
    bool signaled = false;
};

ChildResult run_shell(const std::string& command, const fs::path& out_path, const fs::path& err_path, double timeout_s) {
    const pid_t pid = fork();
    if (pid < 0) throw Error(ErrorCode::SolverCrash, "fork failed");
    if (pid == 0) {
        setpgid(0, 0);
        const int out = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        const int err = open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (out >= 0) dup2(out, STDOUT_FILENO);
        if (err >= 0) dup2(err, STDERR_FILENO);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);
    ChildResult result;
    const auto start = std::chrono::steady_clock::now();
    int status = 0;
    for (;;) {
        const pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) throw Error(ErrorCode::SolverCrash, "waitpid failed");
        if (timeout_s > 0.0) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (elapsed.count() >= timeout_s) {
                kill(-pid, SIGKILL);
                waitpid(pid, &status, 0);
                result.timed_out = true;
                return result;
            }
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.signaled = true;
    }
    return result;
}

} // namespace

SolveOutcome parse_solver_output(std::string_view text, int exit_code, std::uint32_t n_vars) {
    std::optional<SolveStatus> status;
    std::vector<int> values;
    bool values_terminated = false;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.starts_with("s ")) {
            const auto word = line.substr(2);
            SolveStatus s;
            if (word == "SATISFIABLE") s = SolveStatus::Sat;
            else if (word == "UNSATISFIABLE") s = SolveStatus::Unsat;
            else if (word == "UNKNOWN" || word == "INDETERMINATE") s = SolveStatus::Unknown;
            else throw Error(ErrorCode::MalformedOutput, "unrecognized status line '" + line + "'");
            if (status && *status != s) throw Error(ErrorCode::MalformedOutput, "conflicting status lines");
            status = s;
        } else if (line.starts_with("v ") || line == "v") {
            std::istringstream vs(line.substr(1));
            long long lit = 0;
            while (vs >> lit) {
                if (lit == 0) {
                    values_terminated = true;
                    continue;
                }
                if (std::llabs(lit) > static_cast<long long>(n_vars)) continue;
                values.push_back(static_cast<int>(lit));
            }
            if (!vs.eof()) throw Error(ErrorCode::MalformedOutput, "bad value line '" + line + "'");
        }
    }
    if (!status) {
        if (exit_code == 10) status = SolveStatus::Sat;
        else if (exit_code == 20) status = SolveStatus::Unsat;
        else if (exit_code != 0) {
            throw Error(ErrorCode::SolverCrash, "solver exited with code " + std::to_string(exit_code) +
                                                    " without a status line");
        } else {
            throw Error(ErrorCode::MalformedOutput, "no status line in solver output");
        }
    }
    if ((*status == SolveStatus::Sat && exit_code == 20) || (*status == SolveStatus::Unsat && exit_code == 10)) {
        throw Error(ErrorCode::MalformedOutput, "status line disagrees with exit code " + std::to_string(exit_code));
    }

    SolveOutcome outcome;
    outcome.status = *status;
    if (*status == SolveStatus::Sat) {
        if (!values_terminated && n_vars > 0) throw Error(ErrorCode::MalformedOutput, "value lines missing terminating 0");
        std::vector<int> witness(n_vars, 0);
        for (int lit : values) witness[static_cast<std::size_t>(std::abs(lit)) - 1] = lit;
        for (std::uint32_t v = 0; v < n_vars; ++v) {
            if (witness[v] == 0) {
                throw Error(ErrorCode::MalformedOutput, "no value for variable " + std::to_string(v + 1));
            }
        }
        outcome.witness = std::move(witness);
    }
    return outcome;
}

std::string competition_output(const SolveOutcome& outcome) {
    std::string out = "s " + std::string(to_string(outcome.status)) + "\n";
    if (outcome.status == SolveStatus::Sat) {
        std::string line = "v";
        for (int lit : outcome.witness) {
            line += " " + std::to_string(lit);
            if (line.size() > 70) {
                out += line + "\n";
                line = "v";
            }
        }
        out += line + " 0\n";
    }
    return out;
}

SolveOutcome solve_external(const Cnf& cnf, const SolverConfig& config) {
    if (config.command.empty()) throw Error(ErrorCode::MissingExecutable, "no external solver command configured");
    const auto start = std::chrono::steady_clock::now();

    fs::path dir;
    if (config.work_dir.empty()) {
        std::string tmpl = (fs::temp_directory_path() / "gallai-XXXXXX").string();
        if (mkdtemp(tmpl.data()) == nullptr) throw Error(ErrorCode::SolverCrash, "cannot create temp directory");
        dir = tmpl;
    } else {
        dir = config.work_dir;
        fs::create_directories(dir);
    }
    const fs::path cnf_path = dir / "instance.cnf";
    const fs::path proof_path = dir / "proof.drat";
    {
        std::ofstream out(cnf_path, std::ios::binary);
        out << write_dimacs(cnf);
    }

    std::string command = config.command;
    const bool templated = command.find("{cnf}") != std::string::npos;
    if (templated) {
        replace_all(command, "{cnf}", shell_quote(cnf_path.string()));
        replace_all(command, "{proof}", shell_quote(proof_path.string()));
    } else {
        command += " " + shell_quote(cnf_path.string());
        if (config.drat_requested) command += " " + shell_quote(proof_path.string());
    }

    const auto child = run_shell(command, dir / "solver.out", dir / "solver.err", config.time_budget_s);
    SolveOutcome outcome;
    if (child.timed_out) {
        outcome.status = SolveStatus::Unknown;
    } else if (child.signaled) {
        throw Error(ErrorCode::SolverCrash, "solver terminated by a signal");
    } else {
        const std::string text = read_file(dir / "solver.out");
        if (child.exit_code == 127 && text.find("\ns ") == std::string::npos && !text.starts_with("s ")) {
            throw Error(ErrorCode::MissingExecutable, "cannot run '" + config.command + "': " +
                                                          read_file(dir / "solver.err"));
        }
        outcome = parse_solver_output(text, child.exit_code, cnf.n_vars);
        if (outcome.status == SolveStatus::Sat && !satisfies(cnf, outcome.witness)) {
            throw Error(ErrorCode::MalformedOutput, "solver witness violates the formula");
        }
        if (outcome.status == SolveStatus::Unsat && config.drat_requested) outcome.proof_path = proof_path.string();
    }
    outcome.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

SolveOutcome solve(const Cnf& cnf, const SolverConfig& config) {
    return config.engine == Engine::External ? solve_external(cnf, config) : solve_embedded(cnf, config);
}

} // namespace gallai
