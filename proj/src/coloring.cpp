#include "gallai/coloring.hpp"

#include <algorithm>
#include <charconv>

namespace gallai {

Coloring::Coloring(GridSpec grid, std::vector<std::uint8_t> bits) : grid_(grid), bits_(std::move(bits)) {
    if (bits_.size() != grid_.cell_count()) {
        throw Error(ErrorCode::SizeMismatch, "coloring has " + std::to_string(bits_.size()) + " cells, grid " +
                                                 to_string(grid_) + " needs " + std::to_string(grid_.cell_count()));
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t Coloring::black_count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Coloring Coloring::flipped() const {
    Coloring out(*this);
    for (auto& b : out.bits_) b ^= 1;
    return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

int parse_int(std::string_view s, ErrorCode code, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(code, "bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    return value;
}

std::size_t row_length(const GridSpec& grid, int y) {
    return grid.kind() == LatticeKind::Triangular ? static_cast<std::size_t>(y + 1)
                                                  : static_cast<std::size_t>(grid.m());
}

} // namespace

ColoringFile parse_coloring_file(std::string_view text) {
    if (text.empty() || text.back() != '\n') {
        throw Error(ErrorCode::BadHeader, "coloring text must end with a newline");
    }
    const auto lines = split_lines(text);
    const auto header = split_words(lines.front());
    if (header.size() < 2 || header.size() > 3) {
        throw Error(ErrorCode::BadHeader, "expected '<kind> <m> [k]', got '" + std::string(lines.front()) + "'");
    }
    LatticeKind kind{};
    try {
        kind = parse_lattice_kind(header[0]);
    } catch (const Error&) {
        throw Error(ErrorCode::BadHeader, "unknown kind '" + std::string(header[0]) + "'");
    }
    const int m = parse_int(header[1], ErrorCode::BadHeader, "grid size");
    if (m < 1) throw Error(ErrorCode::BadHeader, "grid size must be >= 1");
    std::optional<int> k;
    if (header.size() == 3) k = parse_int(header[2], ErrorCode::BadHeader, "k");

    const GridSpec grid(kind, m);
    std::vector<std::uint8_t> bits;
    bits.reserve(grid.cell_count());

    std::size_t li = 1;
    const int blocks = kind == LatticeKind::Cubic ? m : 1;
    for (int block = 0; block < blocks; ++block) {
        if (block > 0) {
            if (li >= lines.size() || !lines[li].empty()) {
                throw Error(ErrorCode::RowLengthMismatch, "expected blank line between cube layers at line " +
                                                              std::to_string(li + 1));
            }
            ++li;
        }
        for (int y = 0; y < m; ++y, ++li) {
            if (li >= lines.size()) {
                throw Error(ErrorCode::RowLengthMismatch, "missing row " + std::to_string(y) + " (line " +
                                                              std::to_string(li + 1) + ")");
            }
            const auto row = lines[li];
            if (row.size() != row_length(grid, y)) {
                throw Error(ErrorCode::RowLengthMismatch, "line " + std::to_string(li + 1) + " has " +
                                                              std::to_string(row.size()) + " characters, expected " +
                                                              std::to_string(row_length(grid, y)));
            }
            for (char ch : row) {
                if (ch != '0' && ch != '1') {
                    throw Error(ErrorCode::BadCharacter,
                                "unexpected character '" + std::string(1, ch) + "' at line " + std::to_string(li + 1));
                }
                bits.push_back(ch == '1' ? 1 : 0);
            }
        }
    }
    for (; li < lines.size(); ++li) {
        if (!lines[li].empty()) {
            throw Error(ErrorCode::RowLengthMismatch, "unexpected extra row at line " + std::to_string(li + 1));
        }
    }
    return {Coloring(grid, std::move(bits)), k};
}

std::string render_coloring(const Coloring& coloring, std::optional<int> k) {
    const auto& grid = coloring.grid();
    const int m = grid.m();
    std::string out = std::string(to_string(grid.kind())) + " " + std::to_string(m);
    if (k) out += " " + std::to_string(*k);
    out += '\n';
    const auto bits = coloring.bits();
    std::size_t i = 0;
    const int blocks = grid.kind() == LatticeKind::Cubic ? m : 1;
    for (int block = 0; block < blocks; ++block) {
        if (block > 0) out += '\n';
        for (int y = 0; y < m; ++y) {
            for (std::size_t n = row_length(grid, y); n > 0; --n) out += bits[i++] ? '1' : '0';
            out += '\n';
        }
    }
    return out;
}

} // namespace gallai
