#include "gallai/symmetry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

#include "json.hpp"

namespace gallai {

std::string GroupElement::to_string() const {
    std::string s;
    for (Generator g : word) s += g == Generator::Sigma ? "s" : "r";
    if (s.empty()) s = "id";
    if (flip) s += "+flip";
    return s;
}

Cell apply_generator(const GridSpec& grid, Generator g, const Cell& c) {
    const int m = grid.m();
    switch (grid.kind()) {
    case LatticeKind::Square2D:
        return g == Generator::Sigma ? Cell{c.y, c.x, 0} : Cell{m - 1 - c.y, c.x, 0};
    case LatticeKind::Triangular:
        return g == Generator::Sigma ? Cell{c.y - c.x, c.y, 0} : Cell{m - 1 - c.y, m - 1 - c.y + c.x, 0};
    default:
        throw Error(ErrorCode::UnsupportedKind, "no dihedral action defined on " + to_string(grid));
    }
}

std::vector<CellIndex> cell_permutation(const GridSpec& grid, const GroupElement& element) {
    if (grid.kind() != LatticeKind::Square2D && grid.kind() != LatticeKind::Triangular) {
        throw Error(ErrorCode::UnsupportedKind, "no dihedral action defined on " + to_string(grid));
    }
    const auto all = cells(grid);
    std::vector<CellIndex> perm(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        Cell c = all[i];
        for (auto it = element.word.rbegin(); it != element.word.rend(); ++it) c = apply_generator(grid, *it, c);
        perm[i] = index_of(grid, c);
    }
    return perm;
}

std::vector<GroupElement> dihedral_elements(LatticeKind kind) {
    using G = Generator;
    const int rotations = kind == LatticeKind::Triangular ? 3 : kind == LatticeKind::Square2D ? 4 : 0;
    if (rotations == 0) throw Error(ErrorCode::UnsupportedKind, "no dihedral group for this lattice");
    std::vector<GroupElement> out;
    // Generators first so lex-leader breaking can pick them greedily.
    out.push_back({{}, false});
    out.push_back({{G::Sigma}, false});
    out.push_back({{G::Rho}, false});
    for (int r = 2; r < rotations; ++r) out.push_back({std::vector<G>(static_cast<std::size_t>(r), G::Rho), false});
    for (int r = 1; r < rotations; ++r) {
        GroupElement e{{G::Sigma}, false};
        e.word.insert(e.word.end(), static_cast<std::size_t>(r), G::Rho);
        out.push_back(e);
    }
    return out;
}

Coloring apply(const GroupElement& element, const Coloring& coloring) {
    const auto perm = cell_permutation(coloring.grid(), element);
    const auto in = coloring.bits();
    std::vector<std::uint8_t> bits(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) bits[i] = in[perm[i] - 1] ^ (element.flip ? 1 : 0);
    return Coloring(coloring.grid(), std::move(bits));
}

bool stabilizes(const GridSpec& grid, FamilyId family, std::span<const CellIndex> perm) {
    std::set<std::vector<CellIndex>> members;
    const auto configs = enumerate(grid, family);
    for (const auto& c : configs) members.emplace(c.vertices().begin(), c.vertices().end());
    std::vector<CellIndex> image;
    for (const auto& c : configs) {
        image.clear();
        for (CellIndex v : c.vertices()) image.push_back(perm[v - 1]);
        std::sort(image.begin(), image.end());
        if (!members.contains(image)) return false;
    }
    return true;
}

std::vector<std::size_t> OrbitReport::class_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& c : classes) sizes.push_back(c.size);
    return sizes;
}

namespace {

using Bits = std::vector<std::uint8_t>;

struct Canonicalizer {
    std::vector<std::vector<CellIndex>> perms;
    bool with_flip;

    Canonicalizer(const GridSpec& grid, bool flip) : with_flip(flip) {
        for (const auto& e : dihedral_elements(grid.kind())) perms.push_back(cell_permutation(grid, e));
    }

    Bits canonical(std::span<const std::uint8_t> in) const {
        Bits best(in.begin(), in.end());
        Bits cand(in.size());
        for (const auto& perm : perms) {
            for (std::uint8_t flip = 0; flip <= (with_flip ? 1 : 0); ++flip) {
                for (std::size_t i = 0; i < in.size(); ++i) cand[i] = in[perm[i] - 1] ^ flip;
                if (cand < best) best.swap(cand);
            }
        }
        return best;
    }
};

} // namespace

Coloring canonical_form(const Coloring& coloring, bool with_flip) {
    const Canonicalizer canon(coloring.grid(), with_flip);
    return Coloring(coloring.grid(), canon.canonical(coloring.bits()));
}

OrbitReport classify(std::span<const Coloring> solutions, bool with_flip, unsigned threads) {
    OrbitReport report;
    report.with_flip = with_flip;
    report.total = solutions.size();
    if (solutions.empty()) return report;

    const GridSpec grid = solutions.front().grid();
    for (const auto& s : solutions) {
        if (!(s.grid() == grid)) {
            throw Error(ErrorCode::MixedGrids, "cannot classify colorings of " + to_string(grid) + " and " +
                                                   to_string(s.grid()) + " together");
        }
    }
    const Canonicalizer canon(grid, with_flip);

    std::vector<Bits> keys(solutions.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) keys[i] = canon.canonical(solutions[i].bits());
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(solutions.size())));
    if (threads == 1) {
        work(0, solutions.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (solutions.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(solutions.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
    }

    std::map<Bits, std::size_t> sizes;
    for (auto& key : keys) ++sizes[std::move(key)];
    report.classes.reserve(sizes.size());
    for (auto& [key, n] : sizes) report.classes.push_back({Coloring(grid, key), n});
    return report;
}

std::string to_json(const OrbitReport& report) {
    nlohmann::json j;
    j["with_flip"] = report.with_flip;
    j["total"] = report.total;
    j["class_count"] = report.classes.size();
    j["class_sizes"] = report.class_sizes();
    auto reps = nlohmann::json::array();
    for (const auto& c : report.classes) {
        reps.push_back({{"size", c.size}, {"representative", render_coloring(c.representative)}});
    }
    j["classes"] = std::move(reps);
    return j.dump(2);
}

} // namespace gallai
