#include "wang/solver.hpp"

#include <algorithm>
#include <unordered_map>

namespace wang {

BoundaryConstraint BoundaryConstraint::exact(Side s, std::vector<ColorId> colors) {
    BoundaryConstraint bc;
    bc.side = s;
    bc.fixed = std::move(colors);
    return bc;
}

BoundaryConstraint BoundaryConstraint::any_of(Side s, std::vector<std::vector<ColorId>> sets) {
    BoundaryConstraint bc;
    bc.side = s;
    bc.allowed = std::move(sets);
    for (auto& set : bc.allowed) std::sort(set.begin(), set.end());
    return bc;
}

bool BoundaryConstraint::admits(std::size_t i, ColorId c) const {
    if (!fixed.empty()) return fixed[i] == c;
    const auto& set = allowed[i];
    return std::binary_search(set.begin(), set.end(), c);
}

namespace {

struct Search {
    const TileSet& ts;
    int w, h;
    bool wrap;
    const BoundaryConstraint* bounds[4] = {nullptr, nullptr, nullptr, nullptr};
    std::int64_t budget;
    std::int64_t nodes = 0;
    bool out_of_budget = false;
    std::vector<Tile> grid;

    Search(const TileSet& ts_, int w_, int h_, bool wrap_,
           const std::vector<BoundaryConstraint>& bc, std::int64_t budget_)
        : ts(ts_), w(w_), h(h_), wrap(wrap_), budget(budget_),
          grid(static_cast<std::size_t>(w_) * h_) {
        if (w < 1 || h < 1) throw argument_error("rectangle dimensions must be >= 1");
        for (const auto& b : bc) {
            std::size_t need = (b.side == Side::left || b.side == Side::right)
                                   ? static_cast<std::size_t>(h)
                                   : static_cast<std::size_t>(w);
            if (b.length() != need) throw argument_error("boundary constraint length mismatch");
            if (wrap) throw argument_error("boundary constraints on a torus");
            bounds[static_cast<int>(b.side)] = &b;
        }
    }

    Tile& cell(int x, int y) { return grid[static_cast<std::size_t>(y) * w + x]; }

    bool admissible(int x, int y, const Tile& t) const {
        const auto& g = grid;
        auto placed = [&](int px, int py) -> const Tile& {
            return g[static_cast<std::size_t>(py) * w + px];
        };
        if (x > 0 && placed(x - 1, y).right != t.left) return false;
        if (y > 0 && placed(x, y - 1).top != t.bottom) return false;
        if (wrap) {
            if (w == 1) {
                if (t.left != t.right) return false;
            } else if (x == w - 1 && placed(0, y).left != t.right) {
                return false;
            }
            if (h == 1) {
                if (t.bottom != t.top) return false;
            } else if (y == h - 1 && placed(x, 0).bottom != t.top) {
                return false;
            }
        } else {
            if (x == 0 && bounds[0] && !bounds[0]->admits(static_cast<std::size_t>(y), t.left))
                return false;
            if (y == 0 && bounds[1] && !bounds[1]->admits(static_cast<std::size_t>(x), t.bottom))
                return false;
            if (x == w - 1 && bounds[2] && !bounds[2]->admits(static_cast<std::size_t>(y), t.right))
                return false;
            if (y == h - 1 && bounds[3] && !bounds[3]->admits(static_cast<std::size_t>(x), t.top))
                return false;
        }
        return true;
    }

    struct Frame {
        std::vector<Tile> cands;
        std::size_t next = 0;
    };

    Frame make_frame(int index) {
        const int x = index % w, y = index / w;
        SideQuery q;
        if (x > 0) q.left = cell(x - 1, y).right;
        if (y > 0) q.bottom = cell(x, y - 1).top;
        if (wrap) {
            if (w > 1 && x == w - 1) q.right = cell(0, y).left;
            if (h > 1 && y == h - 1) q.top = cell(x, 0).bottom;
        } else {
            if (x == 0 && bounds[0] && bounds[0]->fixed.size())
                q.left = bounds[0]->fixed[static_cast<std::size_t>(y)];
            if (y == 0 && bounds[1] && bounds[1]->fixed.size())
                q.bottom = bounds[1]->fixed[static_cast<std::size_t>(x)];
            if (x == w - 1 && bounds[2] && bounds[2]->fixed.size())
                q.right = bounds[2]->fixed[static_cast<std::size_t>(y)];
            if (y == h - 1 && bounds[3] && bounds[3]->fixed.size())
                q.top = bounds[3]->fixed[static_cast<std::size_t>(x)];
        }
        Frame f;
        ts.enumerate(q, [&](const Tile& t) {
            if (++nodes > budget) {
                out_of_budget = true;
                return false;
            }
            f.cands.push_back(t);
            return true;
        });
        return f;
    }

    // Row-major backtracking on an explicit stack (recursion would overflow on
    // macro-tile sized rectangles). on_solution returns false to stop the
    // whole search.
    bool run(const std::function<bool(const std::vector<Tile>&)>& on_solution) {
        const int total = w * h;
        std::vector<Frame> frames;
        frames.reserve(static_cast<std::size_t>(total));
        frames.push_back(make_frame(0));
        while (!frames.empty()) {
            if (out_of_budget) return false;
            Frame& f = frames.back();
            const int index = static_cast<int>(frames.size()) - 1;
            const int x = index % w, y = index / w;
            bool descended = false;
            while (f.next < f.cands.size()) {
                const Tile& t = f.cands[f.next++];
                if (!admissible(x, y, t)) continue;
                cell(x, y) = t;
                if (index + 1 == total) {
                    if (!on_solution(grid)) return false;
                    continue; // siblings may yield further solutions
                }
                frames.push_back(make_frame(index + 1));
                descended = true;
                break;
            }
            if (!descended) frames.pop_back();
        }
        return true;
    }
};

} // namespace

SolveResult decide_rectangle(const TileSet& ts, int w, int h,
                             const std::vector<BoundaryConstraint>& bc, std::int64_t budget) {
    Search s(ts, w, h, /*wrap=*/false, bc, budget);
    SolveResult res;
    s.run([&](const std::vector<Tile>& grid) {
        res.status = SolveStatus::SAT;
        res.witness = Patch::dense(w, h, false, grid);
        return false;
    });
    res.nodes_explored = s.nodes;
    if (res.status != SolveStatus::SAT && s.out_of_budget) res.status = SolveStatus::TIMEOUT;
    return res;
}

std::vector<Patch> enumerate_rectangle(const TileSet& ts, int w, int h,
                                       const std::vector<BoundaryConstraint>& bc,
                                       std::size_t limit) {
    Search s(ts, w, h, /*wrap=*/false, bc, INT64_MAX);
    std::vector<Patch> out;
    if (limit == 0) return out;
    s.run([&](const std::vector<Tile>& grid) {
        out.push_back(Patch::dense(w, h, false, grid));
        return out.size() < limit;
    });
    return out;
}

namespace {

// Square boolean matrix as bitset rows, for closed-walk-length queries.
struct BoolMatrix {
    int n = 0;
    std::vector<std::uint64_t> rows; // n words-per-row blocks

    explicit BoolMatrix(int n_) : n(n_), rows(static_cast<std::size_t>(n_) * words(), 0) {}
    std::size_t words() const { return static_cast<std::size_t>((n + 63) / 64); }
    std::uint64_t* row(int i) { return rows.data() + static_cast<std::size_t>(i) * words(); }
    const std::uint64_t* row(int i) const {
        return rows.data() + static_cast<std::size_t>(i) * words();
    }
    void set(int i, int j) { row(i)[j / 64] |= 1ull << (j % 64); }
    bool get(int i, int j) const { return (row(i)[j / 64] >> (j % 64)) & 1; }

    BoolMatrix operator*(const BoolMatrix& o) const {
        BoolMatrix out(n);
        for (int i = 0; i < n; i++) {
            const std::uint64_t* r = row(i);
            for (int j = 0; j < n; j++) {
                if ((r[j / 64] >> (j % 64)) & 1) {
                    std::uint64_t* oi = out.row(i);
                    const std::uint64_t* oj = o.row(j);
                    for (std::size_t k = 0; k < words(); k++) oi[k] |= oj[k];
                }
            }
        }
        return out;
    }

    bool has_diagonal() const {
        for (int i = 0; i < n; i++)
            if (get(i, i)) return true;
        return false;
    }
};

bool closed_walk_exists(const BoolMatrix& a, std::int64_t len) {
    // a^len by binary exponentiation; a torus row/column is such a walk
    BoolMatrix acc(a.n), base = a;
    bool have = false;
    for (std::int64_t e = len; e > 0; e >>= 1) {
        if (e & 1) acc = have ? acc * base : (have = true, base);
        if (e > 1) base = base * base;
    }
    return acc.has_diagonal();
}

// Necessary condition for a w x h torus: a closed walk of length w through
// the left -> right color graph and one of length h through bottom -> top.
// Catches coordinate-style color chains without any search. Returns false
// ("don't know") when the tile set is too large to enumerate.
bool torus_walks_exist(const TileSet& ts, int w, int h) {
    constexpr std::int64_t kPrescanCap = 2'000'000;
    std::vector<Tile> tiles;
    bool complete = true;
    std::int64_t seen = 0;
    ts.enumerate({}, [&](const Tile& t) {
        if (++seen > kPrescanCap) {
            complete = false;
            return false;
        }
        tiles.push_back(t);
        return true;
    });
    if (!complete) return true; // cannot conclude anything

    std::unordered_map<ColorId, int> hc, vc;
    for (const Tile& t : tiles) {
        hc.emplace(t.left, static_cast<int>(hc.size()));
        hc.emplace(t.right, static_cast<int>(hc.size()));
        vc.emplace(t.bottom, static_cast<int>(vc.size()));
        vc.emplace(t.top, static_cast<int>(vc.size()));
    }
    BoolMatrix hg(static_cast<int>(hc.size())), vg(static_cast<int>(vc.size()));
    for (const Tile& t : tiles) {
        hg.set(hc[t.left], hc[t.right]);
        vg.set(vc[t.bottom], vc[t.top]);
    }
    return closed_walk_exists(hg, w) && closed_walk_exists(vg, h);
}

} // namespace

SolveResult decide_torus(const TileSet& ts, int w, int h, std::int64_t budget) {
    if (w < 1 || h < 1) throw argument_error("rectangle dimensions must be >= 1");
    if (!torus_walks_exist(ts, w, h)) return SolveResult{SolveStatus::UNSAT, std::nullopt, 0};
    Search s(ts, w, h, /*wrap=*/true, {}, budget);
    SolveResult res;
    s.run([&](const std::vector<Tile>& grid) {
        res.status = SolveStatus::SAT;
        res.witness = Patch::dense(w, h, true, grid);
        return false;
    });
    res.nodes_explored = s.nodes;
    if (res.status != SolveStatus::SAT && s.out_of_budget) res.status = SolveStatus::TIMEOUT;
    return res;
}

TorusScanReport aperiodicity_scan(const TileSet& ts, int max_area, std::int64_t budget) {
    if (max_area < 1) throw argument_error("max_area must be >= 1");
    std::vector<std::pair<int, int>> sizes;
    for (int w = 1; w <= max_area; w++)
        for (int h = 1; static_cast<std::int64_t>(w) * h <= max_area; h++) sizes.emplace_back(w, h);
    std::sort(sizes.begin(), sizes.end(), [](auto a, auto b) {
        std::int64_t aa = static_cast<std::int64_t>(a.first) * a.second;
        std::int64_t bb = static_cast<std::int64_t>(b.first) * b.second;
        return aa != bb ? aa < bb : a < b;
    });
    TorusScanReport report;
    for (auto [w, h] : sizes) {
        SolveResult r = decide_torus(ts, w, h, budget);
        TorusScanEntry entry{w, h, r.status, r.nodes_explored};
        report.scanned.push_back(entry);
        if (r.status == SolveStatus::SAT) {
            report.first_torus = entry;
            return report;
        }
        if (r.status == SolveStatus::TIMEOUT) report.inconclusive = true;
    }
    return report;
}

std::vector<Position> pattern_occurrences(const Patch& p, const Patch& q) {
    if (q.wrap()) throw argument_error("pattern must be non-wrap");
    if (q.width() > p.width() || q.height() > p.height()) {
        throw argument_error("pattern larger than patch");
    }
    const int xs = p.wrap() ? p.width() : p.width() - q.width() + 1;
    const int ys = p.wrap() ? p.height() : p.height() - q.height() + 1;
    std::vector<Position> out;
    for (int y = 0; y < ys; y++) {
        for (int x = 0; x < xs; x++) {
            bool match = true;
            for (int j = 0; match && j < q.height(); j++) {
                for (int i = 0; match && i < q.width(); i++) {
                    Tile pt = p.at((x + i) % p.width(), (y + j) % p.height());
                    if (pt != q.at(i, j)) match = false;
                }
            }
            if (match) out.push_back({x, y});
        }
    }
    return out;
}

RecurrenceResult recurrence_radius(const Patch& p, int size) {
    if (p.wrap()) throw argument_error("recurrence_radius requires a non-wrap patch");
    if (size < 1 || size > std::min(p.width(), p.height()) / 3) {
        throw argument_error("pattern size must be in [1, min(w,h)/3]");
    }
    const int pw = p.width() - size + 1, ph = p.height() - size + 1;

    // Identify distinct size x size patterns; grid of ids at each anchor.
    std::unordered_map<std::string, int> ids;
    std::vector<Position> first_at;
    std::vector<int> id_grid(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; y++) {
        for (int x = 0; x < pw; x++) {
            std::string key;
            key.reserve(static_cast<std::size_t>(size) * size * 32);
            for (int j = 0; j < size; j++) {
                for (int i = 0; i < size; i++) {
                    Tile t = p.at(x + i, y + j);
                    key += std::to_string(t.left) + "," + std::to_string(t.bottom) + "," +
                           std::to_string(t.right) + "," + std::to_string(t.top) + ";";
                }
            }
            auto [it, inserted] = ids.emplace(key, static_cast<int>(ids.size()));
            if (inserted) first_at.push_back({x, y});
            id_grid[static_cast<std::size_t>(y) * pw + x] = it->second;
        }
    }
    const int np = static_cast<int>(ids.size());

    // Prefix counts per pattern id for O(1) window queries.
    std::vector<std::vector<int>> prefix(
        static_cast<std::size_t>(np),
        std::vector<int>(static_cast<std::size_t>(pw + 1) * (ph + 1), 0));
    for (int k = 0; k < np; k++) {
        auto& pre = prefix[static_cast<std::size_t>(k)];
        for (int y = 0; y < ph; y++) {
            for (int x = 0; x < pw; x++) {
                pre[static_cast<std::size_t>(y + 1) * (pw + 1) + (x + 1)] =
                    pre[static_cast<std::size_t>(y) * (pw + 1) + (x + 1)] +
                    pre[static_cast<std::size_t>(y + 1) * (pw + 1) + x] -
                    pre[static_cast<std::size_t>(y) * (pw + 1) + x] +
                    (id_grid[static_cast<std::size_t>(y) * pw + x] == k ? 1 : 0);
            }
        }
    }
    auto count_in = [&](int k, int x0, int y0, int x1, int y1) { // anchors in [x0,x1) x [y0,y1)
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, pw);
        y1 = std::min(y1, ph);
        if (x0 >= x1 || y0 >= y1) return 0;
        const auto& pre = prefix[static_cast<std::size_t>(k)];
        return pre[static_cast<std::size_t>(y1) * (pw + 1) + x1] -
               pre[static_cast<std::size_t>(y0) * (pw + 1) + x1] -
               pre[static_cast<std::size_t>(y1) * (pw + 1) + x0] +
               pre[static_cast<std::size_t>(y0) * (pw + 1) + x0];
    };

    // An s x s window at (wx, wy) contains pattern k iff some anchor of k lies
    // in [wx, wx+s-size] x [wy, wy+s-size].
    auto violation_for = [&](int s) -> std::optional<std::pair<int, Position>> {
        const int span = s - size + 1;
        for (int wy = 0; wy + s <= p.height(); wy++) {
            for (int wx = 0; wx + s <= p.width(); wx++) {
                for (int k = 0; k < np; k++) {
                    if (count_in(k, wx, wy, wx + span, wy + span) == 0) {
                        return std::make_pair(k, Position{wx, wy});
                    }
                }
            }
        }
        return std::nullopt;
    };

    int lo = size, hi = std::min(p.width(), p.height());
    if (auto v = violation_for(hi)) {
        RecurrenceResult res;
        res.ok = false;
        res.missing_pattern_at = first_at[static_cast<std::size_t>(v->first)];
        res.empty_window_at = v->second;
        return res;
    }
    while (lo < hi) { // monotone in s: binary search the smallest good one
        int mid = lo + (hi - lo) / 2;
        if (violation_for(mid)) lo = mid + 1;
        else hi = mid;
    }
    RecurrenceResult res;
    res.ok = true;
    res.radius = lo;
    return res;
}

} // namespace wang
