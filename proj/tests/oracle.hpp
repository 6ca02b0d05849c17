#pragma once

// Test-only brute-force oracles, kept independent of the solver's search path.

#include "wang/core.hpp"
#include "wang/solver.hpp"

#include <vector>

namespace wang::testing {

// Exhaustively enumerates every assignment of tiles to the w x h grid in
// row-major order (prefix-pruned, which discards only assignments already
// proven invalid) and returns all valid ones.
inline std::vector<std::vector<Tile>> brute_force_tilings(
    const std::vector<Tile>& tiles, int w, int h, bool wrap,
    const std::vector<BoundaryConstraint>& bc = {}) {
    std::vector<std::vector<Tile>> out;
    std::vector<Tile> grid(static_cast<std::size_t>(w) * h);
    const BoundaryConstraint* bounds[4] = {nullptr, nullptr, nullptr, nullptr};
    for (const auto& b : bc) bounds[static_cast<int>(b.side)] = &b;

    auto ok_at = [&](int x, int y, const Tile& t) {
        auto cell = [&](int cx, int cy) -> const Tile& {
            return grid[static_cast<std::size_t>(cy) * w + cx];
        };
        if (x > 0 && cell(x - 1, y).right != t.left) return false;
        if (y > 0 && cell(x, y - 1).top != t.bottom) return false;
        if (wrap) {
            if (x == w - 1 && cell(0, y).left != t.right && w > 1) return false;
            if (w == 1 && t.left != t.right) return false;
            if (y == h - 1 && cell(x, 0).bottom != t.top && h > 1) return false;
            if (h == 1 && t.bottom != t.top) return false;
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
    };

    std::function<void(int)> rec = [&](int idx) {
        if (idx == w * h) {
            out.push_back(grid);
            return;
        }
        int x = idx % w, y = idx / w;
        for (const Tile& t : tiles) {
            if (!ok_at(x, y, t)) continue;
            grid[static_cast<std::size_t>(y) * w + x] = t;
            rec(idx + 1);
        }
    };
    rec(0);
    return out;
}

inline std::size_t brute_force_count(const std::vector<Tile>& tiles, int w, int h, bool wrap,
                                     const std::vector<BoundaryConstraint>& bc = {}) {
    return brute_force_tilings(tiles, w, h, wrap, bc).size();
}

} // namespace wang::testing
