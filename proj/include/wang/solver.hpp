#pragma once

#include "wang/core.hpp"

#include <cstdint>
#include <vector>

namespace wang {

// Per-side boundary constraint on a rectangle to solve. Either a fixed color
// sequence or per-cell allowed-color sets; lengths must equal the matching
// patch dimension.
struct BoundaryConstraint {
    Side side = Side::left;
    std::vector<ColorId> fixed;                   // empty if allowed is used
    std::vector<std::vector<ColorId>> allowed;    // empty if fixed is used

    static BoundaryConstraint exact(Side s, std::vector<ColorId> colors);
    static BoundaryConstraint any_of(Side s, std::vector<std::vector<ColorId>> sets);

    bool admits(std::size_t i, ColorId c) const;
    std::size_t length() const { return fixed.empty() ? allowed.size() : fixed.size(); }
};

enum class SolveStatus { SAT, UNSAT, TIMEOUT };

struct SolveResult {
    SolveStatus status = SolveStatus::UNSAT;
    std::optional<Patch> witness;
    std::int64_t nodes_explored = 0;
};

inline constexpr std::int64_t kDefaultBudget = 50'000'000;

// Deterministic depth-first search over cells in row-major order, tile
// candidates in enumeration order, with forward checking against the placed
// left and bottom neighbors. Budget counts search nodes, never wall time.
SolveResult decide_rectangle(const TileSet& ts, int w, int h,
                             const std::vector<BoundaryConstraint>& bc = {},
                             std::int64_t budget = kDefaultBudget);

// All valid patches in the deterministic search order, truncated at limit.
std::vector<Patch> enumerate_rectangle(const TileSet& ts, int w, int h,
                                       const std::vector<BoundaryConstraint>& bc = {},
                                       std::size_t limit = SIZE_MAX);

// SAT iff a w x h wrap patch exists (a fully periodic tiling witness).
// Small tile sets get a free pre-check: a torus needs a closed walk of length
// w (resp. h) in the left->right (resp. bottom->top) color graph, which
// refutes coordinate-carrying sets without search (nodes_explored = 0).
SolveResult decide_torus(const TileSet& ts, int w, int h,
                         std::int64_t budget = kDefaultBudget);

struct TorusScanEntry {
    int w = 0;
    int h = 0;
    SolveStatus status = SolveStatus::UNSAT;
    std::int64_t nodes_explored = 0;
};

struct TorusScanReport {
    std::optional<TorusScanEntry> first_torus; // first SAT size, if any
    std::vector<TorusScanEntry> scanned;       // every size tried, in order
    bool inconclusive = false;                 // true if any size timed out
};

// Tries all (w, h) with w*h <= max_area in increasing area (ties: w ascending).
// Stops at the first SAT torus; otherwise returns the certificate-of-absence list.
TorusScanReport aperiodicity_scan(const TileSet& ts, int max_area,
                                  std::int64_t budget = kDefaultBudget);

struct Position {
    int x = 0;
    int y = 0;
    bool operator==(const Position&) const = default;
};

// All offsets where q occurs in p. If p wraps, offsets are taken modulo its size.
std::vector<Position> pattern_occurrences(const Patch& p, const Patch& q);

struct RecurrenceResult {
    bool ok = false;
    int radius = 0;                   // smallest s when ok
    std::optional<Position> missing_pattern_at; // a size x size pattern that fails
    std::optional<Position> empty_window_at;    // an s x s window missing it
};

// Smallest s such that every size x size pattern of p occurs in every s x s
// window fully inside p; a violation witness otherwise.
RecurrenceResult recurrence_radius(const Patch& p, int size);

} // namespace wang
