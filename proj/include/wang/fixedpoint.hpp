#pragma once

#include "wang/macrotile.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace wang {

// Stock zone machine for the self-referential set: scans the delivered border
// bits left to right (at least one) and accepts on the first blank. Richer
// self-checks live in the surrounding structure: the program is carried on the
// zone's read-only track and verified by quine_build, not executed.
TuringMachine fixed_point_interpreter();

// Program text with literal bits (0/1) and one contiguous self-hole (-1 runs)
// that quine_build fills with the program's own length.
struct ProgramTemplate {
    std::vector<int> bits;
};

struct SelfProgram {
    Program bits;
    int hole_offset = 0;
    int hole_width = 0;
    std::vector<std::uint8_t> self_length_prefix; // what the hole was filled with
};

// Fills the self-hole with the binary length of the whole program (MSB first)
// and verifies the result describes itself; throws argument_error when the
// hole cannot hold the length.
SelfProgram quine_build(const ProgramTemplate& tmpl);

// All valid 2x2 payload patterns (coordinates stripped) per window position
// class, for windows touching the zone, its ring, or a wire.
struct WindowPatternCatalog {
    struct Entry {
        int class_id = 0;
        Cell exemplar;               // a window position realizing the class
        std::array<Tile, 4> pattern; // payload tiles, cell order 00,10,01,11
    };
    std::vector<Entry> entries;
    int class_count = 0;
    int c = 0; // largest number of fillings seen in one class
};

// Exhaustive per-class enumeration via the implementation's per-cell tile
// lists. Throws invariant_error if some class violates border-determinism
// (slot forcing would be unsound).
WindowPatternCatalog enumerate_window_patterns(const Implementation& impl);

// One 4x4 slot footprint per catalog entry, packed on a grid inside the
// plan's slot region; the 2x2 interiors are pairwise non-touching.
struct SlotPlacement {
    struct Slot {
        Cell footprint;  // bottom-left of the 4x4 block (interior at +1,+1)
        int entry = 0;   // catalog index forced inside
    };
    std::vector<Slot> slots;
};

SlotPlacement place_slots(const LayoutPlan& plan, const WindowPatternCatalog& catalog);

// tau with the slots inserted: every slot footprint cell carries exactly one
// tile (ring outside, the catalog entry's pattern inside), so the ring forces
// the filling. Non-slot cells pass through to impl.
TileSet slotted_tileset(const Implementation& impl, const WindowPatternCatalog& catalog,
                        const SlotPlacement& slots);
// Canonical macro-tile with the slot contents overlaid.
Patch slotted_macro_tile(const Implementation& impl, const WindowPatternCatalog& catalog,
                         const SlotPlacement& slots, const Tile& rho_tile, bool lazy = false);

struct FixedPointReport {
    int N = 0, k = 0, m = 0;
    int program_bits = 0;
    std::int64_t tau_size_bound = 0;
};

// A tile set whose macro-tiles decompose back to its own tiles: rho is bound
// to tau itself through a forwarding oracle, so membership is exact by
// construction. macro_tile is the tile -> macro-tile correspondence.
class FixedPointSet {
public:
    const Implementation& impl() const { return *impl_; }
    const TileSet& tau() const { return tau_; }
    const SelfProgram& self_program() const { return self_; }
    const WindowPatternCatalog& catalog() const { return catalog_; }
    const SlotPlacement& slots() const { return slots_; }
    const FixedPointReport& report() const { return report_; }
    bool with_slots() const { return with_slots_; }

    // Per-cell tiles including slot rings and interiors.
    std::vector<Tile> tiles_at(int x, int y) const;
    // Canonical macro-tile of t (slot contents included).
    Patch macro_tile(const Tile& t, bool lazy = false) const;

private:
    friend FixedPointSet fixed_point_tileset(const TuringMachine&, int, bool);
    std::shared_ptr<const Implementation> impl_;
    TileSet tau_{1, 1, std::vector<Tile>{Tile{0, 0, 0, 0}}};
    SelfProgram self_;
    WindowPatternCatalog catalog_;
    SlotPlacement slots_;
    std::shared_ptr<const std::map<std::pair<int, int>, Tile>> forced_; // slot cells
    FixedPointReport report_;
    bool with_slots_ = false;
};

// Builds the self-referential set at zoom N. Throws argument_error ("zone too
// small ...") when the program and the 4k inputs do not fit m <= N/3.
FixedPointSet fixed_point_tileset(const TuringMachine& interpreter, int N, bool with_slots);

// Smallest N for which fixed_point_tileset succeeds with this interpreter.
int smallest_fixed_point_zoom(const TuringMachine& interpreter);

// --- variable zoom ---

struct ZoomSchedule {
    int C = 8;
    int ranks = 3;

    int zoom(int r) const { return C * r; }
    // Declared prefix schedule: 0, 1, 2, 2, 3, ... bits (ceil log2 r).
    int prefix_length(int r) const;
    int zone(int r) const;
    void check() const; // zooms increasing, zones nondecreasing and <= zoom/3
};

// Rank-indexed admissibility of X-prefixes under an enumeration budget.
struct PrefixChecker {
    std::string name;
    std::function<bool(const std::string& prefix, int rank)> accepts;
};

// Accepts prefix p at rank r iff no forbidden pattern enumerated within
// budget_per_rank(r) (a prefix of the list) occurs in p.
PrefixChecker pi01_prefix_checker(std::vector<std::string> forbidden,
                                  std::function<int(int)> budget_per_rank);

// Members of A enumerated within budget force p[i] = 1, members of B force
// p[i] = 0. Throws argument_error if the enumerations collide on an index.
PrefixChecker separator_prefix_checker(std::vector<int> enum_a, std::vector<int> enum_b,
                                       std::function<int(int)> budget_per_rank);

// Per-rank implementations: rank r implements the explicit set of monochrome
// prefix tiles of length prefix_length(r); the zone machine is the table
// checker of the admissible ones, and the rank's binary representation rides
// the read-only program track.
struct VarZoomFamily {
    ZoomSchedule schedule;
    PrefixChecker checker;
    std::vector<Implementation> ranks;             // ranks[r-1]
    std::vector<WindowPatternCatalog> catalogs;    // per rank, empty without slots
    std::vector<SlotPlacement> slot_placements;

    // Monochrome rho tile carrying this prefix (all four colors equal).
    Tile prefix_tile(int r, const std::string& prefix) const;
    std::string decode_prefix(int r, const Tile& rho_tile) const;
    // Greedy nested chain of accepted prefixes (lexicographically least).
    std::string canonical_prefix(int r) const;
    // Rank bits read off a canonical macro-tile's program track.
    int decode_rank(int r, const Patch& macro) const;
};

VarZoomFamily variable_zoom_tileset(const TuringMachine& interpreter, const ZoomSchedule& schedule,
                                    const PrefixChecker& checker, bool with_slots);

} // namespace wang
