#pragma once

#include "wang/solver.hpp"
#include "wang/tm.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace wang {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

struct Rect {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1; // inclusive; default is empty

    bool empty() const { return x1 < x0 || y1 < y0; }
    bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    int width() const { return empty() ? 0 : x1 - x0 + 1; }
    int height() const { return empty() ? 0 : y1 - y0 + 1; }
};

// Geometry of one macro-tile: an N x N grid holding a centered k-bit segment
// on each border, 4k wire paths carrying those bits to the computation zone's
// bottom row, the m x m zone itself, and an optional reserved slot region.
struct LayoutPlan {
    int N = 0;
    int k = 0;
    int m = 0;
    Cell zone_origin;                              // bottom-left zone cell
    std::array<std::vector<Cell>, 4> bit_segments; // by Side; position 0 = MSB
    std::vector<std::vector<Cell>> wires;          // 4k paths, border cell first
    Rect slot_region;
    // Isolation-exempt areas: the fan-out next to each bit segment and the
    // fan-in comb under the zone, where wires unavoidably bunch up.
    std::vector<Rect> fan_regions;

    Rect zone_rect() const {
        return Rect{zone_origin.x, zone_origin.y, zone_origin.x + m - 1, zone_origin.y + m - 1};
    }
    bool in_fan_region(int x, int y) const {
        for (const Rect& r : fan_regions)
            if (r.contains(x, y)) return true;
        return false;
    }
    // wire index -> (side, bit): sides in Side order, bit 0 = MSB.
    Side wire_side(int w) const { return static_cast<Side>(w / k); }
    int wire_bit(int w) const { return w % k; }
};

// Deterministic plan: zone centered horizontally, bit segments centered on
// each border, wires routed on concentric crossing-free lanes below the zone.
// Throws argument_error ("does not fit ...") when some budget is violated.
LayoutPlan plan_layout(int N, int k, int m, int slot_count);

// All violated LayoutPlan invariants, as human-readable strings (empty = ok).
// Wire isolation (> 2 in L-infinity) is required for every cell pair of
// distinct wires with neither cell inside a fan region.
std::vector<std::string> check_plan(const LayoutPlan& plan);

// Plan text format ("plan v1 ..." header, then one line per feature).
std::string print_plan(const LayoutPlan& plan);
LayoutPlan parse_plan(const std::string& text);

// Smallest k such that every color of both alphabets fits in k bits.
int color_bits(const TileSet& rho);

// Which zone input cell (0-based from the zone's left edge) wire w feeds.
// The lane construction fixes this order; the checker reads bits in it.
int wire_terminal_slot(int k, int w);

// A machine accepting exactly the 4k-bit strings that encode tiles of rho,
// with bit w of the encoding at position wire_terminal_slot(k, w); it scans
// left to right and accepts at step 4k, so it fits a zone with m = max(4k, 2).
// Input symbols 0/1, symbol 2 = blank.
std::pair<TuringMachine, Program> table_checker(const TileSet& rho, int k);

// tau = the tile set implementing rho at zoom N per the plan. tau's colors
// pack (coordinate, payload); payload 0/1 = skeleton shade (border bits),
// 2+b = a wire carrying bit b, 4+c = zone color c. tau is oracle-backed.
class Implementation {
public:
    Implementation(TileSet rho, TuringMachine checker, Program program, LayoutPlan plan);

    const TileSet& rho() const;
    const TuringMachine& checker() const;
    const Program& program() const;
    const LayoutPlan& plan() const;
    const ZoneTiles& zone() const;
    const TileSet& tau() const;

    // Color packing (xe, ye are the coordinates carried by the edge).
    ColorId v_color(int xe, int y, ColorId payload) const;
    ColorId h_color(int x, int ye, ColorId payload) const;
    struct EdgeDecode {
        int a = 0, b = 0;
        ColorId payload = 0;
    };
    EdgeDecode decode_v(ColorId c) const;
    EdgeDecode decode_h(ColorId c) const;

    // Every tau-tile whose bottom-left corner sits at macro-tile coordinate
    // (x, y); exactly one outside wires/zone/slots ("skeleton purity").
    std::vector<Tile> tiles_at(int x, int y) const;

    // The N edge colors of one macro-tile side encoding a rho color.
    MacroColor border_colors(Side s, ColorId rho_color) const;
    // Inverse: reads the bit-segment shades out of a macro-color.
    ColorId decode_border(Side s, const MacroColor& mc) const;
    // Fixed boundary constraints selecting the macro-tile of rho_tile.
    std::vector<BoundaryConstraint> macro_boundaries(const Tile& rho_tile) const;

    struct State; // internal; public only so the oracle backend can hold it

private:
    std::shared_ptr<const State> s_;
    TileSet tau_;
    friend Patch macro_tile_of(const Implementation&, const Tile&, bool);
};

Implementation compile_implementation(TileSet rho, TuringMachine checker, Program program,
                                      LayoutPlan plan);

// The canonical macro-tile of rho_tile, assembled directly from the checker's
// accepting run (the unique valid filling for these borders). Throws
// argument_error if the checker rejects or does not fit the zone. With
// lazy=true the patch computes cells on demand (for very large N).
Patch macro_tile_of(const Implementation& impl, const Tile& rho_tile, bool lazy = false);

struct DecomposeResult {
    bool ok = false;
    std::string error;
    int sigma_h = 0, sigma_v = 0; // coordinate claimed by p's cell (0,0)
    int grid_w = 0, grid_h = 0;   // complete macro-tiles found inside p
    Cell first_corner;            // p-position of the lowest-leftmost complete macro-tile
    std::vector<Tile> grid;       // row-major decoded rho tiles
};

// Recovers the unique macro-tile lattice from the coordinate fields and
// decodes each complete macro-tile's borders back to a rho tile.
DecomposeResult decompose(const Implementation& impl, const Patch& p);

} // namespace wang
