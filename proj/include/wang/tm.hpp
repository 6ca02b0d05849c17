#pragma once

#include "wang/core.hpp"
#include "wang/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace wang {

enum class Move { L, R, S };

// Deterministic single-tape machine. With readonly_layer the tape has a second
// layer of per-cell bits that never change; they hold the program text.
struct TuringMachine {
    std::vector<std::string> state_names;
    int initial_state = 0;
    int accepting_state = 0;
    std::vector<std::string> symbol_names;
    int blank_symbol = 0;
    struct Action {
        int state = 0;
        int symbol = 0;
        Move move = Move::S;

        bool operator==(const Action&) const = default;
    };
    std::map<std::pair<int, int>, Action> transition; // (state, symbol) -> action
    bool readonly_layer = false;

    int state_count() const { return static_cast<int>(state_names.size()); }
    int symbol_count() const { return static_cast<int>(symbol_names.size()); }
    void check() const; // determinism + accepting state has no outgoing transitions
};

struct Program {
    std::vector<std::uint8_t> bits;
};

struct Config {
    int state = 0;
    int head = 0;
    std::vector<int> tape;
};

enum class Verdict { accepted, running, rejected };

struct Trace {
    std::vector<Config> configs; // configs[t] = configuration at time t
    Verdict verdict = Verdict::running;
    int accept_step = -1;
    int max_cell = 0; // rightmost cell ever under the head
};

// Standard deterministic simulation on a right-unbounded tape; moving left of
// cell 0 rejects. The program lives on the readonly layer (ignored if the
// machine has none).
Trace run_tm(const TuringMachine& tm, const std::vector<int>& input,
             const Program& program = {}, int max_steps = 10'000);

// Head annotation carried by a horizontal zone color.
struct HeadField {
    enum Kind { none, state, done } kind = none;
    int q = 0;

    bool operator==(const HeadField&) const = default;
};

// Tiles whose valid m x m patches with the given boundaries are exactly the
// machine's accepting space-time diagrams (tape horizontal, time up). Row r
// performs the step from time r to r+1; acceptance turns the head into a DONE
// marker that must reach the top boundary.
struct ZoneTiles {
    TuringMachine tm;
    int m = 0;
    TileSet tiles;

    // Horizontal colors encode (symbol, program bit, head field); vertical
    // colors encode head crossings plus a dedicated wall color.
    ColorId h_color(int symbol, int pbit, HeadField head) const;
    struct HDecode {
        int symbol = 0;
        int pbit = 0;
        HeadField head;
    };
    HDecode decode_h(ColorId c) const;
    ColorId wall_color() const;
    ColorId crossing_none() const;

    // Bottom boundary: (input, program) with the head on cell 0 in the initial
    // state. Program bits beyond the text are zero.
    BoundaryConstraint bottom_boundary(const std::vector<int>& input,
                                       const Program& program = {}) const;
    // Top boundary: per-column sets forbidding live non-accepting head states
    // (an accepting head exactly at time m counts as acceptance).
    BoundaryConstraint top_boundary() const;
    BoundaryConstraint side_wall(Side s) const;
    std::vector<BoundaryConstraint> zone_boundaries(const std::vector<int>& input,
                                                    const Program& program = {}) const;
};

// Compiles tm into zone tiles of side m. Throws argument_error for m < 2 or
// machines whose encoding would not fit the color space.
ZoneTiles compile_tm_zone(const TuringMachine& tm, int m);

// Decodes a valid zone patch back into a trace; throws invariant_error naming
// the first row whose tiles do not decode to a configuration.
Trace zone_tiling_to_trace(const ZoneTiles& zt, const Patch& p);

// Builds the canonical zone patch of an accepting trace (with the DONE rows on
// top). Requires verdict == accepted, accept_step <= m and max_cell < m.
Patch trace_to_zone_tiling(const ZoneTiles& zt, const Trace& trace,
                           const Program& program = {});

struct DeterminicityCounterexample {
    std::array<ColorId, 8> border{}; // L0,L1,B0,B1,R0,R1,T0,T1
    std::array<Tile, 4> filling_a{};
    std::array<Tile, 4> filling_b{};
};

// Exhaustively checks that the eight border colors of every valid 2x2 pattern
// determine its four tiles. Returns a counterexample if not.
std::optional<DeterminicityCounterexample> check_2x2_determinicity(const TileSet& ts);
// Same, with explicit per-cell candidate lists (cells in order 00,10,01,11).
std::optional<DeterminicityCounterexample> check_2x2_determinicity(
    const std::array<std::vector<Tile>, 4>& candidates);

// Machine text format:
//   tm v1
//   state <name> [initial] [accepting]
//   sym <name> [blank]
//   readonly            (optional: enables the readonly program layer)
//   d <state> <sym> -> <state> <sym> <L|R|S>
std::string print_tm(const TuringMachine& tm);
TuringMachine parse_tm(const std::string& text);

// Stock machines used across tests and audits.
TuringMachine tm_immediate_accept();
TuringMachine tm_parity();          // accepts inputs with an even number of 1s
TuringMachine tm_unary_successor(); // appends a 1 to a block of 1s, rejects 0s

} // namespace wang
