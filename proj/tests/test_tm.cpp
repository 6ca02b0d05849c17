#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "wang/tm.hpp"

using namespace wang;

namespace {

// Symbol ids for the stock machines: 0 -> "0", 1 -> "1", 2 -> blank.
std::vector<int> bits(const std::string& s) {
    std::vector<int> v;
    for (char c : s) v.push_back(c - '0');
    return v;
}

// Independent parity oracle.
bool even_ones(const std::string& s) {
    int n = 0;
    for (char c : s) n += (c == '1');
    return n % 2 == 0;
}

} // namespace

TEST_CASE("run_tm on the stock machines") {
    auto acc = run_tm(tm_immediate_accept(), bits("01"));
    CHECK(acc.verdict == Verdict::accepted);
    CHECK(acc.accept_step == 0);

    // Parity by hand: 1010 has two 1s -> accept; 1000 has one -> reject.
    auto t1 = run_tm(tm_parity(), bits("1010"));
    REQUIRE(t1.verdict == Verdict::accepted);
    CHECK(t1.accept_step == 5); // four moves right, then the blank step
    CHECK(run_tm(tm_parity(), bits("1000")).verdict == Verdict::rejected);
    for (const std::string& s : {"", "1", "11", "0110", "111", "0000"}) {
        CHECK((run_tm(tm_parity(), bits(s)).verdict == Verdict::accepted) == even_ones(s));
    }

    auto t2 = run_tm(tm_unary_successor(), bits("111"));
    REQUIRE(t2.verdict == Verdict::accepted);
    CHECK(t2.configs.back().tape == std::vector<int>{1, 1, 1, 1});
    CHECK(run_tm(tm_unary_successor(), bits("101")).verdict == Verdict::rejected);
}

TEST_CASE("run_tm guards") {
    TuringMachine loop = tm_parity();
    loop.transition[{0, 0}] = {0, 0, Move::S}; // spin in place on a 0
    CHECK(run_tm(loop, bits("0"), {}, 50).verdict == Verdict::running);

    TuringMachine left = tm_parity();
    left.transition[{0, 0}] = {0, 0, Move::L};
    CHECK(run_tm(left, bits("0")).verdict == Verdict::rejected); // falls off cell 0
}

TEST_CASE("machine check rejects malformed tables") {
    TuringMachine bad = tm_parity();
    bad.transition[{2, 0}] = {2, 0, Move::S}; // accepting state must be terminal
    CHECK_THROWS_AS(bad.check(), argument_error);

    TuringMachine oob = tm_parity();
    oob.transition[{0, 0}] = {7, 0, Move::S};
    CHECK_THROWS_AS(oob.check(), argument_error);
}

TEST_CASE("zone SAT iff the machine accepts within the zone") {
    const int m = 6;
    for (const TuringMachine& tm : {tm_immediate_accept(), tm_parity(), tm_unary_successor()}) {
        ZoneTiles zt = compile_tm_zone(tm, m);
        for (const std::string& s : {"", "1", "10", "11", "101", "110"}) {
            auto in = bits(s);
            auto trace = run_tm(tm, in);
            bool fits = trace.verdict == Verdict::accepted && trace.accept_step <= m &&
                        trace.max_cell < m;
            auto r = decide_rectangle(zt.tiles, m, m, zt.zone_boundaries(in));
            REQUIRE(r.status != SolveStatus::TIMEOUT);
            CHECK((r.status == SolveStatus::SAT) == fits);
            if (r.status == SolveStatus::SAT) {
                auto back = zone_tiling_to_trace(zt, *r.witness);
                CHECK(back.accept_step == trace.accept_step);
                for (std::size_t t = 0; t < back.configs.size(); t++) {
                    CHECK(back.configs[t].state == trace.configs[t].state);
                    CHECK(back.configs[t].head == trace.configs[t].head);
                    for (int x = 0; x < m; x++) {
                        int want = x < static_cast<int>(trace.configs[t].tape.size())
                                       ? trace.configs[t].tape[static_cast<std::size_t>(x)]
                                       : tm.blank_symbol;
                        CHECK(back.configs[t].tape[static_cast<std::size_t>(x)] == want);
                    }
                }
            }
        }
    }
}

TEST_CASE("acceptance exactly at time m is SAT via the top boundary") {
    // parity on 1010 accepts at step 5; in a 5x5 zone the accepting head sits
    // on the top boundary itself.
    ZoneTiles zt = compile_tm_zone(tm_parity(), 5);
    auto in = bits("1010");
    auto trace = run_tm(tm_parity(), in);
    REQUIRE(trace.accept_step == 5);
    auto r = decide_rectangle(zt.tiles, 5, 5, zt.zone_boundaries(in));
    REQUIRE(r.status == SolveStatus::SAT);
    auto back = zone_tiling_to_trace(zt, *r.witness);
    CHECK(back.accept_step == 5);
    Patch canon = trace_to_zone_tiling(zt, trace);
    for (int y = 0; y < 5; y++)
        for (int x = 0; x < 5; x++) CHECK(r.witness->at(x, y) == canon.at(x, y));
}

TEST_CASE("the zone has exactly one tiling per accepted input") {
    ZoneTiles zt = compile_tm_zone(tm_parity(), 5);
    auto in = bits("11");
    auto all = testing::brute_force_tilings(zt.tiles.tiles(), 5, 5, false, zt.zone_boundaries(in));
    REQUIRE(all.size() == 1);
    Patch canon = trace_to_zone_tiling(zt, run_tm(tm_parity(), in));
    for (int y = 0; y < 5; y++)
        for (int x = 0; x < 5; x++)
            CHECK(all[0][static_cast<std::size_t>(y) * 5 + x] == canon.at(x, y));
}

TEST_CASE("trace and zone tiling round trip") {
    ZoneTiles zt = compile_tm_zone(tm_unary_successor(), 6);
    auto trace = run_tm(tm_unary_successor(), bits("11"));
    Patch p = trace_to_zone_tiling(zt, trace);
    CHECK(validate_patch(zt.tiles, p).ok);
    auto back = zone_tiling_to_trace(zt, p);
    Patch again = trace_to_zone_tiling(zt, back);
    for (int y = 0; y < 6; y++)
        for (int x = 0; x < 6; x++) CHECK(again.at(x, y) == p.at(x, y));
}

TEST_CASE("decoding a corrupted zone patch names the bad row") {
    ZoneTiles zt = compile_tm_zone(tm_parity(), 4);
    Patch p = trace_to_zone_tiling(zt, run_tm(tm_parity(), bits("")));
    Tile t = p.at(2, 1);
    t.bottom = zt.h_color(0, 0, HeadField{HeadField::state, 0}); // second head in row 1
    p.set(2, 1, t);
    CHECK_THROWS_WITH_AS(zone_tiling_to_trace(zt, p),
                         "row 1 does not decode to a configuration", invariant_error);
}

TEST_CASE("zone boundaries pin input, program, and acceptance") {
    ZoneTiles zt = compile_tm_zone(tm_parity(), 4);
    auto bc = zt.zone_boundaries(bits("1"));
    REQUIRE(bc.size() == 4);
    // Bottom: head on cell 0 over symbol 1, blanks after.
    CHECK(bc[0].fixed[0] == zt.h_color(1, 0, HeadField{HeadField::state, 0}));
    CHECK(bc[0].fixed[1] == zt.h_color(2, 0, HeadField{}));
    // Top: live non-accepting head states are not admitted.
    CHECK_FALSE(bc[1].admits(0, zt.h_color(2, 0, HeadField{HeadField::state, 0})));
    CHECK(bc[1].admits(0, zt.h_color(2, 0, HeadField{HeadField::done, 0})));
    CHECK(bc[1].admits(0, zt.h_color(2, 0, HeadField{HeadField::state, 2})));
    // Sides: the wall convention.
    CHECK(bc[2].fixed == std::vector<ColorId>(4, zt.wall_color()));
}

TEST_CASE("compile_tm_zone rejects tiny zones") {
    CHECK_THROWS_AS(compile_tm_zone(tm_parity(), 1), argument_error);
}

TEST_CASE("zone tiles are 2x2-deterministic") {
    for (const TuringMachine& tm : {tm_immediate_accept(), tm_parity(), tm_unary_successor()}) {
        auto cx = check_2x2_determinicity(compile_tm_zone(tm, 4).tiles);
        CHECK_FALSE(cx.has_value());
    }
}

TEST_CASE("check_2x2_determinicity finds a planted ambiguity") {
    // Two tiles that differ only across the inner vertical edge of a 2x2 block.
    std::vector<Tile> tiles = {
        Tile{0, 0, 1, 0}, Tile{1, 0, 0, 0}, // filling a: inner edge color 1
        Tile{0, 0, 2, 0}, Tile{2, 0, 0, 0}, // filling b: inner edge color 2
    };
    TileSet ts(3, 1, tiles);
    auto cx = check_2x2_determinicity(ts);
    REQUIRE(cx.has_value());
    CHECK(cx->filling_a != cx->filling_b);
    // Both fillings really share the reported border.
    auto border_of = [](const std::array<Tile, 4>& f) {
        return std::array<ColorId, 8>{f[0].left, f[2].left, f[0].bottom, f[1].bottom,
                                      f[1].right, f[3].right, f[2].top, f[3].top};
    };
    CHECK(border_of(cx->filling_a) == cx->border);
    CHECK(border_of(cx->filling_b) == cx->border);
}

TEST_CASE("check_2x2_determinicity with per-cell candidate lists") {
    const Tile A{0, 0, 1, 1}, B{1, 1, 0, 0};
    std::array<std::vector<Tile>, 4> cells{{{A}, {B}, {B}, {A}}};
    CHECK_FALSE(check_2x2_determinicity(cells).has_value());
}

TEST_CASE("machine format round trips") {
    for (const TuringMachine& tm : {tm_parity(), tm_unary_successor()}) {
        TuringMachine back = parse_tm(print_tm(tm));
        CHECK(back.state_names == tm.state_names);
        CHECK(back.symbol_names == tm.symbol_names);
        CHECK(back.initial_state == tm.initial_state);
        CHECK(back.accepting_state == tm.accepting_state);
        CHECK(back.blank_symbol == tm.blank_symbol);
        CHECK(back.transition == tm.transition);
    }
    TuringMachine ro = tm_parity();
    ro.readonly_layer = true;
    CHECK(parse_tm(print_tm(ro)).readonly_layer);

    CHECK_THROWS_AS(parse_tm("garbage"), io_error);
    CHECK_THROWS_AS(parse_tm("tm v1\nstate a initial accepting\n"), io_error); // no blank
    CHECK_THROWS_AS(parse_tm("tm v1\nstate a initial accepting\nsym _ blank\n"
                             "d a _ -> a _ R\n"),
                    io_error); // accepting state with outgoing transition
}
