#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wang/macrotile.hpp"

#include <algorithm>
#include <set>

using namespace wang;

namespace {

// Two-color checkerboard: the classic smallest nontrivial rho.
TileSet checkerboard() {
    return TileSet(2, 2, {Tile{0, 0, 1, 1}, Tile{1, 1, 0, 0}});
}

Implementation checkerboard_impl(int N = 16, int slot_count = 0) {
    TileSet rho = checkerboard();
    int k = color_bits(rho);
    auto [tm, prog] = table_checker(rho, k);
    return compile_implementation(rho, tm, prog, plan_layout(N, k, 4 * k, slot_count));
}

} // namespace

TEST_CASE("plan_layout produces valid plans across sizes") {
    for (auto [N, k, m] : {std::tuple{16, 1, 4}, {24, 2, 8}, {64, 8, 12}, {64, 0, 4}, {48, 4, 16}}) {
        CAPTURE(N);
        CAPTURE(k);
        LayoutPlan plan = plan_layout(N, k, m, 0);
        CHECK(check_plan(plan).empty());
        CHECK(static_cast<int>(plan.wires.size()) == 4 * k);
        if (k == 0) CHECK(plan.wires.empty());
    }
}

TEST_CASE("plan_layout rejects hopeless budgets") {
    try {
        plan_layout(8, 8, 12, 0);
        FAIL("expected argument_error");
    } catch (const argument_error& e) {
        CHECK(std::string(e.what()).find("does not fit") == 0);
    }
    CHECK_THROWS_AS(plan_layout(16, 1, 8, 0), argument_error); // m > N/3
    CHECK_THROWS_AS(plan_layout(16, 1, 1, 0), argument_error);
}

TEST_CASE("plans with slots keep wires clear of the slot region") {
    LayoutPlan plan = plan_layout(64, 4, 16, 5);
    CHECK(check_plan(plan).empty());
    REQUIRE_FALSE(plan.slot_region.empty());
    CHECK(plan.slot_region.width() * plan.slot_region.height() >= 5 * 16);
    for (const auto& wire : plan.wires)
        for (const Cell& c : wire) CHECK_FALSE(plan.slot_region.contains(c.x, c.y));
}

TEST_CASE("check_plan flags broken plans") {
    LayoutPlan plan = plan_layout(16, 1, 4, 0);
    SUBCASE("wire moved off its bit cell") {
        plan.wires[0][0].y += 1;
        CHECK_FALSE(check_plan(plan).empty());
    }
    SUBCASE("two wires overlapping") {
        plan.wires[1] = plan.wires[0];
        CHECK_FALSE(check_plan(plan).empty());
    }
    SUBCASE("isolation violated outside fan regions") {
        plan.fan_regions.clear();
        auto bad = check_plan(plan);
        CHECK_FALSE(bad.empty()); // the comb itself now violates spacing
    }
}

TEST_CASE("plan format round trips") {
    for (auto [N, k, m, s] : {std::tuple{16, 1, 4, 0}, {64, 8, 12, 3}}) {
        LayoutPlan plan = plan_layout(N, k, m, s);
        LayoutPlan back = parse_plan(print_plan(plan));
        CHECK(back.N == plan.N);
        CHECK(back.k == plan.k);
        CHECK(back.m == plan.m);
        CHECK(back.zone_origin == plan.zone_origin);
        CHECK(back.wires == plan.wires);
        CHECK(back.bit_segments == plan.bit_segments);
        CHECK(back.slot_region.x0 == plan.slot_region.x0);
        CHECK(back.slot_region.y1 == plan.slot_region.y1);
        CHECK(back.fan_regions.size() == plan.fan_regions.size());
        CHECK(check_plan(back).empty());
    }
    CHECK_THROWS_AS(parse_plan("nonsense"), io_error);
    CHECK_THROWS_AS(parse_plan("plan v1 N=16 K=1 M=4 ZX=6 ZY=5\nbogus 1 2\n"), io_error);
}

TEST_CASE("color_bits") {
    CHECK(color_bits(TileSet(1, 1, {Tile{0, 0, 0, 0}})) == 0);
    CHECK(color_bits(checkerboard()) == 1);
    CHECK(color_bits(TileSet(5, 3, {Tile{4, 2, 0, 0}})) == 3);
}

TEST_CASE("table_checker accepts exactly the border encodings of rho") {
    TileSet rho = checkerboard();
    auto [tm, prog] = table_checker(rho, 1);
    tm.check();
    for (int bits = 0; bits < 16; bits++) {
        std::vector<int> in;
        for (int i = 3; i >= 0; i--) in.push_back((bits >> i) & 1);
        Tile t{in[0], in[1], in[2], in[3]};
        auto trace = run_tm(tm, in, prog);
        CHECK((trace.verdict == Verdict::accepted) == rho.contains(t));
        if (trace.verdict == Verdict::accepted) {
            CHECK(trace.accept_step == 4); // one sweep, accept in place
            CHECK(trace.max_cell < 4);
        }
    }
}

TEST_CASE("table_checker with k=0 accepts the monochrome tile immediately") {
    auto [tm, prog] = table_checker(TileSet(1, 1, {Tile{0, 0, 0, 0}}), 0);
    CHECK(run_tm(tm, {}, prog).accept_step == 0);
}

TEST_CASE("macro_tile_of builds a valid patch with the declared borders") {
    Implementation impl = checkerboard_impl();
    for (const Tile& t : impl.rho().tiles()) {
        Patch p = macro_tile_of(impl, t);
        REQUIRE(p.width() == 16);
        CHECK(validate_patch(impl.tau(), p).ok);
        CHECK(macro_color_of(p, Side::left) == impl.border_colors(Side::left, t.left));
        CHECK(macro_color_of(p, Side::bottom) == impl.border_colors(Side::bottom, t.bottom));
        CHECK(macro_color_of(p, Side::right) == impl.border_colors(Side::right, t.right));
        CHECK(macro_color_of(p, Side::top) == impl.border_colors(Side::top, t.top));
        CHECK(impl.decode_border(Side::left, macro_color_of(p, Side::left)) == t.left);
        // Lazy assembly agrees cell for cell.
        Patch lz = macro_tile_of(impl, t, true);
        for (int y = 0; y < 16; y++)
            for (int x = 0; x < 16; x++) CHECK(lz.at(x, y) == p.at(x, y));
    }
    CHECK_THROWS_AS(macro_tile_of(impl, Tile{0, 0, 0, 0}), argument_error);
}

TEST_CASE("each wire carries its border bit unchanged") {
    Implementation impl = checkerboard_impl();
    const LayoutPlan& plan = impl.plan();
    for (const Tile& t : impl.rho().tiles()) {
        Patch p = macro_tile_of(impl, t);
        std::array<ColorId, 4> colors{t.left, t.bottom, t.right, t.top};
        for (int w = 0; w < 4 * plan.k; w++) {
            ColorId want = (colors[static_cast<std::size_t>(w / plan.k)] >>
                            (plan.k - 1 - plan.wire_bit(w))) & 1;
            const auto& path = plan.wires[static_cast<std::size_t>(w)];
            for (std::size_t i = 0; i + 1 < path.size(); i++) {
                Tile cell = p.at(path[i].x, path[i].y);
                // The payload 2+bit must appear on the side facing the next cell.
                ColorId c = 0;
                if (path[i + 1].x > path[i].x) c = cell.right;
                else if (path[i + 1].x < path[i].x) c = cell.left;
                else if (path[i + 1].y > path[i].y) c = cell.top;
                else c = cell.bottom;
                ColorId payload = (path[i + 1].x != path[i].x) ? impl.decode_v(c).payload
                                                               : impl.decode_h(c).payload;
                if (i + 2 == path.size()) continue; // last hop feeds the zone input color
                CHECK(payload == 2 + want);
            }
        }
    }
}

TEST_CASE("skeleton purity: one tile per coordinate outside the special areas") {
    Implementation impl = checkerboard_impl();
    const LayoutPlan& plan = impl.plan();
    std::set<std::pair<int, int>> special;
    for (const auto& wire : plan.wires)
        for (const Cell& c : wire) special.insert({c.x, c.y});
    Rect z = plan.zone_rect();
    for (int y = z.y0 - 1; y <= z.y1 + 1; y++)
        for (int x = z.x0 - 1; x <= z.x1 + 1; x++) special.insert({x, y});
    int plains = 0;
    for (int y = 0; y < plan.N; y++) {
        for (int x = 0; x < plan.N; x++) {
            if (special.count({x, y})) continue;
            CHECK(impl.tiles_at(x, y).size() == 1);
            plains++;
        }
    }
    CHECK(plains > plan.N * plan.N / 2);
}

TEST_CASE("the oracle tile set is consistent with tiles_at") {
    Implementation impl = checkerboard_impl();
    const TileSet& tau = impl.tau();
    CHECK_FALSE(tau.is_explicit());
    for (auto [x, y] : {std::pair{0, 0}, {8, 0}, {6, 5}, {7, 4}, {8, 9}, {15, 8}, {3, 12}}) {
        for (const Tile& t : impl.tiles_at(x, y)) {
            CHECK(tau.contains(t));
            // Side queries find the same tiles.
            SideQuery q;
            q.left = t.left;
            auto got = tau.tiles_with(q);
            CHECK(std::count(got.begin(), got.end(), t) == 1);
        }
    }
    CHECK_FALSE(tau.contains(Tile{0, 0, 0, 0})); // right side claims the wrong column
}

TEST_CASE("the solver finds macro-tiles exactly for rho members") {
    Implementation impl = checkerboard_impl();
    // Valid borders: SAT, and the witness is the canonical macro-tile.
    Tile good = impl.rho().tiles()[0];
    auto r = decide_rectangle(impl.tau(), 16, 16, impl.macro_boundaries(good));
    REQUIRE(r.status == SolveStatus::SAT);
    Patch canon = macro_tile_of(impl, good);
    for (int y = 0; y < 16; y++)
        for (int x = 0; x < 16; x++) CHECK(r.witness->at(x, y) == canon.at(x, y));
    // Borders encoding a non-tile: UNSAT.
    Tile bad{0, 0, 1, 0};
    REQUIRE_FALSE(impl.rho().contains(bad));
    auto r2 = decide_rectangle(impl.tau(), 16, 16, impl.macro_boundaries(bad));
    CHECK(r2.status == SolveStatus::UNSAT);
}

TEST_CASE("decompose recovers the rho tiling from a macro patch") {
    Implementation impl = checkerboard_impl();
    const int N = impl.plan().N;
    Tile A = impl.rho().tiles()[0], B = impl.rho().tiles()[1];
    Patch pa = macro_tile_of(impl, A), pb = macro_tile_of(impl, B);
    // 2x2 checkerboard of macro-tiles.
    auto big = Patch::lazy(2 * N, 2 * N, false, [&, N](int x, int y) {
        const Patch& m = ((x / N + y / N) % 2 == 0) ? pa : pb;
        return m.at(x % N, y % N);
    });
    CHECK(validate_patch(impl.tau(), big).ok);

    auto full = decompose(impl, big);
    REQUIRE(full.ok);
    CHECK(full.sigma_h == 0);
    CHECK(full.sigma_v == 0);
    CHECK(full.first_corner == Cell{0, 0});
    CHECK(full.grid_w == 2);
    CHECK(full.grid_h == 2);
    CHECK(full.grid == std::vector<Tile>{A, B, B, A});

    // An offset window still pins the lattice via the coordinate fields.
    Patch window = big.subpatch(3, 5, 2 * N - 3, 2 * N - 5);
    auto off = decompose(impl, window);
    REQUIRE(off.ok);
    CHECK(off.sigma_h == 3);
    CHECK(off.sigma_v == 5);
    CHECK(off.first_corner == Cell{N - 3, N - 5});
    CHECK(off.grid_w == 1);
    CHECK(off.grid_h == 1);
    CHECK(off.grid == std::vector<Tile>{A}); // the macro-tile at lattice cell (1,1)

    // Garbage in, failure out.
    auto junk = decompose(impl, Patch::filled(4, 4, false, Tile{1, 2, 3, 4}));
    CHECK_FALSE(junk.ok);
    CHECK_FALSE(junk.error.empty());
}

TEST_CASE("compile_implementation rejects mismatched pieces") {
    TileSet rho = checkerboard();
    auto [tm, prog] = table_checker(rho, 1);
    // Zone too small for the 4 input bits.
    CHECK_THROWS_AS(compile_implementation(rho, tm, prog, plan_layout(16, 1, 3, 0)),
                    argument_error);
    // rho colors too wide for the plan's k.
    TileSet wide(4, 4, {Tile{3, 3, 3, 3}});
    auto [tm2, prog2] = table_checker(wide, 2);
    CHECK_THROWS_AS(compile_implementation(wide, tm2, prog2, plan_layout(16, 1, 4, 0)),
                    argument_error);
}
