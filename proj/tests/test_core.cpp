#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wang/core.hpp"

#include <random>

using namespace wang;

namespace {

const Tile A{0, 0, 1, 1};
const Tile B{1, 1, 0, 0};

TileSet checkerboard() { return TileSet(2, 2, {A, B}); }

Patch checker_2x2(bool wrap) {
    // A at (0,0), B at (1,0), B at (0,1), A at (1,1).
    return Patch::dense(2, 2, wrap, {A, B, B, A});
}

// Explicit set re-exposed through the oracle interface, for agreement tests.
class ListOracle : public TileOracle {
public:
    explicit ListOracle(std::vector<Tile> tiles) : tiles_(std::move(tiles)) {}
    bool contains(const Tile& t) const override {
        return std::find(tiles_.begin(), tiles_.end(), t) != tiles_.end();
    }
    void enumerate(const SideQuery& q, const std::function<bool(const Tile&)>& emit) const override {
        for (const Tile& t : tiles_)
            if (q.admits(t) && !emit(t)) return;
    }

private:
    std::vector<Tile> tiles_;
};

} // namespace

TEST_CASE("matches is color equality on the touching sides") {
    CHECK(matches(Tile{0, 0, 1, 1}, Tile{1, 1, 0, 0}, Direction::east));
    CHECK_FALSE(matches(Tile{0, 0, 1, 1}, Tile{0, 0, 1, 1}, Direction::east));
    CHECK(matches(Tile{0, 0, 0, 0}, Tile{0, 0, 0, 0}, Direction::north));
}

TEST_CASE("matches equals side equality for exhaustive small alphabets") {
    std::vector<Tile> all;
    for (ColorId l = 0; l < 2; l++)
        for (ColorId b = 0; b < 2; b++)
            for (ColorId r = 0; r < 2; r++)
                for (ColorId t = 0; t < 2; t++) all.push_back(Tile{l, b, r, t});
    for (const Tile& a : all) {
        for (const Tile& b : all) {
            CHECK(matches(a, b, Direction::east) == (a.right == b.left));
            CHECK(matches(a, b, Direction::north) == (a.top == b.bottom));
        }
    }
}

TEST_CASE("validate_patch accepts a monochrome patch") {
    TileSet mono(1, 1, {Tile{0, 0, 0, 0}});
    Patch p = Patch::filled(3, 3, false, Tile{0, 0, 0, 0});
    CHECK(validate_patch(mono, p).ok);
}

TEST_CASE("validate_patch accepts the wrapped checkerboard") {
    CHECK(validate_patch(checkerboard(), checker_2x2(true)).ok);
}

TEST_CASE("validate_patch reports the smallest violation") {
    Patch p = checker_2x2(true);
    p.set(1, 0, A); // B belongs here
    auto rep = validate_patch(checkerboard(), p);
    REQUIRE_FALSE(rep.ok);
    // By hand: (0,0) east now mismatches (A.right=1 vs A.left=0).
    CHECK(rep.first->x == 0);
    CHECK(rep.first->y == 0);
    CHECK(rep.first->kind == ViolationKind::mismatch);
    CHECK(rep.first->direction == Direction::east);
}

TEST_CASE("validate_patch flags non-member tiles") {
    auto rep = validate_patch(checkerboard(), Patch::filled(2, 2, false, Tile{0, 0, 0, 0}));
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.first->kind == ViolationKind::membership);
}

TEST_CASE("macro_color_of reads sides in coordinate order") {
    Patch mono = Patch::filled(2, 2, false, Tile{0, 0, 0, 0});
    CHECK(macro_color_of(mono, Side::left) == MacroColor{0, 0});

    Patch cb = checker_2x2(false);
    CHECK(macro_color_of(cb, Side::bottom) == MacroColor{0, 1});
    // Top row is (B, A): tops are 0 then 1.
    CHECK(macro_color_of(cb, Side::top) == MacroColor{0, 1});
    CHECK_THROWS_AS(macro_color_of(checker_2x2(true), Side::left), argument_error);
}

TEST_CASE("valid wrap patches unroll into valid non-wrap patches") {
    std::mt19937 rng(12345);
    TileSet ts = checkerboard();
    for (int iter = 0; iter < 20; iter++) {
        int w = 1 + static_cast<int>(rng() % 6), h = 1 + static_cast<int>(rng() % 6);
        std::vector<Tile> cells;
        for (int i = 0; i < w * h; i++) cells.push_back((rng() % 2) ? A : B);
        Patch p = Patch::dense(w, h, true, cells);
        if (!validate_patch(ts, p).ok) continue;
        CHECK(validate_patch(ts, p.unroll(2, 2)).ok);
    }
    // At least the known-good torus must exercise the property.
    CHECK(validate_patch(ts, checker_2x2(true).unroll(2, 2)).ok);
}

TEST_CASE("oracle and explicit backings agree on enumeration") {
    std::vector<Tile> tiles = {A, B, Tile{0, 1, 0, 1}, Tile{1, 0, 1, 0}};
    TileSet ex(2, 2, tiles);
    TileSet orc(2, 2, std::make_shared<ListOracle>(tiles), 4);
    for (ColorId c = 0; c < 2; c++) {
        SideQuery q;
        q.left = c;
        CHECK(ex.tiles_with(q) == orc.tiles_with(q));
        SideQuery qb;
        qb.bottom = c;
        CHECK(ex.tiles_with(qb) == orc.tiles_with(qb));
    }
    for (const Tile& t : tiles) CHECK(orc.contains(t));
    CHECK_FALSE(orc.contains(Tile{1, 1, 1, 1}));
}

TEST_CASE("explicit tile sets reject duplicates and out-of-alphabet colors") {
    CHECK_THROWS_AS(TileSet(2, 2, {A, A}), argument_error);
    CHECK_THROWS_AS(TileSet(2, 2, {Tile{0, 0, 2, 0}}), argument_error);
}

TEST_CASE("tile set and patch formats round trip") {
    TileSet ts = checkerboard();
    TileSet back = parse_tileset(print_tileset(ts));
    CHECK(back.tiles() == ts.tiles());
    CHECK(back.horizontal_alphabet_size() == 2);
    CHECK(back.vertical_alphabet_size() == 2);

    Patch p = checker_2x2(true);
    Patch q = parse_patch(print_patch(p, ts), ts);
    CHECK(q.wrap());
    for (int y = 0; y < 2; y++)
        for (int x = 0; x < 2; x++) CHECK(q.at(x, y) == p.at(x, y));

    CHECK_THROWS_AS(parse_tileset("nonsense"), io_error);
    CHECK_THROWS_AS(parse_patch("patch v1 W=2 H=2 WRAP=0\n0 0\n", ts), io_error);
}

TEST_CASE("comments and blank lines are ignored by parsers") {
    TileSet ts = parse_tileset("# tiles\nwangts v1 H=2 V=2\n\nt 0 0 1 1\n# mid\nt 1 1 0 0\n");
    CHECK(ts.tiles().size() == 2);
}
