#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wang {

using ColorId = std::int64_t;

// Thrown on malformed input files (CLI exit 65).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on broken internal invariants (CLI exit 70).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on bad arguments / constructions that cannot be represented (CLI exit 64).
struct argument_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Direction { east = 0, north = 1 };
enum class Side { left = 0, bottom = 1, right = 2, top = 3 };

const char* side_name(Side s);

// A unit square with a color on each side. Translations only, no rotations.
struct Tile {
    ColorId left = 0;
    ColorId bottom = 0;
    ColorId right = 0;
    ColorId top = 0;

    bool operator==(const Tile&) const = default;
    auto operator<=>(const Tile&) const = default;
};

struct TileHash {
    std::size_t operator()(const Tile& t) const;
};

// Two tiles match when the touching sides carry the same color.
bool matches(const Tile& a, const Tile& b, Direction d);

// Partial side constraint used by oracle queries; unset sides are wildcards.
struct SideQuery {
    std::optional<ColorId> left;
    std::optional<ColorId> bottom;
    std::optional<ColorId> right;
    std::optional<ColorId> top;

    bool admits(const Tile& t) const;
};

// Membership/enumeration backend for tile sets too large to list.
// Enumeration order must be deterministic; enumeration must agree with contains().
class TileOracle {
public:
    virtual ~TileOracle() = default;
    virtual bool contains(const Tile& t) const = 0;
    // Calls emit for every tile satisfying q, in a fixed deterministic order.
    // Enumeration stops early if emit returns false.
    virtual void enumerate(const SideQuery& q, const std::function<bool(const Tile&)>& emit) const = 0;
};

// A finite family of Wang tiles, either listed explicitly or backed by an oracle.
class TileSet {
public:
    // Explicit backing. Duplicate tiles are rejected.
    TileSet(std::int64_t h_alphabet, std::int64_t v_alphabet, std::vector<Tile> tiles);
    // Oracle backing.
    TileSet(std::int64_t h_alphabet, std::int64_t v_alphabet,
            std::shared_ptr<const TileOracle> oracle, std::int64_t size_bound);

    std::int64_t horizontal_alphabet_size() const { return h_alphabet_; }
    std::int64_t vertical_alphabet_size() const { return v_alphabet_; }
    std::int64_t declared_size_bound() const { return size_bound_; }
    bool is_explicit() const { return oracle_ == nullptr; }
    const std::vector<Tile>& tiles() const;

    bool contains(const Tile& t) const;
    void enumerate(const SideQuery& q, const std::function<bool(const Tile&)>& emit) const;
    std::vector<Tile> tiles_with(const SideQuery& q, std::size_t limit = SIZE_MAX) const;

private:
    std::int64_t h_alphabet_;
    std::int64_t v_alphabet_;
    std::int64_t size_bound_;
    std::vector<Tile> tiles_;
    std::shared_ptr<const TileOracle> oracle_;
};

// A finite rectangular assignment of tiles; wrap=true means torus adjacency.
// Cells may be stored densely or computed on demand (large macro-tiles).
class Patch {
public:
    Patch() = default;

    static Patch dense(int width, int height, bool wrap, std::vector<Tile> cells);
    static Patch filled(int width, int height, bool wrap, const Tile& t);
    static Patch lazy(int width, int height, bool wrap, std::function<Tile(int, int)> at);

    int width() const { return width_; }
    int height() const { return height_; }
    bool wrap() const { return wrap_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    Tile at(int x, int y) const;
    void set(int x, int y, const Tile& t); // dense patches only

    // Copies a dense w x h sub-rectangle with bottom-left corner (x, y).
    Patch subpatch(int x, int y, int w, int h) const;
    // Repeats a wrap patch k times in each direction as a non-wrap patch.
    Patch unroll(int kx, int ky) const;

private:
    int width_ = 0;
    int height_ = 0;
    bool wrap_ = false;
    std::shared_ptr<std::vector<Tile>> cells_;          // dense backing
    std::function<Tile(int, int)> fn_;                  // lazy backing
};

enum class ViolationKind { membership, mismatch };

struct Violation {
    ViolationKind kind = ViolationKind::mismatch;
    int x = 0;
    int y = 0;
    Direction direction = Direction::east; // meaningful for mismatch only
};

struct ValidationReport {
    bool ok = true;
    std::optional<Violation> first;
};

// Checks every cell for membership in ts and every adjacency for color equality.
// Reports the lexicographically smallest violating (x, y, kind/direction).
ValidationReport validate_patch(const TileSet& ts, const Patch& p);

// The N side colors of a non-wrap patch, in increasing coordinate order.
using MacroColor = std::vector<ColorId>;
MacroColor macro_color_of(const Patch& p, Side side);

// --- text formats ---
// Tile set: header "wangts v1 H=<int> V=<int>", then "t <left> <bottom> <right> <top>".
// Patch:    header "patch v1 W=<int> H=<int> WRAP=<0|1>", then H rows of tile
//           indices into an accompanying tile-set file, bottom row printed last.
std::string print_tileset(const TileSet& ts);
TileSet parse_tileset(const std::string& text);
std::string print_patch(const Patch& p, const TileSet& ts);
Patch parse_patch(const std::string& text, const TileSet& ts);

} // namespace wang
