#include "wang/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wang {

const char* side_name(Side s) {
    switch (s) {
        case Side::left: return "left";
        case Side::bottom: return "bottom";
        case Side::right: return "right";
        case Side::top: return "top";
    }
    return "?";
}

std::size_t TileHash::operator()(const Tile& t) const {
    std::size_t h = 1469598103934665603ull;
    for (ColorId c : {t.left, t.bottom, t.right, t.top}) {
        h ^= static_cast<std::size_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

bool matches(const Tile& a, const Tile& b, Direction d) {
    return d == Direction::east ? a.right == b.left : a.top == b.bottom;
}

bool SideQuery::admits(const Tile& t) const {
    return (!left || *left == t.left) && (!bottom || *bottom == t.bottom) &&
           (!right || *right == t.right) && (!top || *top == t.top);
}

TileSet::TileSet(std::int64_t h_alphabet, std::int64_t v_alphabet, std::vector<Tile> tiles)
    : h_alphabet_(h_alphabet), v_alphabet_(v_alphabet),
      size_bound_(static_cast<std::int64_t>(tiles.size())), tiles_(std::move(tiles)) {
    std::set<Tile> seen;
    for (const Tile& t : tiles_) {
        if (t.left < 0 || t.right < 0 || t.left >= h_alphabet_ || t.right >= h_alphabet_ ||
            t.bottom < 0 || t.top < 0 || t.bottom >= v_alphabet_ || t.top >= v_alphabet_) {
            throw argument_error("tile color outside declared alphabet");
        }
        if (!seen.insert(t).second) {
            throw argument_error("duplicate tile in explicit tile set");
        }
    }
}

TileSet::TileSet(std::int64_t h_alphabet, std::int64_t v_alphabet,
                 std::shared_ptr<const TileOracle> oracle, std::int64_t size_bound)
    : h_alphabet_(h_alphabet), v_alphabet_(v_alphabet), size_bound_(size_bound),
      oracle_(std::move(oracle)) {
    if (!oracle_) throw argument_error("null tile oracle");
}

const std::vector<Tile>& TileSet::tiles() const {
    if (!is_explicit()) throw invariant_error("tiles() on oracle-backed tile set");
    return tiles_;
}

bool TileSet::contains(const Tile& t) const {
    if (oracle_) return oracle_->contains(t);
    return std::find(tiles_.begin(), tiles_.end(), t) != tiles_.end();
}

void TileSet::enumerate(const SideQuery& q, const std::function<bool(const Tile&)>& emit) const {
    if (oracle_) {
        oracle_->enumerate(q, emit);
        return;
    }
    for (const Tile& t : tiles_) {
        if (q.admits(t) && !emit(t)) return;
    }
}

std::vector<Tile> TileSet::tiles_with(const SideQuery& q, std::size_t limit) const {
    std::vector<Tile> out;
    enumerate(q, [&](const Tile& t) {
        out.push_back(t);
        return out.size() < limit;
    });
    return out;
}

Patch Patch::dense(int width, int height, bool wrap, std::vector<Tile> cells) {
    if (width < 1 || height < 1) throw argument_error("patch dimensions must be >= 1");
    if (cells.size() != static_cast<std::size_t>(width) * height) {
        throw argument_error("patch cell count does not match dimensions");
    }
    Patch p;
    p.width_ = width;
    p.height_ = height;
    p.wrap_ = wrap;
    p.cells_ = std::make_shared<std::vector<Tile>>(std::move(cells));
    return p;
}

Patch Patch::filled(int width, int height, bool wrap, const Tile& t) {
    return dense(width, height, wrap,
                 std::vector<Tile>(static_cast<std::size_t>(width) * height, t));
}

Patch Patch::lazy(int width, int height, bool wrap, std::function<Tile(int, int)> at) {
    if (width < 1 || height < 1) throw argument_error("patch dimensions must be >= 1");
    Patch p;
    p.width_ = width;
    p.height_ = height;
    p.wrap_ = wrap;
    p.fn_ = std::move(at);
    return p;
}

Tile Patch::at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) {
        throw invariant_error("patch access out of range");
    }
    if (cells_) return (*cells_)[static_cast<std::size_t>(y) * width_ + x];
    return fn_(x, y);
}

void Patch::set(int x, int y, const Tile& t) {
    if (!cells_) throw invariant_error("set() on non-dense patch");
    if (x < 0 || y < 0 || x >= width_ || y >= height_) {
        throw invariant_error("patch access out of range");
    }
    if (cells_.use_count() > 1) cells_ = std::make_shared<std::vector<Tile>>(*cells_);
    (*cells_)[static_cast<std::size_t>(y) * width_ + x] = t;
}

Patch Patch::subpatch(int x, int y, int w, int h) const {
    if (x < 0 || y < 0 || x + w > width_ || y + h > height_) {
        throw argument_error("subpatch out of range");
    }
    std::vector<Tile> cells;
    cells.reserve(static_cast<std::size_t>(w) * h);
    for (int j = 0; j < h; j++)
        for (int i = 0; i < w; i++) cells.push_back(at(x + i, y + j));
    return dense(w, h, false, std::move(cells));
}

Patch Patch::unroll(int kx, int ky) const {
    if (!wrap_) throw argument_error("unroll requires a wrap patch");
    int w = width_ * kx, h = height_ * ky;
    std::vector<Tile> cells;
    cells.reserve(static_cast<std::size_t>(w) * h);
    for (int j = 0; j < h; j++)
        for (int i = 0; i < w; i++) cells.push_back(at(i % width_, j % height_));
    return dense(w, h, false, std::move(cells));
}

ValidationReport validate_patch(const TileSet& ts, const Patch& p) {
    const int w = p.width(), h = p.height();
    // Scan in lexicographic (x, y) order; membership precedes adjacency at a cell,
    // and east precedes north.
    for (int x = 0; x < w; x++) {
        for (int y = 0; y < h; y++) {
            const Tile t = p.at(x, y);
            if (!ts.contains(t)) {
                return {false, Violation{ViolationKind::membership, x, y, Direction::east}};
            }
            if (x + 1 < w || p.wrap()) {
                const Tile e = p.at((x + 1) % w, y);
                if (!matches(t, e, Direction::east)) {
                    return {false, Violation{ViolationKind::mismatch, x, y, Direction::east}};
                }
            }
            if (y + 1 < h || p.wrap()) {
                const Tile n = p.at(x, (y + 1) % h);
                if (!matches(t, n, Direction::north)) {
                    return {false, Violation{ViolationKind::mismatch, x, y, Direction::north}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

MacroColor macro_color_of(const Patch& p, Side side) {
    if (p.wrap()) throw argument_error("macro_color_of rejects wrap patches");
    MacroColor out;
    switch (side) {
        case Side::left:
            out.reserve(p.height());
            for (int y = 0; y < p.height(); y++) out.push_back(p.at(0, y).left);
            break;
        case Side::right:
            out.reserve(p.height());
            for (int y = 0; y < p.height(); y++) out.push_back(p.at(p.width() - 1, y).right);
            break;
        case Side::bottom:
            out.reserve(p.width());
            for (int x = 0; x < p.width(); x++) out.push_back(p.at(x, 0).bottom);
            break;
        case Side::top:
            out.reserve(p.width());
            for (int x = 0; x < p.width(); x++) out.push_back(p.at(x, p.height() - 1).top);
            break;
    }
    return out;
}

// --- text formats ---

std::string print_tileset(const TileSet& ts) {
    std::ostringstream os;
    os << "wangts v1 H=" << ts.horizontal_alphabet_size()
       << " V=" << ts.vertical_alphabet_size() << "\n";
    for (const Tile& t : ts.tiles()) {
        os << "t " << t.left << " " << t.bottom << " " << t.right << " " << t.top << "\n";
    }
    return os.str();
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        out.push_back(line);
    }
    return out;
}

std::int64_t parse_kv(const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) throw io_error("expected " + key + "=<int>, got '" + tok + "'");
    try {
        return std::stoll(tok.substr(key.size() + 1));
    } catch (const std::exception&) {
        throw io_error("bad integer in '" + tok + "'");
    }
}

} // namespace

TileSet parse_tileset(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw io_error("empty tile-set file");
    std::istringstream hdr(lines[0]);
    std::string magic, version, htok, vtok;
    hdr >> magic >> version >> htok >> vtok;
    if (magic != "wangts" || version != "v1") throw io_error("bad tile-set header");
    std::int64_t h = parse_kv(htok, "H"), v = parse_kv(vtok, "V");
    std::vector<Tile> tiles;
    for (std::size_t i = 1; i < lines.size(); i++) {
        std::istringstream ls(lines[i]);
        std::string tag;
        Tile t;
        ls >> tag >> t.left >> t.bottom >> t.right >> t.top;
        if (tag != "t" || ls.fail()) throw io_error("bad tile line: '" + lines[i] + "'");
        tiles.push_back(t);
    }
    try {
        return TileSet(h, v, std::move(tiles));
    } catch (const argument_error& e) {
        throw io_error(std::string("invalid tile set: ") + e.what());
    }
}

std::string print_patch(const Patch& p, const TileSet& ts) {
    if (p.empty()) throw argument_error("cannot print empty patch");
    std::unordered_map<Tile, std::size_t, TileHash> index;
    for (std::size_t i = 0; i < ts.tiles().size(); i++) index.emplace(ts.tiles()[i], i);
    std::ostringstream os;
    os << "patch v1 W=" << p.width() << " H=" << p.height()
       << " WRAP=" << (p.wrap() ? 1 : 0) << "\n";
    // Bottom row printed last so the file reads like the picture.
    for (int y = p.height() - 1; y >= 0; y--) {
        for (int x = 0; x < p.width(); x++) {
            auto it = index.find(p.at(x, y));
            if (it == index.end()) throw argument_error("patch tile missing from tile set");
            os << (x ? " " : "") << it->second;
        }
        os << "\n";
    }
    return os.str();
}

Patch parse_patch(const std::string& text, const TileSet& ts) {
    auto lines = content_lines(text);
    if (lines.empty()) throw io_error("empty patch file");
    std::istringstream hdr(lines[0]);
    std::string magic, version, wtok, htok, wraptok;
    hdr >> magic >> version >> wtok >> htok >> wraptok;
    if (magic != "patch" || version != "v1") throw io_error("bad patch header");
    int w = static_cast<int>(parse_kv(wtok, "W"));
    int h = static_cast<int>(parse_kv(htok, "H"));
    std::int64_t wrap = parse_kv(wraptok, "WRAP");
    if (w < 1 || h < 1 || (wrap != 0 && wrap != 1)) throw io_error("bad patch dimensions");
    if (lines.size() != static_cast<std::size_t>(h) + 1) throw io_error("patch row count mismatch");
    std::vector<Tile> cells(static_cast<std::size_t>(w) * h);
    for (int row = 0; row < h; row++) {
        int y = h - 1 - row; // first data line is the top row
        std::istringstream ls(lines[static_cast<std::size_t>(row) + 1]);
        for (int x = 0; x < w; x++) {
            std::size_t idx;
            if (!(ls >> idx)) throw io_error("short patch row");
            if (idx >= ts.tiles().size()) throw io_error("patch tile index out of range");
            cells[static_cast<std::size_t>(y) * w + x] = ts.tiles()[idx];
        }
        std::string extra;
        if (ls >> extra) throw io_error("trailing tokens in patch row");
    }
    return Patch::dense(w, h, wrap == 1, std::move(cells));
}

} // namespace wang
