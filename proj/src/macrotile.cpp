#include "wang/macrotile.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wang {

namespace {

// Payload values carried on top of the (coordinate, coordinate) fields.
constexpr ColorId kShade0 = 0;
constexpr ColorId kWireBase = 2;  // 2 + bit
constexpr ColorId kZoneBase = 4;  // 4 + zone color

enum class Role : std::uint8_t {
    plain,
    bit,        // border bit cell, start of a wire
    wire,       // interior wire cell
    translate,  // last wire cell below the zone: wire bit -> zone input color
    input_hard, // zone input cell with no wire: blank/program/head hardcoded
    zone,
    ring_left,
    ring_right,
    ring_top,
};

Side border_side_of(int x, int y, int N) {
    if (x == 0) return Side::left;
    if (y == 0) return Side::bottom;
    if (x == N - 1) return Side::right;
    return Side::top;
}

Side side_facing(const Cell& from, const Cell& to) {
    if (to.x == from.x + 1) return Side::right;
    if (to.x == from.x - 1) return Side::left;
    if (to.y == from.y + 1) return Side::top;
    return Side::bottom;
}

int segment_base(int N, int k) { return N / 2 - k / 2; }

std::vector<Cell> segment_cells(int N, int k, Side s) {
    int base = segment_base(N, k);
    std::vector<Cell> out;
    for (int i = 0; i < k; i++) {
        switch (s) {
            case Side::left: out.push_back({0, base + i}); break;
            case Side::bottom: out.push_back({base + i, 0}); break;
            case Side::right: out.push_back({N - 1, base + i}); break;
            case Side::top: out.push_back({base + i, N - 1}); break;
        }
    }
    return out;
}

} // namespace

// --- layout planning ---

namespace {

Rect clamp_rect(Rect r, int N) {
    return Rect{std::max(r.x0, 0), std::max(r.y0, 0), std::min(r.x1, N - 1), std::min(r.y1, N - 1)};
}

// Appends the axis-aligned segment from path.back() to `to` (exclusive of the
// start, inclusive of the end).
void add_seg(std::vector<Cell>& path, Cell to) {
    Cell c = path.back();
    if (c.x != to.x && c.y != to.y) throw invariant_error("wire segment is not axis-aligned");
    int dx = (to.x > c.x) - (to.x < c.x), dy = (to.y > c.y) - (to.y < c.y);
    while (!(path.back() == to)) path.push_back({path.back().x + dx, path.back().y + dy});
}

} // namespace

// Wires run on concentric lanes below the zone (lane l = row zy0-2-l), one
// wire per lane half. The orderings below make every pair of paths disjoint:
//  - left bits approach along their own rows, drop at staggered columns left
//    of the zone (lower bit row = outer lane), and enter the lane leftward;
//  - top bits drop beside their segment, circulate around the zone's right
//    on the innermost lanes, and enter their lane from the right;
//  - right bits do the same on lanes outside the top bits';
//  - bottom bits rise straight to the outermost lanes in the middle.
// Teeth rise from each lane to the zone's bottom row; a tooth only crosses
// lanes whose stretches have already ended, by the terminal-slot order.
int wire_terminal_slot(int k, int w) {
    int side = w / k, bit = w % k;
    switch (static_cast<Side>(side)) {
        case Side::left: return k - 1 - bit;
        case Side::bottom: return k + bit;
        case Side::right: return 2 * k + bit;
        default: return 4 * k - 1 - bit;
    }
}

LayoutPlan plan_layout(int N, int k, int m, int slot_count) {
    if (N < 8 || k < 0 || m < 2 || slot_count < 0) {
        throw argument_error("does not fit: need N >= 8, k >= 0, m >= 2");
    }
    LayoutPlan plan;
    plan.N = N;
    plan.k = k;
    plan.m = m;
    if (3 * m > N) throw argument_error("does not fit: zone area (m exceeds N/3)");
    const int zx0 = (N - m) / 2;
    int zy0 = std::max(N / 3, 3 * k + 2);
    if (k > 0 && zy0 > N - m - k - 2) {
        throw argument_error("does not fit: wire area (no room above and below the zone)");
    }
    plan.zone_origin = {zx0, zy0};
    Rect z = plan.zone_rect();
    if (z.x0 < 1 || z.y0 < 1 || z.x1 > N - 2 || z.y1 > N - 2) {
        throw argument_error("does not fit: zone area");
    }
    const int base = segment_base(N, k);
    if (k > 0 && (base < 2 || base + k - 1 > N - 3)) {
        throw argument_error("does not fit: bit segment length");
    }
    for (int s = 0; s < 4; s++) {
        plan.bit_segments[static_cast<std::size_t>(s)] = segment_cells(N, k, static_cast<Side>(s));
    }

    if (slot_count > 0) {
        int gw = 1;
        while (gw * gw < slot_count) gw++;
        int gh = (slot_count + gw - 1) / gw;
        // Upper-left quadrant: clear of the zone, the lanes, and every wire.
        int sy0 = k > 0 ? base + k + 2 : z.y1 + 2;
        plan.slot_region = Rect{2, sy0, 2 + 4 * gw - 1, sy0 + 4 * gh - 1};
        if (plan.slot_region.x1 > zx0 - k - 3 || plan.slot_region.y1 > N - 3) {
            throw argument_error("does not fit: slot area");
        }
    }

    if (k > 0) {
        // With 4k <= m every wire reaches a zone input cell; wider inputs
        // still get a routable (but not compilable) plan that stops at the
        // lanes, so geometry can be inspected before sizing the zone up.
        const bool full = 4 * k <= m;
        if (zx0 < k + 2 || z.x1 > N - 2 * k - 3) {
            throw argument_error("does not fit: wire area (side corridors)");
        }
        auto lane_row = [&](int l) { return zy0 - 2 - l; };
        for (int w = 0; w < 4 * k; w++) {
            int bit = w % k;
            int p = wire_terminal_slot(k, w);
            int l = 0;
            std::vector<Cell> path{plan.bit_segments[static_cast<std::size_t>(w / k)]
                                                    [static_cast<std::size_t>(bit)]};
            switch (static_cast<Side>(w / k)) {
                case Side::left:
                    l = k - 1 - bit;
                    add_seg(path, {zx0 - 2 - l, base + bit});
                    add_seg(path, {zx0 - 2 - l, lane_row(l)});
                    break;
                case Side::bottom:
                    l = 3 * k - 1 - bit;
                    add_seg(path, {base + bit, lane_row(l)});
                    break;
                case Side::right:
                    l = 2 * k - 1 - bit;
                    add_seg(path, {z.x1 + 2 + l, base + bit});
                    add_seg(path, {z.x1 + 2 + l, lane_row(l)});
                    break;
                case Side::top:
                    l = bit;
                    add_seg(path, {base + bit, z.y1 + 2 + l});
                    add_seg(path, {z.x1 + 2 + l, z.y1 + 2 + l});
                    add_seg(path, {z.x1 + 2 + l, lane_row(l)});
                    break;
            }
            if (full) {
                add_seg(path, {zx0 + p, lane_row(l)}); // lane stretch
                add_seg(path, {zx0 + p, zy0});         // tooth + terminal
            }
            plan.wires.push_back(std::move(path));
        }
        // Isolation-exempt corridors: the lane band and the bundles along each
        // border segment, where parallel wires sit side by side by design.
        int lane_bot = lane_row(3 * k - 1) - 1;
        plan.fan_regions = {
            clamp_rect({zx0 - k - 2, lane_bot, z.x1 + 2 * k + 2, zy0}, N),
            clamp_rect({base - 1, 0, base + k, zy0}, N),
            clamp_rect({0, base - 1, zx0 - 1, base + k}, N),
            clamp_rect({zx0 - k - 2, lane_bot, zx0 - 1, base + k}, N),
            clamp_rect({z.x1 + 1, base - 1, N - 1, base + k}, N),
            clamp_rect({z.x1 + 1, lane_bot, z.x1 + 2 * k + 2,
                        std::max(z.y1 + k + 2, base + k)}, N),
            clamp_rect({base - 1, z.y1 + 1, base + k, N - 1}, N),
            clamp_rect({base - 1, z.y1 + 1, z.x1 + 2 * k + 2, z.y1 + k + 2}, N),
        };
    }

    auto bad = check_plan(plan);
    if (!bad.empty()) throw argument_error("does not fit: " + bad.front());
    return plan;
}

std::vector<std::string> check_plan(const LayoutPlan& plan) {
    std::vector<std::string> out;
    const int N = plan.N, k = plan.k, m = plan.m;
    auto fail = [&](const std::string& s) { out.push_back(s); };
    if (N < 8 || m < 2) fail("N or m out of range");
    if (3 * m > N) fail("zone area: m exceeds N/3");
    Rect z = plan.zone_rect();
    if (z.x0 < 1 || z.y0 < 1 || z.x1 > N - 2 || z.y1 > N - 2) fail("zone outside [1,N-2]^2");
    if (!plan.slot_region.empty() &&
        (plan.slot_region.x0 < 1 || plan.slot_region.y0 < 1 || plan.slot_region.x1 > N - 2 ||
         plan.slot_region.y1 > N - 2)) {
        fail("slot region outside [1,N-2]^2");
    }
    for (int s = 0; s < 4; s++) {
        if (plan.bit_segments[static_cast<std::size_t>(s)] != segment_cells(N, k, static_cast<Side>(s))) {
            fail("bit segment not centered on side " + std::string(side_name(static_cast<Side>(s))));
        }
    }
    if (static_cast<int>(plan.wires.size()) != 4 * k) {
        fail("expected 4k wires");
        return out;
    }

    std::map<std::pair<int, int>, int> owner; // cell -> wire
    std::set<std::pair<int, int>> terminals;
    for (int w = 0; w < 4 * k; w++) {
        const auto& path = plan.wires[static_cast<std::size_t>(w)];
        const std::string tag = "wire " + std::to_string(w);
        if (path.size() < 2) {
            fail(tag + " too short");
            continue;
        }
        Cell start = plan.bit_segments[static_cast<std::size_t>(w / k)][static_cast<std::size_t>(w % k)];
        if (!(path.front() == start)) fail(tag + " does not start at its bit cell");
        for (std::size_t i = 0; i < path.size(); i++) {
            const Cell& c = path[i];
            if (c.x < 0 || c.x >= N || c.y < 0 || c.y >= N) fail(tag + " leaves the tile");
            if (i > 0 && std::abs(c.x - path[i - 1].x) + std::abs(c.y - path[i - 1].y) != 1) {
                fail(tag + " is not a path of adjacent cells");
            }
            if (i > 0 && (c.x == 0 || c.y == 0 || c.x == N - 1 || c.y == N - 1)) {
                fail(tag + " touches the border after its bit cell");
            }
            if (z.contains(c.x, c.y) && i + 1 != path.size()) {
                fail(tag + " enters the zone before its terminal");
            }
            if (!plan.slot_region.empty() && plan.slot_region.contains(c.x, c.y)) {
                fail(tag + " crosses the slot region");
            }
            for (int s = 0; s < 4; s++) {
                const auto& seg = plan.bit_segments[static_cast<std::size_t>(s)];
                if (std::find(seg.begin(), seg.end(), c) != seg.end() && !(c == start)) {
                    fail(tag + " crosses a bit segment");
                }
            }
            if (!owner.emplace(std::make_pair(c.x, c.y), w).second) {
                fail(tag + " shares a cell with another wire");
            }
        }
        if (4 * k <= m) {
            const Cell& t = path.back();
            if (t.y != z.y0 || t.x < z.x0 || t.x > z.x1) {
                fail(tag + " does not end on the zone's bottom row");
            }
        }
        if (!terminals.insert({path.back().x, path.back().y}).second) {
            fail(tag + " shares its terminal");
        }
    }
    // Isolation: > 2 in L-infinity for cells of distinct wires outside fan regions.
    for (const auto& [cell, w] : owner) {
        auto [x, y] = cell;
        if (plan.in_fan_region(x, y)) continue;
        for (int dy = -2; dy <= 2; dy++) {
            for (int dx = -2; dx <= 2; dx++) {
                auto it = owner.find({x + dx, y + dy});
                if (it == owner.end() || it->second == w) continue;
                if (plan.in_fan_region(x + dx, y + dy)) continue;
                fail("wires " + std::to_string(w) + " and " + std::to_string(it->second) +
                     " closer than 3 at (" + std::to_string(x) + "," + std::to_string(y) + ")");
                dy = 3;
                break;
            }
        }
    }
    return out;
}

// --- plan text format ---

std::string print_plan(const LayoutPlan& plan) {
    std::ostringstream os;
    os << "plan v1 N=" << plan.N << " K=" << plan.k << " M=" << plan.m
       << " ZX=" << plan.zone_origin.x << " ZY=" << plan.zone_origin.y << "\n";
    if (!plan.slot_region.empty()) {
        os << "slot " << plan.slot_region.x0 << " " << plan.slot_region.y0 << " "
           << plan.slot_region.x1 << " " << plan.slot_region.y1 << "\n";
    }
    for (const Rect& r : plan.fan_regions) {
        os << "fan " << r.x0 << " " << r.y0 << " " << r.x1 << " " << r.y1 << "\n";
    }
    for (const auto& wire : plan.wires) {
        os << "wire";
        for (const Cell& c : wire) os << " " << c.x << " " << c.y;
        os << "\n";
    }
    return os.str();
}

LayoutPlan parse_plan(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    LayoutPlan plan;
    bool header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (!header) {
            std::string version, kv;
            ls >> version;
            if (tag != "plan" || version != "v1") throw io_error("bad plan header");
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw io_error("bad plan header field: " + kv);
                int val = 0;
                try {
                    val = std::stoi(kv.substr(eq + 1));
                } catch (const std::exception&) {
                    throw io_error("bad plan header value: " + kv);
                }
                std::string key = kv.substr(0, eq);
                if (key == "N") plan.N = val;
                else if (key == "K") plan.k = val;
                else if (key == "M") plan.m = val;
                else if (key == "ZX") plan.zone_origin.x = val;
                else if (key == "ZY") plan.zone_origin.y = val;
                else throw io_error("unknown plan header key: " + key);
            }
            header = true;
            continue;
        }
        if (tag == "slot" || tag == "fan") {
            Rect r;
            if (!(ls >> r.x0 >> r.y0 >> r.x1 >> r.y1)) throw io_error("bad rect line: " + line);
            if (tag == "slot") plan.slot_region = r;
            else plan.fan_regions.push_back(r);
        } else if (tag == "wire") {
            std::vector<Cell> path;
            Cell c;
            while (ls >> c.x >> c.y) path.push_back(c);
            if (path.empty()) throw io_error("empty wire line");
            plan.wires.push_back(std::move(path));
        } else {
            throw io_error("unknown plan line: '" + line + "'");
        }
    }
    if (!header) throw io_error("plan file missing header");
    for (int s = 0; s < 4; s++) {
        plan.bit_segments[static_cast<std::size_t>(s)] =
            segment_cells(plan.N, plan.k, static_cast<Side>(s));
    }
    return plan;
}

// --- rho encoding and the table checker ---

int color_bits(const TileSet& rho) {
    ColorId top = std::max(rho.horizontal_alphabet_size(), rho.vertical_alphabet_size()) - 1;
    int k = 0;
    while ((ColorId{1} << k) <= top) k++;
    return k;
}

namespace {

std::string encode_tile(const Tile& t, int k) {
    std::string s(static_cast<std::size_t>(4 * k), '0');
    const ColorId sides[4] = {t.left, t.bottom, t.right, t.top};
    for (int w = 0; w < 4 * k; w++) {
        ColorId bit = (sides[w / k] >> (k - 1 - w % k)) & 1;
        s[static_cast<std::size_t>(wire_terminal_slot(k, w))] = bit ? '1' : '0';
    }
    return s;
}

} // namespace

std::pair<TuringMachine, Program> table_checker(const TileSet& rho, int k) {
    if (!rho.is_explicit()) throw argument_error("table checker needs an explicit tile set");
    ColorId limit = k >= 62 ? std::numeric_limits<ColorId>::max() : (ColorId{1} << k);
    if (rho.horizontal_alphabet_size() > limit || rho.vertical_alphabet_size() > limit) {
        throw argument_error("rho colors exceed k bits");
    }
    TuringMachine tm;
    tm.symbol_names = {"0", "1", "_"};
    tm.blank_symbol = 2;
    if (rho.tiles().empty()) { // nothing to accept: a machine with no moves
        tm.state_names = {"dead", "acc"};
        tm.initial_state = 0;
        tm.accepting_state = 1;
        return {tm, Program{}};
    }
    if (k == 0) {
        tm.state_names = {"acc"};
        tm.initial_state = 0;
        tm.accepting_state = 0;
        return {tm, Program{}};
    }
    std::set<std::string> encodings;
    for (const Tile& t : rho.tiles()) encodings.insert(encode_tile(t, k));
    std::vector<std::string> prefixes;
    {
        std::set<std::string> seen;
        for (const auto& e : encodings)
            for (int len = 0; len < 4 * k; len++) seen.insert(e.substr(0, static_cast<std::size_t>(len)));
        prefixes.assign(seen.begin(), seen.end());
        std::sort(prefixes.begin(), prefixes.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
    }
    std::map<std::string, int> id;
    for (const auto& p : prefixes) {
        id[p] = tm.state_count();
        tm.state_names.push_back("q_" + p);
    }
    int acc = tm.state_count();
    tm.state_names.push_back("acc");
    tm.initial_state = 0; // the empty prefix sorts first
    tm.accepting_state = acc;
    for (const auto& p : prefixes) {
        for (int s = 0; s < 2; s++) {
            std::string q = p + (s ? "1" : "0");
            if (static_cast<int>(q.size()) == 4 * k) {
                if (encodings.count(q)) tm.transition[{id[p], s}] = {acc, s, Move::S};
            } else if (id.count(q)) {
                tm.transition[{id[p], s}] = {id[q], s, Move::R};
            }
        }
    }
    return {tm, Program{}};
}

// --- the implementation tile set ---

struct Implementation::State {
    TileSet rho;
    TuringMachine checker;
    Program program;
    LayoutPlan plan;
    ZoneTiles zone;
    std::int64_t pv = 0, ph = 0; // payload alphabet sizes
    std::vector<Role> role;
    std::vector<std::int32_t> widx; // index into wcells, -1 elsewhere
    struct WireCellInfo {
        int wire = 0;
        Side in = Side::left;
        Side out = Side::top;
    };
    std::vector<WireCellInfo> wcells;
    std::vector<std::vector<ColorId>> top_allowed; // per zone column

    State(TileSet rho_, TuringMachine checker_, Program program_, LayoutPlan plan_)
        : rho(std::move(rho_)), checker(std::move(checker_)), program(std::move(program_)),
          plan(std::move(plan_)), zone(compile_tm_zone(checker, plan.m)) {}

    int N() const { return plan.N; }
    int at(int x, int y) const { return y * N() + x; }

    ColorId v_color(int xe, int y, ColorId p) const {
        return (static_cast<ColorId>(xe) * N() + y) * pv + p;
    }
    ColorId h_color(int x, int ye, ColorId p) const {
        return (static_cast<ColorId>(x) * N() + ye) * ph + p;
    }

    int pbit(int col) const {
        if (!checker.readonly_layer) return 0;
        return col < static_cast<int>(program.bits.size()) ? program.bits[static_cast<std::size_t>(col)]
                                                           : 0;
    }
    HeadField head_at(int col) const {
        return col == 0 ? HeadField{HeadField::state, checker.initial_state} : HeadField{};
    }

    Tile make(int x, int y, ColorId pl, ColorId pb, ColorId pr, ColorId pt) const {
        return Tile{v_color(x, y, pl), h_color(x, y, pb), v_color((x + 1) % N(), y, pr),
                    h_color(x, (y + 1) % N(), pt)};
    }

    std::vector<Tile> tiles_at(int x, int y) const {
        const Cell zo = plan.zone_origin;
        std::vector<Tile> out;
        auto wire_variants = [&](bool is_bit, bool is_translate) {
            const auto& wc = wcells[static_cast<std::size_t>(widx[static_cast<std::size_t>(at(x, y))])];
            for (ColorId v = 0; v < 2; v++) {
                ColorId p[4] = {0, 0, 0, 0};
                if (is_bit) {
                    p[static_cast<int>(border_side_of(x, y, N()))] = v;
                } else {
                    p[static_cast<int>(wc.in)] = kWireBase + v;
                }
                if (is_translate) {
                    p[static_cast<int>(Side::top)] =
                        kZoneBase + zone.h_color(static_cast<int>(v), pbit(x - zo.x), head_at(x - zo.x));
                } else {
                    p[static_cast<int>(wc.out)] = kWireBase + v;
                }
                out.push_back(make(x, y, p[0], p[1], p[2], p[3]));
            }
        };
        switch (role[static_cast<std::size_t>(at(x, y))]) {
            case Role::plain: out.push_back(make(x, y, 0, 0, 0, 0)); break;
            case Role::bit: wire_variants(true, false); break;
            case Role::wire: wire_variants(false, false); break;
            case Role::translate: wire_variants(false, true); break;
            case Role::input_hard:
                out.push_back(make(x, y, 0, 0, 0,
                                   kZoneBase + zone.h_color(checker.blank_symbol, pbit(x - zo.x),
                                                            head_at(x - zo.x))));
                break;
            case Role::zone:
                for (const Tile& t : zone.tiles.tiles()) {
                    out.push_back(make(x, y, kZoneBase + t.left, kZoneBase + t.bottom,
                                       kZoneBase + t.right, kZoneBase + t.top));
                }
                break;
            case Role::ring_left: out.push_back(make(x, y, 0, 0, kZoneBase + 0, 0)); break;
            case Role::ring_right: out.push_back(make(x, y, kZoneBase + 0, 0, 0, 0)); break;
            case Role::ring_top:
                for (ColorId c : top_allowed[static_cast<std::size_t>(x - zo.x)]) {
                    out.push_back(make(x, y, 0, kZoneBase + c, 0, 0));
                }
                break;
        }
        return out;
    }
};

namespace {

class TauOracle : public TileOracle {
public:
    explicit TauOracle(std::shared_ptr<const Implementation::State> s) : s_(std::move(s)) {}

    bool contains(const Tile& t) const override {
        const auto& s = *s_;
        const int N = s.plan.N;
        auto dv = [&](ColorId c) -> std::optional<std::array<ColorId, 3>> {
            if (c < 0 || c >= static_cast<ColorId>(N) * N * s.pv) return std::nullopt;
            return std::array<ColorId, 3>{c / s.pv / N, c / s.pv % N, c % s.pv};
        };
        auto dh = [&](ColorId c) -> std::optional<std::array<ColorId, 3>> {
            if (c < 0 || c >= static_cast<ColorId>(N) * N * s.ph) return std::nullopt;
            return std::array<ColorId, 3>{c / s.ph / N, c / s.ph % N, c % s.ph};
        };
        auto l = dv(t.left), r = dv(t.right), b = dh(t.bottom), tp = dh(t.top);
        if (!l || !r || !b || !tp) return false;
        int x = static_cast<int>((*l)[0]), y = static_cast<int>((*l)[1]);
        if ((*r)[0] != (x + 1) % N || (*r)[1] != y) return false;
        if ((*b)[0] != x || (*b)[1] != y) return false;
        if ((*tp)[0] != x || (*tp)[1] != (y + 1) % N) return false;
        auto tiles = s.tiles_at(x, y);
        return std::find(tiles.begin(), tiles.end(), t) != tiles.end();
    }

    void enumerate(const SideQuery& q,
                   const std::function<bool(const Tile&)>& emit) const override {
        const auto& s = *s_;
        const int N = s.plan.N;
        std::optional<Cell> cell;
        auto from_v = [&](ColorId c, int shift) {
            if (c < 0 || c >= static_cast<ColorId>(N) * N * s.pv) return;
            cell = Cell{static_cast<int>((c / s.pv / N + shift) % N), static_cast<int>(c / s.pv % N)};
        };
        auto from_h = [&](ColorId c, int shift) {
            if (c < 0 || c >= static_cast<ColorId>(N) * N * s.ph) return;
            cell = Cell{static_cast<int>(c / s.ph / N), static_cast<int>((c / s.ph % N + shift) % N)};
        };
        if (q.left) from_v(*q.left, 0);
        else if (q.bottom) from_h(*q.bottom, 0);
        else if (q.right) from_v(*q.right, N - 1);
        else if (q.top) from_h(*q.top, N - 1);
        if (q.left || q.bottom || q.right || q.top) {
            if (!cell) return; // a malformed color admits nothing
            for (const Tile& t : s.tiles_at(cell->x, cell->y)) {
                if (q.admits(t) && !emit(t)) return;
            }
            return;
        }
        for (int y = 0; y < N; y++) {
            for (int x = 0; x < N; x++) {
                for (const Tile& t : s.tiles_at(x, y)) {
                    if (q.admits(t) && !emit(t)) return;
                }
            }
        }
    }

private:
    std::shared_ptr<const Implementation::State> s_;
};

} // namespace

Implementation::Implementation(TileSet rho, TuringMachine checker, Program program, LayoutPlan plan)
    : s_(nullptr), tau_(1, 1, std::vector<Tile>{Tile{0, 0, 0, 0}}) {
    auto bad = check_plan(plan);
    if (!bad.empty()) throw argument_error("invalid layout plan: " + bad.front());
    if (4 * plan.k > plan.m) {
        throw argument_error("does not fit: zone bottom row narrower than the 4k input bits");
    }
    ColorId limit = plan.k >= 62 ? std::numeric_limits<ColorId>::max() : (ColorId{1} << plan.k);
    if (rho.horizontal_alphabet_size() > limit || rho.vertical_alphabet_size() > limit) {
        throw argument_error("rho colors exceed k bits");
    }
    if (plan.k > 0 && (checker.symbol_count() < 3 || checker.blank_symbol < 2)) {
        throw argument_error("checker must use symbols 0,1 plus a distinct blank");
    }
    auto st = std::make_shared<State>(std::move(rho), std::move(checker), std::move(program),
                                      std::move(plan));
    const int N = st->plan.N;
    st->pv = kZoneBase + st->zone.tiles.horizontal_alphabet_size();
    st->ph = kZoneBase + st->zone.tiles.vertical_alphabet_size();
    st->role.assign(static_cast<std::size_t>(N) * N, Role::plain);
    st->widx.assign(static_cast<std::size_t>(N) * N, -1);
    const Rect z = st->plan.zone_rect();
    for (int y = z.y0; y <= z.y1; y++) {
        for (int x = z.x0; x <= z.x1; x++) st->role[static_cast<std::size_t>(st->at(x, y))] = Role::zone;
        st->role[static_cast<std::size_t>(st->at(z.x0 - 1, y))] = Role::ring_left;
        st->role[static_cast<std::size_t>(st->at(z.x1 + 1, y))] = Role::ring_right;
    }
    for (int x = z.x0; x <= z.x1; x++) {
        st->role[static_cast<std::size_t>(st->at(x, z.y1 + 1))] = Role::ring_top;
        st->role[static_cast<std::size_t>(st->at(x, z.y0 - 1))] = Role::input_hard;
    }
    for (int w = 0; w < 4 * st->plan.k; w++) {
        const auto& path = st->plan.wires[static_cast<std::size_t>(w)];
        for (std::size_t i = 0; i + 1 < path.size(); i++) {
            const Cell& c = path[i];
            State::WireCellInfo info;
            info.wire = w;
            if (i > 0) info.in = side_facing(c, path[i - 1]);
            info.out = side_facing(c, path[i + 1]);
            Role r = i == 0 ? Role::bit : (i + 2 == path.size() ? Role::translate : Role::wire);
            st->role[static_cast<std::size_t>(st->at(c.x, c.y))] = r;
            st->widx[static_cast<std::size_t>(st->at(c.x, c.y))] =
                static_cast<std::int32_t>(st->wcells.size());
            st->wcells.push_back(info);
        }
    }
    st->top_allowed = st->zone.top_boundary().allowed;

    std::int64_t bound = static_cast<std::int64_t>(N) * N *
                         std::max<std::int64_t>(2, static_cast<std::int64_t>(
                                                       st->zone.tiles.tiles().size()));
    s_ = st;
    tau_ = TileSet(static_cast<ColorId>(N) * N * st->pv, static_cast<ColorId>(N) * N * st->ph,
                   std::make_shared<TauOracle>(st), bound);
}

const TileSet& Implementation::rho() const { return s_->rho; }
const TuringMachine& Implementation::checker() const { return s_->checker; }
const Program& Implementation::program() const { return s_->program; }
const LayoutPlan& Implementation::plan() const { return s_->plan; }
const ZoneTiles& Implementation::zone() const { return s_->zone; }
const TileSet& Implementation::tau() const { return tau_; }

ColorId Implementation::v_color(int xe, int y, ColorId payload) const {
    return s_->v_color(xe, y, payload);
}
ColorId Implementation::h_color(int x, int ye, ColorId payload) const {
    return s_->h_color(x, ye, payload);
}
Implementation::EdgeDecode Implementation::decode_v(ColorId c) const {
    if (c < 0 || c >= tau_.horizontal_alphabet_size()) throw argument_error("color out of range");
    return EdgeDecode{static_cast<int>(c / s_->pv / s_->plan.N),
                      static_cast<int>(c / s_->pv % s_->plan.N), c % s_->pv};
}
Implementation::EdgeDecode Implementation::decode_h(ColorId c) const {
    if (c < 0 || c >= tau_.vertical_alphabet_size()) throw argument_error("color out of range");
    return EdgeDecode{static_cast<int>(c / s_->ph / s_->plan.N),
                      static_cast<int>(c / s_->ph % s_->plan.N), c % s_->ph};
}

std::vector<Tile> Implementation::tiles_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= s_->plan.N || y >= s_->plan.N) {
        throw argument_error("coordinate outside the macro-tile");
    }
    return s_->tiles_at(x, y);
}

MacroColor Implementation::border_colors(Side s, ColorId rho_color) const {
    const int N = s_->plan.N, k = s_->plan.k;
    ColorId limit = k >= 62 ? std::numeric_limits<ColorId>::max() : (ColorId{1} << k);
    if (rho_color < 0 || rho_color >= limit) throw argument_error("rho color exceeds k bits");
    int base = segment_base(N, k);
    MacroColor mc(static_cast<std::size_t>(N));
    for (int i = 0; i < N; i++) {
        ColorId payload = 0;
        if (i >= base && i < base + k) payload = (rho_color >> (k - 1 - (i - base))) & 1;
        mc[static_cast<std::size_t>(i)] = (s == Side::left || s == Side::right)
                                              ? s_->v_color(0, i, payload)
                                              : s_->h_color(i, 0, payload);
    }
    return mc;
}

ColorId Implementation::decode_border(Side s, const MacroColor& mc) const {
    const int N = s_->plan.N, k = s_->plan.k;
    if (static_cast<int>(mc.size()) != N) throw argument_error("macro-color has wrong length");
    int base = segment_base(N, k);
    ColorId c = 0;
    for (int i = 0; i < k; i++) {
        ColorId payload = (s == Side::left || s == Side::right)
                              ? decode_v(mc[static_cast<std::size_t>(base + i)]).payload
                              : decode_h(mc[static_cast<std::size_t>(base + i)]).payload;
        if (payload != 0 && payload != 1) throw argument_error("macro-color bit cell is not a shade");
        c = (c << 1) | payload;
    }
    return c;
}

std::vector<BoundaryConstraint> Implementation::macro_boundaries(const Tile& rho_tile) const {
    return {BoundaryConstraint::exact(Side::left, border_colors(Side::left, rho_tile.left)),
            BoundaryConstraint::exact(Side::bottom, border_colors(Side::bottom, rho_tile.bottom)),
            BoundaryConstraint::exact(Side::right, border_colors(Side::right, rho_tile.right)),
            BoundaryConstraint::exact(Side::top, border_colors(Side::top, rho_tile.top))};
}

Implementation compile_implementation(TileSet rho, TuringMachine checker, Program program,
                                      LayoutPlan plan) {
    return Implementation(std::move(rho), std::move(checker), std::move(program), std::move(plan));
}

Patch macro_tile_of(const Implementation& impl, const Tile& rho_tile, bool lazy) {
    auto s = impl.s_;
    const int N = s->plan.N, k = s->plan.k, m = s->plan.m;
    if (!s->rho.contains(rho_tile)) throw argument_error("tile is not a member of rho");
    std::array<ColorId, 4> colors{rho_tile.left, rho_tile.bottom, rho_tile.right, rho_tile.top};
    std::vector<int> input(static_cast<std::size_t>(4 * k));
    auto wbits = std::make_shared<std::vector<int>>();
    for (int w = 0; w < 4 * k; w++) {
        int bit = static_cast<int>((colors[static_cast<std::size_t>(w / k)] >> (k - 1 - w % k)) & 1);
        wbits->push_back(bit);
        input[static_cast<std::size_t>(wire_terminal_slot(k, w))] = bit;
    }
    Trace trace = run_tm(s->checker, input, s->program, m);
    if (trace.verdict != Verdict::accepted || trace.max_cell >= m) {
        throw argument_error("the checker does not accept these borders within the zone");
    }
    auto zp = std::make_shared<Patch>(trace_to_zone_tiling(s->zone, trace, s->program));

    auto cell = [s, zp, wbits](int x, int y) -> Tile {
        const Cell zo = s->plan.zone_origin;
        switch (s->role[static_cast<std::size_t>(s->at(x, y))]) {
            case Role::zone: {
                Tile t = zp->at(x - zo.x, y - zo.y);
                return s->make(x, y, kZoneBase + t.left, kZoneBase + t.bottom, kZoneBase + t.right,
                               kZoneBase + t.top);
            }
            case Role::ring_top:
                return s->make(x, y, 0, kZoneBase + zp->at(x - zo.x, s->plan.m - 1).top, 0, 0);
            case Role::bit:
            case Role::wire:
            case Role::translate: {
                const auto& wc =
                    s->wcells[static_cast<std::size_t>(s->widx[static_cast<std::size_t>(s->at(x, y))])];
                ColorId v = (*wbits)[static_cast<std::size_t>(wc.wire)];
                ColorId p[4] = {0, 0, 0, 0};
                Role r = s->role[static_cast<std::size_t>(s->at(x, y))];
                if (r == Role::bit) p[static_cast<int>(border_side_of(x, y, s->plan.N))] = v;
                else p[static_cast<int>(wc.in)] = kWireBase + v;
                if (r == Role::translate) {
                    p[static_cast<int>(Side::top)] =
                        kZoneBase +
                        s->zone.h_color(static_cast<int>(v), s->pbit(x - zo.x), s->head_at(x - zo.x));
                } else {
                    p[static_cast<int>(wc.out)] = kWireBase + v;
                }
                return s->make(x, y, p[0], p[1], p[2], p[3]);
            }
            case Role::ring_left: return s->make(x, y, 0, 0, kZoneBase + 0, 0);
            case Role::ring_right: return s->make(x, y, kZoneBase + 0, 0, 0, 0);
            case Role::input_hard:
                return s->make(x, y, 0, 0, 0,
                               kZoneBase + s->zone.h_color(s->checker.blank_symbol, s->pbit(x - zo.x),
                                                           s->head_at(x - zo.x)));
            case Role::plain:
            default: return s->make(x, y, 0, 0, 0, 0);
        }
    };
    if (lazy) return Patch::lazy(N, N, false, cell);
    std::vector<Tile> cells;
    cells.reserve(static_cast<std::size_t>(N) * N);
    for (int y = 0; y < N; y++)
        for (int x = 0; x < N; x++) cells.push_back(cell(x, y));
    return Patch::dense(N, N, false, std::move(cells));
}

DecomposeResult decompose(const Implementation& impl, const Patch& p) {
    DecomposeResult res;
    const int N = impl.plan().N, k = impl.plan().k;
    if (p.wrap()) {
        res.error = "wrap patches are not decomposable";
        return res;
    }
    auto claim = [&](int x, int y) -> std::optional<Cell> {
        Tile t = p.at(x, y);
        try {
            auto l = impl.decode_v(t.left);
            auto b = impl.decode_h(t.bottom);
            auto r = impl.decode_v(t.right);
            auto tp = impl.decode_h(t.top);
            if (b.a != l.a || b.b != l.b) return std::nullopt;
            if (r.a != (l.a + 1) % N || r.b != l.b) return std::nullopt;
            if (tp.a != l.a || tp.b != (l.b + 1) % N) return std::nullopt;
            return Cell{l.a, l.b};
        } catch (const argument_error&) {
            return std::nullopt;
        }
    };
    auto first = claim(0, 0);
    if (!first) {
        res.error = "cell (0,0) carries no consistent coordinates";
        return res;
    }
    res.sigma_h = first->x;
    res.sigma_v = first->y;
    for (int y = 0; y < p.height(); y++) {
        for (int x = 0; x < p.width(); x++) {
            auto c = claim(x, y);
            if (!c || c->x != (x + res.sigma_h) % N || c->y != (y + res.sigma_v) % N) {
                res.error = "coordinate field mismatch at (" + std::to_string(x) + "," +
                            std::to_string(y) + ")";
                return res;
            }
        }
    }
    int x0 = (N - res.sigma_h) % N, y0 = (N - res.sigma_v) % N;
    res.first_corner = {x0, y0};
    res.grid_w = (p.width() - x0) / N;
    res.grid_h = (p.height() - y0) / N;
    int base = segment_base(N, k);
    for (int gy = 0; gy < res.grid_h; gy++) {
        for (int gx = 0; gx < res.grid_w; gx++) {
            int px = x0 + gx * N, py = y0 + gy * N;
            Tile t;
            for (int i = 0; i < k; i++) {
                auto bit = [&](ColorId payload) -> ColorId {
                    if (payload != 0 && payload != 1) {
                        throw invariant_error("macro-tile border carries a non-shade payload");
                    }
                    return payload;
                };
                t.left = (t.left << 1) | bit(impl.decode_v(p.at(px, py + base + i).left).payload);
                t.bottom =
                    (t.bottom << 1) | bit(impl.decode_h(p.at(px + base + i, py).bottom).payload);
                t.right =
                    (t.right << 1) | bit(impl.decode_v(p.at(px + N - 1, py + base + i).right).payload);
                t.top =
                    (t.top << 1) | bit(impl.decode_h(p.at(px + base + i, py + N - 1).top).payload);
            }
            res.grid.push_back(t);
        }
    }
    res.ok = true;
    return res;
}

} // namespace wang
