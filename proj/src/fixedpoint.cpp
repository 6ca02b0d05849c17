#include "wang/fixedpoint.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace wang {

namespace {

// Payload convention shared with the implementation tile set.
constexpr ColorId kZoneBase = 4;

using ForcedMap = std::map<std::pair<int, int>, Tile>;

std::vector<std::uint8_t> to_bits(long v) {
    std::vector<std::uint8_t> out;
    do {
        out.push_back(static_cast<std::uint8_t>(v & 1));
        v >>= 1;
    } while (v > 0);
    std::reverse(out.begin(), out.end());
    return out;
}

Tile make_payload_tile(const Implementation& impl, int x, int y, ColorId pl, ColorId pb, ColorId pr,
                       ColorId pt) {
    const int N = impl.plan().N;
    return Tile{impl.v_color(x, y, pl), impl.h_color(x, y, pb), impl.v_color((x + 1) % N, y, pr),
                impl.h_color(x, (y + 1) % N, pt)};
}

// Strips the coordinate fields, leaving the four payloads.
Tile project_payloads(const Implementation& impl, const Tile& t) {
    return Tile{impl.decode_v(t.left).payload, impl.decode_h(t.bottom).payload,
                impl.decode_v(t.right).payload, impl.decode_h(t.top).payload};
}

std::vector<Tile> forced_tiles_at(const Implementation& impl, const ForcedMap& forced, int x, int y) {
    auto it = forced.find({x, y});
    if (it != forced.end()) return {it->second};
    return impl.tiles_at(x, y);
}

bool fp_contains(const Implementation& impl, const ForcedMap& forced, const Tile& t) {
    const int N = impl.plan().N;
    try {
        auto l = impl.decode_v(t.left);
        auto b = impl.decode_h(t.bottom);
        auto r = impl.decode_v(t.right);
        auto tp = impl.decode_h(t.top);
        if (b.a != l.a || b.b != l.b) return false;
        if (r.a != (l.a + 1) % N || r.b != l.b) return false;
        if (tp.a != l.a || tp.b != (l.b + 1) % N) return false;
        auto tiles = forced_tiles_at(impl, forced, l.a, l.b);
        return std::find(tiles.begin(), tiles.end(), t) != tiles.end();
    } catch (const argument_error&) {
        return false;
    }
}

void fp_enumerate(const Implementation& impl, const ForcedMap& forced, const SideQuery& q,
                  const std::function<bool(const Tile&)>& emit) {
    const int N = impl.plan().N;
    if (q.left || q.bottom || q.right || q.top) {
        int x = 0, y = 0;
        try {
            if (q.left) {
                auto d = impl.decode_v(*q.left);
                x = d.a, y = d.b;
            } else if (q.bottom) {
                auto d = impl.decode_h(*q.bottom);
                x = d.a, y = d.b;
            } else if (q.right) {
                auto d = impl.decode_v(*q.right);
                x = (d.a + N - 1) % N, y = d.b;
            } else {
                auto d = impl.decode_h(*q.top);
                x = d.a, y = (d.b + N - 1) % N;
            }
        } catch (const argument_error&) {
            return; // a malformed color admits nothing
        }
        for (const Tile& t : forced_tiles_at(impl, forced, x, y)) {
            if (q.admits(t) && !emit(t)) return;
        }
        return;
    }
    for (int y = 0; y < N; y++) {
        for (int x = 0; x < N; x++) {
            for (const Tile& t : forced_tiles_at(impl, forced, x, y)) {
                if (q.admits(t) && !emit(t)) return;
            }
        }
    }
}

// Forced tiles of every slot footprint cell: the 2x2 interior carries the
// catalog pattern verbatim, the ring mirrors the pattern's outer colors on its
// inner sides and is plain skeleton outside.
ForcedMap slot_forced(const Implementation& impl, const WindowPatternCatalog& catalog,
                      const SlotPlacement& slots) {
    ForcedMap f;
    for (const auto& slot : slots.slots) {
        const auto& pat = catalog.entries[static_cast<std::size_t>(slot.entry)].pattern;
        int fx = slot.footprint.x, fy = slot.footprint.y;
        for (int dy = 0; dy < 2; dy++) {
            for (int dx = 0; dx < 2; dx++) {
                const Tile& q = pat[static_cast<std::size_t>(dy * 2 + dx)];
                f[{fx + 1 + dx, fy + 1 + dy}] =
                    make_payload_tile(impl, fx + 1 + dx, fy + 1 + dy, q.left, q.bottom, q.right, q.top);
            }
        }
        for (int d = 0; d < 2; d++) {
            f[{fx + 1 + d, fy}] = make_payload_tile(impl, fx + 1 + d, fy, 0, 0, 0,
                                                    pat[static_cast<std::size_t>(d)].bottom);
            f[{fx + 1 + d, fy + 3}] = make_payload_tile(impl, fx + 1 + d, fy + 3, 0,
                                                        pat[static_cast<std::size_t>(2 + d)].top, 0, 0);
            f[{fx, fy + 1 + d}] = make_payload_tile(impl, fx, fy + 1 + d, 0, 0,
                                                    pat[static_cast<std::size_t>(2 * d)].left, 0);
            f[{fx + 3, fy + 1 + d}] = make_payload_tile(
                impl, fx + 3, fy + 1 + d, pat[static_cast<std::size_t>(2 * d + 1)].right, 0, 0, 0);
        }
        for (int cx : {fx, fx + 3})
            for (int cy : {fy, fy + 3}) f[{cx, cy}] = make_payload_tile(impl, cx, cy, 0, 0, 0, 0);
    }
    return f;
}

class SlottedOracle : public TileOracle {
public:
    SlottedOracle(Implementation impl, std::shared_ptr<const ForcedMap> forced)
        : impl_(std::move(impl)), forced_(std::move(forced)) {}

    bool contains(const Tile& t) const override { return fp_contains(impl_, *forced_, t); }
    void enumerate(const SideQuery& q,
                   const std::function<bool(const Tile&)>& emit) const override {
        fp_enumerate(impl_, *forced_, q, emit);
    }

private:
    Implementation impl_;
    std::shared_ptr<const ForcedMap> forced_;
};

// rho of the self-referential set: forwards membership to the set's own tau.
// The back-reference is weak (the implementation owns rho, the owner of the
// whole set owns the implementation), so no cycle is created.
class RhoForward : public TileOracle {
public:
    struct Core {
        std::weak_ptr<const Implementation> impl;
        std::shared_ptr<const ForcedMap> forced = std::make_shared<ForcedMap>();
    };

    explicit RhoForward(std::shared_ptr<Core> core) : core_(std::move(core)) {}

    bool contains(const Tile& t) const override {
        auto impl = core_->impl.lock();
        return impl && fp_contains(*impl, *core_->forced, t);
    }
    void enumerate(const SideQuery& q,
                   const std::function<bool(const Tile&)>& emit) const override {
        if (auto impl = core_->impl.lock()) fp_enumerate(*impl, *core_->forced, q, emit);
    }

private:
    std::shared_ptr<Core> core_;
};

} // namespace

// --- interpreter and quine ---

TuringMachine fixed_point_interpreter() {
    TuringMachine tm;
    tm.state_names = {"start", "scan", "acc"};
    tm.initial_state = 0;
    tm.accepting_state = 2;
    tm.symbol_names = {"0", "1", "_"};
    tm.blank_symbol = 2;
    tm.readonly_layer = true;
    for (int s = 0; s < 2; s++) {
        tm.transition[{0, s}] = {1, s, Move::R};
        tm.transition[{1, s}] = {1, s, Move::R};
    }
    tm.transition[{1, 2}] = {2, 2, Move::S};
    return tm;
}

SelfProgram quine_build(const ProgramTemplate& tmpl) {
    int hole0 = -1, width = 0;
    const int L = static_cast<int>(tmpl.bits.size());
    if (L == 0) throw argument_error("empty program template");
    for (int i = 0; i < L; i++) {
        int b = tmpl.bits[static_cast<std::size_t>(i)];
        if (b != 0 && b != 1 && b != -1) throw argument_error("template bits must be 0, 1, or -1");
        if (b == -1) {
            if (hole0 < 0) {
                hole0 = i;
            } else if (i != hole0 + width) {
                throw argument_error("program template has more than one self-hole");
            }
            width++;
        }
    }
    SelfProgram out;
    out.bits.bits.resize(static_cast<std::size_t>(L));
    for (int i = 0; i < L; i++) {
        int b = tmpl.bits[static_cast<std::size_t>(i)];
        out.bits.bits[static_cast<std::size_t>(i)] = b == 1 ? 1 : 0;
    }
    out.hole_offset = hole0 < 0 ? 0 : hole0;
    out.hole_width = width;
    if (width > 0) {
        auto len = to_bits(L);
        if (static_cast<int>(len.size()) > width) {
            throw argument_error("self-hole too narrow for the program's own length");
        }
        out.self_length_prefix.assign(static_cast<std::size_t>(width), 0);
        std::copy(len.begin(), len.end(),
                  out.self_length_prefix.end() - static_cast<long>(len.size()));
        std::copy(out.self_length_prefix.begin(), out.self_length_prefix.end(),
                  out.bits.bits.begin() + hole0);
        // self-read check: the filled program must state its own length
        long back = 0;
        for (int i = 0; i < width; i++) back = (back << 1) | out.bits.bits[static_cast<std::size_t>(hole0 + i)];
        if (back != L) throw invariant_error("quine fill does not read back its own length");
    }
    return out;
}

// --- window catalog and slots ---

WindowPatternCatalog enumerate_window_patterns(const Implementation& impl) {
    const LayoutPlan& plan = impl.plan();
    const int N = plan.N;
    std::set<std::pair<int, int>> special;
    Rect z = plan.zone_rect();
    for (int y = z.y0 - 1; y <= z.y1 + 1; y++)
        for (int x = z.x0 - 1; x <= z.x1 + 1; x++) special.insert({x, y});
    for (const auto& path : plan.wires)
        for (const Cell& c : path) special.insert({c.x, c.y});

    WindowPatternCatalog cat;
    using Cands = std::array<std::vector<Tile>, 4>; // cells 00,10,01,11 as payload tiles
    std::map<Cands, int> classes;
    std::vector<int> per_class;
    for (int y = 0; y + 1 < N; y++) {
        for (int x = 0; x + 1 < N; x++) {
            bool touch = false;
            for (int d = 0; d < 4 && !touch; d++) touch = special.count({x + d % 2, y + d / 2}) > 0;
            if (!touch) continue;
            Cands key;
            std::array<std::vector<Tile>, 4> raw;
            for (int d = 0; d < 4; d++) {
                raw[static_cast<std::size_t>(d)] = impl.tiles_at(x + d % 2, y + d / 2);
                for (const Tile& t : raw[static_cast<std::size_t>(d)]) {
                    key[static_cast<std::size_t>(d)].push_back(project_payloads(impl, t));
                }
                std::sort(key[static_cast<std::size_t>(d)].begin(), key[static_cast<std::size_t>(d)].end());
            }
            if (classes.count(key)) continue;
            int cid = static_cast<int>(classes.size());
            classes.emplace(std::move(key), cid);

            // exhaustive fillings, pruned left-to-right / bottom-to-top
            std::set<std::array<Tile, 4>> patterns;
            std::map<std::array<ColorId, 8>, std::array<Tile, 4>> by_border;
            for (const Tile& t00 : raw[0]) {
                for (const Tile& t10 : raw[1]) {
                    if (t10.left != t00.right) continue;
                    for (const Tile& t01 : raw[2]) {
                        if (t01.bottom != t00.top) continue;
                        for (const Tile& t11 : raw[3]) {
                            if (t11.left != t01.right || t11.bottom != t10.top) continue;
                            std::array<Tile, 4> pat{
                                project_payloads(impl, t00), project_payloads(impl, t10),
                                project_payloads(impl, t01), project_payloads(impl, t11)};
                            std::array<ColorId, 8> border{pat[0].left,   pat[2].left,
                                                          pat[0].bottom, pat[1].bottom,
                                                          pat[1].right,  pat[3].right,
                                                          pat[2].top,    pat[3].top};
                            auto [it, fresh] = by_border.emplace(border, pat);
                            if (!fresh && it->second != pat) {
                                throw invariant_error(
                                    "window patterns are not border-deterministic at (" +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
                            }
                            patterns.insert(pat);
                        }
                    }
                }
            }
            per_class.push_back(static_cast<int>(patterns.size()));
            for (const auto& pat : patterns) {
                cat.entries.push_back({cid, Cell{x, y}, pat});
            }
        }
    }
    cat.class_count = static_cast<int>(classes.size());
    cat.c = per_class.empty() ? 0 : *std::max_element(per_class.begin(), per_class.end());
    return cat;
}

SlotPlacement place_slots(const LayoutPlan& plan, const WindowPatternCatalog& catalog) {
    SlotPlacement out;
    if (catalog.entries.empty()) return out;
    const Rect& r = plan.slot_region;
    if (r.empty()) throw argument_error("does not fit: plan reserves no slot region");
    int gw = r.width() / 4, gh = r.height() / 4;
    int want = static_cast<int>(catalog.entries.size());
    if (gw <= 0 || gw * gh < want) {
        throw argument_error("does not fit: slot region holds " + std::to_string(std::max(0, gw * gh)) +
                             " slots, catalog needs " + std::to_string(want));
    }
    for (int i = 0; i < want; i++) {
        out.slots.push_back({Cell{r.x0 + 4 * (i % gw), r.y0 + 4 * (i / gw)}, i});
    }
    return out;
}

TileSet slotted_tileset(const Implementation& impl, const WindowPatternCatalog& catalog,
                        const SlotPlacement& slots) {
    auto forced = std::make_shared<const ForcedMap>(slot_forced(impl, catalog, slots));
    const TileSet& tau = impl.tau();
    return TileSet(tau.horizontal_alphabet_size(), tau.vertical_alphabet_size(),
                   std::make_shared<SlottedOracle>(impl, forced), tau.declared_size_bound());
}

Patch slotted_macro_tile(const Implementation& impl, const WindowPatternCatalog& catalog,
                         const SlotPlacement& slots, const Tile& rho_tile, bool lazy) {
    auto forced = std::make_shared<const ForcedMap>(slot_forced(impl, catalog, slots));
    Patch base = macro_tile_of(impl, rho_tile, true);
    auto cell = [base, forced](int x, int y) -> Tile {
        auto it = forced->find({x, y});
        return it != forced->end() ? it->second : base.at(x, y);
    };
    const int N = impl.plan().N;
    if (lazy) return Patch::lazy(N, N, false, cell);
    std::vector<Tile> cells;
    cells.reserve(static_cast<std::size_t>(N) * N);
    for (int y = 0; y < N; y++)
        for (int x = 0; x < N; x++) cells.push_back(cell(x, y));
    return Patch::dense(N, N, false, std::move(cells));
}

// --- the self-referential set ---

namespace {

ProgramTemplate fp_template(int N) {
    ProgramTemplate t;
    t.bits.push_back(1); // start marker
    for (int i = 0; i < 12; i++) t.bits.push_back(-1);
    for (int i = 15; i >= 0; i--) t.bits.push_back((N >> i) & 1);
    return t;
}

struct FpSizing {
    ColorId pv = 0, ph = 0;
    int k = 0, m = 0;
    SelfProgram self;
};

FpSizing fp_sizing(const TuringMachine& interpreter, int N) {
    if (N < 8 || N > 65535) throw argument_error("zone too small: N out of range");
    FpSizing s;
    ZoneTiles probe = compile_tm_zone(interpreter, 4); // alphabets do not depend on m
    s.pv = kZoneBase + probe.tiles.horizontal_alphabet_size();
    s.ph = kZoneBase + probe.tiles.vertical_alphabet_size();
    ColorId top = static_cast<ColorId>(N) * N * std::max(s.pv, s.ph);
    while ((ColorId{1} << s.k) < top) s.k++;
    s.self = quine_build(fp_template(N));
    s.m = std::max(4 * s.k + 1, static_cast<int>(s.self.bits.bits.size()));
    return s;
}

} // namespace

std::vector<Tile> FixedPointSet::tiles_at(int x, int y) const {
    return forced_tiles_at(*impl_, *forced_, x, y);
}

Patch FixedPointSet::macro_tile(const Tile& t, bool lazy) const {
    if (!with_slots_) return macro_tile_of(*impl_, t, lazy);
    return slotted_macro_tile(*impl_, catalog_, slots_, t, lazy);
}

FixedPointSet fixed_point_tileset(const TuringMachine& interpreter, int N, bool with_slots) {
    interpreter.check();
    if (!interpreter.readonly_layer) {
        throw argument_error("the interpreter needs the readonly program layer");
    }
    FpSizing sz = fp_sizing(interpreter, N);
    LayoutPlan plan;
    try {
        plan = plan_layout(N, sz.k, sz.m, 0);
    } catch (const argument_error& e) {
        throw argument_error("zone too small at this N: " + std::string(e.what()));
    }

    FixedPointSet fps;
    fps.with_slots_ = with_slots;
    fps.self_ = sz.self;
    if (with_slots) {
        // probe build (trivial rho) just to read the window classes off
        Implementation probe(TileSet(1, 1, std::vector<Tile>{Tile{0, 0, 0, 0}}), interpreter,
                             sz.self.bits, plan);
        fps.catalog_ = enumerate_window_patterns(probe);
        plan = plan_layout(N, sz.k, sz.m, static_cast<int>(fps.catalog_.entries.size()));
        fps.slots_ = place_slots(plan, fps.catalog_);
    }

    ColorId H = static_cast<ColorId>(N) * N * sz.pv;
    ColorId V = static_cast<ColorId>(N) * N * sz.ph;
    auto core = std::make_shared<RhoForward::Core>();
    TileSet rho(H, V, std::make_shared<RhoForward>(core), static_cast<std::int64_t>(N) * N * 4);
    auto impl = std::make_shared<const Implementation>(
        compile_implementation(std::move(rho), interpreter, sz.self.bits, plan));
    auto forced = std::make_shared<const ForcedMap>(
        with_slots ? slot_forced(*impl, fps.catalog_, fps.slots_) : ForcedMap{});
    core->impl = impl;
    core->forced = forced;

    fps.impl_ = impl;
    fps.forced_ = forced;
    fps.tau_ = with_slots ? TileSet(H, V, std::make_shared<SlottedOracle>(*impl, forced),
                                    impl->tau().declared_size_bound())
                          : impl->tau();
    fps.report_ = FixedPointReport{N, sz.k, sz.m, static_cast<int>(sz.self.bits.bits.size()),
                                   impl->tau().declared_size_bound()};
    return fps;
}

int smallest_fixed_point_zoom(const TuringMachine& interpreter) {
    interpreter.check();
    for (int N = 8; N <= 4096; N++) {
        try {
            FpSizing sz = fp_sizing(interpreter, N);
            plan_layout(N, sz.k, sz.m, 0);
            return N;
        } catch (const argument_error&) {
            continue;
        }
    }
    throw argument_error("no feasible zoom up to 4096");
}

// --- variable zoom ---

int ZoomSchedule::prefix_length(int r) const {
    if (r < 1) throw argument_error("rank must be >= 1");
    int L = 0;
    while ((1 << L) < r) L++;
    return L;
}

int ZoomSchedule::zone(int r) const { return std::max(4 * prefix_length(r), 2); }

void ZoomSchedule::check() const {
    if (C < 8) throw argument_error("zoom schedule: C must be at least 8");
    if (ranks < 1) throw argument_error("zoom schedule: need at least one rank");
    for (int r = 1; r <= ranks; r++) {
        if (3 * zone(r) > zoom(r)) {
            throw argument_error("zoom schedule: zone exceeds a third of the zoom at rank " +
                                 std::to_string(r));
        }
    }
}

PrefixChecker pi01_prefix_checker(std::vector<std::string> forbidden,
                                  std::function<int(int)> budget_per_rank) {
    for (const auto& p : forbidden) {
        if (p.empty() || p.find_first_not_of("01") != std::string::npos) {
            throw argument_error("forbidden patterns must be nonempty binary strings");
        }
    }
    PrefixChecker pc;
    pc.name = "pi01";
    pc.accepts = [forbidden = std::move(forbidden),
                  budget = std::move(budget_per_rank)](const std::string& prefix, int rank) {
        if (prefix.find_first_not_of("01") != std::string::npos) {
            throw argument_error("prefix must be binary");
        }
        int n = std::clamp(budget(rank), 0, static_cast<int>(forbidden.size()));
        for (int i = 0; i < n; i++) {
            if (prefix.find(forbidden[static_cast<std::size_t>(i)]) != std::string::npos) return false;
        }
        return true;
    };
    return pc;
}

PrefixChecker separator_prefix_checker(std::vector<int> enum_a, std::vector<int> enum_b,
                                       std::function<int(int)> budget_per_rank) {
    for (int a : enum_a) {
        if (a < 0) throw argument_error("enumerations must list nonnegative indices");
        if (std::find(enum_b.begin(), enum_b.end(), a) != enum_b.end()) {
            throw argument_error("enumerations collide on index " + std::to_string(a));
        }
    }
    for (int b : enum_b) {
        if (b < 0) throw argument_error("enumerations must list nonnegative indices");
    }
    PrefixChecker pc;
    pc.name = "separator";
    pc.accepts = [a = std::move(enum_a), b = std::move(enum_b),
                  budget = std::move(budget_per_rank)](const std::string& prefix, int rank) {
        if (prefix.find_first_not_of("01") != std::string::npos) {
            throw argument_error("prefix must be binary");
        }
        int na = std::clamp(budget(rank), 0, static_cast<int>(a.size()));
        int nb = std::clamp(budget(rank), 0, static_cast<int>(b.size()));
        for (int i = 0; i < na; i++) {
            auto idx = static_cast<std::size_t>(a[static_cast<std::size_t>(i)]);
            if (idx < prefix.size() && prefix[idx] != '1') return false;
        }
        for (int i = 0; i < nb; i++) {
            auto idx = static_cast<std::size_t>(b[static_cast<std::size_t>(i)]);
            if (idx < prefix.size() && prefix[idx] != '0') return false;
        }
        return true;
    };
    return pc;
}

namespace {

std::string prefix_of(ColorId v, int L) {
    std::string s(static_cast<std::size_t>(L), '0');
    for (int i = 0; i < L; i++) {
        if ((v >> (L - 1 - i)) & 1) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

} // namespace

Tile VarZoomFamily::prefix_tile(int r, const std::string& prefix) const {
    int L = schedule.prefix_length(r);
    if (static_cast<int>(prefix.size()) != L || prefix.find_first_not_of("01") != std::string::npos) {
        throw argument_error("prefix must be binary of the rank's declared length");
    }
    ColorId v = 0;
    for (char c : prefix) v = (v << 1) | (c == '1');
    return Tile{v, v, v, v};
}

std::string VarZoomFamily::decode_prefix(int r, const Tile& rho_tile) const {
    int L = schedule.prefix_length(r);
    ColorId v = rho_tile.left;
    if (rho_tile.bottom != v || rho_tile.right != v || rho_tile.top != v) {
        throw argument_error("prefix tiles are monochrome");
    }
    if (v < 0 || v >= (ColorId{1} << L)) throw argument_error("prefix color out of range");
    return prefix_of(v, L);
}

std::string VarZoomFamily::canonical_prefix(int r) const {
    if (r < 1 || r > schedule.ranks) throw argument_error("rank out of range");
    int L = schedule.prefix_length(r);
    for (ColorId v = 0; v < (ColorId{1} << L); v++) {
        std::string s = prefix_of(v, L);
        bool ok = true;
        for (int rr = 1; rr <= r && ok; rr++) {
            ok = checker.accepts(s.substr(0, static_cast<std::size_t>(schedule.prefix_length(rr))), rr);
        }
        if (ok) return s;
    }
    throw argument_error("no admissible prefix chain at rank " + std::to_string(r));
}

int VarZoomFamily::decode_rank(int r, const Patch& macro) const {
    if (r < 1 || r > schedule.ranks) throw argument_error("rank out of range");
    const Implementation& impl = ranks[static_cast<std::size_t>(r - 1)];
    const Cell zo = impl.plan().zone_origin;
    int nbits = static_cast<int>(to_bits(r).size());
    int val = 0;
    for (int j = 0; j < nbits; j++) {
        ColorId payload = impl.decode_h(macro.at(zo.x + j, zo.y).bottom).payload;
        if (payload < kZoneBase) throw argument_error("zone input cell carries no zone color");
        val = (val << 1) | impl.zone().decode_h(payload - kZoneBase).pbit;
    }
    return val;
}

VarZoomFamily variable_zoom_tileset(const TuringMachine& interpreter, const ZoomSchedule& schedule,
                                    const PrefixChecker& checker, bool with_slots) {
    // The rank machines are generated table checkers standing in for programs
    // run by the interpreter; at these zooms the zones cannot host it.
    (void)interpreter;
    schedule.check();
    VarZoomFamily fam;
    fam.schedule = schedule;
    fam.checker = checker;
    for (int r = 1; r <= schedule.ranks; r++) {
        int L = schedule.prefix_length(r);
        std::vector<Tile> all, acc;
        for (ColorId v = 0; v < (ColorId{1} << L); v++) {
            Tile t{v, v, v, v};
            all.push_back(t);
            if (checker.accepts(prefix_of(v, L), r)) acc.push_back(t);
        }
        ColorId alpha = ColorId{1} << L;
        auto [machine, prog0] = table_checker(TileSet(alpha, alpha, acc), L);
        (void)prog0;
        machine.readonly_layer = true;
        Program rank_bits;
        rank_bits.bits = to_bits(r);
        LayoutPlan plan = plan_layout(schedule.zoom(r), L, schedule.zone(r), 0);
        if (with_slots) {
            Implementation probe(TileSet(alpha, alpha, all), machine, rank_bits, plan);
            WindowPatternCatalog cat = enumerate_window_patterns(probe);
            plan = plan_layout(schedule.zoom(r), L, schedule.zone(r),
                               static_cast<int>(cat.entries.size()));
            fam.slot_placements.push_back(place_slots(plan, cat));
            fam.catalogs.push_back(std::move(cat));
        }
        fam.ranks.push_back(
            compile_implementation(TileSet(alpha, alpha, all), machine, rank_bits, plan));
    }
    return fam;
}

} // namespace wang
