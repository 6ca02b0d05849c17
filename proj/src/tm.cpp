#include "wang/tm.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>

namespace wang {

void TuringMachine::check() const {
    if (state_names.empty() || symbol_names.empty()) {
        throw argument_error("machine needs at least one state and one symbol");
    }
    auto state_ok = [&](int q) { return q >= 0 && q < state_count(); };
    auto sym_ok = [&](int s) { return s >= 0 && s < symbol_count(); };
    if (!state_ok(initial_state) || !state_ok(accepting_state) || !sym_ok(blank_symbol)) {
        throw argument_error("machine initial/accepting/blank out of range");
    }
    for (const auto& [key, act] : transition) {
        if (!state_ok(key.first) || !sym_ok(key.second) || !state_ok(act.state) ||
            !sym_ok(act.symbol)) {
            throw argument_error("transition references unknown state or symbol");
        }
        if (key.first == accepting_state) {
            throw argument_error("accepting state must have no outgoing transitions");
        }
    }
}

Trace run_tm(const TuringMachine& tm, const std::vector<int>& input, const Program& program,
             int max_steps) {
    tm.check();
    Trace trace;
    std::vector<int> tape = input;
    if (tape.empty()) tape.push_back(tm.blank_symbol);
    int state = tm.initial_state;
    int head = 0;
    trace.max_cell = 0;

    auto snapshot = [&]() { trace.configs.push_back(Config{state, head, tape}); };
    auto pbit = [&](int x) -> int {
        if (!tm.readonly_layer) return 0;
        return x < static_cast<int>(program.bits.size()) ? program.bits[static_cast<std::size_t>(x)]
                                                         : 0;
    };
    (void)pbit;

    for (int step = 0; step <= max_steps; step++) {
        snapshot();
        if (state == tm.accepting_state) {
            trace.verdict = Verdict::accepted;
            trace.accept_step = step;
            // Uniform tape widths across configs.
            std::size_t width = tape.size();
            for (auto& c : trace.configs) c.tape.resize(width, tm.blank_symbol);
            return trace;
        }
        if (step == max_steps) break;
        auto it = tm.transition.find({state, tape[static_cast<std::size_t>(head)]});
        if (it == tm.transition.end()) {
            trace.verdict = Verdict::rejected;
            std::size_t width = tape.size();
            for (auto& c : trace.configs) c.tape.resize(width, tm.blank_symbol);
            return trace;
        }
        tape[static_cast<std::size_t>(head)] = it->second.symbol;
        state = it->second.state;
        if (it->second.move == Move::L) head--;
        if (it->second.move == Move::R) head++;
        if (head < 0) {
            trace.verdict = Verdict::rejected; // fell off the left end
            std::size_t width = tape.size();
            for (auto& c : trace.configs) c.tape.resize(width, tm.blank_symbol);
            return trace;
        }
        if (head >= static_cast<int>(tape.size())) tape.push_back(tm.blank_symbol);
        trace.max_cell = std::max(trace.max_cell, head);
    }
    trace.verdict = Verdict::running;
    std::size_t width = tape.size();
    for (auto& c : trace.configs) c.tape.resize(width, tm.blank_symbol);
    return trace;
}

// --- zone tiles ---

namespace {

// Vertical colors: 0 = no crossing (also the wall convention on the zone
// boundary), then 1 + 2q + dir with dir 0 = head moving right, 1 = moving left.
constexpr ColorId kNoCrossing = 0;

ColorId crossing(int q, bool moving_left) { return 1 + 2 * static_cast<ColorId>(q) + (moving_left ? 1 : 0); }

struct ZoneRules {
    const TuringMachine& tm;
    int head_kinds() const { return tm.state_count() + 2; } // none, states, done
    int head_index(HeadField h) const {
        switch (h.kind) {
            case HeadField::none: return 0;
            case HeadField::state: return 1 + h.q;
            case HeadField::done: return 1 + tm.state_count();
        }
        return 0;
    }
};

} // namespace

ColorId ZoneTiles::h_color(int symbol, int pbit, HeadField head) const {
    ZoneRules r{tm};
    ColorId idx = r.head_index(head);
    return (idx * 2 + pbit) * tm.symbol_count() + symbol;
}

ZoneTiles::HDecode ZoneTiles::decode_h(ColorId c) const {
    HDecode d;
    d.symbol = static_cast<int>(c % tm.symbol_count());
    c /= tm.symbol_count();
    d.pbit = static_cast<int>(c % 2);
    c /= 2;
    int idx = static_cast<int>(c);
    if (idx == 0) d.head = HeadField{HeadField::none, 0};
    else if (idx <= tm.state_count()) d.head = HeadField{HeadField::state, idx - 1};
    else d.head = HeadField{HeadField::done, 0};
    return d;
}

ColorId ZoneTiles::wall_color() const { return kNoCrossing; }
ColorId ZoneTiles::crossing_none() const { return kNoCrossing; }

ZoneTiles compile_tm_zone(const TuringMachine& tm, int m) {
    tm.check();
    if (m < 2) throw argument_error("computation zone too small (m must be >= 2)");

    const int S = tm.state_count();
    const int nsym = tm.symbol_count();
    const std::int64_t h_alphabet = static_cast<std::int64_t>(S + 2) * 2 * nsym;
    const std::int64_t v_alphabet = 1 + 2 * static_cast<std::int64_t>(S);

    ZoneTiles zt{tm, m, TileSet(1, 1, {Tile{0, 0, 0, 0}})};
    std::vector<Tile> tiles;
    auto add = [&](ColorId cl, int s, int p, HeadField hb, ColorId cr, int s2, HeadField ht) {
        tiles.push_back(Tile{cl, zt.h_color(s, p, hb), cr, zt.h_color(s2, p, ht)});
    };

    const std::vector<int> pbits = tm.readonly_layer ? std::vector<int>{0, 1} : std::vector<int>{0};
    for (int s = 0; s < nsym; s++) {
        for (int p : pbits) {
            // No head below: copy, or receive the head from one side.
            add(kNoCrossing, s, p, HeadField{}, kNoCrossing, s, HeadField{});
            for (int q = 0; q < S; q++) {
                add(crossing(q, false), s, p, HeadField{}, kNoCrossing, s,
                    HeadField{HeadField::state, q});
                add(kNoCrossing, s, p, HeadField{}, crossing(q, true), s,
                    HeadField{HeadField::state, q});
            }
            // Finished computation: the DONE marker rides its column upward.
            add(kNoCrossing, s, p, HeadField{HeadField::done, 0}, kNoCrossing, s,
                HeadField{HeadField::done, 0});
            // Head below.
            for (int q = 0; q < S; q++) {
                if (q == tm.accepting_state) {
                    add(kNoCrossing, s, p, HeadField{HeadField::state, q}, kNoCrossing, s,
                        HeadField{HeadField::done, 0});
                    continue;
                }
                auto it = tm.transition.find({q, s});
                if (it == tm.transition.end()) continue; // stuck: no tile
                const auto& act = it->second;
                switch (act.move) {
                    case Move::S:
                        add(kNoCrossing, s, p, HeadField{HeadField::state, q}, kNoCrossing,
                            act.symbol, HeadField{HeadField::state, act.state});
                        break;
                    case Move::R:
                        add(kNoCrossing, s, p, HeadField{HeadField::state, q},
                            crossing(act.state, false), act.symbol, HeadField{});
                        break;
                    case Move::L:
                        add(crossing(act.state, true), s, p, HeadField{HeadField::state, q},
                            kNoCrossing, act.symbol, HeadField{});
                        break;
                }
            }
        }
    }
    zt.tiles = TileSet(v_alphabet, h_alphabet, std::move(tiles));
    return zt;
}

BoundaryConstraint ZoneTiles::bottom_boundary(const std::vector<int>& input,
                                              const Program& program) const {
    if (static_cast<int>(input.size()) > m) throw argument_error("input longer than zone width");
    std::vector<ColorId> colors;
    for (int x = 0; x < m; x++) {
        int s = x < static_cast<int>(input.size()) ? input[static_cast<std::size_t>(x)]
                                                   : tm.blank_symbol;
        int p = (tm.readonly_layer && x < static_cast<int>(program.bits.size()))
                    ? program.bits[static_cast<std::size_t>(x)]
                    : 0;
        HeadField head = x == 0 ? HeadField{HeadField::state, tm.initial_state} : HeadField{};
        colors.push_back(h_color(s, p, head));
    }
    return BoundaryConstraint::exact(Side::bottom, colors);
}

BoundaryConstraint ZoneTiles::top_boundary() const {
    std::vector<std::vector<ColorId>> allowed(static_cast<std::size_t>(m));
    const std::vector<int> pbits = tm.readonly_layer ? std::vector<int>{0, 1} : std::vector<int>{0};
    for (auto& set : allowed) {
        for (int s = 0; s < tm.symbol_count(); s++) {
            for (int p : pbits) {
                set.push_back(h_color(s, p, HeadField{}));
                set.push_back(h_color(s, p, HeadField{HeadField::done, 0}));
                // Acceptance exactly at time m shows up as a live accepting head.
                set.push_back(h_color(s, p, HeadField{HeadField::state, tm.accepting_state}));
            }
        }
    }
    return BoundaryConstraint::any_of(Side::top, std::move(allowed));
}

BoundaryConstraint ZoneTiles::side_wall(Side s) const {
    return BoundaryConstraint::exact(s, std::vector<ColorId>(static_cast<std::size_t>(m), wall_color()));
}

std::vector<BoundaryConstraint> ZoneTiles::zone_boundaries(const std::vector<int>& input,
                                                           const Program& program) const {
    return {bottom_boundary(input, program), top_boundary(), side_wall(Side::left),
            side_wall(Side::right)};
}

Patch trace_to_zone_tiling(const ZoneTiles& zt, const Trace& trace, const Program& program) {
    if (trace.verdict != Verdict::accepted) throw argument_error("trace is not accepting");
    if (trace.accept_step > zt.m || trace.max_cell >= zt.m) {
        throw argument_error("accepting trace does not fit the zone");
    }
    const int m = zt.m;
    const TuringMachine& tm = zt.tm;
    auto pbit = [&](int x) -> int {
        if (!tm.readonly_layer) return 0;
        return x < static_cast<int>(program.bits.size()) ? program.bits[static_cast<std::size_t>(x)]
                                                         : 0;
    };

    std::vector<Tile> cells(static_cast<std::size_t>(m) * m);
    Config cfg = trace.configs.front();
    cfg.tape.resize(static_cast<std::size_t>(m), tm.blank_symbol);
    // Even an immediately-accepting run starts with a live head on row 0; the
    // accepting-head tile turns it into the DONE marker one row up.
    bool done = false;
    for (int r = 0; r < m; r++) {
        // Edge colors between columns; edges[x] is the left side of column x.
        std::vector<ColorId> edges(static_cast<std::size_t>(m) + 1, kNoCrossing);
        Config next = cfg;
        bool next_done = done;
        HeadField hb_at_head = done ? HeadField{HeadField::done, 0}
                                    : HeadField{HeadField::state, cfg.state};
        if (!done) {
            if (cfg.state == tm.accepting_state) {
                next_done = true;
            } else {
                auto it = tm.transition.find({cfg.state, cfg.tape[static_cast<std::size_t>(cfg.head)]});
                if (it == tm.transition.end()) throw invariant_error("trace stuck before acceptance");
                next.tape[static_cast<std::size_t>(cfg.head)] = it->second.symbol;
                next.state = it->second.state;
                if (it->second.move == Move::R) {
                    edges[static_cast<std::size_t>(cfg.head) + 1] = crossing(it->second.state, false);
                    next.head = cfg.head + 1;
                } else if (it->second.move == Move::L) {
                    if (cfg.head == 0) throw invariant_error("trace fell off the left end");
                    edges[static_cast<std::size_t>(cfg.head)] = crossing(it->second.state, true);
                    next.head = cfg.head - 1;
                }
                if (next.head >= m) throw invariant_error("trace left the zone");
            }
        }
        for (int x = 0; x < m; x++) {
            int s = cfg.tape[static_cast<std::size_t>(x)];
            HeadField hb = (x == cfg.head) ? hb_at_head : HeadField{};
            int s2 = next.tape[static_cast<std::size_t>(x)];
            HeadField ht{};
            if (next_done && x == next.head) ht = HeadField{HeadField::done, 0};
            else if (!next_done && x == next.head) ht = HeadField{HeadField::state, next.state};
            if (!next_done && x == cfg.head && next.head != cfg.head) ht = HeadField{};
            cells[static_cast<std::size_t>(r) * m + x] =
                Tile{edges[static_cast<std::size_t>(x)], zt.h_color(s, pbit(x), hb),
                     edges[static_cast<std::size_t>(x) + 1], zt.h_color(s2, pbit(x), ht)};
        }
        cfg = next;
        done = next_done;
    }
    return Patch::dense(m, m, false, std::move(cells));
}

Trace zone_tiling_to_trace(const ZoneTiles& zt, const Patch& p) {
    if (p.wrap() || p.width() != zt.m || p.height() != zt.m) {
        throw argument_error("patch does not match the zone dimensions");
    }
    const int m = zt.m;
    Trace trace;
    auto decode_row = [&](int r, bool top_of_last) -> std::pair<Config, HeadField> {
        Config cfg;
        cfg.tape.resize(static_cast<std::size_t>(m), zt.tm.blank_symbol);
        HeadField seen{};
        int heads = 0;
        for (int x = 0; x < m; x++) {
            ColorId c = top_of_last ? p.at(x, m - 1).top : p.at(x, r).bottom;
            auto d = zt.decode_h(c);
            cfg.tape[static_cast<std::size_t>(x)] = d.symbol;
            if (d.head.kind != HeadField::none) {
                heads++;
                cfg.head = x;
                seen = d.head;
                if (d.head.kind == HeadField::state) cfg.state = d.head.q;
                else cfg.state = zt.tm.accepting_state;
            }
        }
        if (heads != 1) {
            throw invariant_error("row " + std::to_string(r) + " does not decode to a configuration");
        }
        return {cfg, seen};
    };

    for (int r = 0; r <= m; r++) {
        auto [cfg, head] = decode_row(std::min(r, m - 1), r == m);
        if (head.kind == HeadField::done) {
            // First DONE row: acceptance happened at the previous step.
            trace.verdict = Verdict::accepted;
            trace.accept_step = r - 1;
            if (trace.accept_step < 0) {
                throw invariant_error("row 0 does not decode to a configuration");
            }
            break;
        }
        if (r == m && head.kind == HeadField::state && cfg.state == zt.tm.accepting_state) {
            // Acceptance exactly at time m: the live accepting head is at the top.
            trace.configs.push_back(cfg);
            trace.max_cell = std::max(trace.max_cell, cfg.head);
            trace.verdict = Verdict::accepted;
            trace.accept_step = m;
            break;
        }
        if (r == m) break;
        trace.configs.push_back(cfg);
        trace.max_cell = std::max(trace.max_cell, cfg.head);
    }
    if (trace.verdict != Verdict::accepted) {
        throw invariant_error("zone patch never reaches the DONE marker");
    }
    return trace;
}

// --- 2x2-determinicity ---

namespace {

using Border = std::array<ColorId, 8>;
struct BorderHash {
    std::size_t operator()(const Border& b) const {
        std::size_t h = 1469598103934665603ull;
        for (ColorId c : b) {
            h ^= static_cast<std::size_t>(c);
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace

std::optional<DeterminicityCounterexample> check_2x2_determinicity(
    const std::array<std::vector<Tile>, 4>& candidates) {
    // Index cells 10 and 01/11 by the sides facing already-placed cells.
    std::unordered_map<ColorId, std::vector<Tile>> c10_by_left, c01_by_bottom;
    for (const Tile& t : candidates[1]) c10_by_left[t.left].push_back(t);
    for (const Tile& t : candidates[2]) c01_by_bottom[t.bottom].push_back(t);
    std::unordered_map<Tile, std::vector<Tile>, TileHash> c11_by_lb;
    std::unordered_map<Border, std::array<Tile, 4>, BorderHash> seen;

    for (const Tile& t11 : candidates[3]) {
        c11_by_lb[Tile{t11.left, t11.bottom, 0, 0}].push_back(t11);
    }
    for (const Tile& t00 : candidates[0]) {
        auto it10 = c10_by_left.find(t00.right);
        auto it01 = c01_by_bottom.find(t00.top);
        if (it10 == c10_by_left.end() || it01 == c01_by_bottom.end()) continue;
        for (const Tile& t10 : it10->second) {
            for (const Tile& t01 : it01->second) {
                auto it11 = c11_by_lb.find(Tile{t01.right, t10.top, 0, 0});
                if (it11 == c11_by_lb.end()) continue;
                for (const Tile& t11 : it11->second) {
                    Border b{t00.left, t01.left, t00.bottom, t10.bottom,
                             t10.right, t11.right, t01.top, t11.top};
                    std::array<Tile, 4> filling{t00, t10, t01, t11};
                    auto [pos, inserted] = seen.emplace(b, filling);
                    if (!inserted && pos->second != filling) {
                        return DeterminicityCounterexample{b, pos->second, filling};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<DeterminicityCounterexample> check_2x2_determinicity(const TileSet& ts) {
    const auto& tiles = ts.tiles();
    return check_2x2_determinicity(std::array<std::vector<Tile>, 4>{tiles, tiles, tiles, tiles});
}

// --- text format ---

std::string print_tm(const TuringMachine& tm) {
    std::ostringstream os;
    os << "tm v1\n";
    for (int q = 0; q < tm.state_count(); q++) {
        os << "state " << tm.state_names[static_cast<std::size_t>(q)];
        if (q == tm.initial_state) os << " initial";
        if (q == tm.accepting_state) os << " accepting";
        os << "\n";
    }
    for (int s = 0; s < tm.symbol_count(); s++) {
        os << "sym " << tm.symbol_names[static_cast<std::size_t>(s)];
        if (s == tm.blank_symbol) os << " blank";
        os << "\n";
    }
    if (tm.readonly_layer) os << "readonly\n";
    for (const auto& [key, act] : tm.transition) {
        os << "d " << tm.state_names[static_cast<std::size_t>(key.first)] << " "
           << tm.symbol_names[static_cast<std::size_t>(key.second)] << " -> "
           << tm.state_names[static_cast<std::size_t>(act.state)] << " "
           << tm.symbol_names[static_cast<std::size_t>(act.symbol)] << " "
           << (act.move == Move::L ? "L" : act.move == Move::R ? "R" : "S") << "\n";
    }
    return os.str();
}

TuringMachine parse_tm(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    TuringMachine tm;
    bool have_initial = false, have_accepting = false, have_blank = false, header = false;
    auto state_id = [&](const std::string& name) {
        auto it = std::find(tm.state_names.begin(), tm.state_names.end(), name);
        if (it == tm.state_names.end()) throw io_error("unknown state '" + name + "'");
        return static_cast<int>(it - tm.state_names.begin());
    };
    auto sym_id = [&](const std::string& name) {
        auto it = std::find(tm.symbol_names.begin(), tm.symbol_names.end(), name);
        if (it == tm.symbol_names.end()) throw io_error("unknown symbol '" + name + "'");
        return static_cast<int>(it - tm.symbol_names.begin());
    };
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (!header) {
            std::string version;
            ls >> version;
            if (tag != "tm" || version != "v1") throw io_error("bad machine header");
            header = true;
            continue;
        }
        if (tag == "state") {
            std::string name, flag;
            ls >> name;
            if (name.empty()) throw io_error("state line without a name");
            tm.state_names.push_back(name);
            while (ls >> flag) {
                if (flag == "initial") {
                    tm.initial_state = tm.state_count() - 1;
                    have_initial = true;
                } else if (flag == "accepting") {
                    tm.accepting_state = tm.state_count() - 1;
                    have_accepting = true;
                } else {
                    throw io_error("unknown state flag '" + flag + "'");
                }
            }
        } else if (tag == "sym") {
            std::string name, flag;
            ls >> name;
            if (name.empty()) throw io_error("sym line without a name");
            tm.symbol_names.push_back(name);
            if (ls >> flag) {
                if (flag != "blank") throw io_error("unknown symbol flag '" + flag + "'");
                tm.blank_symbol = tm.symbol_count() - 1;
                have_blank = true;
            }
        } else if (tag == "readonly") {
            tm.readonly_layer = true;
        } else if (tag == "d") {
            std::string q, s, arrow, q2, s2, mv;
            ls >> q >> s >> arrow >> q2 >> s2 >> mv;
            if (arrow != "->" || mv.empty()) throw io_error("bad transition line: '" + line + "'");
            Move move;
            if (mv == "L") move = Move::L;
            else if (mv == "R") move = Move::R;
            else if (mv == "S") move = Move::S;
            else throw io_error("bad move '" + mv + "'");
            auto key = std::make_pair(state_id(q), sym_id(s));
            if (tm.transition.count(key)) throw io_error("duplicate transition for " + q + "," + s);
            tm.transition[key] = TuringMachine::Action{state_id(q2), sym_id(s2), move};
        } else {
            throw io_error("unknown machine line: '" + line + "'");
        }
    }
    if (!header || !have_initial || !have_accepting || !have_blank) {
        throw io_error("machine file missing header, initial, accepting, or blank");
    }
    try {
        tm.check();
    } catch (const argument_error& e) {
        throw io_error(std::string("invalid machine: ") + e.what());
    }
    return tm;
}

// --- stock machines ---

TuringMachine tm_immediate_accept() {
    TuringMachine tm;
    tm.state_names = {"acc"};
    tm.initial_state = 0;
    tm.accepting_state = 0;
    tm.symbol_names = {"0", "1", "_"};
    tm.blank_symbol = 2;
    return tm;
}

TuringMachine tm_parity() {
    TuringMachine tm;
    tm.state_names = {"even", "odd", "acc"};
    tm.initial_state = 0;
    tm.accepting_state = 2;
    tm.symbol_names = {"0", "1", "_"};
    tm.blank_symbol = 2;
    tm.transition[{0, 0}] = {0, 0, Move::R};
    tm.transition[{0, 1}] = {1, 1, Move::R};
    tm.transition[{1, 0}] = {1, 0, Move::R};
    tm.transition[{1, 1}] = {0, 1, Move::R};
    tm.transition[{0, 2}] = {2, 2, Move::S};
    return tm;
}

TuringMachine tm_unary_successor() {
    TuringMachine tm;
    tm.state_names = {"go", "acc"};
    tm.initial_state = 0;
    tm.accepting_state = 1;
    tm.symbol_names = {"0", "1", "_"};
    tm.blank_symbol = 2;
    tm.transition[{0, 1}] = {0, 1, Move::R};
    tm.transition[{0, 2}] = {1, 1, Move::S};
    return tm;
}

} // namespace wang
