// End-to-end acceptance checks, one line of output per property. Exits
// nonzero if any property fails. These run the whole pipeline at realistic
// sizes, unlike the per-module unit tests.

#include "oracle.hpp"
#include "wang/render.hpp"
#include "wang/verify.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <set>

using namespace wang;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : ": ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) failures++;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> bits(const std::string& s) {
    std::vector<int> v;
    for (char c : s) v.push_back(c - '0');
    return v;
}

std::vector<std::string> binary_strings_up_to(int len) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < out.size(); i++) {
        if (static_cast<int>(out[i].size()) < len) {
            out.push_back(out[i] + "0");
            out.push_back(out[i] + "1");
        }
    }
    return out;
}

// Four tiles with right = 1 - left and top = 1 - bottom: colors alternate in
// both directions, one bit per color.
TileSet checker4() {
    std::vector<Tile> ts;
    for (ColorId l = 0; l < 2; l++)
        for (ColorId b = 0; b < 2; b++) ts.push_back(Tile{l, b, 1 - l, 1 - b});
    return TileSet(2, 2, ts);
}

Implementation checker4_impl() {
    TileSet rho = checker4();
    int k = color_bits(rho);
    LayoutPlan plan = plan_layout(16, k, std::max(4 * k, 2), 0);
    auto [tm, prog] = table_checker(rho, k);
    return compile_implementation(rho, tm, prog, plan);
}

// --- solver counts match exhaustive brute force ---
void property_solver_vs_brute_force() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    int sets = 0, windows = 0;
    for (; sets < 200; sets++) {
        ColorId H = 1 + static_cast<ColorId>(rng() % 3), V = 1 + static_cast<ColorId>(rng() % 3);
        int max_tiles = std::min<int>(5, static_cast<int>(H * H * V * V));
        int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_tiles));
        std::set<Tile> uniq;
        while (static_cast<int>(uniq.size()) < n) {
            uniq.insert(Tile{static_cast<ColorId>(rng() % static_cast<std::uint64_t>(H)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(V)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(H)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(V))});
        }
        TileSet ts(H, V, std::vector<Tile>(uniq.begin(), uniq.end()));
        for (int w = 1; w <= 3; w++) {
            for (int h = 1; h <= 3; h++) {
                windows++;
                std::size_t got = enumerate_rectangle(ts, w, h).size();
                std::size_t want = testing::brute_force_count(ts.tiles(), w, h, false);
                if (got != want) {
                    report("solver enumeration matches brute force", false,
                           "set " + std::to_string(sets) + " window " + std::to_string(w) + "x" +
                               std::to_string(h) + ": " + std::to_string(got) + " vs " +
                               std::to_string(want));
                    return;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    report("solver enumeration matches brute force", dt < 60.0,
           std::to_string(sets) + " tile sets, " + std::to_string(windows) + " windows, " +
               std::to_string(dt) + "s");
}

// --- zone SAT iff the machine accepts in bounds; witnesses decode
// to the exact trace; every compiled zone is 2x2-deterministic ---
void property_zone_equivalence_and_determinicity() {
    auto t0 = std::chrono::steady_clock::now();
    bool det_ok = true;
    int solved = 0, sat = 0;
    for (const TuringMachine& tm : {tm_immediate_accept(), tm_parity(), tm_unary_successor()}) {
        for (int m = 2; m <= 8; m++) {
            ZoneTiles zt = compile_tm_zone(tm, m);
            if (check_2x2_determinicity(zt.tiles)) det_ok = false;
            for (const std::string& s : binary_strings_up_to(4)) {
                if (static_cast<int>(s.size()) > m) continue;
                auto in = bits(s);
                auto trace = run_tm(tm, in);
                bool fits = trace.verdict == Verdict::accepted && trace.accept_step <= m &&
                            trace.max_cell < m;
                auto r = decide_rectangle(zt.tiles, m, m, zt.zone_boundaries(in));
                solved++;
                if (r.status == SolveStatus::TIMEOUT || (r.status == SolveStatus::SAT) != fits) {
                    report("zone tileability equals machine acceptance", false,
                           "m=" + std::to_string(m) + " input \"" + s + "\"");
                    return;
                }
                if (r.status != SolveStatus::SAT) continue;
                sat++;
                auto back = zone_tiling_to_trace(zt, *r.witness);
                bool same = back.accept_step == trace.accept_step &&
                            back.configs.size() == trace.configs.size();
                for (std::size_t t = 0; same && t < back.configs.size(); t++) {
                    same = back.configs[t].state == trace.configs[t].state &&
                           back.configs[t].head == trace.configs[t].head;
                    for (int x = 0; same && x < m; x++) {
                        int want = x < static_cast<int>(trace.configs[t].tape.size())
                                       ? trace.configs[t].tape[static_cast<std::size_t>(x)]
                                       : tm.blank_symbol;
                        same = back.configs[t].tape[static_cast<std::size_t>(x)] == want;
                    }
                }
                if (!same) {
                    report("zone tileability equals machine acceptance", false,
                           "witness decodes to a different trace, m=" + std::to_string(m) +
                               " input \"" + s + "\"");
                    return;
                }
            }
        }
    }
    double dt = seconds_since(t0);
    report("zone tileability equals machine acceptance", dt < 120.0,
           std::to_string(solved) + " instances (" + std::to_string(sat) + " SAT), " +
               std::to_string(dt) + "s");
    report("compiled zones are 2x2-deterministic", det_ok);
}

// --- macro-tiles assemble, validate, decompose; wrong borders are
// refuted inside the zone ---
void property_implementation_round_trip(const Implementation& impl) {
    auto t0 = std::chrono::steady_clock::now();
    const TileSet& rho = impl.rho();
    std::vector<Patch> grids;
    for (const Tile& t : rho.tiles()) grids.push_back(Patch::filled(1, 1, false, t));
    int valid_2x2 = 0;
    const auto& tiles = rho.tiles();
    for (const Tile& t00 : tiles)
        for (const Tile& t10 : tiles)
            for (const Tile& t01 : tiles)
                for (const Tile& t11 : tiles) {
                    Patch g = Patch::dense(2, 2, false, {t00, t10, t01, t11});
                    if (!validate_patch(rho, g).ok) continue;
                    valid_2x2++;
                    grids.push_back(g);
                }
    AuditReport rep = check_implements(impl, grids);
    bool ok = rep.all_passed();
    std::string detail = std::to_string(tiles.size()) + " single tiles + " +
                         std::to_string(valid_2x2) + " valid 2x2 grids";
    if (!ok)
        for (const AuditCheck& c : rep.checks)
            if (c.status != AuditStatus::pass) detail = c.name + ": " + c.witness;

    // every color quadruple outside rho must make the border checker's zone
    // untileable, and every member quadruple tileable
    const int k = impl.plan().k;
    const ZoneTiles& zone = impl.zone();
    for (ColorId l = 0; ok && l < 2; l++)
        for (ColorId b = 0; ok && b < 2; b++)
            for (ColorId r = 0; ok && r < 2; r++)
                for (ColorId t = 0; ok && t < 2; t++) {
                    Tile cand{l, b, r, t};
                    std::vector<int> input(static_cast<std::size_t>(4 * k), 0);
                    ColorId colors[4] = {l, b, r, t};
                    for (int w = 0; w < 4 * k; w++) {
                        int bit = static_cast<int>(
                            (colors[w / k] >> (k - 1 - impl.plan().wire_bit(w))) & 1);
                        input[static_cast<std::size_t>(wire_terminal_slot(k, w))] = bit;
                    }
                    auto res = decide_rectangle(zone.tiles, zone.m, zone.m,
                                                zone.zone_boundaries(input, impl.program()));
                    bool want_sat = rho.contains(cand);
                    if ((res.status == SolveStatus::SAT) != want_sat) {
                        ok = false;
                        detail = "border quadruple " + std::to_string(l) + std::to_string(b) +
                                 std::to_string(r) + std::to_string(t) + " zone status wrong";
                    }
                }
    report("macro-tiles implement the base set exactly", ok && seconds_since(t0) < 600.0,
           detail + ", " + std::to_string(seconds_since(t0)) + "s");
}

// --- wires carry the border bit to the zone and stay isolated ---
void property_wire_conservation(const Implementation& impl) {
    const LayoutPlan& plan = impl.plan();
    const int k = plan.k;
    bool ok = true;
    std::string detail;
    for (const Tile& t : impl.rho().tiles()) {
        Patch proj = payload_projection(impl, macro_tile_of(impl, t));
        ColorId colors[4] = {t.left, t.bottom, t.right, t.top};
        for (int w = 0; ok && w < 4 * k; w++) {
            ColorId bit = (colors[w / k] >> (k - 1 - plan.wire_bit(w))) & 1;
            const auto& path = plan.wires[static_cast<std::size_t>(w)];
            // every wire cell (border bit cell through the translation cell)
            // carries 2 + bit on some side and never the opposite wire value
            for (std::size_t i = 0; ok && i + 1 < path.size(); i++) {
                Tile c = proj.at(path[i].x, path[i].y);
                ColorId carried = 2 + bit, wrong = 2 + (1 - bit);
                bool has = c.left == carried || c.bottom == carried || c.right == carried ||
                           c.top == carried;
                bool bad = c.left == wrong || c.bottom == wrong || c.right == wrong ||
                           c.top == wrong;
                if (!has || bad) {
                    ok = false;
                    detail = "wire " + std::to_string(w) + " cell (" + std::to_string(path[i].x) +
                             "," + std::to_string(path[i].y) + ") does not carry bit " +
                             std::to_string(bit);
                }
            }
        }
        if (!ok) break;
    }
    report("wires conserve the border bits into the zone", ok, detail);

    // geometric isolation: distinct wires more than 2 apart (L-infinity)
    // outside the declared fan regions
    bool iso = true;
    std::string iso_detail;
    for (std::size_t a = 0; iso && a < plan.wires.size(); a++) {
        for (std::size_t b = a + 1; iso && b < plan.wires.size(); b++) {
            for (const Cell& ca : plan.wires[a]) {
                if (plan.in_fan_region(ca.x, ca.y)) continue;
                for (const Cell& cb : plan.wires[b]) {
                    if (plan.in_fan_region(cb.x, cb.y)) continue;
                    if (std::max(std::abs(ca.x - cb.x), std::abs(ca.y - cb.y)) <= 2) {
                        iso = false;
                        iso_detail = "wires " + std::to_string(a) + "/" + std::to_string(b) +
                                     " at (" + std::to_string(ca.x) + "," + std::to_string(ca.y) +
                                     ")";
                        break;
                    }
                }
                if (!iso) break;
            }
        }
    }
    report("wire pairs stay more than 2 apart", iso, iso_detail);
}

// --- slots force every window pattern to occur; without slots, rare zone
// patterns occur exactly once ---
void property_slots() {
    auto t0 = std::chrono::steady_clock::now();
    // the self-referential set first fits its full slot array at zoom 1024
    FixedPointSet fps = fixed_point_tileset(fixed_point_interpreter(), 1024, true);
    const auto& catalog = fps.catalog();
    const auto& slots = fps.slots().slots;

    std::set<int> covered;
    for (const auto& s : slots) covered.insert(s.entry);
    bool cover_ok = static_cast<int>(covered.size()) == static_cast<int>(catalog.entries.size());

    Tile sample = fps.tiles_at(0, 0)[0];
    Patch mac = fps.macro_tile(sample);
    Patch proj = payload_projection(fps.impl(), mac);
    bool occur_ok = cover_ok;
    std::string detail;
    for (const auto& s : slots) {
        const auto& want = catalog.entries[static_cast<std::size_t>(s.entry)].pattern;
        Tile got[4] = {proj.at(s.footprint.x + 1, s.footprint.y + 1),
                       proj.at(s.footprint.x + 2, s.footprint.y + 1),
                       proj.at(s.footprint.x + 1, s.footprint.y + 2),
                       proj.at(s.footprint.x + 2, s.footprint.y + 2)};
        for (int i = 0; i < 4; i++) {
            if (got[i] != want[static_cast<std::size_t>(i)]) {
                occur_ok = false;
                detail = "slot for entry " + std::to_string(s.entry) + " holds a different pattern";
            }
        }
        if (!occur_ok) break;
    }
    report("every catalog pattern occurs in the macro-tile", occur_ok,
           occur_ok ? std::to_string(slots.size()) + " slots, " +
                          std::to_string(catalog.entries.size()) + " patterns"
                    : detail);

    // the ring around each slot admits exactly one interior filling
    bool unique_ok = true;
    std::size_t checked = 0;
    for (std::size_t i = 0; unique_ok && i < slots.size(); i++) {
        const Cell f = slots[i].footprint;
        int x = f.x + 1, y = f.y + 1;
        std::vector<BoundaryConstraint> ring;
        MacroColor left, bottom, right, top;
        for (int d = 0; d < 2; d++) {
            left.push_back(mac.at(x, y + d).left);
            right.push_back(mac.at(x + 1, y + d).right);
            bottom.push_back(mac.at(x + d, y).bottom);
            top.push_back(mac.at(x + d, y + 1).top);
        }
        ring.push_back(BoundaryConstraint::exact(Side::left, left));
        ring.push_back(BoundaryConstraint::exact(Side::bottom, bottom));
        ring.push_back(BoundaryConstraint::exact(Side::right, right));
        ring.push_back(BoundaryConstraint::exact(Side::top, top));
        auto fillings = enumerate_rectangle(fps.tau(), 2, 2, ring, 2);
        unique_ok = fillings.size() == 1;
        checked++;
    }
    report("slot rings force a unique interior filling", unique_ok,
           std::to_string(checked) + " slots");

    // interiors pairwise non-touching (no shared or adjacent cells)
    bool apart = true;
    for (std::size_t a = 0; apart && a < slots.size(); a++) {
        for (std::size_t b = a + 1; b < slots.size(); b++) {
            int dx = std::abs(slots[a].footprint.x - slots[b].footprint.x);
            int dy = std::abs(slots[a].footprint.y - slots[b].footprint.y);
            // interiors are 2x2 blocks at footprint+1: touching means both
            // offsets < 3
            if (dx < 3 && dy < 3) {
                apart = false;
                break;
            }
        }
    }
    report("slot interiors are pairwise non-touching", apart);

    // without slots, patterns around the zone corner occur exactly once
    FixedPointSet bare = fixed_point_tileset(fixed_point_interpreter(), 267, false);
    Rect z = bare.impl().plan().zone_rect();
    Patch corner = payload_projection(
        bare.impl(), bare.macro_tile(bare.tiles_at(0, 0)[0]).subpatch(z.x0 - 4, z.y0 - 4, 32, 32));
    AuditReport audit = quasiperiodicity_audit({corner}, {2});
    const AuditCheck* unique = audit.find("unique:patch0:size2");
    bool fails_without_slots = unique && unique->status == AuditStatus::fail;
    report("without slots the audit flags once-only zone patterns", fails_without_slots,
           unique ? unique->witness : "check missing");
    std::printf("     (slot checks took %.1fs)\n", seconds_since(t0));
}

// --- the self-referential set is its own macro-tile set ---
void property_fixed_point() {
    FixedPointSet fps = fixed_point_tileset(fixed_point_interpreter(),
                                            smallest_fixed_point_zoom(fixed_point_interpreter()),
                                            false);
    const int N = fps.report().N;
    std::mt19937_64 rng(kAuditSeed);
    bool ok = true;
    std::string detail = "zoom " + std::to_string(N);
    for (int i = 0; ok && i < 50; i++) {
        int x = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
        int y = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
        Tile t = fps.tiles_at(x, y)[0];
        Patch mac = fps.macro_tile(t, true);
        Tile back{fps.impl().decode_border(Side::left, macro_color_of(mac, Side::left)),
                  fps.impl().decode_border(Side::bottom, macro_color_of(mac, Side::bottom)),
                  fps.impl().decode_border(Side::right, macro_color_of(mac, Side::right)),
                  fps.impl().decode_border(Side::top, macro_color_of(mac, Side::top))};
        if (back != t) {
            ok = false;
            detail = "tile at (" + std::to_string(x) + "," + std::to_string(y) +
                     ") does not round-trip";
        }
    }
    AuditReport rep = check_self_similar(
        fps.tau(), fps.impl().plan(), [&](const Tile& t) { return fps.macro_tile(t, true); }, 50,
        kAuditSeed);
    report("fixed point tiles round-trip through their macro-tiles", ok, detail);
    report("fixed point passes the self-similarity audit", rep.all_passed(),
           rep.find("selfsim") ? rep.find("selfsim")->witness : "");
}

// --- no small torus unless both sides are multiples of the zoom ---
void property_torus_obstruction(const Implementation& impl) {
    AuditReport rep = aperiodicity_evidence(impl.tau(), impl.plan().N, 64);
    const AuditCheck* c = rep.find("torus");
    report("no torus up to area 64 off the zoom lattice", rep.all_passed(), c ? c->witness : "");
}

// --- variable zoom carries a pattern-free sequence prefix ---
void property_variable_zoom() {
    auto t0 = std::chrono::steady_clock::now();
    ZoomSchedule schedule{8, 3};
    PrefixChecker checker = pi01_prefix_checker({"11"}, [](int r) { return r; });
    VarZoomFamily fam =
        variable_zoom_tileset(fixed_point_interpreter(), schedule, checker, false);

    bool ok = true;
    std::string detail;
    std::vector<DecomposeResult> per_rank;
    std::string prev;
    for (int r = 1; ok && r <= schedule.ranks; r++) {
        std::string prefix = fam.canonical_prefix(r);
        if (prefix.find("11") != std::string::npos) {
            ok = false;
            detail = "rank " + std::to_string(r) + " prefix contains the forbidden pattern";
        }
        if (prefix.compare(0, prev.size(), prev) != 0) {
            ok = false;
            detail = "rank " + std::to_string(r) + " prefix does not extend rank " +
                     std::to_string(r - 1);
        }
        prev = prefix;
        const Implementation& impl = fam.ranks[static_cast<std::size_t>(r - 1)];
        per_rank.push_back(decompose(impl, macro_tile_of(impl, fam.prefix_tile(r, prefix))));
    }
    if (ok) {
        EmbeddedExtract ex = extract_embedded(fam, per_rank);
        ok = ex.report.all_passed();
        detail = "embedded prefix \"" + ex.x_prefix + "\"";
    }
    report("variable zoom ranks agree on a pattern-free prefix", ok, detail);

    // a prefix containing "11" becomes untileable at rank 3 (length-2
    // prefixes exist only from rank 3 on; budget 1 already enumerates "11")
    const Implementation& r3 = fam.ranks[2];
    Tile bad = fam.prefix_tile(3, "11");
    auto res = decide_rectangle(r3.tau(), schedule.zoom(3), schedule.zoom(3),
                                r3.macro_boundaries(bad));
    bool refuted = res.status == SolveStatus::UNSAT;
    Tile good = fam.prefix_tile(3, "00");
    auto sat = decide_rectangle(r3.tau(), schedule.zoom(3), schedule.zoom(3),
                                r3.macro_boundaries(good));
    report("planted forbidden prefix is refuted inside the zone",
           refuted && sat.status == SolveStatus::SAT,
           std::to_string(seconds_since(t0)) + "s");
}

// --- determinism and print/parse identity on every format ---
void property_determinism_and_formats() {
    // repeated pipelines must be byte-identical
    TileSet cb = checker4();
    auto run_once = [&] {
        std::string out;
        auto r = decide_rectangle(cb, 5, 5);
        out += print_patch(*r.witness, cb);
        out += print_plan(plan_layout(16, 1, 4, 0));
        out += print_tm(tm_parity());
        FixedPointSet fps = fixed_point_tileset(fixed_point_interpreter(), 267, false);
        out += print_audit_report(check_self_similar(
            fps.tau(), fps.impl().plan(), [&](const Tile& t) { return fps.macro_tile(t, true); },
            10, kAuditSeed));
        return out;
    };
    bool deterministic = run_once() == run_once();
    report("repeated runs produce byte-identical output", deterministic);

    std::mt19937_64 rng(10);
    bool ok = true;
    for (int i = 0; ok && i < 500; i++) {
        ColorId H = 1 + static_cast<ColorId>(rng() % 4), V = 1 + static_cast<ColorId>(rng() % 4);
        int max_tiles = std::min<int>(5, static_cast<int>(H * H * V * V));
        int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_tiles));
        std::set<Tile> uniq;
        while (static_cast<int>(uniq.size()) < n) {
            uniq.insert(Tile{static_cast<ColorId>(rng() % static_cast<std::uint64_t>(H)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(V)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(H)),
                             static_cast<ColorId>(rng() % static_cast<std::uint64_t>(V))});
        }
        TileSet ts(H, V, std::vector<Tile>(uniq.begin(), uniq.end()));
        std::string text = print_tileset(ts);
        ok = ok && print_tileset(parse_tileset(text)) == text;

        int w = 1 + static_cast<int>(rng() % 4), h = 1 + static_cast<int>(rng() % 4);
        std::vector<Tile> cells;
        for (int j = 0; j < w * h; j++)
            cells.push_back(ts.tiles()[rng() % ts.tiles().size()]);
        text = print_patch(Patch::dense(w, h, rng() % 2 == 0, std::move(cells)), ts);
        ok = ok && print_patch(parse_patch(text, ts), ts) == text;

        int k = 1 + static_cast<int>(rng() % 3);
        text = print_plan(plan_layout(16 * k + static_cast<int>(rng() % 3) * 8, k, 4 * k, 0));
        ok = ok && print_plan(parse_plan(text)) == text;

        const TuringMachine& tm = (i % 3 == 0)   ? tm_parity()
                                  : (i % 3 == 1) ? tm_immediate_accept()
                                                 : tm_unary_successor();
        text = print_tm(tm);
        ok = ok && print_tm(parse_tm(text)) == text;

        AuditReport rep;
        for (int j = 0; j < static_cast<int>(rng() % 4); j++) {
            rep.add("c" + std::to_string(j), static_cast<AuditStatus>(rng() % 3),
                    rng() % 2 == 0 ? "witness text" : "");
        }
        text = print_audit_report(rep);
        ok = ok && print_audit_report(parse_audit_report(text)) == text;
    }
    report("print/parse is the identity on 500 random instances per format", ok);
}

} // namespace

int main() {
    property_solver_vs_brute_force();
    property_zone_equivalence_and_determinicity();
    Implementation impl = checker4_impl();
    property_implementation_round_trip(impl);
    property_wire_conservation(impl);
    property_slots();
    property_fixed_point();
    property_torus_obstruction(impl);
    property_variable_zoom();
    property_determinism_and_formats();
    std::printf("%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures,
                failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
