#include "wang/render.hpp"
#include "wang/verify.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace wang;

namespace {

constexpr const char* kVersion =
    "wangtool 1.0 (formats: wangts v1, patch v1, plan v1, tm v1, audit v1)";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// temp file + rename, so readers never observe a half-written file
void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw io_error("cannot rename to " + path);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

// explicit tile set listing exactly the tiles used by a patch, for printing
TileSet patch_tileset(const Patch& p) {
    std::set<Tile> uniq;
    ColorId h = 1, v = 1;
    for (int y = 0; y < p.height(); y++) {
        for (int x = 0; x < p.width(); x++) {
            Tile t = p.at(x, y);
            uniq.insert(t);
            h = std::max({h, t.left + 1, t.right + 1});
            v = std::max({v, t.bottom + 1, t.top + 1});
        }
    }
    return TileSet(h, v, std::vector<Tile>(uniq.begin(), uniq.end()));
}

Implementation impl_from(const TileSet& rho, const LayoutPlan& plan) {
    if (plan.k != color_bits(rho)) {
        throw argument_error("plan expects " + std::to_string(plan.k) + "-bit colors, tile set needs " +
                             std::to_string(color_bits(rho)));
    }
    auto [tm, prog] = table_checker(rho, plan.k);
    return compile_implementation(rho, tm, prog, plan);
}

struct Args {
    std::string tiles, machine, patch, plan, interpreter, forbidden, checks;
    std::string out, out_plan, out_patch, out_tiles, audit_out, decide_input;
    int w = 0, h = 0, m = 2, zoom = 0, slot_count = 0, macro = -1;
    int C = 8, ranks = 3, max_area = 20, sample = 20;
    std::int64_t budget = kDefaultBudget;
    std::uint64_t seed = kAuditSeed;
    bool slots = false;
};

int cmd_solve(const Args& a) {
    TileSet ts = parse_tileset(read_file(a.tiles));
    SolveResult r = decide_rectangle(ts, a.w, a.h, {}, a.budget);
    if (r.status != SolveStatus::SAT) {
        std::cout << (r.status == SolveStatus::UNSAT ? "UNSAT" : "TIMEOUT") << "\n";
        return 1;
    }
    std::cout << "SAT\n";
    if (!a.out.empty()) atomic_write(a.out, print_patch(*r.witness, ts));
    return 0;
}

int cmd_scan_torus(const Args& a) {
    TileSet ts = parse_tileset(read_file(a.tiles));
    TorusScanReport scan = aperiodicity_scan(ts, a.max_area, a.budget);
    AuditReport rep;
    for (const auto& e : scan.scanned) {
        AuditStatus st = e.status == SolveStatus::UNSAT  ? AuditStatus::pass
                         : e.status == SolveStatus::SAT  ? AuditStatus::fail
                                                         : AuditStatus::inconclusive;
        rep.add("torus:" + std::to_string(e.w) + "x" + std::to_string(e.h), st,
                "nodes=" + std::to_string(e.nodes_explored));
    }
    if (!a.out.empty()) atomic_write(a.out, print_audit_report(rep));
    if (scan.first_torus) {
        std::cout << "torus " << scan.first_torus->w << "x" << scan.first_torus->h << "\n";
        return 0;
    }
    std::cout << (scan.inconclusive ? "inconclusive" : "none") << "\n";
    return scan.inconclusive ? 1 : 0;
}

int cmd_compile_tm(const Args& a) {
    TuringMachine tm = parse_tm(read_file(a.machine));
    ZoneTiles zt = compile_tm_zone(tm, a.m);
    if (!a.out.empty()) atomic_write(a.out, print_tileset(zt.tiles));
    if (!a.decide_input.empty()) {
        std::vector<int> input = parse_int_list(a.decide_input);
        SolveResult r = decide_rectangle(zt.tiles, a.m, a.m, zt.zone_boundaries(input), a.budget);
        std::cout << (r.status == SolveStatus::SAT      ? "SAT"
                      : r.status == SolveStatus::UNSAT ? "UNSAT"
                                                        : "TIMEOUT")
                  << "\n";
        return r.status == SolveStatus::SAT ? 0 : 1;
    }
    return 0;
}

int cmd_compile_macro(const Args& a) {
    TileSet rho = parse_tileset(read_file(a.tiles));
    int k = color_bits(rho);
    int m = std::max(4 * k, 2);
    LayoutPlan plan = plan_layout(a.zoom, k, m, a.slot_count);
    auto [tm, prog] = table_checker(rho, k);
    Implementation impl = compile_implementation(rho, tm, prog, plan);
    if (!a.out_plan.empty()) atomic_write(a.out_plan, print_plan(impl.plan()));
    if (a.macro >= 0) {
        if (a.macro >= static_cast<int>(rho.tiles().size())) {
            throw argument_error("tile index out of range");
        }
        Patch mac = macro_tile_of(impl, rho.tiles()[static_cast<std::size_t>(a.macro)]);
        TileSet used = patch_tileset(mac);
        if (!a.out_tiles.empty()) atomic_write(a.out_tiles, print_tileset(used));
        if (!a.out_patch.empty()) atomic_write(a.out_patch, print_patch(mac, used));
    }
    return 0;
}

int cmd_fixpoint(const Args& a) {
    TuringMachine interp = parse_tm(read_file(a.interpreter));
    int zoom = a.zoom > 0 ? a.zoom : smallest_fixed_point_zoom(interp);
    FixedPointSet fps = fixed_point_tileset(interp, zoom, a.slots);
    std::cout << "zoom " << fps.report().N << " k " << fps.report().k << " m " << fps.report().m
              << " program-bits " << fps.report().program_bits << "\n";
    if (!a.out_plan.empty()) atomic_write(a.out_plan, print_plan(fps.impl().plan()));
    if (!a.audit_out.empty()) {
        AuditReport rep;
        // border round trip on seeded sample tiles
        std::mt19937_64 rng(a.seed);
        const int N = fps.report().N;
        bool ok = true;
        for (int i = 0; i < a.sample && ok; i++) {
            int x = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
            int y = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
            Tile t = fps.tiles_at(x, y)[0];
            Patch mac = fps.macro_tile(t, true);
            Tile back{fps.impl().decode_border(Side::left, macro_color_of(mac, Side::left)),
                      fps.impl().decode_border(Side::bottom, macro_color_of(mac, Side::bottom)),
                      fps.impl().decode_border(Side::right, macro_color_of(mac, Side::right)),
                      fps.impl().decode_border(Side::top, macro_color_of(mac, Side::top))};
            if (back != t) {
                rep.add("roundtrip", AuditStatus::fail,
                        "tile at (" + std::to_string(x) + "," + std::to_string(y) +
                            ") decodes differently");
                ok = false;
            }
        }
        if (ok) rep.add("roundtrip", AuditStatus::pass, std::to_string(a.sample) + " tiles");
        rep.merge(check_self_similar(
            fps.tau(), fps.impl().plan(), [&](const Tile& t) { return fps.macro_tile(t, true); },
            a.sample, a.seed));
        atomic_write(a.audit_out, print_audit_report(rep));
        if (!rep.all_passed()) return 1;
    }
    return 0;
}

int cmd_varzoom(const Args& a) {
    std::vector<std::string> patterns;
    std::istringstream is(read_file(a.forbidden));
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) patterns.push_back(line);
    }
    ZoomSchedule schedule{a.C, a.ranks};
    // the enumeration budget at rank r reveals the first r forbidden patterns
    PrefixChecker checker = pi01_prefix_checker(patterns, [](int r) { return r; });
    VarZoomFamily fam = variable_zoom_tileset(fixed_point_interpreter(), schedule, checker, a.slots);
    AuditReport rep;
    std::vector<DecomposeResult> per_rank;
    for (int r = 1; r <= schedule.ranks; r++) {
        std::string prefix;
        try {
            prefix = fam.canonical_prefix(r);
        } catch (const argument_error& e) {
            rep.add("rank" + std::to_string(r), AuditStatus::fail, e.what());
            break;
        }
        const Implementation& impl = fam.ranks[static_cast<std::size_t>(r - 1)];
        Patch mac = macro_tile_of(impl, fam.prefix_tile(r, prefix));
        per_rank.push_back(decompose(impl, mac));
    }
    EmbeddedExtract ex = extract_embedded(fam, per_rank);
    rep.merge(ex.report);
    std::cout << "x-prefix \"" << ex.x_prefix << "\"\n";
    if (!a.audit_out.empty()) atomic_write(a.audit_out, print_audit_report(rep));
    return rep.all_passed() ? 0 : 1;
}

int cmd_audit(const Args& a) {
    TileSet rho = parse_tileset(read_file(a.tiles));
    LayoutPlan plan = parse_plan(read_file(a.plan));
    Implementation impl = impl_from(rho, plan);
    std::set<std::string> wanted;
    std::istringstream is(a.checks);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item != "implements" && item != "recurrence" && item != "torus") {
            throw argument_error("unknown check \"" + item + "\"");
        }
        wanted.insert(item);
    }

    AuditReport rep;
    if (wanted.count("implements")) {
        std::vector<Patch> grids;
        for (const Tile& t : rho.tiles()) grids.push_back(Patch::filled(1, 1, false, t));
        rep.merge(check_implements(impl, grids));
    }
    if (wanted.count("recurrence")) {
        Patch proj = payload_projection(impl, macro_tile_of(impl, rho.tiles()[0]));
        rep.merge(quasiperiodicity_audit({proj}, {2}));
    }
    if (wanted.count("torus")) {
        rep.merge(aperiodicity_evidence(impl.tau(), plan.N, a.max_area, a.budget));
    }
    if (!a.out.empty()) atomic_write(a.out, print_audit_report(rep));
    return rep.all_passed() ? 0 : 1;
}

int cmd_render(const Args& a) {
    std::string svg;
    if (!a.plan.empty()) {
        LayoutPlan plan = parse_plan(read_file(a.plan));
        svg = render_plan(plan);
    } else {
        TileSet ts = parse_tileset(read_file(a.tiles));
        Patch p = parse_patch(read_file(a.patch), ts);
        RenderStyle style;
        LayoutPlan plan;
        if (!a.out_plan.empty()) { // optional shading source
            plan = parse_plan(read_file(a.out_plan));
            style.plan = &plan;
        }
        svg = render_patch(p, style);
    }
    atomic_write(a.out, svg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wang-tiling construction and verification toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Args a;
    app.add_option("--seed", a.seed, "seed for sampling-based audits");

    auto* solve = app.add_subcommand("solve", "decide a w x h rectangle");
    solve->add_option("--tiles", a.tiles)->required();
    solve->add_option("--width", a.w)->required()->check(CLI::PositiveNumber);
    solve->add_option("--height", a.h)->required()->check(CLI::PositiveNumber);
    solve->add_option("--out", a.out);
    solve->add_option("--budget", a.budget)->check(CLI::PositiveNumber);

    auto* scan = app.add_subcommand("scan-torus", "scan torus sizes by area");
    scan->add_option("--tiles", a.tiles)->required();
    scan->add_option("--max-area", a.max_area)->check(CLI::PositiveNumber);
    scan->add_option("--out", a.out);
    scan->add_option("--budget", a.budget)->check(CLI::PositiveNumber);

    auto* ctm = app.add_subcommand("compile-tm", "compile a machine into zone tiles");
    ctm->add_option("--machine", a.machine)->required();
    ctm->add_option("--m", a.m)->required()->check(CLI::Range(2, 1 << 20));
    ctm->add_option("--out", a.out);
    ctm->add_option("--decide-input", a.decide_input, "comma-separated input symbols");
    ctm->add_option("--budget", a.budget)->check(CLI::PositiveNumber);

    auto* cma = app.add_subcommand("compile-macro", "compile a tile set into macro-tiles");
    cma->add_option("--tiles", a.tiles)->required();
    cma->add_option("--zoom", a.zoom)->required()->check(CLI::PositiveNumber);
    cma->add_option("--slot-count", a.slot_count)->check(CLI::NonNegativeNumber);
    cma->add_option("--out-plan", a.out_plan);
    cma->add_option("--macro", a.macro, "tile index whose macro-tile to write");
    cma->add_option("--out-patch", a.out_patch);
    cma->add_option("--out-tiles", a.out_tiles);

    auto* fix = app.add_subcommand("fixpoint", "build the self-referential set");
    fix->add_option("--interpreter", a.interpreter)->required();
    fix->add_option("--zoom", a.zoom, "zoom, 0 = smallest feasible")->check(CLI::NonNegativeNumber);
    fix->add_flag("--slots", a.slots);
    fix->add_option("--audit-out", a.audit_out);
    fix->add_option("--out-plan", a.out_plan);
    fix->add_option("--sample", a.sample)->check(CLI::NonNegativeNumber);

    auto* var = app.add_subcommand("varzoom", "build the variable-zoom family");
    var->add_option("--C", a.C)->check(CLI::PositiveNumber);
    var->add_option("--ranks", a.ranks)->check(CLI::PositiveNumber);
    var->add_option("--forbidden", a.forbidden, "one binary pattern per line, enumeration order")
        ->required();
    var->add_flag("--slots", a.slots);
    var->add_option("--audit-out", a.audit_out);

    auto* aud = app.add_subcommand("audit", "audit a compiled implementation");
    aud->add_option("--tiles", a.tiles)->required();
    aud->add_option("--plan", a.plan)->required();
    aud->add_option("--checks", a.checks)->required();
    aud->add_option("--out", a.out);
    aud->add_option("--max-area", a.max_area)->check(CLI::PositiveNumber);
    aud->add_option("--sample", a.sample)->check(CLI::NonNegativeNumber);
    aud->add_option("--budget", a.budget)->check(CLI::PositiveNumber);

    auto* ren = app.add_subcommand("render", "emit an SVG figure");
    ren->add_option("--patch", a.patch);
    ren->add_option("--tiles", a.tiles);
    ren->add_option("--plan", a.plan);
    ren->add_option("--shade-plan", a.out_plan, "plan file used to shade a patch");
    ren->add_option("--out", a.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (solve->parsed()) return cmd_solve(a);
        if (scan->parsed()) return cmd_scan_torus(a);
        if (ctm->parsed()) return cmd_compile_tm(a);
        if (cma->parsed()) return cmd_compile_macro(a);
        if (fix->parsed()) return cmd_fixpoint(a);
        if (var->parsed()) return cmd_varzoom(a);
        if (aud->parsed()) return cmd_audit(a);
        if (ren->parsed()) {
            if (a.plan.empty() && (a.patch.empty() || a.tiles.empty())) {
                std::cerr << "render needs --plan or both --patch and --tiles\n";
                return 64;
            }
            return cmd_render(a);
        }
    } catch (const io_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 65;
    } catch (const argument_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const invariant_error& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return 70;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 64;
}
