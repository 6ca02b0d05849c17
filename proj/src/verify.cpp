#include "wang/verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace wang {

namespace {

std::string at(int x, int y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

std::string violation_text(const Violation& v) {
    std::ostringstream os;
    os << (v.kind == ViolationKind::membership ? "membership" : "mismatch") << " at " << at(v.x, v.y);
    if (v.kind == ViolationKind::mismatch) {
        os << (v.direction == Direction::east ? " east" : " north");
    }
    return os.str();
}

} // namespace

const char* audit_status_name(AuditStatus s) {
    switch (s) {
        case AuditStatus::pass: return "PASS";
        case AuditStatus::fail: return "FAIL";
        case AuditStatus::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

bool AuditReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AuditCheck& c) { return c.status == AuditStatus::pass; });
}

const AuditCheck* AuditReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void AuditReport::add(std::string name, AuditStatus status, std::string witness) {
    checks.push_back({std::move(name), status, std::move(witness)});
}

void AuditReport::merge(const AuditReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    std::stable_sort(checks.begin(), checks.end(),
                     [](const AuditCheck& a, const AuditCheck& b) { return a.name < b.name; });
}

AuditReport check_implements_patch(const Implementation& impl, const Patch& rho_grid,
                                   const Patch& assembled, const std::string& tag) {
    AuditReport rep;
    const int N = impl.plan().N;
    auto name = [&](const char* what) { return tag.empty() ? what : tag + ":" + what; };

    ValidationReport vr = validate_patch(impl.tau(), assembled);
    if (!vr.ok) {
        rep.add(name("validate"), AuditStatus::fail, violation_text(*vr.first));
        return rep;
    }
    rep.add(name("validate"), AuditStatus::pass);

    // every cell must imply the same lattice offset through its coordinates
    int ox = -1, oy = -1;
    for (int y = 0; y < assembled.height(); y++) {
        for (int x = 0; x < assembled.width(); x++) {
            Tile t = assembled.at(x, y);
            int ix = (x - impl.decode_v(t.left).a % N + N) % N;
            int iy = (y - impl.decode_h(t.bottom).b % N + N) % N;
            if (ox < 0) {
                ox = ix, oy = iy;
            } else if (ix != ox || iy != oy) {
                rep.add(name("offset-unique"), AuditStatus::fail,
                        "cell " + at(x, y) + " implies offset " + at(ix, iy) + ", first cell implied " +
                            at(ox, oy));
                return rep;
            }
        }
    }
    rep.add(name("offset-unique"), AuditStatus::pass);

    DecomposeResult d = decompose(impl, assembled);
    if (!d.ok) {
        rep.add(name("decompose"), AuditStatus::fail, d.error);
        return rep;
    }
    if (d.grid_w != rho_grid.width() || d.grid_h != rho_grid.height()) {
        rep.add(name("decompose"), AuditStatus::fail,
                "decomposed into " + std::to_string(d.grid_w) + "x" + std::to_string(d.grid_h) +
                    " macro-tiles, assembled " + std::to_string(rho_grid.width()) + "x" +
                    std::to_string(rho_grid.height()));
        return rep;
    }
    for (int gy = 0; gy < d.grid_h; gy++) {
        for (int gx = 0; gx < d.grid_w; gx++) {
            if (d.grid[static_cast<std::size_t>(gy) * d.grid_w + gx] != rho_grid.at(gx, gy)) {
                rep.add(name("decompose"), AuditStatus::fail,
                        "decoded tile at grid " + at(gx, gy) + " differs from the assembled one");
                return rep;
            }
        }
    }
    rep.add(name("decompose"), AuditStatus::pass);
    return rep;
}

AuditReport check_implements(const Implementation& impl, const std::vector<Patch>& rho_grids) {
    AuditReport rep;
    const int N = impl.plan().N;
    for (std::size_t i = 0; i < rho_grids.size(); i++) {
        const Patch& g = rho_grids[i];
        std::string tag = "grid" + std::to_string(i);
        if (g.empty() || g.width() > 3 || g.height() > 3) {
            rep.add(tag + ":assemble", AuditStatus::inconclusive, "grid size out of the audited range");
            continue;
        }
        ValidationReport gv = validate_patch(impl.rho(), g);
        if (!gv.ok) {
            rep.add(tag + ":assemble", AuditStatus::inconclusive,
                    "assembly refused: grid is not rho-valid, " + violation_text(*gv.first));
            continue;
        }
        std::vector<Patch> macros;
        bool refused = false;
        for (int gy = 0; gy < g.height() && !refused; gy++) {
            for (int gx = 0; gx < g.width() && !refused; gx++) {
                try {
                    macros.push_back(macro_tile_of(impl, g.at(gx, gy), true));
                } catch (const argument_error& e) {
                    rep.add(tag + ":assemble", AuditStatus::fail,
                            "no macro-tile for grid cell " + at(gx, gy) + ": " + e.what());
                    refused = true;
                }
            }
        }
        if (refused) continue;
        rep.add(tag + ":assemble", AuditStatus::pass);
        int gw = g.width();
        Patch assembled = Patch::lazy(g.width() * N, g.height() * N, false, [macros, gw, N](int x, int y) {
            return macros[static_cast<std::size_t>(y / N) * gw + x / N].at(x % N, y % N);
        });
        rep.merge(check_implements_patch(impl, g, assembled, tag));
    }
    return rep;
}

AuditReport check_self_similar(const TileSet& tau, const LayoutPlan& plan,
                               const std::function<Patch(const Tile&)>& correspondence,
                               int sample, std::uint64_t seed) {
    AuditReport rep;
    if (sample <= 0) {
        rep.add("selfsim", AuditStatus::inconclusive, "sample=0: nothing checked");
        return rep;
    }
    // seeded reservoir over the deterministic enumeration
    std::mt19937_64 rng(seed);
    std::vector<Tile> picked;
    std::int64_t seen = 0;
    tau.enumerate({}, [&](const Tile& t) {
        seen++;
        if (static_cast<int>(picked.size()) < sample) {
            picked.push_back(t);
        } else {
            auto j = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(seen));
            if (j < sample) picked[static_cast<std::size_t>(j)] = t;
        }
        return seen < 200'000; // cap the reservoir scan on huge sets
    });
    if (picked.empty()) {
        rep.add("selfsim", AuditStatus::inconclusive, "the set enumerates no tiles");
        return rep;
    }

    auto describe = [](const Tile& t) {
        return "tile(" + std::to_string(t.left) + "," + std::to_string(t.bottom) + "," +
               std::to_string(t.right) + "," + std::to_string(t.top) + ")";
    };
    auto fail = [&](const std::string& w) { rep.add("selfsim", AuditStatus::fail, w); };

    auto macro_of = [&](const Tile& t, Patch& out) {
        out = correspondence(t);
        if (out.width() != plan.N || out.height() != plan.N) {
            fail(describe(t) + " maps to a " + std::to_string(out.width()) + "x" +
                 std::to_string(out.height()) + " patch, want " + std::to_string(plan.N) + "x" +
                 std::to_string(plan.N));
            return false;
        }
        return true;
    };
    auto check_pair = [&](const Tile& a, const Tile& b) {
        Patch ma, mb;
        if (!macro_of(a, ma) || !macro_of(b, mb)) return false;
        bool east = matches(a, b, Direction::east);
        bool east_macro = macro_color_of(ma, Side::right) == macro_color_of(mb, Side::left);
        if (east != east_macro) {
            fail(describe(a) + " / " + describe(b) + ": tile match east=" + std::to_string(east) +
                 " but macro-color match=" + std::to_string(east_macro));
            return false;
        }
        bool north = matches(a, b, Direction::north);
        bool north_macro = macro_color_of(ma, Side::top) == macro_color_of(mb, Side::bottom);
        if (north != north_macro) {
            fail(describe(a) + " / " + describe(b) + ": tile match north=" + std::to_string(north) +
                 " but macro-color match=" + std::to_string(north_macro));
            return false;
        }
        return true;
    };

    for (std::size_t i = 0; i < picked.size(); i++) {
        const Tile& t = picked[i];
        // a genuinely matching partner on each axis, if one exists
        SideQuery east_q, north_q;
        east_q.left = t.right;
        north_q.bottom = t.top;
        for (const auto& q : {east_q, north_q}) {
            auto partners = tau.tiles_with(q, 1);
            if (!partners.empty() && !check_pair(t, partners[0])) return rep;
        }
        // and an arbitrary pair, which usually does not match
        if (!check_pair(t, picked[(i + 1) % picked.size()])) return rep;
    }
    rep.add("selfsim", AuditStatus::pass,
            std::to_string(picked.size()) + " sampled tiles, both axes");
    return rep;
}

EmbeddedExtract extract_embedded(const VarZoomFamily& fam,
                                 const std::vector<DecomposeResult>& per_rank) {
    EmbeddedExtract out;
    if (per_rank.empty() || static_cast<int>(per_rank.size()) > fam.schedule.ranks) {
        out.report.add("extract", AuditStatus::inconclusive, "no rank decompositions supplied");
        return out;
    }
    std::string prev;
    for (int r = 1; r <= static_cast<int>(per_rank.size()); r++) {
        const DecomposeResult& d = per_rank[static_cast<std::size_t>(r - 1)];
        std::string tag = "rank" + std::to_string(r);
        if (!d.ok || d.grid.empty()) {
            out.report.add(tag, AuditStatus::fail, d.ok ? "no complete macro-tile" : d.error);
            return out;
        }
        std::string prefix;
        try {
            prefix = fam.decode_prefix(r, d.grid[0]);
        } catch (const argument_error& e) {
            out.report.add(tag, AuditStatus::fail, std::string("grid (0,0): ") + e.what());
            return out;
        }
        for (std::size_t i = 1; i < d.grid.size(); i++) {
            std::string other = fam.decode_prefix(r, d.grid[i]);
            if (other != prefix) {
                out.report.add(tag, AuditStatus::fail,
                               "same-rank prefixes disagree: \"" + prefix + "\" at grid (0,0), \"" +
                                   other + "\" at grid index " + std::to_string(i));
                return out;
            }
        }
        if (prefix.substr(0, prev.size()) != prev) {
            out.report.add(tag, AuditStatus::fail,
                           "rank " + std::to_string(r) + " prefix \"" + prefix +
                               "\" does not extend \"" + prev + "\"");
            return out;
        }
        prev = prefix;
        out.x_prefix = prefix;
        out.address.offsets.emplace_back(d.sigma_h, d.sigma_v);
        out.report.add(tag, AuditStatus::pass, "prefix \"" + prefix + "\"");
    }
    return out;
}

Patch payload_projection(const Implementation& impl, const Patch& p) {
    std::vector<Tile> cells;
    cells.reserve(static_cast<std::size_t>(p.width()) * p.height());
    for (int y = 0; y < p.height(); y++) {
        for (int x = 0; x < p.width(); x++) {
            Tile t = p.at(x, y);
            cells.push_back(Tile{impl.decode_v(t.left).payload, impl.decode_h(t.bottom).payload,
                                 impl.decode_v(t.right).payload, impl.decode_h(t.top).payload});
        }
    }
    return Patch::dense(p.width(), p.height(), p.wrap(), std::move(cells));
}

AuditReport quasiperiodicity_audit(const std::vector<Patch>& patches,
                                   const std::vector<int>& sizes) {
    AuditReport rep;
    for (std::size_t i = 0; i < patches.size(); i++) {
        for (int s : sizes) {
            std::string tag = "recurrence:patch" + std::to_string(i) + ":size" + std::to_string(s);
            RecurrenceResult r = recurrence_radius(patches[i], s);
            if (r.ok) {
                rep.add(tag, AuditStatus::pass, "radius=" + std::to_string(r.radius));
            } else if (r.missing_pattern_at) {
                std::string w = "pattern at " + at(r.missing_pattern_at->x, r.missing_pattern_at->y);
                if (r.empty_window_at) {
                    w += " missing from window at " + at(r.empty_window_at->x, r.empty_window_at->y);
                }
                rep.add(tag, AuditStatus::fail, w);
            } else {
                rep.add(tag, AuditStatus::inconclusive, "patch smaller than the pattern size");
            }

            // patterns occurring exactly once can never recur in every window
            const Patch& p = patches[i];
            std::string utag = "unique:patch" + std::to_string(i) + ":size" + std::to_string(s);
            if (p.width() < s || p.height() < s) {
                rep.add(utag, AuditStatus::inconclusive, "patch smaller than the pattern size");
                continue;
            }
            std::map<std::vector<Tile>, std::pair<int, Position>> counts;
            std::vector<Tile> pat(static_cast<std::size_t>(s) * s);
            for (int y = 0; y + s <= p.height(); y++) {
                for (int x = 0; x + s <= p.width(); x++) {
                    for (int d = 0; d < s * s; d++)
                        pat[static_cast<std::size_t>(d)] = p.at(x + d % s, y + d / s);
                    auto [it, fresh] = counts.emplace(pat, std::pair{0, Position{x, y}});
                    it->second.first++;
                }
            }
            int once = 0;
            std::optional<Position> first;
            for (const auto& [key, v] : counts) {
                if (v.first != 1) continue;
                once++;
                if (!first || v.second.y < first->y || (v.second.y == first->y && v.second.x < first->x))
                    first = v.second;
            }
            if (once == 0) {
                rep.add(utag, AuditStatus::pass, "all patterns recur");
            } else {
                rep.add(utag, AuditStatus::fail,
                        std::to_string(once) + " patterns occur exactly once, one at " +
                            at(first->x, first->y));
            }
        }
    }
    return rep;
}

std::string print_audit_report(const AuditReport& rep) {
    std::ostringstream os;
    os << "audit v1\n";
    for (const auto& c : rep.checks) {
        os << "CHECK " << c.name << " " << audit_status_name(c.status);
        if (!c.witness.empty()) os << " " << c.witness;
        os << "\n";
    }
    return os.str();
}

AuditReport parse_audit_report(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "audit v1") throw io_error("not an audit report");
    AuditReport rep;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kw, name, status;
        if (!(ls >> kw >> name >> status) || kw != "CHECK") {
            throw io_error("malformed report line: " + line);
        }
        AuditStatus st;
        if (status == "PASS") st = AuditStatus::pass;
        else if (status == "FAIL") st = AuditStatus::fail;
        else if (status == "INCONCLUSIVE") st = AuditStatus::inconclusive;
        else throw io_error("unknown check status: " + status);
        std::string witness;
        std::getline(ls, witness);
        if (!witness.empty() && witness.front() == ' ') witness.erase(0, 1);
        rep.add(name, st, witness);
    }
    return rep;
}

AuditReport aperiodicity_evidence(const TileSet& tau, int N, int max_area, std::int64_t budget) {
    AuditReport rep;
    int tried = 0;
    for (int w = 1; w <= max_area; w++) {
        for (int h = 1; w * h <= max_area; h++) {
            if (w % N == 0 && h % N == 0) continue; // honest periods are multiples of N
            SolveResult r = decide_torus(tau, w, h, budget);
            tried++;
            if (r.status == SolveStatus::SAT) {
                rep.add("torus", AuditStatus::fail,
                        std::to_string(w) + "x" + std::to_string(h) + " torus is tileable");
                return rep;
            }
            if (r.status == SolveStatus::TIMEOUT) {
                rep.add("torus", AuditStatus::inconclusive,
                        std::to_string(w) + "x" + std::to_string(h) + " torus exceeded the budget");
                return rep;
            }
        }
    }
    rep.add("torus", AuditStatus::pass,
            std::to_string(tried) + " torus sizes up to area " + std::to_string(max_area) +
                " all UNSAT");
    return rep;
}

} // namespace wang
