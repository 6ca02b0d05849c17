#include "wang/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace wang {

namespace {

std::string color_hex(ColorId c) {
    // mixed bits, floored brightness so strips stay visible on white
    std::uint64_t h = (static_cast<std::uint64_t>(c) + 0x243fu) * 0x9e3779b97f4a7c15ull;
    h ^= h >> 31;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<unsigned>(32 + ((h >> 0) & 0xff) * 3 / 4),
                  static_cast<unsigned>(32 + ((h >> 8) & 0xff) * 3 / 4),
                  static_cast<unsigned>(32 + ((h >> 16) & 0xff) * 3 / 4));
    return buf;
}

void rect(std::ostringstream& os, int x, int y, int w, int h, const std::string& fill) {
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"" << fill << "\"/>\n";
}

const char* kShadeZone = "#ffe3b3";
const char* kShadeWire = "#cfe8cf";
const char* kShadeBits = "#d6def2";
const char* kShadeSlotRegion = "#f5eef5";
const char* kShadeSlotRing = "#e0cfe0";
const char* kShadeSlotInterior = "#c9a9c9";

// cell-level shading class from the plan, or empty for plain background
std::string plan_shade(const RenderStyle& st, int x, int y) {
    if (!st.plan) return "";
    const LayoutPlan& plan = *st.plan;
    if (plan.zone_rect().contains(x, y)) return kShadeZone;
    for (const auto& seg : plan.bit_segments)
        for (const Cell& c : seg)
            if (c.x == x && c.y == y) return kShadeBits;
    for (const auto& wire : plan.wires)
        for (const Cell& c : wire)
            if (c.x == x && c.y == y) return kShadeWire;
    if (st.slots) {
        for (const auto& s : st.slots->slots) {
            int dx = x - s.footprint.x, dy = y - s.footprint.y;
            if (dx < 0 || dx > 3 || dy < 0 || dy > 3) continue;
            bool interior = dx >= 1 && dx <= 2 && dy >= 1 && dy <= 2;
            return interior ? kShadeSlotInterior : kShadeSlotRing;
        }
    }
    if (plan.slot_region.contains(x, y)) return kShadeSlotRegion;
    return "";
}

std::string document(int w, int h, const std::string& body) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << body << "</svg>\n";
    return os.str();
}

} // namespace

std::string render_patch(const Patch& p, const RenderStyle& style) {
    if (static_cast<std::int64_t>(p.width()) * p.height() > 1'000'000) {
        throw argument_error("patch too large to render");
    }
    const int c = style.cell;
    const int strip = std::max(1, c / 6);
    std::ostringstream body;
    rect(body, 0, 0, p.width() * c, p.height() * c, "#ffffff");
    for (int y = 0; y < p.height(); y++) {
        for (int x = 0; x < p.width(); x++) {
            const Tile t = p.at(x, y);
            const int px = x * c;
            const int py = (p.height() - 1 - y) * c; // patch y grows upward
            std::string shade = plan_shade(style, x, y);
            if (!shade.empty()) rect(body, px, py, c, c, shade);
            rect(body, px, py, strip, c, color_hex(t.left));
            rect(body, px + c - strip, py, strip, c, color_hex(t.right));
            rect(body, px, py + c - strip, c, strip, color_hex(t.bottom));
            rect(body, px, py, c, strip, color_hex(t.top));
            body << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\"" << c << "\" height=\"" << c
                 << "\" fill=\"none\" stroke=\"#666666\" stroke-width=\"1\"/>\n";
        }
    }
    return document(p.width() * c, p.height() * c, body.str());
}

std::string render_plan(const LayoutPlan& plan, const SlotPlacement* slots) {
    const int c = 8;
    const int N = plan.N;
    auto py = [&](int y) { return (N - 1 - y) * c; };
    std::ostringstream body;
    rect(body, 0, 0, N * c, N * c, "#ffffff");
    if (!plan.slot_region.empty()) {
        rect(body, plan.slot_region.x0 * c, py(plan.slot_region.y1), plan.slot_region.width() * c,
             plan.slot_region.height() * c, kShadeSlotRegion);
    }
    Rect z = plan.zone_rect();
    rect(body, z.x0 * c, py(z.y1), z.width() * c, z.height() * c, kShadeZone);
    for (const auto& seg : plan.bit_segments)
        for (const Cell& cc : seg) rect(body, cc.x * c, py(cc.y), c, c, kShadeBits);
    for (const auto& wire : plan.wires)
        for (const Cell& cc : wire) rect(body, cc.x * c, py(cc.y), c, c, kShadeWire);
    if (slots) {
        for (const auto& s : slots->slots) {
            rect(body, s.footprint.x * c, py(s.footprint.y + 3), 4 * c, 4 * c, kShadeSlotRing);
            rect(body, (s.footprint.x + 1) * c, py(s.footprint.y + 2), 2 * c, 2 * c,
                 kShadeSlotInterior);
        }
    }
    body << "<rect x=\"0\" y=\"0\" width=\"" << N * c << "\" height=\"" << N * c
         << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    return document(N * c, N * c, body.str());
}

} // namespace wang
