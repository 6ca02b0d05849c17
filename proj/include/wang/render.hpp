#pragma once

#include "wang/fixedpoint.hpp"

#include <string>

namespace wang {

// Deterministic SVG emission: identical inputs give byte-identical documents.
struct RenderStyle {
    int cell = 24;                      // pixels per cell
    const LayoutPlan* plan = nullptr;   // shade zone / wires / bit cells / slots
    const SlotPlacement* slots = nullptr;
};

// One background rect per cell plus four edge strips colored by side color.
// Throws argument_error beyond 10^6 cells.
std::string render_patch(const Patch& p, const RenderStyle& style = {});

// Layout overview: zone, wires, bit segments, and the slot array.
std::string render_plan(const LayoutPlan& plan, const SlotPlacement* slots = nullptr);

} // namespace wang
