#pragma once

#include "wang/fixedpoint.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wang {

enum class AuditStatus { pass, fail, inconclusive };

const char* audit_status_name(AuditStatus s);

// Every failing check carries a concrete witness (a position, an offset pair,
// a patch description) that suffices to replay the failure.
struct AuditCheck {
    std::string name;
    AuditStatus status = AuditStatus::pass;
    std::string witness;
};

struct AuditReport {
    std::vector<AuditCheck> checks;

    bool all_passed() const;
    const AuditCheck* find(const std::string& name) const;
    void add(std::string name, AuditStatus status, std::string witness = "");
    void merge(const AuditReport& other); // keeps deterministic name order
};

// Fixed seed for every sampling-based audit, so reports are reproducible.
inline constexpr std::uint64_t kAuditSeed = 20260823;

// Per-rank lattice offsets (sigma_h, sigma_v) of a hierarchical tiling,
// 0 <= offset < that rank's zoom.
struct HierarchyAddress {
    std::vector<std::pair<int, int>> offsets; // offsets[r-1] = rank r
};

// Audits "tau implements rho": for each rho-valid grid (<= 3x3), assembles the
// canonical macro-tiles, validates the assembly against tau, decomposes it
// back, compares the decoded grid, and confirms the lattice offset is implied
// uniquely by every cell. Failures land in the report, never in exceptions.
AuditReport check_implements(const Implementation& impl, const std::vector<Patch>& rho_grids);
// Same audit against a caller-supplied assembly (for replaying corruptions).
AuditReport check_implements_patch(const Implementation& impl, const Patch& rho_grid,
                                   const Patch& assembled, const std::string& tag = "");

// Audits self-similarity: correspondence maps a tau tile to its macro-tile;
// for `sample` seeded random tile pairs and both axes, tiles match exactly
// when the corresponding macro-tiles' facing macro-colors match. sample = 0 is
// flagged inconclusive.
AuditReport check_self_similar(const TileSet& tau, const LayoutPlan& plan,
                               const std::function<Patch(const Tile&)>& correspondence,
                               int sample, std::uint64_t seed = kAuditSeed);

struct EmbeddedExtract {
    AuditReport report;
    std::string x_prefix; // read from the deepest rank
    HierarchyAddress address;
};

// Reads the embedded sequence prefix and the per-rank offsets out of rank-wise
// decompositions (per_rank[r-1] = decompose against fam.ranks[r-1]). Same-rank
// prefix disagreement or a broken prefix chain fails with a witness.
EmbeddedExtract extract_embedded(const VarZoomFamily& fam,
                                 const std::vector<DecomposeResult>& per_rank);

// Strips the coordinate fields off every cell, leaving the payload tile; the
// recurrence audits run on this projection (raw colors are position-unique).
Patch payload_projection(const Implementation& impl, const Patch& p);

// Runs recurrence_radius on each patch for each size; a pattern missing from
// some window is a failure with both positions as witness. Also counts the
// patterns occurring exactly once ("unique" checks): those can never recur in
// every window of an extended tiling, which is what slots exist to prevent.
AuditReport quasiperiodicity_audit(const std::vector<Patch>& patches,
                                   const std::vector<int>& sizes);

// Report text format: "audit v1" header, then one line per check
// "CHECK <name> <PASS|FAIL|INCONCLUSIVE> [witness...]" (witness runs to the
// end of the line).
std::string print_audit_report(const AuditReport& rep);
AuditReport parse_audit_report(const std::string& text);

// Torus obstruction evidence: every w x h torus with w*h <= max_area where w
// or h is not a multiple of N must be UNSAT. Sizes where both are multiples
// are skipped; a timeout makes the check inconclusive.
AuditReport aperiodicity_evidence(const TileSet& tau, int N, int max_area,
                                  std::int64_t budget = kDefaultBudget);

} // namespace wang
