#pragma once

#include <vector>

#include "bsgeom/geometry.hpp"
#include "calculus/relations.hpp"

namespace fiberloc::bsgeom {

/// One-dimensional stratum piece carrying Bohr-Sommerfeld points: a polygon
/// edge (open segment between vertices) or a boundary circle of a strip.
struct EdgeTrack {
    bool circle = false;
    Rational domain_lo, domain_hi;        // segment domain (open at vertices)
    Rational circumference;               // circles only
    std::vector<Rational> bs_positions;   // strictly increasing
    bool vertices_at_ends = false;        // segment ends are strata-0 points
    /// Twist jump of the edge circle across the seam cut (circles only).
    std::pair<int64_t, int64_t> seam_params{0, 0};
    int edge_id = 0;
};

struct Window {
    int edge_id = 0;
    Rational lo, hi;  // open interval; on circles taken mod circumference
    Rational bs_position;
};

struct TrackDeleted {
    int edge_id = 0;
    Rational position;
    std::pair<int64_t, int64_t> rr1_params{0, 0};
};

struct WindowPlan {
    std::vector<Window> windows;
    std::vector<TrackDeleted> deleted;
    bool conditions_ok = true;
};

/// Disjoint open windows around the BS points of one track with midpoint
/// cuts; the cuts become the deleted points. Throws when two BS positions
/// collide at the stated resolution.
WindowPlan plan_track(const EdgeTrack& track, const Rational& resolution = Rational(0));

/// Window plan over all edges of a polygon; fills deleted-point coordinates
/// into a copy of the inventory.
WindowPlan window_plan(const DelzantPolygon& p);
WindowPlan window_plan(const QuotientStrip& s);

/// Exhaustive rational check of the five covering conditions for one track.
bool check_plan(const EdgeTrack& track, const WindowPlan& plan);

/// Inventory with the plan's deleted points attached.
BSInventory with_plan(const BSInventory& inv, const DelzantPolygon& p, const WindowPlan& plan);
BSInventory with_plan(const BSInventory& inv, const QuotientStrip& s, const WindowPlan& plan);

/// Riemann-Roch total: vertices contribute the solved RR0 at their twist
/// pair, edge and interior BS points contribute one, deleted points the
/// solved RR1 at theirs.
int64_t rr_total(const BSInventory& inv, const calculus::LocalIndexTable& table);

}  // namespace fiberloc::bsgeom
