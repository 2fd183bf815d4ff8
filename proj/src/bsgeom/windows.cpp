#include "bsgeom/windows.hpp"

#include <algorithm>

#include "core/grid.hpp"

namespace fiberloc::bsgeom {

namespace {

const Rational kHalf(1, 2);

}  // namespace

WindowPlan plan_track(const EdgeTrack& track, const Rational& resolution) {
    WindowPlan plan;
    const auto& bs = track.bs_positions;
    for (size_t i = 0; i + 1 < bs.size(); ++i) {
        if (!(bs[i] < bs[i + 1]))
            throw Error("plan_track: BS positions must be strictly increasing");
        if (bs[i + 1] - bs[i] <= resolution)
            throw Error("plan_track: adjacent BS points closer than resolution; refine the "
                        "window grid");
    }
    if (bs.empty()) return plan;

    if (!track.circle) {
        // cuts at midpoints between consecutive BS points; the track domain
        // bounds the outer windows
        std::vector<Rational> cuts;
        for (size_t i = 0; i + 1 < bs.size(); ++i)
            cuts.push_back((bs[i] + bs[i + 1]) / Rational(2));
        Rational lo = track.vertices_at_ends ? track.domain_lo : bs.front() - kHalf;
        for (size_t i = 0; i < bs.size(); ++i) {
            Rational hi =
                i < cuts.size() ? cuts[i]
                                : (track.vertices_at_ends ? track.domain_hi : bs.back() + kHalf);
            plan.windows.push_back({track.edge_id, lo, hi, bs[i]});
            if (i < cuts.size())
                plan.deleted.push_back({track.edge_id, cuts[i], {0, 0}});
            lo = hi;
        }
    } else {
        // cyclic: one cut between every consecutive pair, wrapping once; the
        // wrap cut carries the seam twist
        size_t k = bs.size();
        std::vector<Rational> cuts;
        for (size_t i = 0; i < k; ++i) {
            Rational next = (i + 1 < k) ? bs[i + 1] : bs.front() + track.circumference;
            cuts.push_back((bs[i] + next) / Rational(2));
        }
        for (size_t i = 0; i < k; ++i) {
            Rational lo = (i == 0) ? cuts.back() - track.circumference : cuts[i - 1];
            plan.windows.push_back({track.edge_id, lo, cuts[i], bs[i]});
            bool seam = (i + 1 == k);
            plan.deleted.push_back(
                {track.edge_id, cuts[i], seam ? track.seam_params : std::pair<int64_t, int64_t>{0, 0}});
        }
        if (k == 1) {
            // a single window covering the circle minus one point
            plan.windows.front().lo = cuts.front() - track.circumference;
            plan.windows.front().hi = cuts.front();
        }
    }
    plan.conditions_ok = check_plan(track, plan);
    return plan;
}

bool check_plan(const EdgeTrack& track, const WindowPlan& plan) {
    const auto& bs = track.bs_positions;
    if (bs.empty()) return plan.windows.empty() && plan.deleted.empty();

    auto wrap = [&](Rational v) {
        if (!track.circle) return v;
        while (v < Rational(0)) v += track.circumference;
        while (!(v < track.circumference)) v -= track.circumference;
        return v;
    };
    auto window_contains = [&](const Window& w, const Rational& p) {
        if (!track.circle) return w.lo < p && p < w.hi;
        Rational span = w.hi - w.lo;
        Rational off = wrap(p - wrap(w.lo));
        return Rational(0) < off && off < span;
    };

    // 1: every window contains exactly its own BS point
    for (const auto& w : plan.windows) {
        for (const auto& p : bs) {
            bool inside = window_contains(w, p);
            if (inside != (p == w.bs_position)) return false;
        }
        // 2: connectedness is structural for intervals/arcs; require a
        // nonempty interior
        if (!(w.lo < w.hi)) return false;
    }
    // 3: windows avoid the vertices (segment endpoints)
    if (!track.circle && track.vertices_at_ends) {
        for (const auto& w : plan.windows) {
            if (window_contains(w, track.domain_lo) || window_contains(w, track.domain_hi))
                return false;
            if (w.lo < track.domain_lo || track.domain_hi < w.hi) return false;
        }
    }
    // 4: pairwise disjoint
    for (size_t i = 0; i < plan.windows.size(); ++i) {
        for (size_t j = i + 1; j < plan.windows.size(); ++j) {
            // sample: endpoints and BS points of one inside the other
            const auto& a = plan.windows[i];
            const auto& b = plan.windows[j];
            if (window_contains(a, b.bs_position) || window_contains(b, a.bs_position))
                return false;
            Rational mid_a = (a.lo + a.hi) / Rational(2);
            Rational mid_b = (b.lo + b.hi) / Rational(2);
            if (window_contains(a, wrap(mid_b)) || window_contains(b, wrap(mid_a))) return false;
        }
    }
    // 5: the windows cover the stratum except exactly the deleted points:
    // consecutive windows must abut at the cuts
    std::vector<Window> sorted = plan.windows;
    std::sort(sorted.begin(), sorted.end(),
              [](const Window& a, const Window& b) { return a.bs_position < b.bs_position; });
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i].hi != sorted[i + 1].lo) return false;
    }
    if (track.circle && sorted.size() > 1) {
        if (wrap(sorted.back().hi) != wrap(sorted.front().lo)) return false;
    }
    for (const auto& d : plan.deleted) {
        bool is_cut = false;
        for (const auto& w : sorted) is_cut = is_cut || d.position == w.hi || d.position == w.lo;
        if (!is_cut) return false;
        for (const auto& w : plan.windows) {
            if (window_contains(w, d.position)) return false;
        }
    }
    return true;
}

WindowPlan window_plan(const DelzantPolygon& p) {
    WindowPlan all;
    all.conditions_ok = true;
    for (int e = 0; e < p.edge_count(); ++e) {
        int64_t len = p.edge_lattice_length(e);
        EdgeTrack track;
        track.edge_id = e;
        track.domain_lo = Rational(0);
        track.domain_hi = Rational(len);
        track.vertices_at_ends = true;
        for (int64_t k = 1; k < len; ++k) track.bs_positions.push_back(Rational(k));
        WindowPlan sub = plan_track(track);
        all.conditions_ok = all.conditions_ok && sub.conditions_ok;
        all.windows.insert(all.windows.end(), sub.windows.begin(), sub.windows.end());
        all.deleted.insert(all.deleted.end(), sub.deleted.begin(), sub.deleted.end());
    }
    return all;
}

WindowPlan window_plan(const QuotientStrip& s) {
    s.validate();
    WindowPlan all;
    all.conditions_ok = true;
    for (int side = 0; side < 2; ++side) {
        EdgeTrack track;
        track.circle = true;
        track.edge_id = side;  // 0 bottom circle, 1 top circle
        track.circumference = Rational(side == 0 ? s.b : s.b - s.a * s.c);
        int64_t count = side == 0 ? s.row_count(0) : s.row_count(s.c);
        for (int64_t k = 0; k < count; ++k) track.bs_positions.push_back(Rational(k));
        // crossing the developing seam shifts the transverse twist by -a
        // (bottom) resp. +a (top) in the fixed orientation convention
        track.seam_params = {0, side == 0 ? s.a : -s.a};
        WindowPlan sub = plan_track(track);
        all.conditions_ok = all.conditions_ok && sub.conditions_ok;
        all.windows.insert(all.windows.end(), sub.windows.begin(), sub.windows.end());
        all.deleted.insert(all.deleted.end(), sub.deleted.begin(), sub.deleted.end());
    }
    return all;
}

BSInventory with_plan(const BSInventory& inv, const DelzantPolygon& p, const WindowPlan& plan) {
    BSInventory out = inv;
    out.deleted.clear();
    for (const auto& d : plan.deleted) {
        LatticePoint a = p.edge_start(d.edge_id);
        LatticePoint dir = p.edge_direction(d.edge_id);
        DeletedPoint q;
        q.x = Rational(a.x) + d.position * Rational(dir.x);
        q.y = Rational(a.y) + d.position * Rational(dir.y);
        q.rr1_params = d.rr1_params;
        out.deleted.push_back(std::move(q));
    }
    return out;
}

BSInventory with_plan(const BSInventory& inv, const QuotientStrip& s, const WindowPlan& plan) {
    BSInventory out = inv;
    out.deleted.clear();
    for (const auto& d : plan.deleted) {
        DeletedPoint q;
        q.x = d.position;
        q.y = Rational(d.edge_id == 0 ? 0 : s.c);
        q.rr1_params = d.rr1_params;
        out.deleted.push_back(std::move(q));
    }
    return out;
}

int64_t rr_total(const BSInventory& inv, const calculus::LocalIndexTable& table) {
    if (!table.consistent || !table.determined)
        throw Error("rr_total: local index table is not solved");
    int64_t total = 0;
    for (const auto& p : inv.points) {
        if (!p.is_bs) continue;
        if (p.stratum == 0) {
            auto [a, b] = p.vertex_params.value_or(std::pair<int64_t, int64_t>{0, 0});
            total += table.value(calculus::SymbolKind::RR0, a, b);
        } else {
            // regular or edge Bohr-Sommerfeld fiber: contribution one
            total += 1;
        }
    }
    for (const auto& q : inv.deleted) {
        total += table.value(calculus::SymbolKind::RR1, q.rr1_params.first,
                             q.rr1_params.second);
    }
    return total;
}

}  // namespace fiberloc::bsgeom
