#include "bsgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/grid.hpp"

namespace fiberloc::bsgeom {

namespace {

int64_t det2(int64_t ax, int64_t ay, int64_t bx, int64_t by) {
    return detail::checked_sub(detail::checked_mul(ax, by), detail::checked_mul(ay, bx));
}

struct Vec2 {
    int64_t x, y;
};

}  // namespace

int64_t BSInventory::count_stratum(int s) const {
    return std::count_if(points.begin(), points.end(),
                         [s](const BSPoint& p) { return p.stratum == s; });
}

DelzantPolygon::DelzantPolygon(std::vector<HalfPlane> inequalities)
    : ineqs_(std::move(inequalities)) {
    if (ineqs_.size() < 3) throw ConstructionError("polygon needs at least three inequalities");
    for (const auto& h : ineqs_) {
        if (std::gcd(std::abs(h.nx), std::abs(h.ny)) != 1)
            throw ConstructionError("polygon normal is not primitive");
    }
    // candidate vertices: pairwise intersections feasible for all inequalities
    std::vector<LatticePoint> cand;
    size_t n = ineqs_.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            int64_t d = det2(ineqs_[i].nx, ineqs_[i].ny, ineqs_[j].nx, ineqs_[j].ny);
            if (d == 0) continue;
            // solve n_i . p = -c_i, n_j . p = -c_j by Cramer
            int64_t px_num = det2(-ineqs_[i].c, ineqs_[i].ny, -ineqs_[j].c, ineqs_[j].ny);
            int64_t py_num = det2(ineqs_[i].nx, -ineqs_[i].c, ineqs_[j].nx, -ineqs_[j].c);
            if (px_num % d != 0 || py_num % d != 0)
                throw ConstructionError("polygon vertex is not a lattice point (not Delzant)");
            LatticePoint p{px_num / d, py_num / d};
            bool feasible = true;
            for (const auto& h : ineqs_) {
                if (h.nx * p.x + h.ny * p.y + h.c < 0) feasible = false;
            }
            if (!feasible) continue;
            if (std::abs(d) != 1)
                throw ConstructionError("vertex normals are not unimodular (not Delzant)");
            bool dup = false;
            for (const auto& q : cand) dup = dup || (q.x == p.x && q.y == p.y);
            if (!dup) cand.push_back(p);
        }
    }
    if (cand.size() < 3) throw ConstructionError("polygon is empty or degenerate");
    // order counterclockwise around the centroid
    double cx = 0, cy = 0;
    for (const auto& p : cand) {
        cx += static_cast<double>(p.x);
        cy += static_cast<double>(p.y);
    }
    cx /= static_cast<double>(cand.size());
    cy /= static_cast<double>(cand.size());
    std::sort(cand.begin(), cand.end(), [&](const LatticePoint& a, const LatticePoint& b) {
        return std::atan2(a.y - cy, a.x - cx) < std::atan2(b.y - cy, b.x - cx);
    });
    verts_ = std::move(cand);

    // every inequality must carry exactly one edge, otherwise the input is
    // redundant or unbounded
    for (const auto& h : ineqs_) {
        int tight = 0;
        for (const auto& v : verts_) {
            if (h.nx * v.x + h.ny * v.y + h.c == 0) ++tight;
        }
        if (tight != 2)
            throw ConstructionError("inequality does not define exactly one edge");
    }
    // convexity / ccw sanity
    size_t k = verts_.size();
    for (size_t i = 0; i < k; ++i) {
        const auto& a = verts_[i];
        const auto& b = verts_[(i + 1) % k];
        const auto& c = verts_[(i + 2) % k];
        if (det2(b.x - a.x, b.y - a.y, c.x - b.x, c.y - b.y) <= 0)
            throw ConstructionError("polygon vertices are not in convex ccw position");
    }
}

DelzantPolygon DelzantPolygon::triangle(int64_t d) {
    return DelzantPolygon({{1, 0, 0}, {0, 1, 0}, {-1, -1, d}});
}

DelzantPolygon DelzantPolygon::square(int64_t d) {
    return DelzantPolygon({{1, 0, 0}, {0, 1, 0}, {-1, 0, d}, {0, -1, d}});
}

int64_t DelzantPolygon::edge_lattice_length(int i) const {
    LatticePoint a = edge_start(i), b = edge_end(i);
    return std::gcd(std::abs(b.x - a.x), std::abs(b.y - a.y));
}

LatticePoint DelzantPolygon::edge_direction(int i) const {
    LatticePoint a = edge_start(i), b = edge_end(i);
    int64_t g = edge_lattice_length(i);
    return {(b.x - a.x) / g, (b.y - a.y) / g};
}

bool DelzantPolygon::contains(int64_t x, int64_t y) const {
    for (const auto& h : ineqs_) {
        if (h.nx * x + h.ny * y + h.c < 0) return false;
    }
    return true;
}

int DelzantPolygon::tight_count(int64_t x, int64_t y) const {
    int t = 0;
    for (const auto& h : ineqs_) {
        if (h.nx * x + h.ny * y + h.c == 0) ++t;
    }
    return t;
}

int64_t DelzantPolygon::edge_twist_at(int edge, bool at_start) const {
    // chart rows at a vertex v for incident edge E: row2 = inward normal of
    // E, row1 = the dual vector with <row1, u_E> = 1 and <row1, u_other> = 0,
    // where both edge directions point away from v. The global edge circle
    // xi_E is row1 taken at the edge start; its twist in the chart at the
    // other end comes from A^{-T} xi_E normalized to along-weight one.
    auto chart_rows = [&](int vertex, int e) -> std::pair<Vec2, Vec2> {
        int k = static_cast<int>(verts_.size());
        int e_prev = (vertex + k - 1) % k;  // edge arriving at `vertex`
        int e_next = vertex;                // edge leaving `vertex`
        if (e != e_prev && e != e_next) throw Error("edge not incident to vertex");
        int other = (e == e_prev) ? e_next : e_prev;
        LatticePoint du = edge_direction(e);
        LatticePoint dv = edge_direction(other);
        // directions away from the vertex
        if (e == e_prev) du = {-du.x, -du.y};
        if (other == e_prev) dv = {-dv.x, -dv.y};
        int64_t d = det2(du.x, du.y, dv.x, dv.y);
        if (std::abs(d) != 1) throw Error("vertex cone is not unimodular");
        // row1 solves [du; dv]^T-system: <row1,du>=1, <row1,dv>=0
        Vec2 row1{dv.y * d, -dv.x * d};  // (dv rotated) / det, det = +-1
        // fix sign: <row1, du> must be +1
        if (row1.x * du.x + row1.y * du.y != 1) {
            row1 = {-row1.x, -row1.y};
        }
        // row2 = inward normal of edge e (tight on it, nonnegative inside)
        Vec2 row2{0, 0};
        for (const auto& h : ineqs_) {
            LatticePoint a = edge_start(e), b = edge_end(e);
            if (h.nx * a.x + h.ny * a.y + h.c == 0 && h.nx * b.x + h.ny * b.y + h.c == 0)
                row2 = {h.nx, h.ny};
        }
        if (row2.x == 0 && row2.y == 0) throw Error("edge has no supporting inequality");
        return {row1, row2};
    };

    int k = static_cast<int>(verts_.size());
    int v_start = edge;             // ccw start of edge
    int v_end = (edge + 1) % k;     // ccw end
    Vec2 xi = chart_rows(v_start, edge).first;
    if (at_start) return 0;  // by the convention fixing xi_E

    auto [row1, row2] = chart_rows(v_end, edge);
    // A = [row1; row2], A^{-T} = adj(A)^T / det
    int64_t d = det2(row1.x, row1.y, row2.x, row2.y);
    if (std::abs(d) != 1) throw Error("vertex chart is not unimodular");
    // A^{-1} = (1/d) [[row2.y, -row1.y], [-row2.x, row1.x]]
    // A^{-T} = (1/d) [[row2.y, -row2.x], [-row1.y, row1.x]]
    int64_t w1 = (row2.y * xi.x - row2.x * xi.y) * d;
    int64_t w2 = (-row1.y * xi.x + row1.x * xi.y) * d;
    if (std::abs(w1) != 1) throw Error("edge circle is not unimodular along the edge");
    return w2 * w1;  // normalize along-weight to +1
}

BSInventory bs_points_polytope(const DelzantPolygon& p) {
    BSInventory inv;
    int64_t xmin = p.vertices()[0].x, xmax = xmin, ymin = p.vertices()[0].y, ymax = ymin;
    for (const auto& v : p.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    for (int64_t y = ymin; y <= ymax; ++y) {
        for (int64_t x = xmin; x <= xmax; ++x) {
            if (!p.contains(x, y)) continue;
            BSPoint bp;
            bp.x = Rational(x);
            bp.y = Rational(y);
            int tight = p.tight_count(x, y);
            bp.stratum = tight >= 2 ? 0 : (tight == 1 ? 1 : 2);
            bp.is_bs = true;
            if (bp.stratum == 0) {
                // twist pair of the two edges meeting at the vertex
                int k = p.edge_count();
                for (int vi = 0; vi < k; ++vi) {
                    if (p.vertices()[vi].x == x && p.vertices()[vi].y == y) {
                        int e_prev = (vi + k - 1) % k;
                        int e_next = vi;
                        bp.vertex_params = {p.edge_twist_at(e_prev, false),
                                            p.edge_twist_at(e_next, true)};
                    }
                }
            }
            inv.points.push_back(std::move(bp));
        }
    }
    return inv;
}

int64_t pick_oracle(const DelzantPolygon& p) {
    const auto& v = p.vertices();
    size_t k = v.size();
    int64_t twice_area = 0;
    int64_t boundary = 0;
    for (size_t i = 0; i < k; ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % k];
        twice_area += det2(a.x, a.y, b.x, b.y);
        boundary += std::gcd(std::abs(b.x - a.x), std::abs(b.y - a.y));
    }
    if (twice_area <= 0) throw Error("pick_oracle: degenerate polygon");
    if ((twice_area + boundary) % 2 != 0)
        throw Error("pick_oracle: parity violation");  // cannot happen by Pick
    return (twice_area + boundary) / 2 + 1;
}

void QuotientStrip::validate() const {
    if (a >= 0) throw ConstructionError("strip: a must be negative");
    if (b < 1) throw ConstructionError("strip: b must be positive");
    if (c < 1) throw ConstructionError("strip: c must be positive");
}

int64_t QuotientStrip::expected_count() const {
    int64_t num = detail::checked_mul(c + 1, detail::checked_sub(2 * b, a * c));
    if (num % 2 != 0) throw Error("strip count formula is not integral");
    return num / 2;
}

BSInventory bs_points_strip(const QuotientStrip& s) {
    s.validate();
    BSInventory inv;
    for (int64_t j = 0; j <= s.c; ++j) {
        // integers r1 with -1/2 <= r1 < -a j + b - 1/2 are 0 .. b - a j - 1
        int64_t m = s.row_count(j);
        for (int64_t i = 0; i < m; ++i) {
            BSPoint bp;
            bp.x = Rational(i);
            bp.y = Rational(j);
            bp.stratum = (j == 0 || j == s.c) ? 1 : 2;
            bp.is_bs = true;
            inv.points.push_back(std::move(bp));
        }
    }
    if (inv.count() != s.expected_count())
        throw Error("strip enumeration disagrees with the closed-form count");
    return inv;
}

bool is_bs_point(const std::vector<Rational>& point) {
    for (const auto& r : point) {
        if (r < Rational(0)) return false;
        if (!r.is_integer()) return false;
    }
    return true;
}

}  // namespace fiberloc::bsgeom
