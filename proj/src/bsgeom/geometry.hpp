#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace fiberloc::bsgeom {

struct LatticePoint {
    int64_t x = 0;
    int64_t y = 0;
};

/// Half-plane <n, p> + c >= 0 with primitive integer inward normal.
struct HalfPlane {
    int64_t nx = 0;
    int64_t ny = 0;
    int64_t c = 0;
};

struct BSPoint {
    Rational x, y;
    int stratum = 2;  // 0 vertex, 1 edge interior, 2 interior
    bool is_bs = true;
    /// Twist pair (a1, a2) of the two adjacent edge circles, vertices only.
    std::optional<std::pair<int64_t, int64_t>> vertex_params;
};

/// Non Bohr-Sommerfeld edge point deleted by the window covering, carrying
/// the twist pair of the two circle fibrations meeting there.
struct DeletedPoint {
    Rational x, y;
    std::pair<int64_t, int64_t> rr1_params{0, 0};
};

struct BSInventory {
    std::vector<BSPoint> points;
    std::vector<DeletedPoint> deleted;

    int64_t count() const { return static_cast<int64_t>(points.size()); }
    int64_t count_stratum(int s) const;
};

/// Bounded lattice polygon with unimodular vertex cones.
class DelzantPolygon {
public:
    explicit DelzantPolygon(std::vector<HalfPlane> inequalities);

    static DelzantPolygon triangle(int64_t dilation = 1);
    static DelzantPolygon square(int64_t dilation = 1);

    const std::vector<HalfPlane>& inequalities() const { return ineqs_; }
    /// Vertices in counterclockwise order (integral by the Delzant property).
    const std::vector<LatticePoint>& vertices() const { return verts_; }
    int edge_count() const { return static_cast<int>(verts_.size()); }

    /// Edge i runs from vertex i to vertex i+1.
    LatticePoint edge_start(int i) const { return verts_[i]; }
    LatticePoint edge_end(int i) const { return verts_[(i + 1) % verts_.size()]; }
    /// Lattice length (number of primitive steps along the edge).
    int64_t edge_lattice_length(int i) const;
    /// Primitive direction of edge i.
    LatticePoint edge_direction(int i) const;

    bool contains(int64_t x, int64_t y) const;
    /// Number of tight inequalities at a lattice point inside the polygon.
    int tight_count(int64_t x, int64_t y) const;

    /// Twist of the global edge-i circle in the vertex chart at the given
    /// endpoint (0 at the edge's ccw start by the fixed convention).
    int64_t edge_twist_at(int edge, bool at_start) const;

private:
    std::vector<HalfPlane> ineqs_;
    std::vector<LatticePoint> verts_;
};

/// All lattice points with strata and vertex twist pairs.
BSInventory bs_points_polytope(const DelzantPolygon& p);

/// Pick-count oracle: Area + boundary/2 + 1 in exact integer arithmetic.
int64_t pick_oracle(const DelzantPolygon& p);

/// Z-quotient strip base: cylinder with boundary circles of circumference b
/// and b - a c; parameters a < 0, b >= 1, c >= 1.
struct QuotientStrip {
    int64_t a = -1;
    int64_t b = 1;
    int64_t c = 1;

    void validate() const;
    int64_t expected_count() const;  // (c+1)(2b - ac)/2
    int64_t row_count(int64_t j) const { return b - a * j; }
};

/// Lattice points of the fundamental domain
/// {0 <= r2 <= c, -1/2 <= r1 < -a r2 + b - 1/2} with the half-open right
/// boundary respected exactly.
BSInventory bs_points_strip(const QuotientStrip& s);

/// General BS predicate for the positive-cone local model in any dimension.
bool is_bs_point(const std::vector<Rational>& point);

}  // namespace fiberloc::bsgeom
