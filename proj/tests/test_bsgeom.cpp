#include <doctest.h>

#include <random>
#include <set>

#include "core/grid.hpp"
#include "bsgeom/geometry.hpp"
#include "bsgeom/windows.hpp"

using namespace fiberloc;
using namespace fiberloc::bsgeom;

namespace {

// random SL2(Z) transformation + lattice translation applied to a polygon
DelzantPolygon transform(const DelzantPolygon& p, std::mt19937_64& rng) {
    // A = product of elementary shears, |det| = 1
    int64_t m[2][2] = {{1, 0}, {0, 1}};
    for (int k = 0; k < 4; ++k) {
        int64_t s = static_cast<int64_t>(rng() % 5) - 2;
        if (rng() % 2 == 0) {
            // row op: shear [1 s; 0 1]
            m[0][0] += s * m[1][0];
            m[0][1] += s * m[1][1];
        } else {
            m[1][0] += s * m[0][0];
            m[1][1] += s * m[0][1];
        }
    }
    int64_t tx = static_cast<int64_t>(rng() % 9) - 4;
    int64_t ty = static_cast<int64_t>(rng() % 9) - 4;
    // x' = A x + t  =>  normal' = A^{-T} n, offset' = c - <normal', t>
    int64_t det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    REQUIRE(std::abs(det) == 1);
    // A^{-T} = adj(A)^T / det = [[d, -c], [-b, a]] / det with A = [[a,b],[c,d]]
    auto ntrans = [&](int64_t nx, int64_t ny) {
        int64_t ux = (m[1][1] * nx - m[1][0] * ny) * det;
        int64_t uy = (-m[0][1] * nx + m[0][0] * ny) * det;
        return std::pair<int64_t, int64_t>{ux, uy};
    };
    std::vector<HalfPlane> hs;
    for (const auto& h : p.inequalities()) {
        auto [ux, uy] = ntrans(h.nx, h.ny);
        hs.push_back({ux, uy, h.c - ux * tx - uy * ty});
    }
    return DelzantPolygon(std::move(hs));
}

std::multiset<int> strata(const BSInventory& inv) {
    std::multiset<int> out;
    for (const auto& p : inv.points) out.insert(p.stratum);
    return out;
}

}  // namespace

TEST_CASE("unit triangle: three vertex points with twist pair {0,1}") {
    DelzantPolygon tri = DelzantPolygon::triangle();
    BSInventory inv = bs_points_polytope(tri);
    CHECK(inv.count() == 3);
    CHECK(inv.count_stratum(0) == 3);
    for (const auto& p : inv.points) {
        REQUIRE(p.vertex_params.has_value());
        auto [a, b] = *p.vertex_params;
        CHECK(std::min(a, b) == 0);
        CHECK(std::max(a, b) == 1);
    }
    CHECK(pick_oracle(tri) == 3);
}

TEST_CASE("unit square: four vertices with twist pair (0,0)") {
    DelzantPolygon sq = DelzantPolygon::square();
    BSInventory inv = bs_points_polytope(sq);
    CHECK(inv.count() == 4);
    CHECK(inv.count_stratum(0) == 4);
    for (const auto& p : inv.points) {
        REQUIRE(p.vertex_params.has_value());
        CHECK(p.vertex_params->first == 0);
        CHECK(p.vertex_params->second == 0);
    }
    CHECK(pick_oracle(sq) == 4);
}

TEST_CASE("dilated polygons: strata and Pick counts") {
    BSInventory two = bs_points_polytope(DelzantPolygon::triangle(2));
    CHECK(two.count() == 6);
    CHECK(two.count_stratum(0) == 3);
    CHECK(two.count_stratum(1) == 3);
    CHECK(pick_oracle(DelzantPolygon::triangle(2)) == 6);
    CHECK(pick_oracle(DelzantPolygon::triangle(3)) == 10);
    CHECK(bs_points_polytope(DelzantPolygon::triangle(3)).count() == 10);
}

TEST_CASE("construction rejects non-Delzant input") {
    // normals (1,0) and (1,2) at a vertex: determinant 2
    CHECK_THROWS_AS(DelzantPolygon({{1, 0, 0}, {1, 2, 0}, {-1, -1, 3}}), ConstructionError);
    CHECK_THROWS_AS(DelzantPolygon({{2, 0, 0}, {0, 1, 0}, {-1, -1, 2}}), ConstructionError);
    // unbounded wedge
    CHECK_THROWS_AS(DelzantPolygon({{1, 0, 0}, {0, 1, 0}, {1, 1, 5}}), ConstructionError);
}

TEST_CASE("enumeration equals Pick on random Delzant polygons, strata invariant") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        DelzantPolygon base = (trial % 2 == 0) ? DelzantPolygon::triangle(1 + trial % 4)
                                               : DelzantPolygon::square(1 + trial % 3);
        DelzantPolygon moved = transform(base, rng);
        BSInventory inv = bs_points_polytope(moved);
        CHECK(inv.count() == pick_oracle(moved));
        CHECK(inv.count() == bs_points_polytope(base).count());
        CHECK(strata(inv) == strata(bs_points_polytope(base)));
    }
}

TEST_CASE("strip enumeration matches the closed form") {
    BSInventory inv = bs_points_strip({-1, 1, 1});
    CHECK(inv.count() == 3);
    std::set<std::pair<std::string, std::string>> pts;
    for (const auto& p : inv.points) pts.insert({p.x.to_string(), p.y.to_string()});
    CHECK(pts == std::set<std::pair<std::string, std::string>>{
                     {"0", "0"}, {"0", "1"}, {"1", "1"}});
    CHECK(bs_points_strip({-1, 2, 1}).count() == 5);
    CHECK(bs_points_strip({-2, 3, 2}).count() == 15);
    CHECK_THROWS_AS(bs_points_strip({1, 1, 1}), ConstructionError);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        QuotientStrip s{-1 - static_cast<int64_t>(rng() % 5), 1 + static_cast<int64_t>(rng() % 6),
                        1 + static_cast<int64_t>(rng() % 6)};
        CHECK(bs_points_strip(s).count() == s.expected_count());
    }
}

TEST_CASE("general BS predicate on the positive cone") {
    CHECK(is_bs_point({Rational(2), Rational(0), Rational(5)}));
    CHECK(!is_bs_point({Rational(1, 2), Rational(0)}));
    CHECK(!is_bs_point({Rational(-1), Rational(0)}));
}

TEST_CASE("window plan: free segment with BS points 0,1,2") {
    EdgeTrack track;
    track.bs_positions = {Rational(0), Rational(1), Rational(2)};
    track.domain_lo = Rational(-1, 2);
    track.domain_hi = Rational(5, 2);
    WindowPlan plan = plan_track(track);
    CHECK(plan.windows.size() == 3);
    CHECK(plan.deleted.size() == 2);
    CHECK(plan.deleted[0].position == Rational(1, 2));
    CHECK(plan.deleted[1].position == Rational(3, 2));
    CHECK(plan.conditions_ok);
    CHECK(check_plan(track, plan));
}

TEST_CASE("window plan: polygon edges with and without interior BS points") {
    WindowPlan tri = window_plan(DelzantPolygon::triangle());
    CHECK(tri.windows.empty());
    CHECK(tri.deleted.empty());
    CHECK(tri.conditions_ok);

    WindowPlan big = window_plan(DelzantPolygon::triangle(3));
    // each edge has lattice length 3: two interior BS points, one cut
    CHECK(big.windows.size() == 6);
    CHECK(big.deleted.size() == 3);
    CHECK(big.conditions_ok);
}

TEST_CASE("window plan: strip boundary circles") {
    QuotientStrip s{-1, 1, 1};
    WindowPlan plan = window_plan(s);
    // bottom circle: 1 BS point; top circle: 2
    CHECK(plan.windows.size() == 3);
    CHECK(plan.deleted.size() == 3);
    CHECK(plan.conditions_ok);
    // exactly one seam twist per circle
    int twisted = 0;
    for (const auto& d : plan.deleted) {
        if (d.rr1_params != std::pair<int64_t, int64_t>{0, 0}) ++twisted;
    }
    CHECK(twisted == 2);
}

TEST_CASE("window plan rejects colliding BS points") {
    EdgeTrack track;
    track.bs_positions = {Rational(0), Rational(1, 4)};
    CHECK_THROWS_AS(plan_track(track, Rational(1, 2)), Error);
}

TEST_CASE("rr_total reproduces the Bohr-Sommerfeld counts") {
    auto table = calculus::solve(calculus::generate_system(3), 3);

    DelzantPolygon tri = DelzantPolygon::triangle();
    BSInventory tri_inv = with_plan(bs_points_polytope(tri), tri, window_plan(tri));
    CHECK(rr_total(tri_inv, table) == 3);

    DelzantPolygon sq = DelzantPolygon::square();
    BSInventory sq_inv = with_plan(bs_points_polytope(sq), sq, window_plan(sq));
    CHECK(rr_total(sq_inv, table) == 4);

    QuotientStrip s{-1, 1, 1};
    BSInventory strip_inv = with_plan(bs_points_strip(s), s, window_plan(s));
    CHECK(rr_total(strip_inv, table) == 3);

    DelzantPolygon big = DelzantPolygon::triangle(3);
    BSInventory big_inv = with_plan(bs_points_polytope(big), big, window_plan(big));
    CHECK(rr_total(big_inv, table) == 10);
}
