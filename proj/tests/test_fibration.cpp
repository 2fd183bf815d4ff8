#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fibration/averaging.hpp"
#include "fibration/certificate.hpp"
#include "fibration/fibration.hpp"
#include "fibration/goodcover.hpp"

using namespace fiberloc;
using namespace fiberloc::fib;

namespace {

// base strip x full torus axes (rank = model.torus_dims())
Region strip_region(const DiscreteModel& m, int x0, int x1) {
    IndexBox b;
    b.ranges.push_back({x0, x1, false});
    for (int k = 0; k < m.torus_dims(); ++k) b.ranges.push_back({0, 0, true});
    return Region({b});
}

// two nested charts on [0,1] x T^2: rank 1 inside rank 2
CompatibleFibration nested_two() {
    DiscreteModel m({{8, 0.0, 1.0}}, {8, 8});
    Chart small{"a", strip_region(m, 0, 4), {{{1, 0}}}};
    Chart big{"b", strip_region(m, 3, 7), {{{1, 0}, {0, 1}}}};
    return CompatibleFibration(m, {small, big});
}

}  // namespace

TEST_CASE("discrete orbits reject incompatible grids") {
    FiberSubgroup diag{{{1, 1}}};
    CHECK_NOTHROW(DiscreteSubgroup::from_subtorus(diag, {8, 8}));
    CHECK_THROWS_AS(DiscreteSubgroup::from_subtorus(diag, {8, 4}), ConstructionError);
    FiberSubgroup imprimitive{{{2, 0}}};
    CHECK_THROWS_AS(DiscreteSubgroup::from_subtorus(imprimitive, {8, 8}), ConstructionError);
    FiberSubgroup dependent{{{1, 0}, {2, 0}}};
    CHECK_THROWS_AS(DiscreteSubgroup::from_subtorus(dependent, {8, 8}), ConstructionError);

    DiscreteSubgroup d = DiscreteSubgroup::from_subtorus(diag, {8, 8});
    CHECK(d.order() == 8);
    DiscreteSubgroup full =
        DiscreteSubgroup::from_subtorus(FiberSubgroup{{{1, 0}, {0, 1}}}, {8, 8});
    CHECK(full.order() == 64);
    CHECK(full.contains(d));
    CHECK(!d.contains(full));
    CHECK(d.intersect(full).order() == 8);
}

TEST_CASE("single full chart: all axioms pass, fibration is good") {
    DiscreteModel m({}, {8, 8});
    Chart full{"all", Region::whole(m), {{{1, 0}, {0, 1}}}};
    CompatibleFibration fib(m, {full});
    ValidationReport rep = validate_fibration(fib);
    CHECK(rep.valid);
    CHECK(rep.good);
}

TEST_CASE("nested chart chain is valid and good") {
    DiscreteModel m({{8, 0.0, 1.0}}, {8, 8});
    Chart points{"pts", strip_region(m, 0, 1), {}};
    Chart circle{"circ", strip_region(m, 0, 4), {{{1, 0}}}};
    Chart full{"full", strip_region(m, 3, 7), {{{1, 0}, {0, 1}}}};
    CompatibleFibration fib(m, {full, points, circle});  // order independent
    ValidationReport rep = validate_fibration(fib);
    CHECK(rep.valid);
    CHECK(rep.good);
    // chart order is nondecreasing rank
    CHECK(fib.chart(0).fiber.rank() == 0);
    CHECK(fib.chart(1).fiber.rank() == 1);
    CHECK(fib.chart(2).fiber.rank() == 2);
}

TEST_CASE("incomparable overlapping fibers fail only goodness") {
    DiscreteModel m({}, {8, 8});
    Chart a{"a", Region::whole(m), {{{1, 0}}}};
    Chart b{"b", Region::whole(m), {{{0, 1}}}};
    CompatibleFibration fib(m, {a, b});
    ValidationReport rep = validate_fibration(fib);
    CHECK(rep.valid);
    CHECK(!rep.good);
    bool saw_5prime_fail = false;
    for (const auto& r : rep.records)
        if (r.axiom == "good-5prime" && !r.pass) saw_5prime_fail = true;
    CHECK(saw_5prime_fail);
}

TEST_CASE("non-saturated chart region is a construction error") {
    DiscreteModel m({}, {8, 8});
    IndexBox half;
    half.ranges.push_back({0, 3, false});
    half.ranges.push_back({0, 0, true});
    Chart bad{"bad", Region({half}), {{{1, 0}}}};
    CHECK_THROWS_AS(CompatibleFibration(m, {bad}), ConstructionError);
}

TEST_CASE("saturate_cover closes single seeds to full orbits and is idempotent") {
    DiscreteModel m({}, {8, 8});
    Chart full{"all", Region::whole(m), {{{1, 0}, {0, 1}}}};
    CompatibleFibration fib(m, {full});
    SiteMask seed(m.site_count());
    seed.set(m.index_of({2, 3}));
    auto out = saturate_cover(fib, {seed});
    CHECK(out[0].count() == 64);  // the whole fiber orbit

    auto again = saturate_cover(fib, out);
    CHECK(again[0] == out[0]);
}

TEST_CASE("saturate_cover equals the brute-force least admissible superset") {
    CompatibleFibration fib = nested_two();
    const auto& m = fib.model();
    SiteMask seed_a(m.site_count());
    seed_a.set(m.index_of({3, 2, 5}));  // a point in the overlap
    SiteMask seed_b(m.site_count());
    seed_b.set(m.index_of({5, 1, 1}));
    auto fast = saturate_cover(fib, {seed_a, seed_b});
    auto brute = saturate_cover_bruteforce(fib, {seed_a, seed_b});
    CHECK(fast[0] == brute[0]);
    CHECK(fast[1] == brute[1]);
    auto twice = saturate_cover(fib, fast);
    CHECK(twice[0] == fast[0]);
    CHECK(twice[1] == fast[1]);

    SiteMask outside(m.site_count());
    outside.set(m.index_of({7, 0, 0}));
    CHECK_THROWS_AS(saturate_cover(fib, {outside, seed_b}), Error);
}

TEST_CASE("averaging preserves constants and kills pure fiber harmonics") {
    DiscreteModel m({}, {16});
    Chart full{"all", Region::whole(m), {{{1}}}};
    CompatibleFibration fib(m, {full});

    ScalarField one(m.site_count(), 1.0);
    ScalarField avg1 = average(fib, one);
    for (int64_t s = 0; s < m.site_count(); ++s) CHECK(avg1[s] == doctest::Approx(1.0));

    ScalarField cosf(m.site_count());
    for (int64_t s = 0; s < m.site_count(); ++s)
        cosf[s] = std::cos(2.0 * std::numbers::pi * m.coordinate(s, 0));
    std::vector<ScalarField> tau = {ScalarField(m.site_count(), 1.0)};
    ScalarField avg = average(fib, cosf, tau);
    for (int64_t s = 0; s < m.site_count(); ++s)
        CHECK(avg[s] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("averaging: linearity, positivity, sandwich, support containment") {
    CompatibleFibration fib = nested_two();
    const auto& m = fib.model();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    ScalarField f(m.site_count()), g(m.site_count());
    for (int64_t s = 0; s < m.site_count(); ++s) {
        f[s] = uni(rng);
        g[s] = uni(rng);
    }
    ScalarField af = average(fib, f), ag = average(fib, g);
    ScalarField combo(m.site_count());
    for (int64_t s = 0; s < m.site_count(); ++s) combo[s] = 2.0 * f[s] - 3.0 * g[s];
    ScalarField acombo = average(fib, combo);
    for (int64_t s = 0; s < m.site_count(); ++s)
        CHECK(acombo[s] == doctest::Approx(2.0 * af[s] - 3.0 * ag[s]).epsilon(1e-12));

    ScalarField pos(m.site_count());
    for (int64_t s = 0; s < m.site_count(); ++s) pos[s] = std::abs(f[s]);
    ScalarField apos = average(fib, pos);
    for (int64_t s = 0; s < m.site_count(); ++s) CHECK(apos[s] >= -1e-14);

    // min/max sandwich over the fiber of the largest chart whose V'' holds x
    for (int64_t s = 0; s < m.site_count(); ++s) {
        int alpha = -1;
        for (int i = 0; i < fib.chart_count(); ++i)
            if (fib.middle_mask(i).test(s)) alpha = i;
        if (alpha < 0) continue;
        double lo = 1e300, hi = -1e300;
        for (int64_t o : fib.subgroup(alpha).orbit(m, s)) {
            lo = std::min(lo, f[o]);
            hi = std::max(hi, f[o]);
        }
        CHECK(af[s] >= lo - 1e-12);
        CHECK(af[s] <= hi + 1e-12);
    }

    // support containment: f supported in V'_a stays supported there
    ScalarField bump(m.site_count(), 0.0);
    for (int64_t s : fib.inner_mask(0).sites()) bump[s] = 1.0 + uni(rng);
    ScalarField abump = average(fib, bump);
    CHECK(fib.inner_mask(0).contains(abump.support(1e-14)));
}

TEST_CASE("partition of unity: exactness and admissibility") {
    DiscreteModel m({{16, 0.0, 1.0}}, {8});
    // two overlapping full-fiber charts
    Chart a{"a", strip_region(m, 0, 9), {{{1}}}};
    Chart b{"b", strip_region(m, 6, 15), {{{1}}}};
    CompatibleFibration fib(m, {a, b});

    // triangular bumps on the base, normalized to a partition of unity
    auto rho = admissible_partition_of_unity(fib, default_bump_seeds(fib));
    for (int64_t s = 0; s < m.site_count(); ++s) {
        double q = 0.0;
        for (const auto& r : rho) q += r[s] * r[s];
        CHECK(std::abs(q - 1.0) <= 1e-12);
    }
    for (const auto& r : rho) CHECK(is_admissible_function(fib, r));

    // single chart: rho = 1 everywhere
    DiscreteModel m1({}, {8});
    Chart full{"all", Region::whole(m1), {{{1}}}};
    CompatibleFibration fib1(m1, {full});
    auto rho1 = admissible_partition_of_unity(fib1, default_bump_seeds(fib1));
    for (int64_t s = 0; s < m1.site_count(); ++s) CHECK(rho1[0][s] == doctest::Approx(1.0));

    // seeds failing the partition precondition
    std::vector<ScalarField> badseeds = {ScalarField(m1.site_count(), 0.0)};
    CHECK_THROWS_AS(admissible_partition_of_unity(fib1, badseeds), Error);
}

TEST_CASE("goodness survives restriction to admissible subsets") {
    CompatibleFibration fib = nested_two();
    const auto& m = fib.model();
    // closure of a box under all charts is admissible by construction
    SiteMask seedbox = strip_region(m, 2, 5).mask(m);
    SiteMask keep = saturate_cover_bruteforce(fib, {seedbox, seedbox})[0];
    CompatibleFibration sub = restrict_fibration(fib, keep);
    ValidationReport rep = validate_fibration(sub);
    CHECK(rep.valid);
    CHECK(rep.good);
}

TEST_CASE("acyclicity certificate on holonomy data") {
    // cylinder: base (0,1) carries the radius, full T^1 fiber
    DiscreteModel m({{8, 0.1, 0.9}}, {8});
    Chart full{"all", Region::whole(m), {{{1}}}};
    CompatibleFibration fib(m, {full});
    HolonomyAssignment hol;
    ScalarField r(m.site_count());
    for (int64_t s = 0; s < m.site_count(); ++s) r[s] = m.coordinate(s, 0);
    hol.per_chart.push_back({r});
    CertReport rep = acyclicity_certificate(fib, hol);
    CHECK(rep.certified);

    // window containing the integer radius 1 fails condition 1
    DiscreteModel m2({{9, 0.55, 1.45}}, {8});
    Chart full2{"all", Region::whole(m2), {{{1}}}};
    CompatibleFibration fib2(m2, {full2});
    ScalarField r2(m2.site_count());
    for (int64_t s = 0; s < m2.site_count(); ++s) r2[s] = m2.coordinate(s, 0);
    HolonomyAssignment hol2;
    hol2.per_chart.push_back({r2});
    CertReport rep2 = acyclicity_certificate(fib2, hol2);
    CHECK(!rep2.certified);
}

TEST_CASE("acyclicity certificate on the two-potential example") {
    DiscreteModel m({{12, -1.0, 1.0}}, {8});
    Chart a{"a", strip_region(m, 0, 7), {{{1}}}};
    Chart b{"b", strip_region(m, 4, 11), {{{1}}}};
    CompatibleFibration fib(m, {a, b});

    PotentialPair pots;
    pots.f_alpha = ScalarField(m.site_count(), 0.3);
    pots.f_beta = ScalarField(m.site_count(), 0.6);
    CertReport good = acyclicity_certificate(fib, pots);
    CHECK(good.certified);
    // independent oracle: scan convex combinations on a rational grid
    for (int w = 0; w <= 64; ++w) {
        double mix = (0.3 * w + 0.6 * (64 - w)) / 64.0;
        CHECK(std::abs(mix - std::round(mix)) > 1e-9);
    }

    // combinations of 0.3 and 1.6 cross the integer 1
    pots.f_beta = ScalarField(m.site_count(), 1.6);
    CertReport bad = acyclicity_certificate(fib, pots);
    CHECK(!bad.certified);

    // a potential sitting on an integer fails outright
    pots.f_beta = ScalarField(m.site_count(), 1.0);
    CHECK(!acyclicity_certificate(fib, pots).certified);
}

TEST_CASE("good open cover: trivial action covers everything with one set") {
    DiscreteModel m({{6, 0.0, 1.0}, {6, 0.0, 1.0}}, {});
    StabilizerAssignment stab(m, {12, 12}, {FiberSubgroup{}},
                              std::vector<int>(m.site_count(), 0));
    auto cover = good_open_cover(m, stab, 1);
    REQUIRE(cover.size() == 1);
    CHECK(cover[0].count() == m.site_count());
    auto check = check_good_cover(m, stab, cover);
    CHECK(check.covers);
    CHECK(check.invariant);
    CHECK(check.stabilizer_bound);
    CHECK(check.nested_overlaps);
}

TEST_CASE("good open cover on a discrete moment triangle") {
    // 12x12 moment grid, stabilizers read off the triangle faces:
    // vertices (0,0), (11,0), (0,11) -> T^2; edges -> circles; interior trivial
    int n = 12;
    DiscreteModel m({{n, 0.0, 1.0}, {n, 0.0, 1.0}}, {});
    std::vector<FiberSubgroup> subs = {
        FiberSubgroup{{{1, 0}, {0, 1}}},  // T^2
        FiberSubgroup{{{1, 0}}},          // edge j=0  (stabilizer of that face)
        FiberSubgroup{{{0, 1}}},          // edge i=0
        FiberSubgroup{{{1, 1}}},          // diagonal edge
        FiberSubgroup{}                   // trivial
    };
    std::vector<int> per(m.site_count(), 4);
    auto at = [&](int i, int j) { return m.index_of({i, j}); };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i + j > n - 1) continue;  // outside the triangle: leave trivial
            bool e1 = j == 0, e2 = i == 0, e3 = (i + j == n - 1);
            int tight = e1 + e2 + e3;
            if (tight >= 2)
                per[at(i, j)] = 0;
            else if (e1)
                per[at(i, j)] = 1;
            else if (e2)
                per[at(i, j)] = 2;
            else if (e3)
                per[at(i, j)] = 3;
        }
    }
    StabilizerAssignment stab(m, {12, 12}, subs, per);
    auto cover = good_open_cover(m, stab, 1);
    auto check = check_good_cover(m, stab, cover);
    CHECK(check.covers);
    CHECK(check.invariant);
    CHECK(check.stabilizer_bound);
    CHECK(check.nested_overlaps);

    // incomparable circles get disjoint covers (condition 3 via the
    // exclusion levels)
    for (int i = 1; i <= 3; ++i) {
        for (int j = i + 1; j <= 3; ++j) {
            SiteMask overlap = cover[i];
            overlap &= cover[j];
            CHECK(overlap.empty());
        }
    }
}

TEST_CASE("good cover conditions hold on randomized stabilizer instances") {
    std::mt19937_64 rng(31);
    int pass_count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 10 + static_cast<int>(rng() % 4);
        DiscreteModel m({{n, 0.0, 1.0}}, {});
        std::vector<FiberSubgroup> subs = {
            FiberSubgroup{{{1, 0}, {0, 1}}},
            FiberSubgroup{{{1, 0}}},
            FiberSubgroup{{{0, 1}}},
            FiberSubgroup{},
        };
        std::vector<int> per(m.site_count(), 3);
        // two separated fixed strips for the incomparable circles and an
        // optional T^2 point at the left end of the first strip
        int p1 = 1 + static_cast<int>(rng() % (n / 2 - 2));
        int p2 = p1 + 4 + static_cast<int>(rng() % (n - p1 - 5));
        per[p1] = 1;
        per[p2] = 2;
        bool with_vertex = rng() % 2 == 0;
        if (with_vertex) per[0] = 0;
        if (with_vertex && p1 <= 2) per[p1] = 1;  // keep separation from the vertex zone

        StabilizerAssignment stab(m, {12, 12}, subs, per);
        auto cover = good_open_cover(m, stab, 1);
        auto check = check_good_cover(m, stab, cover);
        CHECK(check.covers);
        CHECK(check.invariant);
        CHECK(check.stabilizer_bound);
        CHECK(check.nested_overlaps);
        ++pass_count;
    }
    CHECK(pass_count == 100);
}
