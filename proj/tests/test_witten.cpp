#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spectral/eigen.hpp"
#include "witten/assemble.hpp"

using namespace fiberloc;
using namespace fiberloc::witten;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd to_dense(const HermitianOperator& op) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(op.dim(), op.dim());
    for (int64_t k = 0; k < op.nnz(); ++k) m(op.rows()[k], op.cols()[k]) += op.values()[k];
    return m;
}

double lowest(const HermitianOperator& op) {
    return spectral::low_spectrum(op, 1).front().lambda;
}

CylinderModel small_cyl(double a, double b, int sites, double t) {
    CylinderModel m;
    m.r_min = a;
    m.r_max = b;
    m.radial_sites = sites;
    m.theta_sites = 16;
    m.t = t;
    return m;
}

}  // namespace

TEST_CASE("cylinder model validation") {
    CHECK_THROWS_AS(small_cyl(0.0, 1.5, 100, 0.0).validate(), ConstructionError);
    CHECK_THROWS_AS(small_cyl(1.5, 0.5, 100, 0.0).validate(), ConstructionError);
    CHECK_NOTHROW(small_cyl(-0.5, 1.5, 100, 25.0).validate());
    CylinderModel coarse_fiber = small_cyl(-0.5, 8.5, 100, 25.0);
    CHECK_THROWS_AS(coarse_fiber.validate(), ConstructionError);  // 16 theta sites, 21 modes
    CylinderModel bad = small_cyl(-0.5, 0.5, 100, 1.0);
    bad.profile = RadialProfile::constant(1.0);  // does not vanish at 0
    CHECK_THROWS_AS(bad.validate(), ConstructionError);
}

TEST_CASE("undeformed per-mode matrix carries the untwisted coefficients") {
    CylinderModel m = small_cyl(-0.5, 0.5, 24, 0.0);
    ModeFamily fam = assemble_cylinder(m);
    for (const auto& mo : fam.modes) {
        CHECK(mo.op.hermiticity_residual() == 0.0);
        CHECK(mo.op.grading_residual() == 0.0);
        // with t = 0 the angular weight is exactly one
        for (size_t i = 0; i < mo.x.size(); ++i) {
            CHECK(mo.weight(i) == 1.0);
            CHECK(mo.v0[i] == doctest::Approx(kTwoPi * (mo.mode - mo.x[i])));
        }
    }
    CHECK(fam.modes.size() == 2 * m.mode_bound() + 1);
}

TEST_CASE("full 2-D assembly matches the union of per-mode spectra") {
    CylinderModel m = small_cyl(-0.5, 1.5, 64, 25.0);
    m.theta_sites = 64;
    ModeFamily fam = assemble_cylinder(m);
    HermitianOperator full = full_operator(fam);
    CHECK(full.hermiticity_residual() == 0.0);
    CHECK(full.grading_residual() == 0.0);

    std::vector<double> pooled;
    for (const auto& mo : fam.modes) {
        for (const auto& e : spectral::full_spectrum(mo.op)) pooled.push_back(e.lambda);
    }
    std::sort(pooled.begin(), pooled.end());
    auto full_spec = spectral::full_spectrum(full);
    REQUIRE(full_spec.size() == pooled.size());
    double scale = std::max(1.0, pooled.back());
    for (size_t i = 0; i < pooled.size(); ++i)
        CHECK(std::abs(full_spec[i].lambda - pooled[i]) <= 1e-9 * scale);
}

TEST_CASE("deformation is linear in t and the identity at t = 0") {
    CylinderModel m = small_cyl(-0.5, 0.5, 32, 5.0);
    ModeFamily base = assemble_cylinder(m);
    std::vector<RadialProfile> prof = {RadialProfile::cylinder_default()};

    ModeFamily same = deform(base, prof, 0.0);
    for (size_t k = 0; k < base.modes.size(); ++k) {
        const auto& a = base.modes[k].op;
        const auto& b = same.modes[k].op;
        REQUIRE(a.nnz() == b.nnz());
        for (int64_t i = 0; i < a.nnz(); ++i) CHECK(a.values()[i] == b.values()[i]);
    }

    ModeFamily d1 = deform(base, prof, 3.0);
    ModeFamily d2 = deform(base, prof, 6.0);
    for (size_t k = 0; k < base.modes.size(); ++k) {
        const auto& a = base.modes[k].op;
        const auto& b = d1.modes[k].op;
        const auto& c = d2.modes[k].op;
        for (int64_t i = 0; i < a.nnz(); ++i) {
            cx add1 = b.values()[i] - a.values()[i];
            cx add2 = c.values()[i] - a.values()[i];
            // exact up to round-off of the full entry
            CHECK(std::abs(add2 - 2.0 * add1) <= 1e-13 * std::abs(a.values()[i]) + 1e-14);
        }
    }
}

TEST_CASE("the spectral gap grows with the deformation strength") {
    auto first_nonzero = [](const ModeFamily& fam) {
        double best = 1e300;
        for (const auto& mo : fam.modes) {
            for (const auto& e : spectral::full_spectrum(mo.op)) {
                if (e.lambda > 1e-4) {
                    best = std::min(best, e.lambda);
                    break;
                }
            }
        }
        return best;
    };
    double g5 = first_nonzero(assemble_cylinder(small_cyl(-0.5, 0.5, 200, 5.0)));
    double g50 = first_nonzero(assemble_cylinder(small_cyl(-0.5, 0.5, 200, 50.0)));
    CHECK(g50 > g5);
}

TEST_CASE("disc modes: positivity away from the kernel mode") {
    DiscModel d;
    d.radius_sq = 0.5;
    d.radial_sites = 200;
    d.angular_modes = 3;
    d.t = 0.0;
    ModeFamily fam = assemble_disc(d);
    for (const auto& mo : fam.modes) {
        CHECK(mo.op.hermiticity_residual() == 0.0);
        if (mo.mode >= 2) CHECK(lowest(mo.op) > 1.0);  // centrifugal dominance
    }
    DiscModel bad;
    bad.radius_sq = 1.2;  // an interior BS circle would enter the window
    CHECK_THROWS_AS(bad.validate(), ConstructionError);
}

TEST_CASE("disc kernel sits in mode zero with even grading, shooting-oracle shape") {
    DiscModel d;
    d.radius_sq = 0.5;
    d.radial_sites = 300;
    d.angular_modes = 2;
    d.t = 50.0;
    ModeFamily fam = assemble_disc(d);
    for (const auto& mo : fam.modes) {
        auto spec = spectral::full_spectrum(mo.op);
        double scale = spec[spec.size() / 2].lambda;
        int64_t near_zero = 0;
        for (const auto& e : spec) {
            if (e.lambda <= 1e-8 * scale) {
                ++near_zero;
                CHECK(e.parity == 0);
            }
        }
        CHECK(near_zero == (mo.mode == 0 ? 1 : 0));
        if (mo.mode != 0) continue;

        // the even near-kernel matches exp(-2 pi int w rho' drho') pointwise
        std::vector<int64_t> evens = mo.op.indices_of_parity(0);
        Eigen::MatrixXcd dense = to_dense(mo.op);
        Eigen::MatrixXcd sq = dense * dense;
        Eigen::MatrixXcd even_block(evens.size(), evens.size());
        for (size_t i = 0; i < evens.size(); ++i)
            for (size_t j = 0; j < evens.size(); ++j) even_block(i, j) = sq(evens[i], evens[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(even_block);
        Eigen::VectorXd mode_vec = es.eigenvectors().col(0).cwiseAbs();

        // trapezoid integral of the oracle profile on the same sites
        std::vector<double> oracle;
        double acc = 0.0, prev_x = mo.a, prev_f = 0.0;
        for (size_t i = 0; i < evens.size(); ++i) {
            double x = mo.x[evens[i]];
            double f = kTwoPi * mo.weight(evens[i]) * x;
            acc += 0.5 * (f + prev_f) * (x - prev_x);
            oracle.push_back(std::exp(-acc));
            prev_x = x;
            prev_f = f;
        }
        double on = 0.0, vn = 0.0, dot = 0.0;
        for (size_t i = 0; i < oracle.size(); ++i) {
            on += oracle[i] * oracle[i];
            vn += mode_vec(i) * mode_vec(i);
            dot += oracle[i] * mode_vec(i);
        }
        CHECK(dot / std::sqrt(on * vn) > 0.99);
    }
}

TEST_CASE("flat family: Fourier shift spectrum and fiberwise anti-commutator") {
    std::vector<double> f_half(12, 0.5), f_zero(12, 0.0);
    FlatFamilyOperators ops = assemble_flat_family(f_half, f_zero, 2);
    // mode k = 0 of f = 1/2: lowest D^2 eigenvalue (2 pi 1/2)^2
    const auto& alpha0 = ops.alpha[2];
    CHECK(lowest(alpha0) == doctest::Approx(std::pow(kTwoPi * 0.5, 2.0)));
    // mode k = 0 of f = 0: kernel present
    const auto& beta0 = ops.beta[2];
    CHECK(lowest(beta0) == doctest::Approx(0.0));

    // {D_alpha, D_beta} is fiberwise: no entries between distinct base sites
    for (size_t k = 0; k < ops.alpha.size(); ++k) {
        Eigen::MatrixXcd q = to_dense(ops.alpha[k]) * to_dense(ops.beta[k]) +
                             to_dense(ops.beta[k]) * to_dense(ops.alpha[k]);
        for (int64_t i = 0; i < q.rows(); ++i) {
            for (int64_t j = 0; j < q.cols(); ++j) {
                if (i / 2 != j / 2) CHECK(std::abs(q(i, j)) == 0.0);
            }
        }
    }
}

TEST_CASE("graded tensor: zero factor copies the spectrum with multiplicity") {
    CylinderModel m = small_cyl(-0.5, 0.5, 16, 10.0);
    ModeFamily fam = assemble_cylinder(m);
    const HermitianOperator& a = fam.modes[3].op;
    HermitianOperator zero2(2, {0, 1});  // null operator on a graded 2-space
    zero2.finalize();
    HermitianOperator c = graded_tensor_sum(a, zero2);
    auto sa = spectral::full_spectrum(a);
    auto sc = spectral::full_spectrum(c);
    REQUIRE(sc.size() == 2 * sa.size());
    for (size_t i = 0; i < sa.size(); ++i) {
        CHECK(sc[2 * i].lambda == doctest::Approx(sa[i].lambda));
        CHECK(sc[2 * i + 1].lambda == doctest::Approx(sa[i].lambda));
    }
}

TEST_CASE("graded tensor: squares add pairwise") {
    HermitianOperator a(4, {0, 1, 0, 1});
    a.add(0, 1, cx(1.0, 0.5));
    a.add(2, 3, cx(0.0, -2.0));
    a.finalize();
    HermitianOperator b(4, {0, 0, 1, 1});
    b.add(0, 2, cx(0.7, 0.0));
    b.add(1, 3, cx(0.0, 1.1));
    b.finalize();
    HermitianOperator c = graded_tensor_sum(a, b);
    auto sa = spectral::full_spectrum(a);
    auto sb = spectral::full_spectrum(b);
    std::vector<double> sums;
    for (const auto& ea : sa)
        for (const auto& eb : sb) sums.push_back(ea.lambda + eb.lambda);
    std::sort(sums.begin(), sums.end());
    auto sc = spectral::full_spectrum(c);
    REQUIRE(sc.size() == sums.size());
    for (size_t i = 0; i < sums.size(); ++i)
        CHECK(sc[i].lambda == doctest::Approx(sums[i]).epsilon(1e-10));
}

TEST_CASE("boundary insensitivity under the localizing deformation") {
    CylinderModel dir = small_cyl(-0.5, 1.5, 200, 50.0);
    CylinderModel ap = dir;
    ap.bc = RadialBC::Antiperiodic;
    ModeFamily fd = assemble_cylinder(dir);
    ModeFamily fa = assemble_cylinder(ap);
    REQUIRE(fd.modes.size() == fa.modes.size());
    for (size_t k = 0; k < fd.modes.size(); ++k) {
        auto sd = spectral::full_spectrum(fd.modes[k].op);
        auto sa = spectral::full_spectrum(fa.modes[k].op);
        double scale = sd[sd.size() / 2].lambda;
        double lambda1 = 0.0;
        for (const auto& e : sd) {
            if (e.lambda > 1e-8 * scale) {
                lambda1 = e.lambda;
                break;
            }
        }
        // every eigenvalue below the gap moves by < 1e-6 relative to lambda_1
        size_t i = 0, j = 0;
        while (i < sd.size() && sd[i].lambda <= 1e-8 * scale) {
            REQUIRE(j < sa.size());
            CHECK(std::abs(sd[i].lambda - sa[j].lambda) < 1e-6 * lambda1);
            ++i;
            ++j;
        }
    }
}

TEST_CASE("anti-commutator with the deformation term loses its radial derivative") {
    // the radial-difference coefficient of {D, D'} is O(h): halving h halves
    // h * max|off-diagonal|
    auto coeff = [](int sites) {
        CylinderModel m0 = small_cyl(-0.5, 0.5, sites, 0.0);
        ModeFamily base = assemble_cylinder(m0);
        ModeFamily bumped = deform(base, {RadialProfile::cylinder_default()}, 1.0);
        const auto& mo = base.modes[base.modes.size() / 2];
        const auto& md = bumped.modes[base.modes.size() / 2];
        Eigen::MatrixXcd d = to_dense(mo.op);
        Eigen::MatrixXcd dp = to_dense(md.op) - d;  // the deformation term alone
        Eigen::MatrixXcd q = d * dp + dp * d;
        double h = (mo.b - mo.a) / (static_cast<double>(mo.x.size()) + 1.0);
        double worst = 0.0;
        for (int64_t i = 0; i < q.rows(); ++i) {
            for (int64_t j = 0; j < q.cols(); ++j) {
                if (i != j) worst = std::max(worst, std::abs(q(i, j)));
            }
        }
        return h * worst;
    };
    double c1 = coeff(64);
    double c2 = coeff(128);
    double c3 = coeff(256);
    CHECK(c2 < 0.75 * c1);
    CHECK(c3 < 0.75 * c2);
}

TEST_CASE("modes outside the truncation sit above the certified bound") {
    CylinderModel m = small_cyl(-0.5, 1.5, 96, 25.0);
    ModeFamily fam = assemble_cylinder(m);
    int bound = m.mode_bound();
    // mode m on (a, b) is unitarily the mode 0 on the integer-shifted window,
    // so the first outside modes can be assembled through a shifted model
    for (int outside : {bound + 1, -(bound + 1)}) {
        CylinderModel shifted = m;
        shifted.r_min = m.r_min - outside;
        shifted.r_max = m.r_max - outside;
        shifted.theta_sites = 2 * shifted.mode_bound() + 1;
        ModeFamily probe = assemble_cylinder(shifted);
        for (const auto& mo : probe.modes) {
            if (mo.mode == 0) CHECK(lowest(mo.op) >= fam.outside_mode_bound);
        }
    }
}

TEST_CASE("triplet export of an assembled mode is parseable") {
    CylinderModel m = small_cyl(-0.5, 0.5, 16, 5.0);
    ModeFamily fam = assemble_cylinder(m);
    std::ostringstream os;
    fam.modes.front().op.export_triplets(os);
    std::istringstream is(os.str());
    int64_t dim, nnz;
    is >> dim >> nnz;
    CHECK(dim == fam.modes.front().op.dim());
    CHECK(nnz == fam.modes.front().op.nnz());
}

TEST_CASE("deformation accepts several chart profiles at once") {
    CylinderModel m = small_cyl(-0.5, 1.5, 64, 0.0);
    ModeFamily base = assemble_cylinder(m);
    // two half-window bumps versus their combined square sum
    RadialProfile left = RadialProfile::cutoff(0.4, 8.0);
    RadialProfile right;
    right.descriptor = "one-minus-left";
    right.eval = [left](double r) { return std::sqrt(std::max(0.0, 1.0 - left(r) * left(r))); };
    RadialProfile both = RadialProfile::constant(1.0);
    ModeFamily split = deform(base, {left, right}, 7.0);
    ModeFamily lump = deform(base, {both}, 7.0);
    for (size_t k = 0; k < base.modes.size(); ++k) {
        REQUIRE(split.modes[k].op.nnz() == lump.modes[k].op.nnz());
        for (int64_t i = 0; i < split.modes[k].op.nnz(); ++i) {
            CHECK(std::abs(split.modes[k].op.values()[i] - lump.modes[k].op.values()[i]) <=
                  1e-12 * std::abs(lump.modes[k].op.values()[i]));
        }
    }
}

TEST_CASE("the deformation term is zeroth order in the radial direction") {
    // entries of D_t - D stay bounded under grid refinement while the
    // kinetic entries of D grow like 1/h
    auto scales = [](int sites) {
        CylinderModel m0 = small_cyl(-0.5, 0.5, sites, 0.0);
        CylinderModel mt = m0;
        mt.t = 10.0;
        ModeFamily f0 = assemble_cylinder(m0);
        ModeFamily ft = assemble_cylinder(mt);
        const auto& a = f0.modes[2].op;
        const auto& b = ft.modes[2].op;
        double dmax = 0.0, kmax = 0.0;
        for (int64_t i = 0; i < a.nnz(); ++i) {
            dmax = std::max(dmax, std::abs(b.values()[i] - a.values()[i]));
            kmax = std::max(kmax, std::abs(a.values()[i]));
        }
        return std::pair<double, double>{dmax, kmax};
    };
    auto [d1, k1] = scales(100);
    auto [d2, k2] = scales(400);
    CHECK(k2 > 3.0 * k1);        // kinetic part scales like 1/h
    CHECK(d2 < 1.2 * d1);        // deformation part does not
}
