#include "witten/assemble.hpp"

#include <cmath>
#include <numbers>

namespace fiberloc::witten {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Rebuilds the tridiagonal chain matrix from the stored mode data.
HermitianOperator build_chain_matrix(const ModeOperator& mo) {
    int64_t n = static_cast<int64_t>(mo.x.size());
    std::vector<uint8_t> par(n);
    for (int64_t i = 0; i < n; ++i) par[i] = static_cast<uint8_t>((mo.start_parity + i) % 2);
    HermitianOperator op(n, std::move(par));

    auto v_at = [&](int64_t i) { return mo.weight(i) * mo.v0[i]; };
    double h = (mo.bc == RadialBC::Dirichlet) ? (mo.b - mo.a) / (n + 1) : (mo.b - mo.a) / n;
    double inv2h = 1.0 / (2.0 * h);

    for (int64_t i = 0; i + 1 < n; ++i) {
        int parity = (mo.start_parity + i) % 2;
        cx entry = (parity == 0) ? cx(0.0, inv2h + 0.5 * v_at(i))
                                 : cx(0.0, inv2h - 0.5 * v_at(i + 1));
        op.add(i, i + 1, entry);
    }
    if (mo.bc == RadialBC::Antiperiodic) {
        // wrap with a -1 phase; n is even so the corner couples opposite parities
        int parity = (mo.start_parity + n - 1) % 2;
        cx entry = (parity == 0) ? cx(0.0, inv2h + 0.5 * v_at(n - 1))
                                 : cx(0.0, inv2h - 0.5 * v_at(0));
        op.add(n - 1, 0, -entry);
    }
    op.finalize();
    return op;
}

/// Lays out the staggered chain for one mode. `v0_of` is the undeformed
/// angular coefficient, `rho2_of` the squared deformation profile.
ModeOperator make_mode(int mode, double a, double b, int target_sites, double t, RadialBC bc,
                       const std::function<double(double)>& v0_of,
                       const std::function<double(double)>& rho2_of, int clamp_a, int clamp_b) {
    ModeOperator mo;
    mo.mode = mode;
    mo.a = a;
    mo.b = b;
    mo.t = t;
    mo.bc = bc;

    int n = target_sites;
    if (bc == RadialBC::Dirichlet) {
        mo.start_parity = 1 - clamp_a;
        if ((mo.start_parity + n) % 2 != clamp_b) ++n;
    } else {
        mo.start_parity = 0;
        if (n % 2 != 0) ++n;
    }
    mo.x.resize(n);
    if (bc == RadialBC::Dirichlet) {
        double h = (b - a) / (n + 1);
        for (int i = 0; i < n; ++i) mo.x[i] = a + (i + 1) * h;
    } else {
        double h = (b - a) / n;
        for (int i = 0; i < n; ++i) mo.x[i] = a + (i + 0.5) * h;
    }
    mo.v0.resize(n);
    mo.rho2.resize(n);
    for (int i = 0; i < n; ++i) {
        mo.v0[i] = v0_of(mo.x[i]);
        mo.rho2[i] = rho2_of(mo.x[i]);
    }
    mo.op = build_chain_matrix(mo);
    return mo;
}

}  // namespace

ModeFamily assemble_cylinder(const CylinderModel& m) {
    m.validate();
    ModeFamily fam;
    fam.label = m.describe();
    int bound = m.mode_bound();
    for (int mode = -bound; mode <= bound; ++mode) {
        auto v0 = [mode](double r) { return kTwoPi * (mode - r); };
        auto rho2 = [&m](double r) {
            double p = m.profile(r);
            return p * p;
        };
        // clamp the component whose first-order branch would pile up at the
        // end: sign of V at the window ends decides (never zero, the ends are
        // non-integer)
        int clamp_a = (mode > m.r_min) ? 1 : 0;
        int clamp_b = (mode > m.r_max) ? 0 : 1;
        ModeOperator mo = make_mode(mode, m.r_min, m.r_max, m.radial_sites, m.t, m.bc, v0, rho2,
                                    clamp_a, clamp_b);
        mo.op.set_label(fam.label + " mode " + std::to_string(mode));
        fam.modes.push_back(std::move(mo));
    }
    double dist = std::min(std::abs(-(bound + 1) - m.r_min), std::abs((bound + 1) - m.r_max));
    fam.outside_mode_bound = (kTwoPi * dist) * (kTwoPi * dist);
    return fam;
}

ModeFamily assemble_disc(const DiscModel& m) {
    m.validate();
    ModeFamily fam;
    fam.label = m.describe();
    double big_r = std::sqrt(m.radius_sq);
    double eps = m.inner_cut();
    RadialProfile prof = m.profile.eval
                             ? m.profile
                             : RadialProfile::disc_default(std::max(4.0 * eps, 0.1 * big_r),
                                                           0.5 * big_r);
    for (int mode = -m.angular_modes; mode <= m.angular_modes; ++mode) {
        auto v0 = [mode](double rho) { return kTwoPi * (mode - rho * rho) / rho; };
        auto rho2 = [&prof](double rho) {
            double p = prof(rho);
            return p * p;
        };
        // inner-cut regularity: the component singular as rho -> 0 vanishes
        int clamp_a = (mode >= 0) ? 1 : 0;
        // outer end by the sign of the angular coefficient at R
        int clamp_b = (mode > m.radius_sq) ? 0 : 1;
        ModeOperator mo = make_mode(mode, eps, big_r, m.radial_sites, m.t, RadialBC::Dirichlet,
                                    v0, rho2, clamp_a, clamp_b);
        mo.op.set_label(fam.label + " mode " + std::to_string(mode));
        fam.modes.push_back(std::move(mo));
    }
    double beyond = m.angular_modes + 1;
    double dist = (beyond - m.radius_sq) / big_r;
    fam.outside_mode_bound = (kTwoPi * dist) * (kTwoPi * dist);
    return fam;
}

HermitianOperator full_operator(const ModeFamily& family) {
    int64_t total = 0;
    for (const auto& mo : family.modes) total += mo.op.dim();
    std::vector<uint8_t> par;
    par.reserve(total);
    for (const auto& mo : family.modes)
        par.insert(par.end(), mo.op.parity().begin(), mo.op.parity().end());
    HermitianOperator out(total, std::move(par));
    int64_t offset = 0;
    for (const auto& mo : family.modes) {
        for (int64_t k = 0; k < mo.op.nnz(); ++k)
            out.add_raw(offset + mo.op.rows()[k], offset + mo.op.cols()[k], mo.op.values()[k]);
        offset += mo.op.dim();
    }
    out.set_label(family.label + " (full)");
    out.finalize();
    return out;
}

ModeFamily deform(const ModeFamily& base, const std::vector<RadialProfile>& profiles, double t) {
    if (t < 0.0) throw Error("deform: t must be >= 0");
    ModeFamily out;
    out.label = base.label;
    out.outside_mode_bound = base.outside_mode_bound;
    for (const auto& mo : base.modes) {
        ModeOperator next = mo;
        // fold the existing weighting in, then add the new deformation terms
        for (size_t i = 0; i < next.x.size(); ++i) {
            double add = 0.0;
            for (const auto& p : profiles) {
                double v = p(next.x[i]);
                add += v * v;
            }
            next.rho2[i] = mo.t * mo.rho2[i] + t * add;
        }
        next.t = 1.0;
        next.op = build_chain_matrix(next);
        next.op.set_label(mo.op.label());
        out.modes.push_back(std::move(next));
    }
    return out;
}

FlatFamilyOperators assemble_flat_family(const std::vector<double>& f_alpha,
                                         const std::vector<double>& f_beta, int mode_bound) {
    if (f_alpha.size() != f_beta.size())
        throw Error("flat family: potential grids must agree");
    if (mode_bound < 0) throw Error("flat family: mode bound must be >= 0");
    FlatFamilyOperators out;
    out.mode_bound = mode_bound;
    auto build = [&](const std::vector<double>& f, int k) {
        int64_t nb = static_cast<int64_t>(f.size());
        std::vector<uint8_t> par(2 * nb);
        for (int64_t j = 0; j < nb; ++j) par[2 * j + 1] = 1;
        HermitianOperator op(2 * nb, std::move(par));
        for (int64_t j = 0; j < nb; ++j)
            op.add(2 * j, 2 * j + 1, cx(0.0, kTwoPi * (k + f[j])));
        op.finalize();
        return op;
    };
    for (int k = -mode_bound; k <= mode_bound; ++k) {
        out.alpha.push_back(build(f_alpha, k));
        out.beta.push_back(build(f_beta, k));
    }
    return out;
}

HermitianOperator flat_circle_operator(double theta, int mode_bound) {
    if (mode_bound < 0) throw Error("flat circle: mode bound must be >= 0");
    int64_t blocks = 2 * mode_bound + 1;
    std::vector<uint8_t> par(2 * blocks);
    for (int64_t j = 0; j < blocks; ++j) par[2 * j + 1] = 1;
    HermitianOperator op(2 * blocks, std::move(par));
    for (int k = -mode_bound; k <= mode_bound; ++k) {
        int64_t j = k + mode_bound;
        op.add(2 * j, 2 * j + 1, cx(0.0, kTwoPi * (k + theta)));
    }
    op.set_label("flat-T1(theta=" + std::to_string(theta) + ")");
    op.finalize();
    return op;
}

HermitianOperator trivial_even_fiber() {
    HermitianOperator op(1, std::vector<uint8_t>{0});
    op.set_label("trivial-even");
    op.finalize();
    return op;
}

}  // namespace fiberloc::witten
