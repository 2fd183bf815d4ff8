#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/grid.hpp"

namespace fiberloc::witten {

/// Radial profile evaluated at arbitrary radii; the descriptor feeds config
/// digests and record metadata.
struct RadialProfile {
    std::function<double(double)> eval;
    std::string descriptor;

    double operator()(double r) const { return eval(r); }

    /// Default cylinder deformation: zero within `dead` of every integer,
    /// rising as sin^2 and flat at half-integers.
    static RadialProfile cylinder_default(double dead = 0.125);
    /// Default disc deformation: zero below `lo`, rising to one at `hi`.
    static RadialProfile disc_default(double lo, double hi);
    /// One-sided cutoff: 1 for r <= a, 0 for r >= a + 2/eps,
    /// smoothstep in between (max slope 0.75 eps).
    static RadialProfile cutoff(double a, double eps);
    static RadialProfile constant(double value);
};

enum class RadialBC { Dirichlet, Antiperiodic };

/// Prequantized cylinder window (r_min, r_max) x S^1 with connection
/// d - 2 pi i r dtheta; fiber holonomy exp(-2 pi i r), Bohr-Sommerfeld
/// circles at integer radii.
struct CylinderModel {
    double r_min = -0.5;
    double r_max = 0.5;
    int radial_sites = 200;
    int theta_sites = 16;
    double t = 0.0;
    RadialProfile profile = RadialProfile::cylinder_default();
    RadialBC bc = RadialBC::Dirichlet;

    void validate() const;
    /// |m| <= ceil(max |end|) + 2; outside modes carry the certified bound
    /// (2 pi dist(m, window))^2 on D_t^2.
    int mode_bound() const;
    std::string describe() const;
};

/// Prequantized disc of squared radius R^2 < 1; the only Bohr-Sommerfeld
/// circle in range is the origin. Fiber holonomy exp(-2 pi i rho^2).
struct DiscModel {
    double radius_sq = 0.5;
    int radial_sites = 300;
    int angular_modes = 3;
    double t = 0.0;
    RadialProfile profile;  // empty eval = model default

    void validate() const;
    double inner_cut() const;
    std::string describe() const;
};

}  // namespace fiberloc::witten
