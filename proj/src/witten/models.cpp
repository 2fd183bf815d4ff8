#include "witten/models.hpp"

#include <cmath>
#include <numbers>

namespace fiberloc::witten {

namespace {
constexpr double kPi = std::numbers::pi;

double dist_to_integers(double r) { return std::abs(r - std::round(r)); }
}  // namespace

RadialProfile RadialProfile::cylinder_default(double dead) {
    RadialProfile p;
    p.descriptor = "cylinder-default(dead=" + std::to_string(dead) + ")";
    p.eval = [dead](double r) {
        double u = dist_to_integers(r);
        if (u <= dead) return 0.0;
        double s = std::sin(kPi * (u - dead) / (1.0 - 2.0 * dead));
        return s * s;
    };
    return p;
}

RadialProfile RadialProfile::disc_default(double lo, double hi) {
    RadialProfile p;
    p.descriptor = "disc-default(lo=" + std::to_string(lo) + ",hi=" + std::to_string(hi) + ")";
    p.eval = [lo, hi](double rho) {
        if (rho <= lo) return 0.0;
        if (rho >= hi) return 1.0;
        double s = std::sin(0.5 * kPi * (rho - lo) / (hi - lo));
        return s * s;
    };
    return p;
}

RadialProfile RadialProfile::cutoff(double a, double eps) {
    if (eps <= 0.0) throw Error("cutoff profile: eps must be positive");
    RadialProfile p;
    p.descriptor = "cutoff(a=" + std::to_string(a) + ",eps=" + std::to_string(eps) + ")";
    p.eval = [a, eps](double r) {
        double l = r - a;
        if (l <= 0.0) return 1.0;
        if (l >= 2.0 / eps) return 0.0;
        double x = l * eps / 2.0;
        return 1.0 - x * x * (3.0 - 2.0 * x);
    };
    return p;
}

RadialProfile RadialProfile::constant(double value) {
    RadialProfile p;
    p.descriptor = "constant(" + std::to_string(value) + ")";
    p.eval = [value](double) { return value; };
    return p;
}

void CylinderModel::validate() const {
    if (!(r_min < r_max)) throw ConstructionError("cylinder: empty radial window");
    if (dist_to_integers(r_min) < 1e-9 || dist_to_integers(r_max) < 1e-9)
        throw ConstructionError("cylinder: window end at an integer radius");
    if (radial_sites < 8) throw ConstructionError("cylinder: too few radial sites");
    if (theta_sites < 2 * mode_bound() + 1)
        throw ConstructionError("cylinder: fiber grid too coarse for the mode truncation");
    if (t < 0.0) throw ConstructionError("cylinder: deformation strength must be >= 0");
    if (!profile.eval) throw ConstructionError("cylinder: missing deformation profile");
    // profile must vanish near every in-window integer and stay nonnegative
    int samples = 1000;
    for (int i = 0; i <= samples; ++i) {
        double r = r_min + (r_max - r_min) * i / samples;
        double v = profile(r);
        if (v < 0.0) throw ConstructionError("cylinder: profile takes a negative value");
        if (dist_to_integers(r) < 1e-3 && v != 0.0)
            throw ConstructionError("cylinder: profile does not vanish near an integer radius");
        if (dist_to_integers(r) > 0.3 && v <= 0.0)
            throw ConstructionError("cylinder: profile vanishes away from the integers");
    }
}

int CylinderModel::mode_bound() const {
    return static_cast<int>(std::ceil(std::max(std::abs(r_min), std::abs(r_max)))) + 2;
}

std::string CylinderModel::describe() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "cylinder[r=(%g,%g),N=%d,t=%g]", r_min, r_max, radial_sites,
                  t);
    return buf;
}

void DiscModel::validate() const {
    if (!(radius_sq > 0.0 && radius_sq < 1.0))
        throw ConstructionError("disc: R^2 must lie in (0,1)");
    if (radial_sites < 8) throw ConstructionError("disc: too few radial sites");
    if (angular_modes < 1) throw ConstructionError("disc: need at least one angular mode");
    if (t < 0.0) throw ConstructionError("disc: deformation strength must be >= 0");
}

double DiscModel::inner_cut() const { return std::sqrt(radius_sq) / (4.0 * radial_sites); }

std::string DiscModel::describe() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "disc[R2=%g,N=%d,t=%g]", radius_sq, radial_sites, t);
    return buf;
}

}  // namespace fiberloc::witten
