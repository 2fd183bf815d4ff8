#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/sparse.hpp"
#include "witten/models.hpp"

namespace fiberloc::witten {

/// One angular Fourier mode of a 2-D model: a staggered radial chain whose
/// sites alternate between the even and odd spinor components.
///
/// The chain sites are x_i = a + (i+1) h with ghosts clamped at both window
/// ends; the parity of the first and last site is chosen per mode so that the
/// clamped component at each end is the one whose first-order branch would
/// otherwise pile up there (the discrete stand-in for the translationally
/// invariant end extension). V is the zeroth-order angular coefficient,
/// weighted 1 + t sum rho^2 under deformation.
struct ModeOperator {
    int mode = 0;
    double a = 0.0, b = 0.0;     // radial window
    std::vector<double> x;        // chain sites
    std::vector<double> v0;       // undeformed angular coefficient at sites
    std::vector<double> rho2;     // sum of squared deformation profiles at sites
    int start_parity = 0;         // parity of chain site 0
    double t = 0.0;
    RadialBC bc = RadialBC::Dirichlet;
    HermitianOperator op;

    double weight(size_t i) const { return 1.0 + t * rho2[i]; }
};

struct ModeFamily {
    std::vector<ModeOperator> modes;
    std::string label;
    /// Certified positive lower bound on D_t^2 for every mode outside the
    /// assembled range (cylinder convention: (2 pi dist(m, window))^2).
    double outside_mode_bound = 0.0;
};

/// Builds the per-mode family for a cylinder window. The per-mode angular
/// coefficient is V_m(r) = 2 pi w_t(r) (m - r) with w_t = 1 + t rho(r)^2.
ModeFamily assemble_cylinder(const CylinderModel& m);

/// Per-mode family for the disc: V_m(rho) = 2 pi w_t(rho) (m - rho^2) / rho
/// on (eps, R), with the inner-cut regularity clamp fixed by the sign of the
/// centrifugal term (odd component clamped for m >= 0, even for m < 0).
ModeFamily assemble_disc(const DiscModel& m);

/// The full block-diagonal operator over the assembled modes; basis index is
/// (mode block, chain site).
HermitianOperator full_operator(const ModeFamily& family);

/// D_t = D + t sum_alpha rho_alpha D_alpha rho_alpha applied per mode:
/// re-weights the angular coefficient by 1 + t sum rho_alpha(r)^2.
/// With t = 0 this returns the input family.
ModeFamily deform(const ModeFamily& base, const std::vector<RadialProfile>& profiles, double t);

/// Discrete R x S^1 pair of fiberwise operators with potentials f_alpha,
/// f_beta (constant along fibers); one operator per Fourier mode
/// |k| <= mode_bound, block diagonal over the base grid with per-site
/// eigenvalues +-2 pi (k + f).
struct FlatFamilyOperators {
    std::vector<HermitianOperator> alpha;  // index: mode k + mode_bound
    std::vector<HermitianOperator> beta;
    int mode_bound = 0;
};

FlatFamilyOperators assemble_flat_family(const std::vector<double>& f_alpha,
                                         const std::vector<double>& f_beta, int mode_bound);

/// Dirac operator of a flat T^1 fiber with holonomy theta truncated to
/// |k| <= mode_bound: 2x2 blocks with eigenvalues +-2 pi (k + theta).
HermitianOperator flat_circle_operator(double theta, int mode_bound);

/// Even one-dimensional trivial fiber (rank-one even space, zero operator).
HermitianOperator trivial_even_fiber();

}  // namespace fiberloc::witten
