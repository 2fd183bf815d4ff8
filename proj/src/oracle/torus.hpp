#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "core/grid.hpp"

namespace fiberloc::oracle {

/// Flat k-torus (period 1 in each direction) carrying a flat Hermitian line
/// bundle with holonomy vector theta, entries reduced mod 1.
struct FlatTorusFiber {
    int dim = 1;
    std::vector<double> holonomy;             // size dim, in [0,1)
    std::vector<std::vector<double>> metric;  // SPD k x k; empty = identity

    static FlatTorusFiber circle(double theta);
    void validate() const;
    bool has_identity_metric() const;
};

struct SpectrumEntry {
    double lambda = 0.0;  // eigenvalue of D^2
    int64_t even_mult = 0;
    int64_t odd_mult = 0;
};

/// Eigenvalues of D^2 sorted ascending with graded multiplicities.
struct GradedSpectrum {
    std::vector<SpectrumEntry> entries;
    /// Everything below this threshold is certified complete for the mode
    /// truncation that produced the spectrum.
    double certified_below = 0.0;

    /// Entries with lambda < threshold; refuses (throws) when the truncation
    /// cannot certify completeness up to the threshold.
    std::vector<SpectrumEntry> entries_below(double threshold) const;

    void write_csv(std::ostream& os) const;
};

/// D^2 spectrum of the twisted de Rham operator: 4 pi^2 |m + theta|^2_{g^-1}
/// over integer modes |m|_inf <= mode_bound, each mode carrying binom(k, p)
/// multiplicity in form degree p.
GradedSpectrum torus_spectrum(const FlatTorusFiber& fiber, int mode_bound);

/// (even, odd) harmonic dimensions: (2^{k-1}, 2^{k-1}) when theta = 0 mod 1,
/// zero otherwise. A 0-torus (point) gives (1, 0).
std::pair<int64_t, int64_t> fiber_kernel(const FlatTorusFiber& fiber);

/// Operator-norm residual of {D_alpha, D_beta} - 2 D_alphabeta^2 on the
/// truncated Fourier-form basis, where D_S = c . S . nabla for an orthogonal
/// projection S and D_alphabeta comes from p_alpha p_beta. Requires identity
/// metric and commuting projections (throws otherwise).
double anticommutator_residual(const FlatTorusFiber& fiber,
                               const std::vector<std::vector<double>>& p_alpha,
                               const std::vector<std::vector<double>>& p_beta, int mode_bound);

/// Orthogonal projection onto the span of the given row vectors.
std::vector<std::vector<double>> projector_onto(const std::vector<std::vector<double>>& rows,
                                                int dim);

}  // namespace fiberloc::oracle
