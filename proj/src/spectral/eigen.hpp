#pragma once

#include <vector>

#include "core/grid.hpp"
#include "core/sparse.hpp"

namespace fiberloc::spectral {

class NumericalNonConvergence : public Error {
public:
    explicit NumericalNonConvergence(const std::string& what) : Error(what) {}
};

struct GradedEigenvalue {
    double lambda = 0.0;  // eigenvalue of D^2
    int parity = 0;
};

/// Lowest k eigenvalues of D^2 with exact parities (D^2 is block diagonal in
/// the grading, each block is solved on its own). Dense below operator
/// dimension 3000, Lanczos with full reorthogonalization above. Residuals are
/// verified against 1e-8 |D^2|.
std::vector<GradedEigenvalue> low_spectrum(const HermitianOperator& op, int64_t k);

/// All eigenvalues of D^2 with parities; dense only (throws above the dense
/// threshold).
std::vector<GradedEigenvalue> full_spectrum(const HermitianOperator& op);

/// Smallest eigenvalue of the Dirichlet compression of D^2 onto the given
/// basis indices (sections vanishing outside).
double compressed_bottom(const HermitianOperator& op, const std::vector<int64_t>& keep);

/// Lanczos on D^2 restricted to one parity block; exposed for tests.
std::vector<double> lanczos_block_low(const HermitianOperator& op, int parity, int64_t k,
                                      int64_t iter_cap = 0);

}  // namespace fiberloc::spectral
