#pragma once

#include <vector>

#include "fibration/fibration.hpp"

namespace fiberloc::fib {

/// I(f) = I_1 ... I_n(f) with I_alpha(f) = (1 - tau_alpha) f + tau_alpha
/// (fiber mean of f); the highest-rank chart is applied first. When
/// `cutoffs` is empty the defaults are used: tau = 1 on V' and on the 1-step
/// erosion of V'', 1/2 on the rest of V'', 0 outside.
ScalarField average(const CompatibleFibration& fib, const ScalarField& f,
                    const std::vector<ScalarField>& cutoffs = {});

/// Default cutoff family tau_alpha (exposed for tests and configs).
std::vector<ScalarField> default_cutoffs(const CompatibleFibration& fib);

/// rho_alpha = I(phi_alpha) / sqrt(sum_beta I(phi_beta)^2); seeds must be a
/// nonnegative partition of unity subordinate to the inner covering.
std::vector<ScalarField> admissible_partition_of_unity(const CompatibleFibration& fib,
                                                       const std::vector<ScalarField>& bump_seeds);

/// Canonical seeds phi_alpha = 1_{V'_alpha} / #covering charts.
std::vector<ScalarField> default_bump_seeds(const CompatibleFibration& fib);

/// True if f is constant along every chart fiber inside the inner covering.
bool is_admissible_function(const CompatibleFibration& fib, const ScalarField& f,
                            double tol = 1e-12);

}  // namespace fiberloc::fib
