#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fibration/fibration.hpp"

namespace fiberloc::fib {

/// Flat-bundle holonomy data: one field per fiber-rank component per chart,
/// constant along that chart's fibers.
struct HolonomyAssignment {
    std::vector<std::vector<ScalarField>> per_chart;  // [chart][component]
};

/// Two potentials on two charts, the R x S^1 example shape: acyclicity holds
/// iff both stay off the integers and so does every convex combination on the
/// overlap.
struct PotentialPair {
    ScalarField f_alpha;
    ScalarField f_beta;
    int chart_alpha = 0;
    int chart_beta = 1;
};

struct CertRecord {
    std::string condition;  // "fiber-kernel", "nesting", "potential", "convex-combination"
    std::string subject;    // chart id or pair
    bool pass = true;
    int64_t witness_site = -1;
    double witness_value = 0.0;
};

struct CertReport {
    std::vector<CertRecord> records;
    bool certified = true;
};

/// Certifies strong acyclicity for a flat nested system: condition 1 via
/// nonvanishing holonomy per fiber, condition 2 structurally via chart
/// nesting on overlaps.
CertReport acyclicity_certificate(const CompatibleFibration& fib,
                                  const HolonomyAssignment& holonomy);

/// Certificate for the two-potential example.
CertReport acyclicity_certificate(const CompatibleFibration& fib, const PotentialPair& pots);

}  // namespace fiberloc::fib
