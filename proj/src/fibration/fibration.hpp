#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/grid.hpp"
#include "fibration/subgroup.hpp"

namespace fiberloc::fib {

struct Chart {
    std::string id;
    Region region;
    FiberSubgroup fiber;
};

/// Discrete compatible fibration on an R^p x T^n model: charts with
/// orbit-saturated regions, ordered by nondecreasing fiber rank (ties keep
/// declaration order). Overlap fibrations are derived from subgroup
/// intersections.
class CompatibleFibration {
public:
    /// `domain` restricts the fibration to a subset of model sites (defaults
    /// to all sites); charts must cover the domain.
    CompatibleFibration(DiscreteModel model, std::vector<Chart> charts,
                        std::optional<std::vector<Region>> inner_regions = std::nullopt,
                        std::optional<SiteMask> domain = std::nullopt);

    const DiscreteModel& model() const { return model_; }
    const SiteMask& domain() const { return domain_; }
    int chart_count() const { return static_cast<int>(charts_.size()); }
    const Chart& chart(int i) const { return charts_[i]; }
    const SiteMask& chart_mask(int i) const { return masks_[i]; }
    const DiscreteSubgroup& subgroup(int i) const { return subgroups_[i]; }

    /// V'_alpha: provided inner regions, or the default 1-step erosion made
    /// admissible by the saturation pass.
    const SiteMask& inner_mask(int i) const { return inner_masks_[i]; }
    /// V''_alpha: 1-step erosion of V_alpha; always contains inner_mask.
    const SiteMask& middle_mask(int i) const { return middle_masks_[i]; }

    /// Saturation of `mask` under the fiber orbits of chart i.
    SiteMask saturate_under(int i, const SiteMask& mask) const {
        return subgroups_[i].saturate(model_, mask);
    }

private:
    DiscreteModel model_;
    SiteMask domain_;
    std::vector<Chart> charts_;
    std::vector<SiteMask> masks_;
    std::vector<DiscreteSubgroup> subgroups_;
    std::vector<SiteMask> inner_masks_;
    std::vector<SiteMask> middle_masks_;
};

struct AxiomRecord {
    std::string axiom;    // e.g. "covering", "overlap-saturation", "good-5prime"
    std::string pair;     // chart id or "alpha|beta"
    bool pass = true;
    int64_t witness_site = -1;  // first offending site, -1 if none
};

struct ValidationReport {
    std::vector<AxiomRecord> records;
    bool valid = true;    // conditions 1-5
    bool good = true;     // condition 5'
};

/// Checks the compatible-fibration axioms pairwise and reports goodness
/// (nested fiber orbits on every overlap).
ValidationReport validate_fibration(const CompatibleFibration& fib);

/// Saturation pass V^(k) = pi_k^-1 pi_k(V^(k-1) /\ V_k) u V^(k-1)
/// over charts in order. Seeds must be contained in their charts.
std::vector<SiteMask> saturate_cover(const CompatibleFibration& fib,
                                     const std::vector<SiteMask>& seeds);

/// Brute-force least admissible superset (fixed-point closure); test oracle,
/// also exposed for cross-checking.
std::vector<SiteMask> saturate_cover_bruteforce(const CompatibleFibration& fib,
                                                const std::vector<SiteMask>& seeds);

/// Restriction of a fibration to an admissible region (throws if the region
/// is not admissible for the inner covering).
CompatibleFibration restrict_fibration(const CompatibleFibration& fib, const SiteMask& keep);

}  // namespace fiberloc::fib
