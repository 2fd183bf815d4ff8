#pragma once

#include <vector>

#include "core/grid.hpp"
#include "fibration/subgroup.hpp"

namespace fiberloc::fib {

/// Lattice of acting-torus subgroups with a per-site stabilizer assignment.
/// The acting torus is discretized on its own grid (it need not be the
/// model's fiber torus; a moment-image model has none). Subgroups are
/// ordered so that H_i containing H_j forces i <= j (validated); per-site
/// indices must be constant on full model-torus orbits.
class StabilizerAssignment {
public:
    StabilizerAssignment(const DiscreteModel& model, std::vector<int> acting_torus_sites,
                         std::vector<FiberSubgroup> subgroups, std::vector<int> per_site);

    int subgroup_count() const { return static_cast<int>(discrete_.size()); }
    const DiscreteSubgroup& subgroup(int i) const { return discrete_[i]; }
    int stabilizer_index(int64_t site) const { return per_site_[site]; }

    /// Fixed set M^{H_i} = sites whose stabilizer contains H_i.
    SiteMask fixed_set(const DiscreteModel& model, int i) const;

private:
    std::vector<DiscreteSubgroup> discrete_;
    std::vector<int> per_site_;
};

/// Inductive good open cover {V_H}: each V_H torus-invariant, stabilizers
/// inside V_H contained in H, and overlapping V's have nested subgroups.
/// `margin` is the dilation radius standing in for open-neighborhood slack.
std::vector<SiteMask> good_open_cover(const DiscreteModel& model,
                                      const StabilizerAssignment& stab, int margin);

struct GoodCoverCheck {
    bool covers = true;
    bool invariant = true;        // condition 1
    bool stabilizer_bound = true; // condition 2
    bool nested_overlaps = true;  // condition 3
    int64_t witness_site = -1;
};

/// Exhaustive post-hoc verification of the three cover conditions.
GoodCoverCheck check_good_cover(const DiscreteModel& model, const StabilizerAssignment& stab,
                                const std::vector<SiteMask>& cover);

}  // namespace fiberloc::fib
