#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "core/grid.hpp"

namespace fiberloc::fib {

/// Rational subtorus of T^n given by primitive integer generators (rows).
struct FiberSubgroup {
    std::vector<std::vector<int64_t>> generators;  // rows in Z^n, may be empty (rank 0)

    int rank() const { return static_cast<int>(generators.size()); }
    /// Checks primitivity (content 1 per row) and Q-linear independence.
    void validate(int torus_dims) const;
};

/// Finite subgroup of Z_{N_1} x ... x Z_{N_n}: the discrete trace of a
/// rational subtorus on the grid.
class DiscreteSubgroup {
public:
    DiscreteSubgroup() = default;

    /// Subgroup generated by the reductions of `sub.generators` mod N.
    /// Verifies divisibility compatibility: the generated subgroup must agree
    /// with the full grid trace {x : <v, x/N> in Z for all conormals v} of the
    /// subtorus. Throws ConstructionError for incompatible (generators, N).
    static DiscreteSubgroup from_subtorus(const FiberSubgroup& sub,
                                          const std::vector<int>& torus_sites);

    /// Subgroup generated directly by the given shifts (no subtorus check).
    static DiscreteSubgroup generated(const std::vector<std::vector<int>>& shifts,
                                      const std::vector<int>& torus_sites);

    int64_t order() const { return static_cast<int64_t>(elements_.size()); }
    const std::vector<std::vector<int>>& elements() const { return elements_; }

    bool contains_element(const std::vector<int>& shift) const;
    bool contains(const DiscreteSubgroup& other) const;
    DiscreteSubgroup intersect(const DiscreteSubgroup& other) const;
    friend bool operator==(const DiscreteSubgroup& a, const DiscreteSubgroup& b) {
        return a.elements_ == b.elements_;
    }

    /// Orbit of a site under torus translation by all subgroup elements.
    std::vector<int64_t> orbit(const DiscreteModel& m, int64_t site) const;
    /// Saturates a mask: union of orbits of its members.
    SiteMask saturate(const DiscreteModel& m, const SiteMask& mask) const;
    bool is_saturated(const DiscreteModel& m, const SiteMask& mask) const;

private:
    std::vector<int> sites_;                  // torus grid sizes
    std::vector<std::vector<int>> elements_;  // sorted, includes identity
};

/// Integer basis of {v in Z^n : <v, g> = 0 for all generator rows g}.
std::vector<std::vector<int64_t>> conormal_lattice(const FiberSubgroup& sub, int torus_dims);

}  // namespace fiberloc::fib
