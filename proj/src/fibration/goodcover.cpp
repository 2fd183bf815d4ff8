#include "fibration/goodcover.hpp"

namespace fiberloc::fib {

namespace {

/// Full torus-translation orbit of a site (the G-orbit of the model).
SiteMask torus_orbit_saturate(const DiscreteModel& m, const SiteMask& mask) {
    SiteMask out = mask;
    // saturate one torus axis at a time
    for (int k = 0; k < m.torus_dims(); ++k) {
        SiteMask next = out;
        for (int64_t s = 0; s < out.size(); ++s) {
            if (!out.test(s)) continue;
            int64_t cur = s;
            for (int step = 1; step < m.torus_sites(k); ++step) {
                cur = m.neighbor(cur, m.base_dims() + k, 1);
                next.set(cur);
            }
        }
        out = next;
    }
    return out;
}

bool torus_orbit_constant(const DiscreteModel& m, const std::vector<int>& per_site) {
    for (int64_t s = 0; s < m.site_count(); ++s) {
        for (int k = 0; k < m.torus_dims(); ++k) {
            int64_t t = m.neighbor(s, m.base_dims() + k, 1);
            if (per_site[t] != per_site[s]) return false;
        }
    }
    return true;
}

}  // namespace

StabilizerAssignment::StabilizerAssignment(const DiscreteModel& model,
                                           std::vector<int> acting_torus_sites,
                                           std::vector<FiberSubgroup> subgroups,
                                           std::vector<int> per_site)
    : per_site_(std::move(per_site)) {
    for (const auto& s : subgroups)
        discrete_.push_back(DiscreteSubgroup::from_subtorus(s, acting_torus_sites));

    // reverse-inclusion order: containment implies earlier index
    for (int i = 0; i < subgroup_count(); ++i) {
        for (int j = 0; j < i; ++j) {
            if (discrete_[j].order() != discrete_[i].order() && discrete_[i].contains(discrete_[j]))
                throw ConstructionError("stabilizer subgroups violate reverse-inclusion order");
        }
    }
    if (static_cast<int64_t>(per_site_.size()) != model.site_count())
        throw ConstructionError("per-site stabilizer table size mismatch");
    for (int v : per_site_) {
        if (v < 0 || v >= subgroup_count())
            throw ConstructionError("per-site stabilizer index out of range");
    }
    if (!torus_orbit_constant(model, per_site_))
        throw ConstructionError("stabilizer assignment is not constant on orbits");
}

SiteMask StabilizerAssignment::fixed_set(const DiscreteModel& model, int i) const {
    SiteMask out(model.site_count());
    for (int64_t s = 0; s < model.site_count(); ++s) {
        if (discrete_[per_site_[s]].contains(discrete_[i])) out.set(s);
    }
    return out;
}

std::vector<SiteMask> good_open_cover(const DiscreteModel& model,
                                      const StabilizerAssignment& stab, int margin) {
    if (margin < 1) throw Error("good_open_cover: margin must be positive");
    int m = stab.subgroup_count();
    // decreasing level family V_{i}^{(j)} for j = i..m, stored as
    // v[i][j - i]; level j is the geodesic (m - j + 1) margin dilation of the
    // core K_i inside its admissible zone, so level m is the tightest and
    // level i the widest (the closure of level j sits inside level j-1).
    std::vector<std::vector<SiteMask>> v(m);

    for (int i0 = 0; i0 < m; ++i0) {
        // core: fixed set of H_{i0} minus the tight covers of strictly larger
        // groups
        SiteMask k = stab.fixed_set(model, i0);
        for (int j = 0; j < i0; ++j) {
            if (stab.subgroup(j).order() != stab.subgroup(i0).order() &&
                stab.subgroup(j).contains(stab.subgroup(i0)))
                k = k.minus(v[j][m - j]);
        }
        // exclusion: level (i0 - 1) of every incomparable earlier family
        // (the discrete closure of its level i0)
        SiteMask l(model.site_count());
        for (int j = 0; j < i0; ++j) {
            if (!stab.subgroup(j).contains(stab.subgroup(i0)) &&
                !stab.subgroup(i0).contains(stab.subgroup(j)))
                l |= v[j][(i0 - 1) - j];
        }
        SiteMask allowed(model.site_count());
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (stab.subgroup(i0).contains(stab.subgroup(stab.stabilizer_index(s))))
                allowed.set(s);
        }
        allowed = allowed.minus(l);
        if (!allowed.contains(k))
            throw ConstructionError("good_open_cover: inconsistent stabilizer assignment");

        v[i0].resize(m - i0 + 1);
        for (int j = m; j >= i0; --j) {
            int depth = (m - j + 1) * margin;
            v[i0][j - i0] = dilate_within(model, k, depth, allowed);
        }
    }

    // the cover takes the tightest level of every family
    std::vector<SiteMask> cover;
    for (int i = 0; i < m; ++i) cover.push_back(v[i][m - i]);
    // G-orbit saturation is automatic for saturated cores; enforce anyway
    for (auto& c : cover) c = torus_orbit_saturate(model, c);

    SiteMask covered(model.site_count());
    for (const auto& c : cover) covered |= c;
    if (covered.count() != model.site_count())
        throw ConstructionError("good_open_cover: construction failed to cover the model");
    return cover;
}

GoodCoverCheck check_good_cover(const DiscreteModel& model, const StabilizerAssignment& stab,
                                const std::vector<SiteMask>& cover) {
    GoodCoverCheck out;
    SiteMask covered(model.site_count());
    for (const auto& c : cover) covered |= c;
    for (int64_t s = 0; s < model.site_count(); ++s) {
        if (!covered.test(s)) {
            out.covers = false;
            out.witness_site = s;
        }
    }
    for (size_t i = 0; i < cover.size(); ++i) {
        SiteMask sat = torus_orbit_saturate(model, cover[i]);
        if (!(sat == cover[i])) out.invariant = false;
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (cover[i].test(s) &&
                !stab.subgroup(static_cast<int>(i))
                     .contains(stab.subgroup(stab.stabilizer_index(s)))) {
                out.stabilizer_bound = false;
                out.witness_site = s;
            }
        }
        for (size_t j = i + 1; j < cover.size(); ++j) {
            SiteMask overlap = cover[i];
            overlap &= cover[j];
            if (overlap.empty()) continue;
            bool nested = stab.subgroup(static_cast<int>(i))
                              .contains(stab.subgroup(static_cast<int>(j))) ||
                          stab.subgroup(static_cast<int>(j))
                              .contains(stab.subgroup(static_cast<int>(i)));
            if (!nested) {
                out.nested_overlaps = false;
                out.witness_site = overlap.sites().front();
            }
        }
    }
    return out;
}

}  // namespace fiberloc::fib
