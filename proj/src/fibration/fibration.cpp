#include "fibration/fibration.hpp"

#include <algorithm>
#include <numeric>

namespace fiberloc::fib {

CompatibleFibration::CompatibleFibration(DiscreteModel model, std::vector<Chart> charts,
                                         std::optional<std::vector<Region>> inner_regions,
                                         std::optional<SiteMask> domain)
    : model_(std::move(model)), charts_(std::move(charts)) {
    if (charts_.empty()) throw ConstructionError("fibration needs at least one chart");
    domain_ = domain ? std::move(*domain) : SiteMask(model_.site_count(), true);
    if (domain_.size() != model_.site_count())
        throw ConstructionError("domain mask size does not match the model");

    // stable order by nondecreasing fiber rank, declaration order breaking ties
    {
        std::vector<size_t> perm(charts_.size());
        std::iota(perm.begin(), perm.end(), size_t{0});
        std::stable_sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
            return charts_[a].fiber.rank() < charts_[b].fiber.rank();
        });
        std::vector<Chart> sorted;
        for (size_t p : perm) sorted.push_back(std::move(charts_[p]));
        charts_ = std::move(sorted);
        if (inner_regions) {
            if (inner_regions->size() != charts_.size())
                throw ConstructionError("inner region count does not match charts");
            std::vector<Region> sorted_inner;
            for (size_t p : perm) sorted_inner.push_back(std::move((*inner_regions)[p]));
            *inner_regions = std::move(sorted_inner);
        }
    }

    std::vector<int> torus_sites;
    for (int k = 0; k < model_.torus_dims(); ++k) torus_sites.push_back(model_.torus_sites(k));

    for (auto& c : charts_) {
        subgroups_.push_back(DiscreteSubgroup::from_subtorus(c.fiber, torus_sites));
        masks_.push_back(c.region.mask(model_));
        if (masks_.back().empty())
            throw ConstructionError("chart '" + c.id + "' selects no sites");
        if (!subgroups_.back().is_saturated(model_, masks_.back()))
            throw ConstructionError("chart '" + c.id + "' region is not fiber-saturated");
    }

    for (const auto& m : masks_) {
        if (!domain_.contains(m)) throw ConstructionError("chart escapes the domain");
    }
    {
        SiteMask covered(model_.site_count());
        for (const auto& m : masks_) covered |= m;
        if (!covered.contains(domain_))
            throw ConstructionError("charts do not cover the domain");
    }

    middle_masks_.reserve(charts_.size());
    for (size_t i = 0; i < charts_.size(); ++i) {
        // V'' = 1-step erosion of V, re-saturated under the chart's own fibers
        SiteMask mid = erode(model_, masks_[i], 1);
        mid = mid.minus(subgroups_[i].saturate(model_, masks_[i].minus(mid)));
        middle_masks_.push_back(mid);
    }

    if (inner_regions) {
        if (inner_regions->size() != charts_.size())
            throw ConstructionError("inner region count does not match charts");
        for (size_t i = 0; i < charts_.size(); ++i) {
            SiteMask m = (*inner_regions)[i].mask(model_);
            if (!masks_[i].contains(m))
                throw ConstructionError("inner region escapes its chart");
            inner_masks_.push_back(std::move(m));
        }
    } else {
        // default shrinking: erode each chart by one step and make the family
        // admissible again with the saturation pass
        std::vector<SiteMask> seeds;
        for (size_t i = 0; i < charts_.size(); ++i) {
            SiteMask s = erode(model_, masks_[i], 1);
            s = s.minus(subgroups_[i].saturate(model_, masks_[i].minus(s)));
            if (s.empty()) s = masks_[i];  // chart too thin to shrink
            seeds.push_back(std::move(s));
        }
        inner_masks_ = saturate_cover(*this, seeds);
    }

    for (size_t i = 0; i < charts_.size(); ++i) {
        if (!middle_masks_[i].contains(inner_masks_[i])) {
            // V'' must sit between V' and V; fall back to V' itself when the
            // one-step erosion is too aggressive
            middle_masks_[i] = inner_masks_[i];
        }
    }

    {
        SiteMask covered(model_.site_count());
        for (const auto& m : inner_masks_) covered |= m;
        if (!covered.contains(domain_))
            throw ConstructionError("inner regions do not cover the domain");
    }
}

ValidationReport validate_fibration(const CompatibleFibration& fib) {
    ValidationReport rep;
    const auto& model = fib.model();
    auto add = [&rep](std::string axiom, std::string pair, bool pass, int64_t witness) {
        rep.records.push_back({std::move(axiom), std::move(pair), pass, witness});
    };

    // condition 1: covering of the domain
    {
        SiteMask covered(model.site_count());
        for (int i = 0; i < fib.chart_count(); ++i) covered |= fib.chart_mask(i);
        int64_t witness = -1;
        for (int64_t s = 0; s < covered.size(); ++s) {
            if (fib.domain().test(s) && !covered.test(s)) {
                witness = s;
                break;
            }
        }
        add("covering", "*", witness < 0, witness);
        if (witness >= 0) rep.valid = false;
    }

    // condition 2: each chart is a fiber bundle over its quotient
    for (int i = 0; i < fib.chart_count(); ++i) {
        bool sat = fib.subgroup(i).is_saturated(model, fib.chart_mask(i));
        add("fiber-bundle", fib.chart(i).id, sat, -1);
        if (!sat) rep.valid = false;
    }

    for (int i = 0; i < fib.chart_count(); ++i) {
        for (int j = i + 1; j < fib.chart_count(); ++j) {
            SiteMask overlap = fib.chart_mask(i);
            overlap &= fib.chart_mask(j);
            if (overlap.empty()) continue;
            std::string pair = fib.chart(i).id + "|" + fib.chart(j).id;

            // condition 3: the overlap is saturated under both fibrations
            {
                bool ok = fib.subgroup(i).is_saturated(model, overlap) &&
                          fib.subgroup(j).is_saturated(model, overlap);
                int64_t witness = -1;
                if (!ok) {
                    SiteMask bad = fib.subgroup(i).saturate(model, overlap);
                    bad |= fib.subgroup(j).saturate(model, overlap);
                    bad = bad.minus(overlap);
                    auto sites = bad.sites();
                    witness = sites.empty() ? -1 : sites.front();
                    rep.valid = false;
                }
                add("overlap-saturation", pair, ok, witness);
            }

            // conditions 4+5: the overlap fibration by the intersected
            // subgroup fibers exactly as the intersection of fibers
            {
                DiscreteSubgroup inter = fib.subgroup(i).intersect(fib.subgroup(j));
                bool ok = true;
                int64_t witness = -1;
                for (int64_t s = 0; s < overlap.size() && ok; ++s) {
                    if (!overlap.test(s)) continue;
                    auto oi = fib.subgroup(i).orbit(model, s);
                    auto oj = fib.subgroup(j).orbit(model, s);
                    std::vector<int64_t> meet;
                    std::set_intersection(oi.begin(), oi.end(), oj.begin(), oj.end(),
                                          std::back_inserter(meet));
                    if (meet != inter.orbit(model, s)) {
                        ok = false;
                        witness = s;
                    }
                }
                add("fiber-intersection", pair, ok, witness);
                if (!ok) rep.valid = false;
            }

            // condition 5': one fiber orbit contains the other on the overlap
            {
                bool nested = fib.subgroup(i).contains(fib.subgroup(j)) ||
                              fib.subgroup(j).contains(fib.subgroup(i));
                int64_t witness = -1;
                if (!nested) {
                    auto sites = overlap.sites();
                    witness = sites.empty() ? -1 : sites.front();
                    rep.good = false;
                }
                add("good-5prime", pair, nested, witness);
            }
        }
    }
    return rep;
}

std::vector<SiteMask> saturate_cover(const CompatibleFibration& fib,
                                     const std::vector<SiteMask>& seeds) {
    if (seeds.size() != static_cast<size_t>(fib.chart_count()))
        throw Error("saturate_cover: one seed per chart required");
    const auto& model = fib.model();
    std::vector<SiteMask> out;
    for (size_t a = 0; a < seeds.size(); ++a) {
        if (!fib.chart_mask(static_cast<int>(a)).contains(seeds[a]))
            throw Error("saturate_cover: seed escapes its chart");
        SiteMask cur = seeds[a];
        for (int k = 0; k < fib.chart_count(); ++k) {
            SiteMask part = cur;
            part &= fib.chart_mask(k);
            cur |= fib.subgroup(k).saturate(model, part);
        }
        out.push_back(std::move(cur));
    }
    return out;
}

std::vector<SiteMask> saturate_cover_bruteforce(const CompatibleFibration& fib,
                                                const std::vector<SiteMask>& seeds) {
    const auto& model = fib.model();
    std::vector<SiteMask> out;
    for (size_t a = 0; a < seeds.size(); ++a) {
        SiteMask cur = seeds[a];
        bool changed = true;
        while (changed) {
            changed = false;
            for (int k = 0; k < fib.chart_count(); ++k) {
                SiteMask part = cur;
                part &= fib.chart_mask(k);
                SiteMask grown = fib.subgroup(k).saturate(model, part);
                grown |= cur;
                if (!(grown == cur)) {
                    cur = grown;
                    changed = true;
                }
            }
        }
        out.push_back(std::move(cur));
    }
    return out;
}

CompatibleFibration restrict_fibration(const CompatibleFibration& fib, const SiteMask& keep) {
    // admissibility of `keep` w.r.t. the inner covering
    for (int i = 0; i < fib.chart_count(); ++i) {
        SiteMask part = keep;
        part &= fib.inner_mask(i);
        if (!fib.subgroup(i).is_saturated(fib.model(), part))
            throw Error("restrict_fibration: region is not admissible");
    }
    // restriction keeps the model and intersects every chart with the region;
    // rebuilt from explicit masks via single-site boxes
    auto to_region = [&](const SiteMask& m) {
        std::vector<IndexBox> boxes;
        for (int64_t s : m.sites()) {
            IndexBox b;
            auto idx = fib.model().coords_of(s);
            b.ranges.resize(fib.model().dims());
            for (int d = 0; d < fib.model().dims(); ++d) b.ranges[d] = {idx[d], idx[d], false};
            boxes.push_back(std::move(b));
        }
        return Region(std::move(boxes));
    };
    std::vector<Chart> charts;
    std::vector<Region> inner;
    for (int i = 0; i < fib.chart_count(); ++i) {
        SiteMask cm = keep;
        cm &= fib.chart_mask(i);
        if (cm.empty()) continue;
        charts.push_back({fib.chart(i).id, to_region(cm), fib.chart(i).fiber});
        SiteMask im = keep;
        im &= fib.inner_mask(i);
        inner.push_back(to_region(im));
    }
    SiteMask dom = keep;
    dom &= fib.domain();
    return CompatibleFibration(fib.model(), std::move(charts), std::move(inner), std::move(dom));
}

}  // namespace fiberloc::fib
