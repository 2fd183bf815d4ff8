#include "fibration/certificate.hpp"

#include <cmath>

namespace fiberloc::fib {

namespace {

bool near_integer(double x, double tol = 1e-12) {
    return std::abs(x - std::round(x)) <= tol;
}

}  // namespace

CertReport acyclicity_certificate(const CompatibleFibration& fib,
                                  const HolonomyAssignment& holonomy) {
    CertReport rep;
    const auto& model = fib.model();
    if (holonomy.per_chart.size() != static_cast<size_t>(fib.chart_count()))
        throw Error("acyclicity_certificate: holonomy missing for some chart");

    for (int i = 0; i < fib.chart_count(); ++i) {
        const auto& comps = holonomy.per_chart[i];
        if (static_cast<int>(comps.size()) != fib.chart(i).fiber.rank())
            throw Error("acyclicity_certificate: holonomy rank mismatch for chart '" +
                        fib.chart(i).id + "'");
        for (const auto& c : comps) {
            if (c.size() != model.site_count())
                throw Error("acyclicity_certificate: holonomy field size mismatch");
        }
        bool pass = true;
        int64_t witness = -1;
        double witness_value = 0.0;
        for (int64_t s = 0; s < model.site_count() && pass; ++s) {
            if (!fib.chart_mask(i).test(s)) continue;
            // constancy along the fiber
            for (int64_t o : fib.subgroup(i).orbit(model, s)) {
                for (const auto& c : comps) {
                    if (std::abs(c[o] - c[s]) > 1e-12)
                        throw Error("acyclicity_certificate: holonomy not constant on fibers");
                }
            }
            // the flat fiber bundle has zero kernel iff some component is
            // non-integral
            bool trivially_flat = true;
            for (const auto& c : comps) {
                if (!near_integer(c[s])) trivially_flat = false;
            }
            if (comps.empty()) trivially_flat = false;  // rank-0 chart: point fibers
            if (trivially_flat) {
                pass = false;
                witness = s;
                witness_value = comps.empty() ? 0.0 : comps[0][s];
            }
        }
        rep.records.push_back({"fiber-kernel", fib.chart(i).id, pass, witness, witness_value});
        if (!pass) rep.certified = false;
    }

    // condition 2: anti-commutators are nonnegative along fibers when the
    // overlap orbits nest and the connections are fiberwise flat
    for (int i = 0; i < fib.chart_count(); ++i) {
        for (int j = i + 1; j < fib.chart_count(); ++j) {
            SiteMask overlap = fib.chart_mask(i);
            overlap &= fib.chart_mask(j);
            if (overlap.empty()) continue;
            bool nested = fib.subgroup(i).contains(fib.subgroup(j)) ||
                          fib.subgroup(j).contains(fib.subgroup(i));
            rep.records.push_back({"nesting", fib.chart(i).id + "|" + fib.chart(j).id, nested,
                                   nested ? -1 : overlap.sites().front(), 0.0});
            if (!nested) rep.certified = false;
        }
    }
    return rep;
}

CertReport acyclicity_certificate(const CompatibleFibration& fib, const PotentialPair& pots) {
    CertReport rep;
    const auto& model = fib.model();
    const SiteMask& ma = fib.chart_mask(pots.chart_alpha);
    const SiteMask& mb = fib.chart_mask(pots.chart_beta);

    auto check_potential = [&](const ScalarField& f, const SiteMask& mask, const std::string& id) {
        bool pass = true;
        int64_t witness = -1;
        double wv = 0.0;
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (!mask.test(s)) continue;
            if (near_integer(f[s])) {
                pass = false;
                witness = s;
                wv = f[s];
                break;
            }
        }
        rep.records.push_back({"potential", id, pass, witness, wv});
        if (!pass) rep.certified = false;
    };
    check_potential(pots.f_alpha, ma, fib.chart(pots.chart_alpha).id);
    check_potential(pots.f_beta, mb, fib.chart(pots.chart_beta).id);

    // convex combinations on the overlap must avoid the integers: the closed
    // interval between the two values may not contain one
    {
        SiteMask overlap = ma;
        overlap &= mb;
        bool pass = true;
        int64_t witness = -1;
        double wv = 0.0;
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (!overlap.test(s)) continue;
            double lo = std::min(pots.f_alpha[s], pots.f_beta[s]);
            double hi = std::max(pots.f_alpha[s], pots.f_beta[s]);
            double k = std::ceil(lo - 1e-12);
            if (k <= hi + 1e-12) {
                pass = false;
                witness = s;
                wv = k;
                break;
            }
        }
        rep.records.push_back({"convex-combination",
                               fib.chart(pots.chart_alpha).id + "|" +
                                   fib.chart(pots.chart_beta).id,
                               pass, witness, wv});
        if (!pass) rep.certified = false;
    }
    return rep;
}

}  // namespace fiberloc::fib
