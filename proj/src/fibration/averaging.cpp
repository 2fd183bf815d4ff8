#include "fibration/averaging.hpp"

#include <cmath>

namespace fiberloc::fib {

std::vector<ScalarField> default_cutoffs(const CompatibleFibration& fib) {
    std::vector<ScalarField> out;
    const auto& model = fib.model();
    for (int i = 0; i < fib.chart_count(); ++i) {
        SiteMask one = erode(model, fib.middle_mask(i), 1);
        one |= fib.inner_mask(i);
        ScalarField tau(model.site_count(), 0.0);
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (one.test(s))
                tau[s] = 1.0;
            else if (fib.middle_mask(i).test(s))
                tau[s] = 0.5;
        }
        out.push_back(std::move(tau));
    }
    return out;
}

ScalarField average(const CompatibleFibration& fib, const ScalarField& f,
                    const std::vector<ScalarField>& cutoffs) {
    const auto& model = fib.model();
    if (f.size() != model.site_count()) throw Error("average: field size mismatch");
    const std::vector<ScalarField>& taus = cutoffs.empty() ? default_cutoffs(fib) : cutoffs;
    if (taus.size() != static_cast<size_t>(fib.chart_count()))
        throw Error("average: one cutoff per chart required");
    for (const auto& t : taus)
        if (t.size() != model.site_count()) throw Error("average: cutoff size mismatch");

    ScalarField g = f;
    // I = I_1 o ... o I_n, so the last (highest-rank) chart acts first
    for (int i = fib.chart_count() - 1; i >= 0; --i) {
        const ScalarField& tau = taus[i];
        ScalarField next = g;
        for (int64_t s = 0; s < model.site_count(); ++s) {
            double t = tau[s];
            if (t == 0.0) continue;
            auto orb = fib.subgroup(i).orbit(model, s);
            double mean = 0.0;
            for (int64_t o : orb) mean += g[o];
            mean /= static_cast<double>(orb.size());
            next[s] = (1.0 - t) * g[s] + t * mean;
        }
        g = std::move(next);
    }
    return g;
}

std::vector<ScalarField> default_bump_seeds(const CompatibleFibration& fib) {
    const auto& model = fib.model();
    std::vector<ScalarField> seeds(fib.chart_count(),
                                   ScalarField(model.site_count(), 0.0));
    for (int64_t s = 0; s < model.site_count(); ++s) {
        int n = 0;
        for (int i = 0; i < fib.chart_count(); ++i)
            if (fib.inner_mask(i).test(s)) ++n;
        if (n == 0) continue;
        for (int i = 0; i < fib.chart_count(); ++i)
            if (fib.inner_mask(i).test(s)) seeds[i][s] = 1.0 / n;
    }
    return seeds;
}

std::vector<ScalarField> admissible_partition_of_unity(
    const CompatibleFibration& fib, const std::vector<ScalarField>& bump_seeds) {
    const auto& model = fib.model();
    if (bump_seeds.size() != static_cast<size_t>(fib.chart_count()))
        throw Error("partition of unity: one seed per chart required");
    for (int64_t s = 0; s < model.site_count(); ++s) {
        double sum = 0.0;
        for (const auto& phi : bump_seeds) sum += phi[s];
        if (!fib.domain().test(s)) continue;
        if (std::abs(sum - 1.0) > 1e-12)
            throw Error("partition of unity: seeds do not sum to one");
    }
    for (int i = 0; i < fib.chart_count(); ++i) {
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (bump_seeds[i][s] < 0.0) throw Error("partition of unity: negative seed");
            if (bump_seeds[i][s] > 0.0 && !fib.inner_mask(i).test(s))
                throw Error("partition of unity: seed not subordinate to the inner covering");
        }
    }

    std::vector<ScalarField> averaged;
    for (int i = 0; i < fib.chart_count(); ++i)
        averaged.push_back(average(fib, bump_seeds[i]));

    std::vector<ScalarField> rho(fib.chart_count(), ScalarField(model.site_count(), 0.0));
    for (int64_t s = 0; s < model.site_count(); ++s) {
        if (!fib.domain().test(s)) continue;
        double q = 0.0;
        for (const auto& a : averaged) q += a[s] * a[s];
        if (q <= 0.0) throw Error("partition of unity: averaged seeds vanish at a site");
        double inv = 1.0 / std::sqrt(q);
        for (int i = 0; i < fib.chart_count(); ++i) rho[i][s] = averaged[i][s] * inv;
    }
    return rho;
}

bool is_admissible_function(const CompatibleFibration& fib, const ScalarField& f, double tol) {
    const auto& model = fib.model();
    for (int i = 0; i < fib.chart_count(); ++i) {
        for (int64_t s = 0; s < model.site_count(); ++s) {
            if (!fib.inner_mask(i).test(s)) continue;
            for (int64_t o : fib.subgroup(i).orbit(model, s)) {
                if (std::abs(f[o] - f[s]) > tol) return false;
            }
        }
    }
    return true;
}

}  // namespace fiberloc::fib
