#include "spectral/index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace fiberloc::spectral {

namespace {

struct Pooled {
    std::vector<GradedEigenvalue> eigs;  // sorted
    bool complete = false;               // full spectra available
};

void parallel_over(int64_t n, int threads, const std::function<void(int64_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            int64_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int use = std::min<int64_t>(threads, n);
    pool.reserve(use);
    for (int i = 0; i < use; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

Pooled pool_spectra(const std::vector<const HermitianOperator*>& ops, int threads) {
    Pooled out;
    out.complete = true;
    std::vector<std::vector<GradedEigenvalue>> per(ops.size());
    std::vector<uint8_t> complete(ops.size(), 1);
    parallel_over(static_cast<int64_t>(ops.size()), threads, [&](int64_t i) {
        const HermitianOperator& op = *ops[i];
        if (op.dim() < 3000) {
            per[i] = full_spectrum(op);
        } else {
            per[i] = low_spectrum(op, std::min<int64_t>(op.dim(), 24));
            complete[i] = 0;
        }
    });
    for (size_t i = 0; i < ops.size(); ++i) {
        out.eigs.insert(out.eigs.end(), per[i].begin(), per[i].end());
        if (!complete[i]) out.complete = false;
    }
    std::sort(out.eigs.begin(), out.eigs.end(),
              [](const GradedEigenvalue& a, const GradedEigenvalue& b) {
                  return a.lambda < b.lambda;
              });
    return out;
}

}  // namespace

IndexReport graded_index(const std::vector<const HermitianOperator*>& ops,
                         const IndexOptions& opts) {
    if (ops.empty()) throw Error("graded_index: no operators");
    Pooled pooled = pool_spectra(ops, opts.threads);
    const auto& w = pooled.eigs;
    if (w.empty()) throw Error("graded_index: empty spectrum");

    IndexReport rep;
    double scale;
    if (pooled.complete) {
        scale = w[w.size() / 2].lambda;  // spectral median
    } else {
        scale = w.back().lambda;  // largest computed low eigenvalue
    }
    if (scale <= 0.0) scale = 1.0;
    double sentinel = 1e-8 * scale;

    size_t cut = 0;
    double best_ratio = 0.0;
    if (opts.lambda_cut) {
        double lc = *opts.lambda_cut;
        while (cut < w.size() && w[cut].lambda < lc) ++cut;
        double below = cut == 0 ? sentinel : std::max(w[cut - 1].lambda, sentinel);
        double above = cut == w.size() ? scale : w[cut].lambda;
        best_ratio = above / below;
        rep.lambda_cut = lc;
    } else {
        // everything at sentinel level or below is near-kernel unconditionally
        size_t base_cut = 0;
        while (base_cut < w.size() && w[base_cut].lambda <= sentinel) ++base_cut;

        // candidate: the near-kernel is exactly the sub-sentinel prefix; only
        // admissible when the rest of the spectrum starts well clear of the
        // sentinel band
        cut = base_cut;
        if (base_cut < w.size() && w[base_cut].lambda >= 1e-4 * scale) {
            best_ratio = w[base_cut].lambda / sentinel;
        }
        // candidates: largest multiplicative jump between consecutive
        // eigenvalues below the median
        for (size_t i = std::max<size_t>(base_cut, 1); i < w.size(); ++i) {
            if (w[i].lambda > scale * (1.0 + 1e-12)) break;
            double below = std::max(w[i - 1].lambda, sentinel);
            double ratio = w[i].lambda / below;
            if (ratio > best_ratio) {
                best_ratio = ratio;
                cut = i;
            }
        }
        if (cut == base_cut && best_ratio == 0.0) {
            // nothing above the sentinel: the whole pool is near-kernel
            if (base_cut == w.size()) {
                cut = w.size();
                best_ratio = scale / sentinel;
            }
        }
        double edge = cut == 0 ? sentinel : w[cut - 1].lambda;
        // eigenvalues within 1e-9 of the gap edge count as below the cut
        while (cut < w.size() && cut > 0 &&
               w[cut].lambda <= edge + 1e-9 * std::max(1.0, edge)) {
            rep.tie_flagged = true;
            ++cut;
        }
        double below = cut == 0 ? sentinel : std::max(w[cut - 1].lambda, sentinel);
        double above = cut == w.size() ? scale : w[cut].lambda;
        rep.lambda_cut = std::sqrt(std::max(below, sentinel) * std::max(above, sentinel));
    }

    rep.gap_ratio = best_ratio;
    rep.reliable = best_ratio >= opts.gap_floor;
    for (size_t i = 0; i < cut; ++i) {
        if (w[i].parity == 0)
            ++rep.dim_even;
        else
            ++rep.dim_odd;
    }
    rep.super_dim = rep.dim_even - rep.dim_odd;
    int keep = std::min<int>(opts.head, static_cast<int>(w.size()));
    for (int i = 0; i < keep; ++i) rep.eigen_head.push_back(w[i].lambda);
    if (!rep.reliable && opts.throw_on_unreliable)
        throw UnreliableGap("no spectral gap with ratio >= " + std::to_string(opts.gap_floor));
    return rep;
}

IndexReport graded_index(const witten::ModeFamily& family, const IndexOptions& opts) {
    std::vector<const HermitianOperator*> ops;
    for (const auto& mo : family.modes) ops.push_back(&mo.op);
    IndexReport rep = graded_index(ops, opts);
    rep.model = family.label;
    if (!family.modes.empty()) rep.t = family.modes.front().t;
    return rep;
}

GapCertificate spectral_gap(const witten::ModeFamily& family, double r_lo, double r_hi) {
    GapCertificate cert;
    cert.lambda0_estimate = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& mo : family.modes) {
        std::vector<int64_t> keep;
        for (size_t i = 0; i < mo.x.size(); ++i) {
            if (mo.x[i] >= r_lo && mo.x[i] <= r_hi) keep.push_back(static_cast<int64_t>(i));
        }
        if (keep.empty()) continue;
        any = true;
        cert.kept_dofs += static_cast<int64_t>(keep.size());
        cert.lambda0_estimate =
            std::min(cert.lambda0_estimate, compressed_bottom(mo.op, keep));
    }
    if (!any) throw Error("spectral_gap: mask selects no sites");
    return cert;
}

ScanResult deformation_scan(const witten::CylinderModel& base, const std::vector<double>& ts,
                            const IndexOptions& opts) {
    ScanResult out;
    for (double t : ts) {
        witten::CylinderModel m = base;
        m.t = t;
        IndexReport rep = graded_index(witten::assemble_cylinder(m), opts);
        rep.t = t;
        out.reports.push_back(std::move(rep));
    }
    std::optional<int64_t> agreed;
    for (size_t i = 0; i < out.reports.size(); ++i) {
        const auto& rep = out.reports[i];
        if (!rep.reliable) continue;
        if (!out.t_star || ts[i] < *out.t_star) out.t_star = ts[i];
        if (!agreed) {
            agreed = rep.super_dim;
        } else if (*agreed != rep.super_dim) {
            out.consistent = false;
        }
    }
    return out;
}

ExcisionRecord excision_sum(const witten::CylinderModel& base,
                            const std::vector<std::pair<double, double>>& windows,
                            const IndexOptions& opts) {
    for (const auto& [a, b] : windows) {
        if (std::abs(a - std::round(a)) < 1e-9 || std::abs(b - std::round(b)) < 1e-9)
            throw Error("excision: window boundary at an integer radius");
    }
    ExcisionRecord rec;
    rec.global = graded_index(witten::assemble_cylinder(base), opts);
    double total_len = base.r_max - base.r_min;
    for (const auto& [a, b] : windows) {
        witten::CylinderModel sub = base;
        sub.r_min = a;
        sub.r_max = b;
        sub.radial_sites =
            std::max(32, static_cast<int>(std::lround(base.radial_sites * (b - a) / total_len)));
        IndexReport rep = graded_index(witten::assemble_cylinder(sub), opts);
        rec.window_sum += rep.super_dim;
        rec.windows.push_back(std::move(rep));
    }
    bool all_reliable = rec.global.reliable;
    for (const auto& w : rec.windows) all_reliable = all_reliable && w.reliable;
    rec.equal = all_reliable && rec.window_sum == rec.global.super_dim;
    return rec;
}

namespace {

/// Near-zero graded counts of a single operator, via the same gap detector.
struct NearZero {
    int64_t even = 0, odd = 0;
    bool reliable = false;
};

NearZero near_zero_counts(const HermitianOperator& op, const IndexOptions& opts) {
    IndexReport rep = graded_index(std::vector<const HermitianOperator*>{&op}, opts);
    return {rep.dim_even, rep.dim_odd, rep.reliable};
}

}  // namespace

ProductRecord product_with_fiber(const witten::ModeFamily& a, const HermitianOperator& fiber,
                                 const IndexOptions& opts) {
    ProductRecord rec;
    rec.factor_a = graded_index(a, opts);
    rec.factor_b = graded_index(std::vector<const HermitianOperator*>{&fiber}, opts);
    rec.combined_reliable = rec.factor_a.reliable && rec.factor_b.reliable;

    NearZero nb = near_zero_counts(fiber, opts);
    int64_t even = 0, odd = 0;
    for (const auto& mo : a.modes) {
        NearZero na = near_zero_counts(mo.op, opts);
        even += na.even * nb.even + na.odd * nb.odd;
        odd += na.even * nb.odd + na.odd * nb.even;
    }
    rec.combined_super_dim = even - odd;

    // spot-check by explicit graded tensor solves on the smallest modes
    int checked = 0;
    for (const auto& mo : a.modes) {
        if (mo.op.dim() * fiber.dim() >= 3000 || checked >= 3) continue;
        HermitianOperator c = graded_tensor_sum(mo.op, fiber);
        NearZero na = near_zero_counts(mo.op, opts);
        NearZero nc = near_zero_counts(c, opts);
        int64_t want_even = na.even * nb.even + na.odd * nb.odd;
        int64_t want_odd = na.even * nb.odd + na.odd * nb.even;
        if (nc.even != want_even || nc.odd != want_odd) rec.verified_ok = false;
        ++checked;
    }
    rec.verified_pairs = checked;

    // anti-commutation of the lifted summands on a representative pair
    const HermitianOperator* smallest = &a.modes.front().op;
    for (const auto& mo : a.modes) {
        if (mo.op.dim() < smallest->dim()) smallest = &mo.op;
    }
    rec.anticommutation_residual =
        anticommutator_max_entry(lift_first(*smallest, fiber), lift_second(*smallest, fiber));
    return rec;
}

ProductRecord product_of_families(const witten::ModeFamily& a, const witten::ModeFamily& b,
                                  const IndexOptions& opts) {
    ProductRecord rec;
    rec.factor_a = graded_index(a, opts);
    rec.factor_b = graded_index(b, opts);
    rec.combined_reliable = rec.factor_a.reliable && rec.factor_b.reliable;

    std::vector<NearZero> nza, nzb;
    for (const auto& mo : a.modes) nza.push_back(near_zero_counts(mo.op, opts));
    for (const auto& mo : b.modes) nzb.push_back(near_zero_counts(mo.op, opts));

    int64_t even = 0, odd = 0;
    for (const auto& na : nza) {
        for (const auto& nb : nzb) {
            even += na.even * nb.even + na.odd * nb.odd;
            odd += na.even * nb.odd + na.odd * nb.even;
        }
    }
    rec.combined_super_dim = even - odd;

    // verify a few mode pairs (those hosting near-kernels, plus one empty)
    int checked = 0;
    for (size_t i = 0; i < a.modes.size() && checked < 3; ++i) {
        for (size_t j = 0; j < b.modes.size() && checked < 3; ++j) {
            bool interesting = (nza[i].even + nza[i].odd) > 0 && (nzb[j].even + nzb[j].odd) > 0;
            if (!interesting && checked > 0) continue;
            const auto& oa = a.modes[i].op;
            const auto& ob = b.modes[j].op;
            if (oa.dim() * ob.dim() >= 3000) continue;
            HermitianOperator c = graded_tensor_sum(oa, ob);
            NearZero nc = near_zero_counts(c, opts);
            int64_t want_even = nza[i].even * nzb[j].even + nza[i].odd * nzb[j].odd;
            int64_t want_odd = nza[i].even * nzb[j].odd + nza[i].odd * nzb[j].even;
            if (nc.even != want_even || nc.odd != want_odd) rec.verified_ok = false;
            ++checked;
        }
    }
    rec.verified_pairs = checked;

    const HermitianOperator* sa = &a.modes.front().op;
    const HermitianOperator* sb = &b.modes.front().op;
    for (const auto& mo : a.modes)
        if (mo.op.dim() < sa->dim()) sa = &mo.op;
    for (const auto& mo : b.modes)
        if (mo.op.dim() < sb->dim()) sb = &mo.op;
    rec.anticommutation_residual =
        anticommutator_max_entry(lift_first(*sa, *sb), lift_second(*sa, *sb));
    return rec;
}

}  // namespace fiberloc::spectral
