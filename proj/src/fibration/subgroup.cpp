#include "fibration/subgroup.hpp"

#include <algorithm>
#include <numeric>

#include "core/rational.hpp"

namespace fiberloc::fib {

namespace {

/// Reduced row echelon form over Q; returns pivot column per row.
std::vector<int> rref(std::vector<std::vector<Rational>>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && m[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(m[r], m[sel]);
        Rational inv = Rational(1) / m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int64_t row_content(const std::vector<int64_t>& row) {
    int64_t g = 0;
    for (int64_t v : row) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

}  // namespace

void FiberSubgroup::validate(int torus_dims) const {
    for (const auto& row : generators) {
        if (static_cast<int>(row.size()) != torus_dims)
            throw ConstructionError("fiber generator arity does not match torus dimension");
        if (row_content(row) != 1)
            throw ConstructionError("fiber generator is not primitive");
    }
    if (rank() > torus_dims)
        throw ConstructionError("fiber rank exceeds torus dimension");
    // Q-linear independence
    std::vector<std::vector<Rational>> m;
    for (const auto& row : generators) {
        std::vector<Rational> r;
        for (int64_t v : row) r.emplace_back(v);
        m.push_back(std::move(r));
    }
    if (!m.empty() && static_cast<int>(rref(m).size()) != rank())
        throw ConstructionError("fiber generators are linearly dependent");
}

std::vector<std::vector<int64_t>> conormal_lattice(const FiberSubgroup& sub, int torus_dims) {
    // kernel of the generator matrix over Q, denominators cleared
    std::vector<std::vector<Rational>> m;
    for (const auto& row : sub.generators) {
        std::vector<Rational> r;
        for (int64_t v : row) r.emplace_back(v);
        m.push_back(std::move(r));
    }
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(torus_dims, false);
    for (int c : pivots) is_pivot[c] = true;

    std::vector<std::vector<int64_t>> basis;
    for (int free = 0; free < torus_dims; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(torus_dims, Rational(0));
        v[free] = Rational(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        int64_t lcm = 1;
        for (const auto& x : v) lcm = std::lcm(lcm, x.den());
        std::vector<int64_t> row(torus_dims);
        for (int i = 0; i < torus_dims; ++i)
            row[i] = detail::checked_mul(v[i].num(), lcm / v[i].den());
        int64_t g = row_content(row);
        if (g > 1)
            for (auto& x : row) x /= g;
        basis.push_back(std::move(row));
    }
    return basis;
}

DiscreteSubgroup DiscreteSubgroup::generated(const std::vector<std::vector<int>>& shifts,
                                             const std::vector<int>& torus_sites) {
    DiscreteSubgroup out;
    out.sites_ = torus_sites;
    int n = static_cast<int>(torus_sites.size());
    auto reduce = [&](std::vector<int> v) {
        for (int i = 0; i < n; ++i) {
            v[i] %= torus_sites[i];
            if (v[i] < 0) v[i] += torus_sites[i];
        }
        return v;
    };
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> queue;
    std::vector<int> zero(n, 0);
    seen.insert(zero);
    queue.push_back(zero);
    while (!queue.empty()) {
        auto cur = queue.back();
        queue.pop_back();
        for (const auto& s : shifts) {
            std::vector<int> next(n);
            for (int i = 0; i < n; ++i) next[i] = cur[i] + s[i];
            next = reduce(next);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    out.elements_.assign(seen.begin(), seen.end());
    return out;
}

DiscreteSubgroup DiscreteSubgroup::from_subtorus(const FiberSubgroup& sub,
                                                 const std::vector<int>& torus_sites) {
    int n = static_cast<int>(torus_sites.size());
    sub.validate(n);

    std::vector<std::vector<int>> shifts;
    for (const auto& g : sub.generators) {
        std::vector<int> s(n);
        for (int i = 0; i < n; ++i) s[i] = static_cast<int>(((g[i] % torus_sites[i]) + torus_sites[i]) % torus_sites[i]);
        shifts.push_back(std::move(s));
    }
    DiscreteSubgroup gen = generated(shifts, torus_sites);

    // full trace of the subtorus on the grid: x with <v, x/N> integral for
    // every conormal v
    int64_t big_n = 1;
    for (int ni : torus_sites) big_n = std::lcm(big_n, static_cast<int64_t>(ni));
    auto conormals = conormal_lattice(sub, n);

    auto in_trace = [&](const std::vector<int>& x) {
        for (const auto& v : conormals) {
            int64_t acc = 0;
            for (int i = 0; i < n; ++i)
                acc += detail::checked_mul(v[i], static_cast<int64_t>(x[i]) * (big_n / torus_sites[i]));
            if (acc % big_n != 0) return false;
        }
        return true;
    };

    // each generator reduction must itself lie in the trace
    for (const auto& s : shifts) {
        if (!in_trace(s))
            throw ConstructionError(
                "fiber generators are incompatible with the torus grid sizes");
    }

    // count trace elements and require the generated subgroup to exhaust them
    int64_t trace_count = 0;
    std::vector<int> x(n, 0);
    while (true) {
        if (in_trace(x)) ++trace_count;
        int d = n - 1;
        while (d >= 0 && x[d] == torus_sites[d] - 1) {
            x[d] = 0;
            --d;
        }
        if (d < 0) break;
        ++x[d];
    }
    if (gen.order() != trace_count)
        throw ConstructionError(
            "generator orbit does not exhaust the discrete subtorus (grid sizes "
            "incompatible with the fiber subgroup)");
    return gen;
}

bool DiscreteSubgroup::contains_element(const std::vector<int>& shift) const {
    return std::binary_search(elements_.begin(), elements_.end(), shift);
}

bool DiscreteSubgroup::contains(const DiscreteSubgroup& other) const {
    for (const auto& e : other.elements_) {
        if (!contains_element(e)) return false;
    }
    return true;
}

DiscreteSubgroup DiscreteSubgroup::intersect(const DiscreteSubgroup& other) const {
    DiscreteSubgroup out;
    out.sites_ = sites_;
    std::set_intersection(elements_.begin(), elements_.end(), other.elements_.begin(),
                          other.elements_.end(), std::back_inserter(out.elements_));
    return out;
}

std::vector<int64_t> DiscreteSubgroup::orbit(const DiscreteModel& m, int64_t site) const {
    std::vector<int64_t> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(m.torus_translate(site, e));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SiteMask DiscreteSubgroup::saturate(const DiscreteModel& m, const SiteMask& mask) const {
    SiteMask out(mask.size());
    for (int64_t s = 0; s < mask.size(); ++s) {
        if (!mask.test(s)) continue;
        for (int64_t o : orbit(m, s)) out.set(o);
    }
    return out;
}

bool DiscreteSubgroup::is_saturated(const DiscreteModel& m, const SiteMask& mask) const {
    for (int64_t s = 0; s < mask.size(); ++s) {
        if (!mask.test(s)) continue;
        for (int64_t o : orbit(m, s)) {
            if (!mask.test(o)) return false;
        }
    }
    return true;
}

}  // namespace fiberloc::fib
