#include "core/grid.hpp"

#include <algorithm>
#include <numeric>

namespace fiberloc {

DiscreteModel::DiscreteModel(std::vector<BaseAxis> base, std::vector<int> torus_sites)
    : base_(std::move(base)), torus_(std::move(torus_sites)) {
    for (const auto& a : base_) {
        if (a.sites < 1) throw ConstructionError("base axis needs at least one site");
        if (!(a.x_min < a.x_max)) throw ConstructionError("base axis extent must be nonempty");
    }
    for (int n : torus_) {
        if (n < 2) throw ConstructionError("torus axis needs at least two sites");
    }
    strides_.assign(dims(), 1);
    total_ = 1;
    for (int d = dims() - 1; d >= 0; --d) {
        strides_[d] = total_;
        total_ *= axis_sites(d);
    }
    if (total_ <= 0) throw ConstructionError("model has no sites");
}

int DiscreteModel::axis_sites(int d) const {
    return d < base_dims() ? base_[d].sites : torus_[d - base_dims()];
}

int64_t DiscreteModel::index_of(const std::vector<int>& idx) const {
    int64_t s = 0;
    for (int d = 0; d < dims(); ++d) {
        int v = idx[d];
        int n = axis_sites(d);
        if (axis_periodic(d)) {
            v %= n;
            if (v < 0) v += n;
        } else {
            v = std::clamp(v, 0, n - 1);
        }
        s += strides_[d] * v;
    }
    return s;
}

std::vector<int> DiscreteModel::coords_of(int64_t site) const {
    std::vector<int> idx(dims());
    for (int d = 0; d < dims(); ++d) {
        idx[d] = static_cast<int>(site / strides_[d]);
        site %= strides_[d];
    }
    return idx;
}

int64_t DiscreteModel::neighbor(int64_t site, int d, int step) const {
    int n = axis_sites(d);
    int v = static_cast<int>(site / strides_[d]) % n;
    int w = v + step;
    if (axis_periodic(d)) {
        w %= n;
        if (w < 0) w += n;
    } else if (w < 0 || w >= n) {
        return -1;
    }
    return site + strides_[d] * static_cast<int64_t>(w - v);
}

double DiscreteModel::coordinate(int64_t site, int d) const {
    int n = axis_sites(d);
    int v = static_cast<int>(site / strides_[d]) % n;
    if (axis_periodic(d)) return static_cast<double>(v) / n;
    const BaseAxis& a = base_[d];
    double h = (a.x_max - a.x_min) / a.sites;
    return a.x_min + (v + 0.5) * h;
}

int64_t DiscreteModel::torus_translate(int64_t site, const std::vector<int>& shift) const {
    int64_t s = site;
    for (int k = 0; k < torus_dims(); ++k) {
        int d = base_dims() + k;
        int n = torus_[k];
        int v = static_cast<int>(s / strides_[d]) % n;
        int w = (v + shift[k]) % n;
        if (w < 0) w += n;
        s += strides_[d] * static_cast<int64_t>(w - v);
    }
    return s;
}

int64_t SiteMask::count() const {
    return std::count(bits_.begin(), bits_.end(), uint8_t{1});
}

SiteMask& SiteMask::operator|=(const SiteMask& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
}

SiteMask& SiteMask::operator&=(const SiteMask& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
}

SiteMask SiteMask::minus(const SiteMask& o) const {
    SiteMask r(size());
    for (int64_t i = 0; i < size(); ++i) r.set(i, test(i) && !o.test(i));
    return r;
}

SiteMask SiteMask::complement() const {
    SiteMask r(size());
    for (int64_t i = 0; i < size(); ++i) r.set(i, !test(i));
    return r;
}

bool SiteMask::contains(const SiteMask& o) const {
    for (int64_t i = 0; i < size(); ++i) {
        if (o.test(i) && !test(i)) return false;
    }
    return true;
}

std::vector<int64_t> SiteMask::sites() const {
    std::vector<int64_t> out;
    for (int64_t i = 0; i < size(); ++i) {
        if (test(i)) out.push_back(i);
    }
    return out;
}

Region Region::whole(const DiscreteModel& m) {
    IndexBox box;
    box.ranges.resize(m.dims());
    for (int d = 0; d < m.dims(); ++d) {
        box.ranges[d] = {0, m.axis_sites(d) - 1, true};
    }
    return Region({box});
}

SiteMask Region::mask(const DiscreteModel& m) const {
    SiteMask out(m.site_count());
    for (const auto& box : boxes_) {
        if (static_cast<int>(box.ranges.size()) != m.dims())
            throw ConstructionError("region box rank does not match model");
        for (int64_t s = 0; s < m.site_count(); ++s) {
            bool in = true;
            auto idx = m.coords_of(s);
            for (int d = 0; d < m.dims() && in; ++d) {
                const auto& r = box.ranges[d];
                if (r.full) continue;
                int n = m.axis_sites(d);
                if (r.lo < 0 || r.lo >= n || r.hi < 0 || r.hi >= n)
                    throw ConstructionError("region range out of bounds");
                if (r.lo <= r.hi) {
                    in = idx[d] >= r.lo && idx[d] <= r.hi;
                } else {
                    // wrap-around interval, only meaningful on torus axes
                    if (!m.axis_periodic(d))
                        throw ConstructionError("wrapped range on a non-periodic axis");
                    in = idx[d] >= r.lo || idx[d] <= r.hi;
                }
            }
            if (in) out.set(s);
        }
    }
    return out;
}

SiteMask ScalarField::support(double tol) const {
    SiteMask m(size());
    for (int64_t i = 0; i < size(); ++i) m.set(i, std::abs(values_[i]) > tol);
    return m;
}

SiteMask dilate(const DiscreteModel& m, const SiteMask& mask, int steps) {
    SiteMask cur = mask;
    for (int s = 0; s < steps; ++s) {
        SiteMask next = cur;
        for (int64_t i = 0; i < cur.size(); ++i) {
            if (!cur.test(i)) continue;
            for (int d = 0; d < m.dims(); ++d) {
                for (int step : {-1, +1}) {
                    int64_t j = m.neighbor(i, d, step);
                    if (j >= 0) next.set(j);
                }
            }
        }
        cur = next;
    }
    return cur;
}

SiteMask erode(const DiscreteModel& m, const SiteMask& mask, int steps) {
    return dilate(m, mask.complement(), steps).complement();
}

SiteMask dilate_within(const DiscreteModel& m, const SiteMask& mask, int steps,
                       const SiteMask& allowed) {
    SiteMask cur = mask;
    cur &= allowed;
    for (int s = 0; s < steps; ++s) {
        SiteMask next = dilate(m, cur, 1);
        next &= allowed;
        cur = next;
    }
    return cur;
}

}  // namespace fiberloc
