#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberloc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Construction-time failure: malformed model, region or chart data.
class ConstructionError : public Error {
public:
    explicit ConstructionError(const std::string& what) : Error(what) {}
};

struct BaseAxis {
    int sites = 0;
    double x_min = 0.0;
    double x_max = 1.0;
};

/// Finite product grid R^p x T^n: clamped interval axes followed by
/// periodic torus axes (torus period normalized to 1, theta_k = k / N).
class DiscreteModel {
public:
    DiscreteModel() = default;
    DiscreteModel(std::vector<BaseAxis> base, std::vector<int> torus_sites);

    int base_dims() const { return static_cast<int>(base_.size()); }
    int torus_dims() const { return static_cast<int>(torus_.size()); }
    int dims() const { return base_dims() + torus_dims(); }
    int64_t site_count() const { return total_; }

    const BaseAxis& base_axis(int d) const { return base_[d]; }
    int torus_sites(int d) const { return torus_[d]; }

    /// Extent of axis d in the combined (base..., torus...) ordering.
    int axis_sites(int d) const;
    bool axis_periodic(int d) const { return d >= base_dims(); }

    /// Multi-index <-> linear site index (row-major over combined axes).
    int64_t index_of(const std::vector<int>& idx) const;
    std::vector<int> coords_of(int64_t site) const;

    /// Steps one site along axis d; clamps on base axes, wraps on torus axes.
    /// Returns -1 when a base axis clamp would leave the grid.
    int64_t neighbor(int64_t site, int d, int step) const;

    /// Real coordinate of a site along axis d (cell centers on base axes,
    /// k/N on torus axes).
    double coordinate(int64_t site, int d) const;

    /// Translates the torus part of a site by an integer vector (length == torus_dims).
    int64_t torus_translate(int64_t site, const std::vector<int>& shift) const;

private:
    std::vector<BaseAxis> base_;
    std::vector<int> torus_;
    std::vector<int64_t> strides_;
    int64_t total_ = 0;
};

/// Subset of model sites as a dense bitmask.
class SiteMask {
public:
    SiteMask() = default;
    explicit SiteMask(int64_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

    int64_t size() const { return static_cast<int64_t>(bits_.size()); }
    bool test(int64_t i) const { return bits_[i] != 0; }
    void set(int64_t i, bool v = true) { bits_[i] = v ? 1 : 0; }
    int64_t count() const;
    bool empty() const { return count() == 0; }

    SiteMask& operator|=(const SiteMask& o);
    SiteMask& operator&=(const SiteMask& o);
    /// Set difference.
    SiteMask minus(const SiteMask& o) const;
    SiteMask complement() const;

    bool contains(const SiteMask& o) const;
    friend bool operator==(const SiteMask& a, const SiteMask& b) { return a.bits_ == b.bits_; }

    std::vector<int64_t> sites() const;

private:
    std::vector<uint8_t> bits_;
};

/// Axis-aligned index box; torus axes may wrap (lo > hi means wrap-around)
/// or cover the whole circle (full = true).
struct IndexBox {
    struct AxisRange {
        int lo = 0;
        int hi = -1;
        bool full = false;
    };
    std::vector<AxisRange> ranges;  // one per model axis
};

/// Union of index boxes; the discrete stand-in for an open set.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<IndexBox> boxes) : boxes_(std::move(boxes)) {}

    static Region whole(const DiscreteModel& m);
    const std::vector<IndexBox>& boxes() const { return boxes_; }

    SiteMask mask(const DiscreteModel& m) const;

private:
    std::vector<IndexBox> boxes_;
};

/// One real value per model site.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(int64_t n, double value = 0.0) : values_(n, value) {}
    explicit ScalarField(std::vector<double> v) : values_(std::move(v)) {}

    int64_t size() const { return static_cast<int64_t>(values_.size()); }
    double operator[](int64_t i) const { return values_[i]; }
    double& operator[](int64_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    SiteMask support(double tol = 0.0) const;

private:
    std::vector<double> values_;
};

/// One-step dilation/erosion in the von Neumann (axis neighbor) topology.
/// Torus axes wrap, base axes clamp at the boundary.
SiteMask dilate(const DiscreteModel& m, const SiteMask& mask, int steps = 1);
SiteMask erode(const DiscreteModel& m, const SiteMask& mask, int steps = 1);

/// Dilation constrained to stay inside `allowed` (geodesic dilation).
SiteMask dilate_within(const DiscreteModel& m, const SiteMask& mask, int steps,
                       const SiteMask& allowed);

}  // namespace fiberloc
