#include "core/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>

#include "core/grid.hpp"

namespace fiberloc {

HermitianOperator::HermitianOperator(int64_t dim, std::vector<uint8_t> parity)
    : dim_(dim), parity_(std::move(parity)) {
    if (static_cast<int64_t>(parity_.size()) != dim_)
        throw ConstructionError("parity mask size mismatch");
}

void HermitianOperator::add(int64_t r, int64_t c, cx v) {
    add_raw(r, c, v);
    if (r != c) add_raw(c, r, std::conj(v));
}

void HermitianOperator::add_raw(int64_t r, int64_t c, cx v) {
    if (r < 0 || r >= dim_ || c < 0 || c >= dim_)
        throw ConstructionError("sparse entry out of range");
    rows_.push_back(r);
    cols_.push_back(c);
    vals_.push_back(v);
    finalized_ = false;
}

void HermitianOperator::finalize(double herm_tol) {
    // merge duplicates
    std::map<std::pair<int64_t, int64_t>, cx> merged;
    for (size_t k = 0; k < rows_.size(); ++k) merged[{rows_[k], cols_[k]}] += vals_[k];
    rows_.clear();
    cols_.clear();
    vals_.clear();
    for (const auto& [rc, v] : merged) {
        if (v == cx(0.0, 0.0)) continue;
        rows_.push_back(rc.first);
        cols_.push_back(rc.second);
        vals_.push_back(v);
    }
    finalized_ = true;
    double h = hermiticity_residual();
    if (h > herm_tol)
        throw ConstructionError("operator not Hermitian, residual " + std::to_string(h));
    double g = grading_residual();
    if (g > herm_tol)
        throw ConstructionError("operator not degree-one, residual " + std::to_string(g));
}

void HermitianOperator::apply(const cx* x, cx* y) const {
    std::fill(y, y + dim_, cx(0.0, 0.0));
    for (size_t k = 0; k < rows_.size(); ++k) y[rows_[k]] += vals_[k] * x[cols_[k]];
}

std::vector<cx> HermitianOperator::apply(const std::vector<cx>& x) const {
    std::vector<cx> y(dim_);
    apply(x.data(), y.data());
    return y;
}

double HermitianOperator::hermiticity_residual() const {
    std::map<std::pair<int64_t, int64_t>, cx> m;
    for (size_t k = 0; k < rows_.size(); ++k) m[{rows_[k], cols_[k]}] += vals_[k];
    double worst = 0.0;
    for (const auto& [rc, v] : m) {
        auto it = m.find({rc.second, rc.first});
        cx mirror = it == m.end() ? cx(0.0, 0.0) : it->second;
        worst = std::max(worst, std::abs(v - std::conj(mirror)));
    }
    return worst;
}

double HermitianOperator::grading_residual() const {
    double worst = 0.0;
    for (size_t k = 0; k < rows_.size(); ++k) {
        if (parity_[rows_[k]] == parity_[cols_[k]]) worst = std::max(worst, std::abs(vals_[k]));
    }
    return worst;
}

double HermitianOperator::norm_bound() const {
    std::vector<double> row_sum(dim_, 0.0);
    for (size_t k = 0; k < rows_.size(); ++k) row_sum[rows_[k]] += std::abs(vals_[k]);
    double m = 0.0;
    for (double s : row_sum) m = std::max(m, s);
    return m;
}

std::vector<int64_t> HermitianOperator::indices_of_parity(int parity) const {
    std::vector<int64_t> out;
    for (int64_t i = 0; i < dim_; ++i) {
        if (parity_[i] == parity) out.push_back(i);
    }
    return out;
}

HermitianOperator HermitianOperator::compressed(const std::vector<int64_t>& keep) const {
    std::unordered_map<int64_t, int64_t> pos;
    std::vector<uint8_t> par(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
        pos[keep[i]] = static_cast<int64_t>(i);
        par[i] = parity_[keep[i]];
    }
    HermitianOperator out(static_cast<int64_t>(keep.size()), std::move(par));
    for (size_t k = 0; k < rows_.size(); ++k) {
        auto r = pos.find(rows_[k]);
        auto c = pos.find(cols_[k]);
        if (r != pos.end() && c != pos.end()) out.add_raw(r->second, c->second, vals_[k]);
    }
    out.finalize();
    return out;
}

void HermitianOperator::export_triplets(std::ostream& os) const {
    os << dim_ << " " << nnz() << "\n";
    for (int64_t i = 0; i < dim_; ++i) os << (parity_[i] ? 1 : 0) << (i + 1 == dim_ ? "\n" : " ");
    char buf[96];
    for (size_t k = 0; k < rows_.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n",
                      static_cast<long long>(rows_[k]), static_cast<long long>(cols_[k]),
                      vals_[k].real(), vals_[k].imag());
        os << buf;
    }
}

HermitianOperator lift_first(const HermitianOperator& a, const HermitianOperator& b) {
    int64_t n = a.dim() * b.dim();
    std::vector<uint8_t> par(n);
    for (int64_t i = 0; i < a.dim(); ++i)
        for (int64_t j = 0; j < b.dim(); ++j)
            par[i * b.dim() + j] = a.parity()[i] ^ b.parity()[j];
    HermitianOperator out(n, std::move(par));
    for (int64_t k = 0; k < a.nnz(); ++k) {
        for (int64_t j = 0; j < b.dim(); ++j)
            out.add_raw(a.rows()[k] * b.dim() + j, a.cols()[k] * b.dim() + j, a.values()[k]);
    }
    out.finalize();
    return out;
}

HermitianOperator lift_second(const HermitianOperator& a, const HermitianOperator& b) {
    int64_t n = a.dim() * b.dim();
    std::vector<uint8_t> par(n);
    for (int64_t i = 0; i < a.dim(); ++i)
        for (int64_t j = 0; j < b.dim(); ++j)
            par[i * b.dim() + j] = a.parity()[i] ^ b.parity()[j];
    HermitianOperator out(n, std::move(par));
    // eps (x) b: sign -1 on odd a-factors
    for (int64_t i = 0; i < a.dim(); ++i) {
        double eps = a.parity()[i] ? -1.0 : 1.0;
        for (int64_t k = 0; k < b.nnz(); ++k)
            out.add_raw(i * b.dim() + b.rows()[k], i * b.dim() + b.cols()[k],
                        eps * b.values()[k]);
    }
    out.finalize();
    return out;
}

HermitianOperator graded_tensor_sum(const HermitianOperator& a, const HermitianOperator& b,
                                    int64_t dim_guard) {
    if (!a.finalized() || !b.finalized())
        throw ConstructionError("tensor factors must be finalized");
    if (a.dim() * b.dim() > dim_guard)
        throw Error("graded tensor dimension " + std::to_string(a.dim() * b.dim()) +
                    " exceeds guard " + std::to_string(dim_guard));
    HermitianOperator lifted_a = lift_first(a, b);
    HermitianOperator lifted_b = lift_second(a, b);
    HermitianOperator out(lifted_a.dim(), std::vector<uint8_t>(lifted_a.parity()));
    for (int64_t k = 0; k < lifted_a.nnz(); ++k)
        out.add_raw(lifted_a.rows()[k], lifted_a.cols()[k], lifted_a.values()[k]);
    for (int64_t k = 0; k < lifted_b.nnz(); ++k)
        out.add_raw(lifted_b.rows()[k], lifted_b.cols()[k], lifted_b.values()[k]);
    out.set_label(a.label() + " (x) " + b.label());
    out.finalize();
    return out;
}

double anticommutator_max_entry(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) throw ConstructionError("anticommutator dimension mismatch");
    // {a,b} = ab + ba accumulated entrywise
    std::map<std::pair<int64_t, int64_t>, cx> acc;
    // index b by row for the product a*b, and a by row for b*a
    std::vector<std::vector<int64_t>> b_by_row(b.dim()), a_by_row(a.dim());
    for (int64_t k = 0; k < b.nnz(); ++k) b_by_row[b.rows()[k]].push_back(k);
    for (int64_t k = 0; k < a.nnz(); ++k) a_by_row[a.rows()[k]].push_back(k);
    for (int64_t k = 0; k < a.nnz(); ++k) {
        int64_t i = a.rows()[k], j = a.cols()[k];
        for (int64_t kb : b_by_row[j])
            acc[{i, b.cols()[kb]}] += a.values()[k] * b.values()[kb];
    }
    for (int64_t k = 0; k < b.nnz(); ++k) {
        int64_t i = b.rows()[k], j = b.cols()[k];
        for (int64_t ka : a_by_row[j])
            acc[{i, a.cols()[ka]}] += b.values()[k] * a.values()[ka];
    }
    double worst = 0.0;
    for (const auto& [rc, v] : acc) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace fiberloc
