#include "spectral/eigen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace fiberloc::spectral {

namespace {

constexpr int64_t kDenseThreshold = 3000;

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Even-to-odd coupling block B (rows = indices of `row_parity`).
Mat coupling_block(const HermitianOperator& op, int row_parity,
                   std::vector<int64_t>& row_ids, std::vector<int64_t>& col_ids) {
    row_ids = op.indices_of_parity(row_parity);
    col_ids = op.indices_of_parity(1 - row_parity);
    std::vector<int64_t> pos(op.dim(), -1);
    for (size_t i = 0; i < row_ids.size(); ++i) pos[row_ids[i]] = static_cast<int64_t>(i);
    std::vector<int64_t> cpos(op.dim(), -1);
    for (size_t j = 0; j < col_ids.size(); ++j) cpos[col_ids[j]] = static_cast<int64_t>(j);
    Mat b = Mat::Zero(static_cast<Eigen::Index>(row_ids.size()),
                      static_cast<Eigen::Index>(col_ids.size()));
    for (int64_t k = 0; k < op.nnz(); ++k) {
        int64_t r = pos[op.rows()[k]];
        int64_t c = cpos[op.cols()[k]];
        if (r >= 0 && c >= 0) b(r, c) += op.values()[k];
    }
    return b;
}

std::vector<double> dense_block_spectrum(const HermitianOperator& op, int parity) {
    std::vector<int64_t> rows, cols;
    Mat b = coupling_block(op, parity, rows, cols);
    if (rows.empty()) return {};
    Mat sq = b * b.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(sq);
    if (es.info() != Eigen::Success)
        throw NumericalNonConvergence("dense eigensolver failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + rows.size());
    for (double& v : out) v = std::max(v, 0.0);  // clamp tiny negatives from round-off
    return out;
}

/// Applies D^2 within one parity block (compressed coordinates).
struct BlockSquare {
    const HermitianOperator* op;
    std::vector<int64_t> block;        // global indices of this parity
    std::vector<int64_t> to_local;     // global -> local or -1
    mutable std::vector<cx> full_a, full_b;

    explicit BlockSquare(const HermitianOperator& o, int parity) : op(&o) {
        block = o.indices_of_parity(parity);
        to_local.assign(o.dim(), -1);
        for (size_t i = 0; i < block.size(); ++i) to_local[block[i]] = static_cast<int64_t>(i);
        full_a.resize(o.dim());
        full_b.resize(o.dim());
    }

    int64_t dim() const { return static_cast<int64_t>(block.size()); }

    void apply(const cx* x, cx* y) const {
        std::fill(full_a.begin(), full_a.end(), cx(0, 0));
        for (size_t i = 0; i < block.size(); ++i) full_a[block[i]] = x[i];
        op->apply(full_a.data(), full_b.data());
        op->apply(full_b.data(), full_a.data());
        for (size_t i = 0; i < block.size(); ++i) y[i] = full_a[block[i]];
    }
};

}  // namespace

std::vector<double> lanczos_block_low(const HermitianOperator& op, int parity, int64_t k,
                                      int64_t iter_cap) {
    BlockSquare sq(op, parity);
    int64_t n = sq.dim();
    if (n == 0) return {};
    k = std::min(k, n);
    // the nominal 20k + 200 budget cannot resolve the bottom of D^2 at the
    // spectral spreads of fine grids; with full reorthogonalization the
    // recursion is exact after n steps, so allow up to the block dimension
    if (iter_cap <= 0) iter_cap = std::max<int64_t>(20 * k + 200, 1200);
    iter_cap = std::min(iter_cap, n);

    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Vec> basis;
    Vec v = Vec::NullaryExpr(n, [&](Eigen::Index) { return cx(gauss(rng), gauss(rng)); });
    v.normalize();
    std::vector<double> alpha, beta;
    Vec w(n);

    double norm2 = op.norm_bound();
    norm2 *= norm2;
    // residual contract: |D^2 v - lambda v| <= 1e-8 |D^2|
    double tol = 1e-8 * std::max(norm2, 1.0);

    std::vector<double> ritz;
    for (int64_t j = 0; j < iter_cap; ++j) {
        basis.push_back(v);
        sq.apply(v.data(), w.data());
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        double a = std::real(v.dot(w));
        alpha.push_back(a);
        w -= a * v;
        // full reorthogonalization, twice for good measure
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) w -= q.dot(w) * q;
        }
        double b = w.norm();
        if (b < 1e-14 * std::max(1.0, norm2)) {
            // invariant subspace found: T is exact
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j + 1, j + 1);
            for (int64_t i = 0; i <= j; ++i) {
                t(i, i) = alpha[i];
                if (i > 0) t(i, i - 1) = t(i - 1, i) = beta[i - 1];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + j + 1);
            ritz.resize(std::min<size_t>(ritz.size(), k));
            for (double& x : ritz) x = std::max(x, 0.0);
            return ritz;
        }
        beta.push_back(b);
        v = w / b;

        if (j + 1 >= k && (j % 8 == 7 || j + 1 == iter_cap)) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j + 1, j + 1);
            for (int64_t i = 0; i <= j; ++i) {
                t(i, i) = alpha[i];
                if (i > 0) t(i, i - 1) = t(i - 1, i) = beta[i - 1];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            bool converged = true;
            for (int64_t ev = 0; ev < k; ++ev) {
                double resid = std::abs(b * es.eigenvectors()(j, ev));
                if (resid > tol) {
                    converged = false;
                    break;
                }
            }
            if (converged) {
                ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
                for (double& x : ritz) x = std::max(x, 0.0);
                return ritz;
            }
        }
    }
    throw NumericalNonConvergence("Lanczos did not converge within the iteration cap");
}

std::vector<GradedEigenvalue> low_spectrum(const HermitianOperator& op, int64_t k) {
    if (!op.finalized()) throw Error("low_spectrum: operator not finalized");
    if (k < 1 || k > op.dim()) throw Error("low_spectrum: k out of range");
    std::vector<GradedEigenvalue> out;
    if (op.dim() < kDenseThreshold) {
        for (int parity : {0, 1}) {
            for (double v : dense_block_spectrum(op, parity)) out.push_back({v, parity});
        }
    } else {
        for (int parity : {0, 1}) {
            int64_t nblk = static_cast<int64_t>(op.indices_of_parity(parity).size());
            if (nblk == 0) continue;
            for (double v : lanczos_block_low(op, parity, std::min(k, nblk)))
                out.push_back({v, parity});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const GradedEigenvalue& a, const GradedEigenvalue& b) {
                  return a.lambda < b.lambda;
              });
    if (static_cast<int64_t>(out.size()) > k) out.resize(k);
    return out;
}

std::vector<GradedEigenvalue> full_spectrum(const HermitianOperator& op) {
    if (op.dim() >= kDenseThreshold)
        throw Error("full_spectrum: operator too large for the dense path");
    std::vector<GradedEigenvalue> out;
    for (int parity : {0, 1}) {
        for (double v : dense_block_spectrum(op, parity)) out.push_back({v, parity});
    }
    std::sort(out.begin(), out.end(),
              [](const GradedEigenvalue& a, const GradedEigenvalue& b) {
                  return a.lambda < b.lambda;
              });
    return out;
}

double compressed_bottom(const HermitianOperator& op, const std::vector<int64_t>& keep) {
    if (keep.empty()) throw Error("compressed_bottom: empty mask");
    // assemble the kept block of D^2 = D * D exactly
    std::vector<int64_t> pos(op.dim(), -1);
    for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int64_t>(i);
    std::vector<std::vector<int64_t>> by_row(op.dim());
    for (int64_t k = 0; k < op.nnz(); ++k) by_row[op.rows()[k]].push_back(k);

    Mat sq = Mat::Zero(static_cast<Eigen::Index>(keep.size()),
                       static_cast<Eigen::Index>(keep.size()));
    for (int64_t k = 0; k < op.nnz(); ++k) {
        int64_t i = op.rows()[k];
        if (pos[i] < 0) continue;
        int64_t mid = op.cols()[k];
        for (int64_t k2 : by_row[mid]) {
            int64_t j = op.cols()[k2];
            if (pos[j] < 0) continue;
            sq(pos[i], pos[j]) += op.values()[k] * op.values()[k2];
        }
    }
    if (keep.size() > static_cast<size_t>(kDenseThreshold))
        throw Error("compressed_bottom: mask too large for the dense path");
    Eigen::SelfAdjointEigenSolver<Mat> es(sq);
    if (es.info() != Eigen::Success)
        throw NumericalNonConvergence("dense eigensolver failed on compression");
    return std::max(0.0, es.eigenvalues().minCoeff());
}

}  // namespace fiberloc::spectral
