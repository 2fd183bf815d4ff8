#include "oracle/torus.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

namespace fiberloc::oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m, int dim) {
    Eigen::MatrixXd out(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(i, j) = m[i][j];
    return out;
}

/// Clifford generators c_j = e_j /\ - e_j _| on Lambda* R^k in the subset
/// basis (bitmask index). Real antisymmetric, c_j^2 = -1.
std::vector<Eigen::MatrixXd> clifford_generators(int k) {
    int n = 1 << k;
    std::vector<Eigen::MatrixXd> cs(k, Eigen::MatrixXd::Zero(n, n));
    for (int j = 0; j < k; ++j) {
        for (int mask = 0; mask < n; ++mask) {
            int below = mask & ((1 << j) - 1);
            double sign = (std::popcount(static_cast<unsigned>(below)) % 2 == 0) ? 1.0 : -1.0;
            if (!(mask & (1 << j))) {
                cs[j](mask | (1 << j), mask) += sign;  // wedge
            } else {
                cs[j](mask & ~(1 << j), mask) -= sign;  // minus interior product
            }
        }
    }
    return cs;
}

void enumerate_modes(int k, int bound, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> m(k, -bound);
    if (k == 0) {
        fn(m);
        return;
    }
    while (true) {
        fn(m);
        int d = k - 1;
        while (d >= 0 && m[d] == bound) {
            m[d] = -bound;
            --d;
        }
        if (d < 0) break;
        ++m[d];
    }
}

}  // namespace

FlatTorusFiber FlatTorusFiber::circle(double theta) {
    FlatTorusFiber f;
    f.dim = 1;
    f.holonomy = {reduce_mod1(theta)};
    return f;
}

void FlatTorusFiber::validate() const {
    if (dim < 0) throw ConstructionError("fiber dimension must be >= 0");
    if (static_cast<int>(holonomy.size()) != dim)
        throw ConstructionError("holonomy size must equal fiber dimension");
    if (!metric.empty()) {
        if (static_cast<int>(metric.size()) != dim)
            throw ConstructionError("metric must be k x k");
        for (const auto& row : metric)
            if (static_cast<int>(row.size()) != dim)
                throw ConstructionError("metric must be k x k");
        Eigen::MatrixXd g = to_eigen(metric, dim);
        if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw ConstructionError("metric must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw ConstructionError("metric must be positive definite");
    }
}

bool FlatTorusFiber::has_identity_metric() const {
    if (metric.empty()) return true;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (metric[i][j] != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

GradedSpectrum torus_spectrum(const FlatTorusFiber& fiber, int mode_bound) {
    fiber.validate();
    if (mode_bound < 1) throw Error("torus_spectrum: mode_bound must be >= 1");
    int k = fiber.dim;

    if (k == 0) {
        GradedSpectrum out;
        out.entries.push_back({0.0, 1, 0});
        out.certified_below = std::numeric_limits<double>::infinity();
        return out;
    }

    Eigen::MatrixXd ginv = Eigen::MatrixXd::Identity(k, k);
    double ginv_min_eig = 1.0;
    if (!fiber.has_identity_metric()) {
        Eigen::MatrixXd g = to_eigen(fiber.metric, k);
        ginv = g.inverse();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ginv);
        ginv_min_eig = es.eigenvalues().minCoeff();
    }

    // per-mode graded multiplicity: sum of binom(k, p) over even/odd p
    int64_t half = int64_t{1} << (k - 1);

    std::map<int64_t, std::pair<int64_t, int64_t>> merged;  // quantized lambda -> mults
    std::vector<double> lambdas;
    enumerate_modes(k, mode_bound, [&](const std::vector<int>& m) {
        Eigen::VectorXd v(k);
        for (int i = 0; i < k; ++i) v(i) = m[i] + fiber.holonomy[i];
        double lambda = kTwoPi * kTwoPi * v.dot(ginv * v);
        // merge eigenvalues equal up to round-off
        int64_t key = llround(lambda * 1e10);
        auto& slot = merged[key];
        if (slot.first == 0 && slot.second == 0) lambdas.push_back(lambda);
        slot.first += half;
        slot.second += half;
    });

    GradedSpectrum out;
    for (const auto& [key, mult] : merged) {
        out.entries.push_back({static_cast<double>(key) * 1e-10, mult.first, mult.second});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda < b.lambda; });
    // any mode outside |m|_inf <= B has |m + theta|_inf > B, hence
    // lambda >= 4 pi^2 lambda_min(g^-1) B^2
    out.certified_below =
        kTwoPi * kTwoPi * ginv_min_eig * static_cast<double>(mode_bound) * mode_bound;
    return out;
}

std::pair<int64_t, int64_t> fiber_kernel(const FlatTorusFiber& fiber) {
    fiber.validate();
    if (fiber.dim == 0) return {1, 0};
    for (double th : fiber.holonomy) {
        if (reduce_mod1(th) != 0.0) return {0, 0};
    }
    int64_t half = int64_t{1} << (fiber.dim - 1);
    return {half, half};
}

std::vector<std::vector<double>> projector_onto(const std::vector<std::vector<double>>& rows,
                                                int dim) {
    if (rows.empty()) {
        return std::vector<std::vector<double>>(dim, std::vector<double>(dim, 0.0));
    }
    Eigen::MatrixXd a(dim, static_cast<int>(rows.size()));
    for (size_t j = 0; j < rows.size(); ++j) {
        if (static_cast<int>(rows[j].size()) != dim)
            throw ConstructionError("projector_onto: vector dimension mismatch");
        for (int i = 0; i < dim; ++i) a(i, static_cast<int>(j)) = rows[j][i];
    }
    Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::MatrixXd p = a * gram.inverse() * a.transpose();
    std::vector<std::vector<double>> out(dim, std::vector<double>(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out[i][j] = p(i, j);
    return out;
}

double anticommutator_residual(const FlatTorusFiber& fiber,
                               const std::vector<std::vector<double>>& p_alpha,
                               const std::vector<std::vector<double>>& p_beta, int mode_bound) {
    fiber.validate();
    if (!fiber.has_identity_metric())
        throw Error("anticommutator_residual requires the identity metric");
    int k = fiber.dim;
    if (k == 0) return 0.0;
    Eigen::MatrixXd pa = to_eigen(p_alpha, k);
    Eigen::MatrixXd pb = to_eigen(p_beta, k);
    if ((pa * pb - pb * pa).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("projections do not commute");
    Eigen::MatrixXd pab = pa * pb;

    auto cs = clifford_generators(k);
    int n = 1 << k;
    using Mat = Eigen::MatrixXcd;
    const std::complex<double> I(0.0, 1.0);

    auto dirac_block = [&](const Eigen::MatrixXd& proj, const Eigen::VectorXd& u) {
        Eigen::VectorXd v = proj * u;
        Mat block = Mat::Zero(n, n);
        for (int j = 0; j < k; ++j) block += I * v(j) * cs[j];
        return block;
    };

    double worst = 0.0;
    enumerate_modes(k, mode_bound, [&](const std::vector<int>& m) {
        Eigen::VectorXd u(k);
        for (int i = 0; i < k; ++i) u(i) = kTwoPi * (m[i] + fiber.holonomy[i]);
        Mat da = dirac_block(pa, u);
        Mat db = dirac_block(pb, u);
        Mat dab = dirac_block(pab, u);
        Mat res = da * db + db * da - 2.0 * dab * dab;
        // operator norm of the per-mode block
        Eigen::SelfAdjointEigenSolver<Mat> es(res.adjoint() * res);
        worst = std::max(worst, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
    });
    return worst;
}

std::vector<SpectrumEntry> GradedSpectrum::entries_below(double threshold) const {
    if (threshold > certified_below)
        throw Error("spectrum query above the certified truncation bound; raise mode_bound");
    std::vector<SpectrumEntry> out;
    for (const auto& e : entries) {
        if (e.lambda < threshold) out.push_back(e);
    }
    return out;
}

void GradedSpectrum::write_csv(std::ostream& os) const {
    os << "lambda,even_mult,odd_mult\n";
    char buf[80];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%.17g,%lld,%lld\n", e.lambda,
                      static_cast<long long>(e.even_mult), static_cast<long long>(e.odd_mult));
        os << buf;
    }
}

}  // namespace fiberloc::oracle
