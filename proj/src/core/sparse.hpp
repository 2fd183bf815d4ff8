#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fiberloc {

using cx = std::complex<double>;

/// Sparse Z/2-graded self-adjoint matrix in coordinate form.
///
/// `parity[i]` is 0 for even and 1 for odd basis vectors. A degree-one
/// operator has entries only between even and odd indices; hermiticity and
/// oddness are checked at finalize() and are hard contracts for everything
/// downstream.
class HermitianOperator {
public:
    HermitianOperator() = default;
    HermitianOperator(int64_t dim, std::vector<uint8_t> parity);

    int64_t dim() const { return dim_; }
    const std::vector<uint8_t>& parity() const { return parity_; }
    const std::string& label() const { return label_; }
    void set_label(std::string s) { label_ = std::move(s); }

    /// Adds entry (r, c) += v together with its Hermitian mirror when r != c.
    void add(int64_t r, int64_t c, cx v);
    /// Adds entry without the mirror; caller promises a Hermitian total.
    void add_raw(int64_t r, int64_t c, cx v);

    /// Merges duplicate coordinates and verifies the contracts:
    /// |A - A^dagger|_max <= herm_tol and all entries even<->odd.
    /// Throws ConstructionError on violation.
    void finalize(double herm_tol = 1e-12);
    bool finalized() const { return finalized_; }

    int64_t nnz() const { return static_cast<int64_t>(rows_.size()); }
    const std::vector<int64_t>& rows() const { return rows_; }
    const std::vector<int64_t>& cols() const { return cols_; }
    const std::vector<cx>& values() const { return vals_; }

    void apply(const cx* x, cx* y) const;
    std::vector<cx> apply(const std::vector<cx>& x) const;

    /// Hermiticity residual max|A - A^dagger| (0 after finalize of a valid op).
    double hermiticity_residual() const;
    /// Max |entry| between equal parities (0 for a degree-one operator).
    double grading_residual() const;

    /// Largest row sum of |entries|; upper bound for the operator norm.
    double norm_bound() const;

    /// Even/odd sub-blocks of A^2 never mix parities; this returns the list of
    /// indices of the requested parity, used to compress graded solves.
    std::vector<int64_t> indices_of_parity(int parity) const;

    /// Dirichlet compression onto `keep` (sorted index list).
    HermitianOperator compressed(const std::vector<int64_t>& keep) const;

    /// Plain-text triplet export: header `dim nnz` then the parity mask, then
    /// one `row col re im` line per stored entry.
    void export_triplets(std::ostream& os) const;

private:
    int64_t dim_ = 0;
    std::vector<uint8_t> parity_;
    std::vector<int64_t> rows_, cols_;
    std::vector<cx> vals_;
    std::string label_;
    bool finalized_ = false;
};

/// Graded tensor product a (x) 1 + eps (x) b of two finalized degree-one
/// operators. Index layout: k = i * dim(b) + j; parity(k) = parity_a(i) xor
/// parity_b(j). The two lifted summands anti-commute exactly.
HermitianOperator graded_tensor_sum(const HermitianOperator& a, const HermitianOperator& b,
                                    int64_t dim_guard = 200000);

/// The two summands of the graded tensor, for anti-commutation checks.
HermitianOperator lift_first(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator lift_second(const HermitianOperator& a, const HermitianOperator& b);

/// Max |entry| of {A, B} computed sparsely (A, B finalized, same dim).
double anticommutator_max_entry(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace fiberloc
