#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dfh {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and free of duplicates.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> row_offsets,
                 std::vector<std::int32_t> col_indices, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::int64_t> row_offsets() const { return offsets_; }
    std::span<const std::int32_t> col_indices() const { return cols_idx_; }
    std::span<const double> values() const { return values_; }

    /// Entry (i, j), zero if not stored.
    double coeff(std::size_t i, std::size_t j) const;

    std::vector<double> multiply(std::span<const double> x) const;
    double frobenius_norm() const;
    double max_abs() const;
    SparseMatrix transpose() const;

private:
    std::size_t rows_{0}, cols_{0};
    std::vector<std::int64_t> offsets_{0};
    std::vector<std::int32_t> cols_idx_;
    std::vector<double> values_;
};

/// Accumulates (row, col, value) contributions; duplicates are summed.
class TripletBuilder {
public:
    TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    void add(std::size_t i, std::size_t j, double v);
    void reserve(std::size_t n) { entries_.reserve(n); }
    /// Builds the CSR matrix; explicit zeros produced by cancellation are kept.
    SparseMatrix build() const;

private:
    struct Entry {
        std::int32_t row, col;
        double value;
    };
    std::size_t rows_, cols_;
    std::vector<Entry> entries_;
};

enum class ColumnOrdering { MinimumDegree, ReverseCuthillMcKee };

/// Sparse LU factorization P A Q = L U with threshold partial pivoting
/// (left-looking, Gilbert-Peierls). Columns are ordered on the pattern of
/// A + A^T; the diagonal is preferred as pivot when it is within
/// `pivot_threshold` of the column maximum.
///
/// Throws SingularMatrixError when a pivot falls below
/// `1e-14 * max|A|`. Immutable after construction.
class SparseLU {
public:
    explicit SparseLU(const SparseMatrix& a, double pivot_threshold = 0.1,
                       ColumnOrdering ordering = ColumnOrdering::MinimumDegree);
    /// Uses a precomputed column ordering (entry k: original column placed k-th).
    SparseLU(const SparseMatrix& a, std::vector<std::int32_t> col_perm, double pivot_threshold = 0.1);
    const std::vector<std::int32_t>& column_ordering() const { return col_perm_; }

    std::vector<double> solve(std::span<const double> b) const;
    std::size_t size() const { return n_; }
    std::size_t factor_nnz() const { return lx_.size() + ux_.size(); }
    double min_abs_pivot() const { return min_pivot_; }

private:
    void factorize(const SparseMatrix& a, double pivot_threshold);

    std::size_t n_{0};
    std::vector<std::int32_t> col_perm_;  // q: k-th pivot column
    std::vector<std::int32_t> row_perm_;  // pinv: original row -> pivot position
    // L (unit diagonal stored first in each column) and U (diagonal stored last), CSC.
    std::vector<std::int64_t> lp_, up_;
    std::vector<std::int32_t> li_, ui_;
    std::vector<double> lx_, ux_;
    double min_pivot_{0.0};
};

/// Solves A x = b and verifies ||Ax - b|| <= 1e-10 (||A||_F ||x|| + ||b||).
/// Throws SingularMatrixError on a singular factorization or a violated
/// residual bound. If `ordering` is non-null and empty it receives the column
/// ordering used; if non-empty it is reused (same sparsity pattern required).
std::vector<double> factor_solve(const SparseMatrix& a, std::span<const double> b,
                                 std::vector<std::int32_t>* ordering = nullptr);

/// Orderings of the symmetric pattern of A + A^T; entry k is the original
/// index placed k-th.
std::vector<std::int32_t> reverse_cuthill_mckee(const SparseMatrix& a);
std::vector<std::int32_t> approximate_minimum_degree(const SparseMatrix& a);

double norm2(std::span<const double> x);

}  // namespace dfh
