#pragma once

#include <cstddef>
#include <vector>

namespace hvi::fem {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Square matrix in compressed row storage. Column indices are sorted within
/// each row; duplicates from assembly are summed.
class SparseOperator {
public:
    SparseOperator() = default;

    /// Builds an n x n operator; out-of-range indices throw InvalidArgument.
    static SparseOperator from_triplets(int n, const std::vector<Triplet>& entries);
    static SparseOperator identity(int n);

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] std::size_t nonzeros() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<int>& row_offsets() const noexcept { return row_offsets_; }
    [[nodiscard]] const std::vector<int>& column_indices() const noexcept { return cols_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// y = A x.
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    [[nodiscard]] std::vector<double> multiply(const std::vector<double>& x) const;
    /// x^T A x.
    [[nodiscard]] double quadratic_form(const std::vector<double>& x) const;
    /// x^T A y.
    [[nodiscard]] double bilinear_form(const std::vector<double>& x, const std::vector<double>& y) const;

    [[nodiscard]] std::vector<double> diagonal() const;
    /// Entry (i, j), 0 if outside the pattern.
    [[nodiscard]] double at(int i, int j) const;
    /// Largest |a_ij - a_ji| over the pattern.
    [[nodiscard]] double asymmetry() const;
    [[nodiscard]] bool is_symmetric(double tol = 1e-12) const { return asymmetry() <= tol; }

    /// Principal submatrix on `keep` (old index -> new index, -1 drops the row and column).
    [[nodiscard]] SparseOperator restrict(const std::vector<int>& keep, int new_dimension) const;
    /// Returns c * this.
    [[nodiscard]] SparseOperator scaled(double c) const;

private:
    int n_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> cols_;
    std::vector<double> values_;
};

} // namespace hvi::fem
