#include "hvi/sparse.hpp"

#include "hvi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hvi::fem {

SparseOperator SparseOperator::from_triplets(int n, const std::vector<Triplet>& entries) {
    if (n < 0) throw InvalidArgument("negative operator dimension");
    std::vector<Triplet> sorted;
    sorted.reserve(entries.size());
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
            throw InvalidArgument("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") outside a " + std::to_string(n) + " x " + std::to_string(n) + " operator");
        }
        sorted.push_back(t);
    }
    // Stable sort keeps the summation order of duplicates equal to the input order.
    std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseOperator op;
    op.n_ = n;
    op.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t k = 0; k < sorted.size();) {
        const int r = sorted[k].row;
        const int c = sorted[k].col;
        double sum = 0.0;
        while (k < sorted.size() && sorted[k].row == r && sorted[k].col == c) sum += sorted[k++].value;
        op.cols_.push_back(c);
        op.values_.push_back(sum);
        ++op.row_offsets_[static_cast<std::size_t>(r) + 1];
    }
    for (int i = 0; i < n; ++i) op.row_offsets_[i + 1] += op.row_offsets_[i];
    return op;
}

SparseOperator SparseOperator::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, t);
}

void SparseOperator::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n_) throw InvalidArgument("matvec: vector length does not match operator");
    y.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
        y[i] = s;
    }
}

std::vector<double> SparseOperator::multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
}

double SparseOperator::quadratic_form(const std::vector<double>& x) const { return bilinear_form(x, x); }

double SparseOperator::bilinear_form(const std::vector<double>& x, const std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_) {
        throw InvalidArgument("bilinear form: vector length does not match operator");
    }
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
        double r = 0.0;
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) r += values_[k] * y[cols_[k]];
        s += x[i] * r;
    }
    return s;
}

std::vector<double> SparseOperator::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) d[i] = at(i, i);
    return d;
}

double SparseOperator::at(int i, int j) const {
    const auto first = cols_.begin() + row_offsets_[i];
    const auto last = cols_.begin() + row_offsets_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double SparseOperator::asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            worst = std::max(worst, std::abs(values_[k] - at(cols_[k], i)));
        }
    }
    return worst;
}

SparseOperator SparseOperator::restrict(const std::vector<int>& keep, int new_dimension) const {
    if (static_cast<int>(keep.size()) != n_) throw InvalidArgument("restrict: index map has the wrong length");
    SparseOperator out;
    out.n_ = new_dimension;
    out.row_offsets_.assign(static_cast<std::size_t>(new_dimension) + 1, 0);
    int previous = -1;
    for (int i = 0; i < n_; ++i) {
        const int ri = keep[i];
        if (ri < 0) continue;
        if (ri <= previous || ri >= new_dimension) throw InvalidArgument("restrict: index map must be increasing");
        previous = ri;
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const int cj = keep[cols_[k]];
            if (cj < 0) continue;
            out.cols_.push_back(cj);
            out.values_.push_back(values_[k]);
            ++out.row_offsets_[static_cast<std::size_t>(ri) + 1];
        }
    }
    for (int i = 0; i < new_dimension; ++i) out.row_offsets_[i + 1] += out.row_offsets_[i];
    return out;
}

SparseOperator SparseOperator::scaled(double c) const {
    SparseOperator out = *this;
    for (double& v : out.values_) v *= c;
    return out;
}

} // namespace hvi::fem
