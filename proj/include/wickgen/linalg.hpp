#pragma once

#include <vector>

#include "wickgen/rational.hpp"
#include "wickgen/tensor.hpp"

namespace wickgen {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

Rat det(Mat m);
Mat invert(Mat m);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, const Vec& x);
Mat identity(std::size_t n);

/// rank of a rational matrix (exact Gaussian elimination)
int rank(Mat m);

/// basis of the right nullspace {x : m x = 0}, as columns
std::vector<Vec> nullspace(const Mat& m, std::size_t cols);

/// Incremental exact rank tracker: rows are reduced against the rows already
/// kept, so `offer` is O(kept * len) per call. Internally rows are scaled to
/// integers and kept content-normalized, which keeps the exact elimination
/// arithmetic on small operands.
class RankAccumulator {
public:
    /// true iff the row was independent of everything kept so far (and kept)
    bool offer(Vec row);
    /// true iff the row lies in the span of the kept rows (nothing is kept)
    bool contains(Vec row) const;
    int rank() const { return static_cast<int>(rows_.size()); }

private:
    using IntRow = std::vector<Int>;
    static IntRow to_int_row(const Vec& row);
    static void normalize(IntRow& row);
    bool reduce(IntRow& row) const;  // returns true if row reduced to zero
    std::vector<IntRow> rows_;       // echelon form, content-normalized
    std::vector<std::size_t> pivots_;
};

Vec flatten_tensor(const DenseTensor& t);

/// exact rank of the span of a family of equally-shaped tensors
int rank_of_span(const std::vector<DenseTensor>& ts);

}  // namespace wickgen
