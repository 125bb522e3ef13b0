#include "wickgen/linalg.hpp"

#include <stdexcept>

namespace wickgen {

Rat det(Mat m) {
    const std::size_t n = m.size();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rat f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return d;
}

Mat invert(Mat m) {
    const std::size_t n = m.size();
    Mat inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) throw std::invalid_argument("invert: singular matrix");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = m[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rat f = m[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Mat r(n, Vec(m, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

Vec mat_vec(const Mat& a, const Vec& x) {
    Vec r(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (a[i][j] != 0 && x[j] != 0) r[i] += a[i][j] * x[j];
    return r;
}

Mat identity(std::size_t n) {
    Mat m(n, Vec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

int rank(Mat m) {
    RankAccumulator acc;
    for (auto& row : m) acc.offer(std::move(row));
    return acc.rank();
}

std::vector<Vec> nullspace(const Mat& m, std::size_t cols) {
    // reduced row echelon form
    Mat r = m;
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < r.size(); ++c) {
        std::size_t piv = row;
        while (piv < r.size() && r[piv][c] == 0) ++piv;
        if (piv == r.size()) continue;
        std::swap(r[piv], r[row]);
        Rat d = r[row][c];
        for (std::size_t j = 0; j < cols; ++j) r[row][j] /= d;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i == row || r[i][c] == 0) continue;
            Rat f = r[i][c];
            for (std::size_t j = 0; j < cols; ++j) r[i][j] -= f * r[row][j];
        }
        pivot_col.push_back(c);
        ++row;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v(cols, Rat(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -r[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool RankAccumulator::reduce(Vec& row) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rat& lead = row[pivots_[i]];
        if (lead == 0) continue;
        Rat f = lead;  // kept rows are normalized to pivot 1
        for (std::size_t j = 0; j < row.size(); ++j)
            if (rows_[i][j] != 0) row[j] -= f * rows_[i][j];
    }
    for (const Rat& q : row)
        if (q != 0) return false;
    return true;
}

bool RankAccumulator::offer(Vec row) {
    if (reduce(row)) return false;
    std::size_t piv = 0;
    while (row[piv] == 0) ++piv;
    Rat d = row[piv];
    for (Rat& q : row) q /= d;
    rows_.push_back(std::move(row));
    pivots_.push_back(piv);
    return true;
}

bool RankAccumulator::contains(Vec row) const { return reduce(row); }

Vec flatten_tensor(const DenseTensor& t) {
    Vec v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = t[i];
    return v;
}

int rank_of_span(const std::vector<DenseTensor>& ts) {
    if (ts.empty()) return 0;
    for (const auto& t : ts)
        if (t.dim() != ts[0].dim() || t.variance() != ts[0].variance())
            throw std::invalid_argument("rank_of_span: shape mismatch");
    RankAccumulator acc;
    for (const auto& t : ts) acc.offer(flatten_tensor(t));
    return acc.rank();
}

}  // namespace wickgen
