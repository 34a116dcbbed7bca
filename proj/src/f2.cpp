#include "isoselmer/f2.hpp"

#include "isoselmer/errors.hpp"

#include <utility>

namespace isoselmer {

F2Matrix::F2Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * ((cols + 63) / 64), 0) {}

F2Matrix F2Matrix::identity(std::size_t n)
{
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, true);
    return m;
}

F2Matrix F2Matrix::ones(std::size_t rows, std::size_t cols)
{
    F2Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.set(r, c, true);
    return m;
}

F2Matrix F2Matrix::from_strings(const std::vector<std::string>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    F2Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DomainError("F2Matrix::from_strings: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (rows[r][c] != '0' && rows[r][c] != '1')
                throw DomainError("F2Matrix::from_strings: entries must be 0 or 1");
            m.set(r, c, rows[r][c] == '1');
        }
    }
    return m;
}

bool F2Matrix::get(std::size_t r, std::size_t c) const { return (row_ptr(r)[c / 64] >> (c % 64)) & 1; }

void F2Matrix::set(std::size_t r, std::size_t c, bool value)
{
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (value)
        row_ptr(r)[c / 64] |= bit;
    else
        row_ptr(r)[c / 64] &= ~bit;
}

void F2Matrix::flip(std::size_t r, std::size_t c) { row_ptr(r)[c / 64] ^= std::uint64_t{1} << (c % 64); }

F2Matrix F2Matrix::transpose() const
{
    F2Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c))
                t.set(c, r, true);
    return t;
}

F2Matrix F2Matrix::complement() const { return *this + ones(rows_, cols_); }

F2Matrix F2Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_)
        throw DomainError("F2Matrix::block: out of range");
    F2Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c)
            b.set(r, c, get(r0 + r, c0 + c));
    return b;
}

F2Matrix F2Matrix::hstack(const F2Matrix& right) const
{
    if (rows_ != right.rows_)
        throw DomainError("F2Matrix::hstack: row counts differ");
    F2Matrix m(rows_, cols_ + right.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c)
            m.set(r, c, get(r, c));
        for (std::size_t c = 0; c < right.cols_; ++c)
            m.set(r, cols_ + c, right.get(r, c));
    }
    return m;
}

F2Matrix F2Matrix::vstack(const F2Matrix& below) const
{
    if (cols_ != below.cols_)
        throw DomainError("F2Matrix::vstack: column counts differ");
    F2Matrix m(rows_ + below.rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m.set(r, c, get(r, c));
    for (std::size_t r = 0; r < below.rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m.set(rows_ + r, c, below.get(r, c));
    return m;
}

std::vector<std::string> F2Matrix::to_strings() const
{
    std::vector<std::string> out(rows_, std::string(cols_, '0'));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c))
                out[r][c] = '1';
    return out;
}

F2Matrix operator+(const F2Matrix& x, const F2Matrix& y)
{
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
        throw DomainError("F2Matrix +: shape mismatch");
    F2Matrix s = x;
    for (std::size_t i = 0; i < s.data_.size(); ++i)
        s.data_[i] ^= y.data_[i];
    return s;
}

F2Matrix operator*(const F2Matrix& x, const F2Matrix& y)
{
    if (x.cols_ != y.rows_)
        throw DomainError("F2Matrix *: shape mismatch");
    F2Matrix p(x.rows_, y.cols_);
    const std::size_t w = p.words_per_row();
    for (std::size_t r = 0; r < x.rows_; ++r) {
        std::uint64_t* out = p.row_ptr(r);
        for (std::size_t k = 0; k < x.cols_; ++k) {
            if (!x.get(r, k))
                continue;
            const std::uint64_t* in = y.row_ptr(k);
            for (std::size_t i = 0; i < w; ++i)
                out[i] ^= in[i];
        }
    }
    return p;
}

std::size_t f2_rank(const F2Matrix& m)
{
    F2Matrix work = m;
    const std::size_t w = work.words_per_row();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < work.cols_ && rank < work.rows_; ++c) {
        std::size_t pivot = rank;
        while (pivot < work.rows_ && !work.get(pivot, c))
            ++pivot;
        if (pivot == work.rows_)
            continue;
        if (pivot != rank)
            for (std::size_t i = 0; i < w; ++i)
                std::swap(work.row_ptr(pivot)[i], work.row_ptr(rank)[i]);
        const std::uint64_t* prow = work.row_ptr(rank);
        for (std::size_t r = rank + 1; r < work.rows_; ++r) {
            if (!work.get(r, c))
                continue;
            std::uint64_t* row = work.row_ptr(r);
            for (std::size_t i = 0; i < w; ++i)
                row[i] ^= prow[i];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<bool>> f2_kernel(const F2Matrix& m)
{
    // Reduced row echelon form, then one kernel vector per free column.
    F2Matrix work = m;
    const std::size_t w = work.words_per_row();
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < work.cols_ && rank < work.rows_; ++c) {
        std::size_t pivot = rank;
        while (pivot < work.rows_ && !work.get(pivot, c))
            ++pivot;
        if (pivot == work.rows_)
            continue;
        if (pivot != rank)
            for (std::size_t i = 0; i < w; ++i)
                std::swap(work.row_ptr(pivot)[i], work.row_ptr(rank)[i]);
        const std::uint64_t* prow = work.row_ptr(rank);
        for (std::size_t r = 0; r < work.rows_; ++r) {
            if (r == rank || !work.get(r, c))
                continue;
            std::uint64_t* row = work.row_ptr(r);
            for (std::size_t i = 0; i < w; ++i)
                row[i] ^= prow[i];
        }
        pivot_cols.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(work.cols_, false);
    for (std::size_t c : pivot_cols)
        is_pivot[c] = true;
    std::vector<std::vector<bool>> basis;
    for (std::size_t free = 0; free < work.cols_; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<bool> v(work.cols_, false);
        v[free] = true;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            if (work.get(i, free))
                v[pivot_cols[i]] = true;
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace isoselmer
