#pragma once

// Dense matrices over F2 with bit-packed rows.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace isoselmer {

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols);

    static F2Matrix identity(std::size_t n);
    static F2Matrix ones(std::size_t rows, std::size_t cols);
    /// Rows given as strings of '0'/'1'.
    static F2Matrix from_strings(const std::vector<std::string>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool value);
    void flip(std::size_t r, std::size_t c);

    F2Matrix transpose() const;
    /// Entrywise complement (M + all-ones).
    F2Matrix complement() const;
    /// Rows [r0, r0+nr) x columns [c0, c0+nc).
    F2Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    F2Matrix hstack(const F2Matrix& right) const;
    F2Matrix vstack(const F2Matrix& below) const;

    std::vector<std::string> to_strings() const;

    friend F2Matrix operator+(const F2Matrix& x, const F2Matrix& y);
    friend F2Matrix operator*(const F2Matrix& x, const F2Matrix& y);
    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

private:
    std::size_t words_per_row() const { return (cols_ + 63) / 64; }
    std::uint64_t* row_ptr(std::size_t r) { return data_.data() + r * words_per_row(); }
    const std::uint64_t* row_ptr(std::size_t r) const { return data_.data() + r * words_per_row(); }

    friend std::size_t f2_rank(const F2Matrix& m);
    friend std::vector<std::vector<bool>> f2_kernel(const F2Matrix& m);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Row-echelon rank over F2.
std::size_t f2_rank(const F2Matrix& m);

/// Basis of the right kernel {x : M x = 0}, each vector of length cols().
std::vector<std::vector<bool>> f2_kernel(const F2Matrix& m);

} // namespace isoselmer
