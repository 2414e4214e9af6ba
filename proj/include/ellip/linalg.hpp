#pragma once

#include "ellip/rational.hpp"

#include <cstddef>
#include <vector>

namespace ellip {

/// Dense row-major matrix over Q. Small sizes only (desk scale).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Rational> row(std::size_t r) const;
    void append_row(const std::vector<Rational>& row);

    Matrix transpose() const;
    Matrix operator*(const Matrix& other) const;
    bool operator==(const Matrix& other) const = default;

    bool is_zero() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form of the row space.
struct Echelon {
    std::vector<std::vector<Rational>> rows; // nonzero rows only, pivot entries 1
    std::vector<std::size_t> pivots;         // pivot column of each row
    std::size_t cols = 0;

    std::size_t rank() const noexcept { return rows.size(); }

    /// Subtracts row multiples so that v has zero pivot coordinates.
    /// The result is the canonical representative of v modulo the row space.
    std::vector<Rational> reduce(std::vector<Rational> v) const;
    bool contains(const std::vector<Rational>& v) const;
    /// Non-pivot columns, i.e. a complement basis of standard vectors.
    std::vector<std::size_t> free_columns() const;
};

Echelon row_echelon(const Matrix& m);
Echelon row_echelon(const std::vector<std::vector<Rational>>& rows, std::size_t cols);

std::size_t rank(const Matrix& m);
Rational determinant(Matrix m);
/// Throws InvalidArgument for singular or non-square input.
Matrix inverse(const Matrix& m);

/// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const Matrix& m);

bool is_zero_vector(const std::vector<Rational>& v);

} // namespace ellip
