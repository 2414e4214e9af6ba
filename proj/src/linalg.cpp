#include "ellip/linalg.hpp"

#include "ellip/error.hpp"

#include <utility>

namespace ellip {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw DimensionMismatch("row length differs from column count");
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = rows[r][c];
    }
    return m;
}

std::vector<Rational> Matrix::row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

void Matrix::append_row(const std::vector<Rational>& row) {
    if (rows_ == 0 && cols_ == 0)
        cols_ = row.size();
    if (row.size() != cols_)
        throw DimensionMismatch("appended row has wrong length");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_)
        throw DimensionMismatch("matrix product: inner dimensions differ");
    Matrix p(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (ellip::is_zero(a))
                continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                p(i, j) += a * other(k, j);
        }
    return p;
}

bool Matrix::is_zero() const {
    for (const auto& q : data_)
        if (!ellip::is_zero(q))
            return false;
    return true;
}

bool is_zero_vector(const std::vector<Rational>& v) {
    for (const auto& q : v)
        if (!is_zero(q))
            return false;
    return true;
}

std::vector<Rational> Echelon::reduce(std::vector<Rational> v) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Rational f = v[pivots[i]];
        if (is_zero(f))
            continue;
        for (std::size_t c = 0; c < cols; ++c)
            if (!is_zero(rows[i][c]))
                v[c] -= f * rows[i][c];
    }
    return v;
}

bool Echelon::contains(const std::vector<Rational>& v) const { return is_zero_vector(reduce(v)); }

std::vector<std::size_t> Echelon::free_columns() const {
    std::vector<bool> pivot(cols, false);
    for (auto p : pivots)
        pivot[p] = true;
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols; ++c)
        if (!pivot[c])
            out.push_back(c);
    return out;
}

Echelon row_echelon(const std::vector<std::vector<Rational>>& input, std::size_t cols) {
    std::vector<std::vector<Rational>> a = input;
    Echelon e;
    e.cols = cols;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < a.size(); ++c) {
        std::size_t piv = lead;
        while (piv < a.size() && is_zero(a[piv][c]))
            ++piv;
        if (piv == a.size())
            continue;
        std::swap(a[lead], a[piv]);
        const Rational inv = 1 / a[lead][c];
        for (std::size_t k = c; k < cols; ++k)
            a[lead][k] *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == lead || is_zero(a[r][c]))
                continue;
            const Rational f = a[r][c];
            for (std::size_t k = c; k < cols; ++k)
                if (!is_zero(a[lead][k]))
                    a[r][k] -= f * a[lead][k];
        }
        e.pivots.push_back(c);
        ++lead;
    }
    a.resize(lead);
    e.rows = std::move(a);
    return e;
}

Echelon row_echelon(const Matrix& m) {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        rows.push_back(m.row(r));
    return row_echelon(rows, m.cols());
}

std::size_t rank(const Matrix& m) { return row_echelon(m).rank(); }

Rational determinant(Matrix m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && is_zero(m(piv, c)))
            ++piv;
        if (piv == n)
            return 0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(m(c, k), m(piv, k));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (is_zero(m(r, c)))
                continue;
            const Rational f = m(r, c) / m(c, c);
            for (std::size_t k = c; k < n; ++k)
                m(r, k) -= f * m(c, k);
        }
    }
    return det;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols())
        throw InvalidArgument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(2 * n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            rows[r][c] = m(r, c);
        rows[r][n + r] = 1;
    }
    const Echelon e = row_echelon(rows, 2 * n);
    if (e.rank() < n || e.pivots[n - 1] != n - 1)
        throw InvalidArgument("matrix is singular");
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            inv(r, c) = e.rows[r][n + c];
    return inv;
}

std::vector<std::vector<Rational>> nullspace(const Matrix& m) {
    const Echelon e = row_echelon(m);
    std::vector<std::vector<Rational>> basis;
    for (auto f : e.free_columns()) {
        std::vector<Rational> v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i)
            v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace ellip
