#include "qinv/matrix.hpp"

namespace qinv {

Matrix Matrix::identity(std::size_t n, Field f) {
    Matrix m(n, n, f);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = Scalar::one(f);
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero())
            return false;
    return true;
}

bool Matrix::operator==(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
        return false;
    for (std::size_t k = 0; k < e_.size(); ++k)
        if (e_[k] != o.e_[k])
            return false;
    return true;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_)
        throw std::invalid_argument("matrix product shape mismatch");
    if (field_ != o.field_)
        throw FieldMismatch("matrix product over different fields");
    Matrix r(rows_, o.cols_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = at(i, k);
            if (a.is_zero())
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                const Scalar& b = o.at(k, j);
                if (!b.is_zero())
                    r.at(i, j) += a * b;
            }
        }
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix sum shape mismatch");
    if (field_ != o.field_)
        throw FieldMismatch("matrix sum over different fields");
    Matrix r = *this;
    for (std::size_t k = 0; k < e_.size(); ++k)
        r.e_[k] += o.e_[k];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    return *this + o.scaled(-Scalar::one(field_));
}

Matrix Matrix::scaled(const Scalar& c) const {
    Matrix r = *this;
    for (auto& x : r.e_)
        x *= c;
    return r;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
    if (v.size() != cols_)
        throw std::invalid_argument("matrix apply shape mismatch");
    std::vector<Scalar> out(rows_, Scalar::zero(field_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero() && !v[j].is_zero())
                out[i] += at(i, j) * v[j];
    return out;
}

RrefResult rref(const Matrix& m) {
    Matrix r = m;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
        std::size_t piv = row;
        while (piv < r.rows() && r.at(piv, col).is_zero())
            ++piv;
        if (piv == r.rows())
            continue;
        if (piv != row)
            for (std::size_t j = 0; j < r.cols(); ++j)
                std::swap(r.at(piv, j), r.at(row, j));
        const Scalar inv = r.at(row, col).inverse();
        for (std::size_t j = col; j < r.cols(); ++j)
            r.at(row, j) *= inv;
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == row || r.at(i, col).is_zero())
                continue;
            const Scalar f = r.at(i, col);
            for (std::size_t j = col; j < r.cols(); ++j)
                r.at(i, j) -= f * r.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(r), std::move(pivots)};
}

std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
    if (b.size() != a.rows())
        throw std::invalid_argument("solve: rhs length mismatch");
    for (const auto& x : b)
        if (x.field() != a.field())
            throw FieldMismatch("solve: rhs from a different field");
    Matrix aug(a.rows(), a.cols() + 1, a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    RrefResult r = rref(aug);
    for (const std::size_t c : r.pivot_columns)
        if (c == a.cols())
            return std::nullopt;  // pivot in the augmented column: inconsistent
    std::vector<Scalar> x(a.cols(), Scalar::zero(a.field()));
    for (std::size_t k = 0; k < r.pivot_columns.size(); ++k)
        x[r.pivot_columns[k]] = r.reduced.at(k, a.cols());
    return x;
}

Matrix kernel_basis(const Matrix& a) {
    RrefResult r = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (const std::size_t c : r.pivot_columns)
        is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    Matrix k(a.cols(), free_cols.size(), a.field());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        const std::size_t fc = free_cols[j];
        k.at(fc, j) = Scalar::one(a.field());
        for (std::size_t rrow = 0; rrow < r.pivot_columns.size(); ++rrow)
            k.at(r.pivot_columns[rrow], j) = -r.reduced.at(rrow, fc);
    }
    return k;
}

std::size_t rank(const Matrix& a) {
    return rref(a).pivot_columns.size();
}

}  // namespace qinv
