#pragma once

#include <optional>
#include <vector>

#include "qinv/scalar.hpp"

namespace qinv {

/* Dense row-major matrix over one field instance. */
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0), field_(Field::rationals()) {}
    Matrix(std::size_t rows, std::size_t cols, Field f)
        : rows_(rows), cols_(cols), field_(f), e_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(std::size_t n, Field f);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    Scalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool is_zero() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Scalar& c) const;

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

  private:
    std::size_t rows_, cols_;
    Field field_;
    std::vector<Scalar> e_;
};

struct RrefResult {
    Matrix reduced;
    std::vector<std::size_t> pivot_columns;
};

/* Unique reduced row-echelon form; pivot columns strictly increasing. */
RrefResult rref(const Matrix& m);

/* Canonical solution of a x = b with all free variables set to zero,
   or nullopt if the system is inconsistent. */
std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b);

/* Columns span ker(a): one column per free column of rref(a), in column order. */
Matrix kernel_basis(const Matrix& a);

std::size_t rank(const Matrix& a);

}  // namespace qinv
