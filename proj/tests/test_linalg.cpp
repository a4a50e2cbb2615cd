#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qinv/generator.hpp"
#include "qinv/matrix.hpp"

using namespace qinv;

namespace {

Matrix from_rows(Field f, std::vector<std::vector<long>> rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), f);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m.at(i, j) = Scalar::from_long(rows[i][j], f);
    return m;
}

std::vector<Scalar> vec(Field f, std::vector<long> v) {
    std::vector<Scalar> out;
    for (long x : v)
        out.push_back(Scalar::from_long(x, f));
    return out;
}

/* Independent oracle: a second, plain Gauss-Jordan elimination written
   directly against the definition, no shared code with rref(). */
Matrix oracle_rref(Matrix m) {
    std::size_t lead = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (lead >= m.cols())
            break;
        std::size_t i = r;
        while (m.at(i, lead).is_zero()) {
            ++i;
            if (i == m.rows()) {
                i = r;
                ++lead;
                if (lead == m.cols())
                    return m;
            }
        }
        for (std::size_t c = 0; c < m.cols(); ++c)
            std::swap(m.at(i, c), m.at(r, c));
        Scalar inv = m.at(r, lead).inverse();
        for (std::size_t c = 0; c < m.cols(); ++c)
            m.at(r, c) *= inv;
        for (std::size_t k = 0; k < m.rows(); ++k) {
            if (k == r)
                continue;
            Scalar fac = m.at(k, lead);
            if (fac.is_zero())
                continue;
            for (std::size_t c = 0; c < m.cols(); ++c)
                m.at(k, c) -= fac * m.at(r, c);
        }
        ++lead;
    }
    return m;
}

Matrix random_matrix(SplitMix64& rng, std::size_t r, std::size_t c, Field f) {
    Matrix m(r, c, f);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.at(i, j) = Scalar::from_long(rng.range(-3, 3), f);
    return m;
}

}  // namespace

TEST_CASE("scalar arithmetic and serialization") {
    Field q = Field::rationals();
    Field p = Field::prime(7);

    CHECK(Scalar::parse("-1/2", q).str() == "-1/2");
    CHECK(Scalar::parse("3", q).str() == "3");
    CHECK(Scalar::parse("2/4", q).str() == "1/2");  // stored in lowest terms
    CHECK((Scalar::parse("1/3", q) + Scalar::parse("1/6", q)).str() == "1/2");
    CHECK((Scalar::from_long(-5, p)).str() == "2");
    CHECK((Scalar::from_long(3, p) * Scalar::from_long(5, p)).str() == "1");
    CHECK(Scalar::from_long(3, p).inverse().str() == "5");
    CHECK_THROWS_AS(Scalar::parse("1.5", q), ParseError);
    CHECK_THROWS_AS(Scalar::parse("7", p), ParseError);  // not canonical mod 7
    CHECK_THROWS_AS(Scalar::parse("-1", p), ParseError);
    CHECK_THROWS_AS((void)Field::prime(6), std::invalid_argument);
    CHECK_THROWS_AS(Scalar::from_long(1, q) + Scalar::from_long(1, p), FieldMismatch);
    CHECK(Field::parse("f:101").characteristic() == 101);
    CHECK(Field::parse("q").is_rational());
}

TEST_CASE("rref examples") {
    Field q = Field::rationals();
    SUBCASE("identity") {
        RrefResult r = rref(Matrix::identity(2, q));
        CHECK(r.reduced == Matrix::identity(2, q));
        CHECK(r.pivot_columns == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("zero") {
        RrefResult r = rref(Matrix(2, 3, q));
        CHECK(r.reduced.is_zero());
        CHECK(r.pivot_columns.empty());
    }
    SUBCASE("rank one") {
        RrefResult r = rref(from_rows(q, {{2, 4}, {1, 2}}));
        CHECK(r.reduced == from_rows(q, {{1, 2}, {0, 0}}));
        CHECK(r.pivot_columns == std::vector<std::size_t>{0});
    }
}

TEST_CASE("solve examples") {
    Field q = Field::rationals();
    SUBCASE("identity system") {
        auto x = solve(Matrix::identity(3, q), vec(q, {5, -1, 2}));
        REQUIRE(x.has_value());
        CHECK(*x == vec(q, {5, -1, 2}));
    }
    SUBCASE("free variable zeroed") {
        auto x = solve(from_rows(q, {{1, 1}}), vec(q, {0}));
        REQUIRE(x.has_value());
        CHECK(*x == vec(q, {0, 0}));
    }
    SUBCASE("inconsistent") {
        CHECK_FALSE(solve(from_rows(q, {{0}}), vec(q, {1})).has_value());
    }
    SUBCASE("rhs length checked") {
        CHECK_THROWS_AS(solve(Matrix::identity(2, q), vec(q, {1})), std::invalid_argument);
    }
}

TEST_CASE("kernel examples") {
    Field q = Field::rationals();
    CHECK(kernel_basis(Matrix::identity(3, q)).cols() == 0);
    Matrix z = kernel_basis(Matrix(1, 2, q));
    CHECK(z == Matrix::identity(2, q));
    Matrix k = kernel_basis(from_rows(q, {{1, 2}}));
    REQUIRE(k.cols() == 1);
    CHECK(k.at(0, 0) == Scalar::from_long(-2, q));
    CHECK(k.at(1, 0) == Scalar::from_long(1, q));
    CHECK((from_rows(q, {{1, 2}}) * k).is_zero());
}

TEST_CASE("linalg properties against the oracle") {
    for (Field f : {Field::rationals(), Field::prime(32003)}) {
        SplitMix64 rng(2024);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
            Matrix a = random_matrix(rng, r, c, f);

            RrefResult rr = rref(a);
            CHECK(rr.reduced == oracle_rref(a));
            CHECK(rref(rr.reduced).reduced == rr.reduced);  // idempotent
            for (std::size_t i = 1; i < rr.pivot_columns.size(); ++i)
                CHECK(rr.pivot_columns[i - 1] < rr.pivot_columns[i]);

            Matrix ker = kernel_basis(a);
            CHECK((a * ker).is_zero());
            CHECK(rank(a) + ker.cols() == a.cols());

            // b in the column span: always solvable, exact residual
            std::vector<Scalar> x0;
            for (std::size_t j = 0; j < c; ++j)
                x0.push_back(Scalar::from_long(rng.range(-2, 2), f));
            std::vector<Scalar> b = a.apply(x0);
            auto x = solve(a, b);
            REQUIRE(x.has_value());
            CHECK(a.apply(*x) == b);
        }
    }
}
