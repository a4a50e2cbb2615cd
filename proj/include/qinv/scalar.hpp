#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace qinv {

struct FieldMismatch : std::runtime_error {
    explicit FieldMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/* Ground field: the rationals (p == 0) or integers mod a prime p < 2^31. */
class Field {
  public:
    Field() = default;
    static Field rationals() { return Field(); }
    static Field prime(std::uint32_t p);

    bool is_rational() const { return p_ == 0; }
    std::uint32_t characteristic() const { return p_; }

    bool operator==(const Field& o) const { return p_ == o.p_; }
    bool operator!=(const Field& o) const { return p_ != o.p_; }

    /* "q" or "f:<p>", as used by the CLI and the file formats. */
    std::string str() const;
    static Field parse(const std::string& s);

  private:
    std::uint32_t p_ = 0;
};

/* Exact field element.  Rationals are kept in lowest terms with positive
   denominator (mpq canonical form); prime-field values as representatives
   in [0, p). */
class Scalar {
  public:
    Scalar() : field_(Field::rationals()) {}
    explicit Scalar(Field f) : field_(f) {}

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return from_long(1, f); }
    static Scalar from_long(long v, Field f);

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /* Serialized form: "num/den" or "num" over Q, decimal representative mod p. */
    std::string str() const;
    static Scalar parse(const std::string& s, Field f);

  private:
    void check_same(const Scalar& o) const;

    Field field_;
    mpq_class q_;          // used when field is Q
    std::uint64_t r_ = 0;  // used when field is F_p
};

}  // namespace qinv
