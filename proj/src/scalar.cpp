#include "qinv/scalar.hpp"

#include <cctype>

namespace qinv {

Field Field::prime(std::uint32_t p) {
    if (p < 2 || p >= (1u << 31))
        throw std::invalid_argument("field characteristic must be a prime below 2^31");
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            throw std::invalid_argument("field characteristic must be prime: " + std::to_string(p));
    Field f;
    f.p_ = p;
    return f;
}

std::string Field::str() const {
    return is_rational() ? "q" : "f:" + std::to_string(p_);
}

Field Field::parse(const std::string& s) {
    if (s == "q" || s == "Q")
        return rationals();
    if (s.rfind("f:", 0) == 0 || s.rfind("F:", 0) == 0) {
        const std::string digits = s.substr(2);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad field spec: " + s);
        unsigned long p = std::stoul(digits);
        return prime(static_cast<std::uint32_t>(p));
    }
    throw ParseError("bad field spec: " + s + " (expected q or f:<p>)");
}

namespace {

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime, 0 < a < p
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt; nt = tmp;
        tmp = r - q * nr;
        r = nr; nr = tmp;
    }
    if (r != 1)
        throw std::domain_error("not invertible mod p");
    if (t < 0)
        t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

}  // namespace

Scalar Scalar::from_long(long v, Field f) {
    Scalar s(f);
    if (f.is_rational()) {
        s.q_ = v;
    } else {
        const std::int64_t p = f.characteristic();
        std::int64_t m = v % p;
        if (m < 0)
            m += p;
        s.r_ = static_cast<std::uint64_t>(m);
    }
    return s;
}

void Scalar::check_same(const Scalar& o) const {
    if (field_ != o.field_)
        throw FieldMismatch("scalars from different fields");
}

bool Scalar::is_zero() const {
    return field_.is_rational() ? q_ == 0 : r_ == 0;
}

bool Scalar::is_one() const {
    return field_.is_rational() ? q_ == 1 : r_ == 1;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(o);
    Scalar s(field_);
    if (field_.is_rational()) {
        s.q_ = q_ + o.q_;
    } else {
        s.r_ = r_ + o.r_;
        if (s.r_ >= field_.characteristic())
            s.r_ -= field_.characteristic();
    }
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(o);
    Scalar s(field_);
    if (field_.is_rational()) {
        s.q_ = q_ - o.q_;
    } else {
        s.r_ = r_ + field_.characteristic() - o.r_;
        if (s.r_ >= field_.characteristic())
            s.r_ -= field_.characteristic();
    }
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(o);
    Scalar s(field_);
    if (field_.is_rational())
        s.q_ = q_ * o.q_;
    else
        s.r_ = (r_ * o.r_) % field_.characteristic();  // p < 2^31, product fits
    return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational()) {
        q_ += o.q_;
    } else {
        r_ += o.r_;
        if (r_ >= field_.characteristic())
            r_ -= field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational()) {
        q_ -= o.q_;
    } else {
        r_ += field_.characteristic() - o.r_;
        if (r_ >= field_.characteristic())
            r_ -= field_.characteristic();
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (field_.is_rational())
        q_ *= o.q_;
    else
        r_ = (r_ * o.r_) % field_.characteristic();
    return *this;
}

Scalar Scalar::inverse() const {
    if (is_zero())
        throw std::domain_error("division by zero");
    Scalar s(field_);
    if (field_.is_rational())
        s.q_ = 1 / q_;
    else
        s.r_ = mod_inverse(r_, field_.characteristic());
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
    return *this * o.inverse();
}

Scalar Scalar::operator-() const {
    Scalar s(field_);
    if (field_.is_rational())
        s.q_ = -q_;
    else if (r_ != 0)
        s.r_ = field_.characteristic() - r_;
    return s;
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_)
        return false;
    return field_.is_rational() ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const {
    if (field_.is_rational())
        return q_.get_str();
    return std::to_string(r_);
}

Scalar Scalar::parse(const std::string& s, Field f) {
    if (s.empty())
        throw ParseError("empty scalar");
    if (f.is_rational()) {
        // strict [-]digits[/digits]
        std::size_t i = 0;
        if (s[0] == '-')
            i = 1;
        bool seen_digit = false, seen_slash = false;
        for (std::size_t k = i; k < s.size(); ++k) {
            if (std::isdigit(static_cast<unsigned char>(s[k]))) {
                seen_digit = true;
            } else if (s[k] == '/' && !seen_slash && seen_digit && k + 1 < s.size()) {
                seen_slash = true;
            } else {
                throw ParseError("bad rational: " + s);
            }
        }
        if (!seen_digit)
            throw ParseError("bad rational: " + s);
        Scalar out(f);
        out.q_ = mpq_class(s);
        if (out.q_.get_den() == 0)
            throw ParseError("zero denominator: " + s);
        out.q_.canonicalize();
        return out;
    }
    if (s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad prime-field value: " + s);
    unsigned long long v = std::stoull(s);
    if (v >= f.characteristic())
        throw ParseError("value not a canonical representative mod " +
                         std::to_string(f.characteristic()) + ": " + s);
    Scalar out(f);
    out.r_ = v;
    return out;
}

}  // namespace qinv
