#include "core/rational.hpp"

#include <cstdlib>
#include <ostream>

namespace fiberloc {

namespace detail {

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("int64 add overflow");
    return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("int64 sub overflow");
    return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("int64 mul overflow");
    return r;
}

}  // namespace detail

using detail::checked_add;
using detail::checked_mul;
using detail::checked_sub;

Rational::Rational(int64_t n, int64_t d) : num_(n), den_(d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = checked_sub(0, num_);
        den_ = checked_sub(0, den_);
    }
    int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) den_ = 1;
}

int64_t Rational::floor() const {
    int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

int64_t Rational::ceil() const {
    int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        int64_t n = std::stoll(text.substr(0, slash));
        int64_t d = std::stoll(text.substr(slash + 1));
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("Rational::parse: malformed rational '" + text + "'");
    }
}

Rational& Rational::operator+=(const Rational& o) {
    // a/b + c/d = (ad + cb) / bd, normalized afterwards
    int64_t n = checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_));
    int64_t d = checked_mul(den_, o.den_);
    num_ = n;
    den_ = d;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    // cross-reduce first to keep intermediates small
    int64_t g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
    int64_t g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
    num_ = checked_mul(num_ / g1, o.num_ / g2);
    den_ = checked_mul(den_ / g2, o.den_ / g1);
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return *this *= Rational(o.den_, o.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    // compare via checked cross-multiplication
    return detail::checked_mul(a.num(), b.den()) < detail::checked_mul(b.num(), a.den());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace fiberloc
