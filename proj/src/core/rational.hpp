#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fiberloc {

/// Thrown when an exact integer computation would overflow int64.
class ArithmeticOverflow : public std::runtime_error {
public:
    explicit ArithmeticOverflow(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
int64_t checked_add(int64_t a, int64_t b);
int64_t checked_sub(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);
}  // namespace detail

/// Exact rational number over int64 with overflow checking.
/// Always normalized: gcd(num, den) == 1, den > 0.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(int64_t n, int64_t d);

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    /// Floor and ceiling as exact integers.
    int64_t floor() const;
    int64_t ceil() const;

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const;

    /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input.
    static Rational parse(const std::string& text);

    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    void normalize();
    int64_t num_;
    int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace fiberloc
