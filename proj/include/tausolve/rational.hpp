#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <string>

#include "tausolve/errors.hpp"

namespace tausolve {

/// Exact rational with 64-bit numerator/denominator, always reduced, den > 0.
/// Exponents and valuations at desk scale stay far below the overflow range;
/// intermediates go through __int128 and overflow aborts loudly.
class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    Rat operator-() const { return Rat(-num_, den_, already_reduced{}); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) fail(Err::DegenerateInput, "rational division by zero");
        return make128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        __int128 l = (__int128)a.num_ * b.den_, r = (__int128)b.num_ * a.den_;
        return l < r ? std::strong_ordering::less
             : l > r ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "a" or "a/b". Throws ParseError on malformed input.
    static Rat parse(const std::string& s);

    /// floor(num/den)
    std::int64_t floor() const {
        std::int64_t q = num_ / den_, r = num_ % den_;
        return (r < 0) ? q - 1 : q;
    }

private:
    struct already_reduced {};
    Rat(std::int64_t n, std::int64_t d, already_reduced) : num_(n), den_(d) {}

    void normalize() {
        if (den_ == 0) fail(Err::DegenerateInput, "zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    static Rat make128(__int128 n, __int128 d) {
        if (d == 0) fail(Err::DegenerateInput, "zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            fail(Err::Internal, "rational overflow");
        return Rat((std::int64_t)n, (std::int64_t)d, already_reduced{});
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a;
    }

    std::int64_t num_, den_;
};

/// Valuation value: a rational or +infinity (valuation of an exact zero).
class Val {
public:
    Val() : inf_(true) {}
    Val(const Rat& r) : inf_(false), r_(r) {}
    Val(std::int64_t n) : inf_(false), r_(n) {}
    static Val infinity() { return Val(); }

    bool is_inf() const { return inf_; }
    const Rat& rat() const {
        if (inf_) fail(Err::Internal, "valuation is infinite");
        return r_;
    }

    friend Val operator+(const Val& a, const Val& b) {
        if (a.inf_ || b.inf_) return infinity();
        return Val(a.r_ + b.r_);
    }
    friend Val operator*(const Val& a, const Rat& c) {
        if (a.inf_) return infinity();
        return Val(a.r_ * c);
    }
    friend bool operator==(const Val& a, const Val& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.r_ == b.r_;
    }
    friend bool operator<(const Val& a, const Val& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.r_ < b.r_;
    }
    friend bool operator<=(const Val& a, const Val& b) { return a < b || a == b; }
    friend bool operator>(const Val& a, const Val& b) { return b < a; }
    friend bool operator>=(const Val& a, const Val& b) { return b <= a; }

    friend Val min(const Val& a, const Val& b) { return a < b ? a : b; }
    friend Val max(const Val& a, const Val& b) { return a < b ? b : a; }

    std::string str() const { return inf_ ? "inf" : r_.str(); }

private:
    bool inf_;
    Rat r_;
};

} // namespace tausolve
