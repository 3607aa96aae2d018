#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "idl/errors.hpp"

namespace idl {

// Arbitrary-precision signed integer, little-endian base-2^32 limbs.
// Zero is the empty limb vector with positive sign.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) {  // NOLINT: implicit by design
        unsigned long long mag;
        if (v < 0) {
            neg_ = true;
            mag = ~static_cast<unsigned long long>(v) + 1ULL;
        } else {
            mag = static_cast<unsigned long long>(v);
        }
        if (mag != 0) limbs_.push_back(static_cast<std::uint32_t>(mag & 0xffffffffULL));
        if (mag >> 32) limbs_.push_back(static_cast<std::uint32_t>(mag >> 32));
    }

    bool is_zero() const { return limbs_.empty(); }
    bool negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }

    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        if (a.sign() != b.sign()) return a.sign() <=> b.sign();
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (a.neg_) c = -c;
        return c <=> 0;
    }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.neg_ == b.neg_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
        } else {
            int c = cmp_mag(a.limbs_, b.limbs_);
            if (c == 0) return BigInt{};
            if (c > 0) {
                r.limbs_ = sub_mag(a.limbs_, b.limbs_);
                r.neg_ = a.neg_;
            } else {
                r.limbs_ = sub_mag(b.limbs_, a.limbs_);
                r.neg_ = b.neg_;
            }
        }
        r.trim();
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.is_zero() || b.is_zero()) return r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.neg_ = a.neg_ != b.neg_;
        r.trim();
        return r;
    }

    // Truncated quotient and remainder; remainder has the dividend's sign.
    static std::pair<BigInt, BigInt> divmod(const BigInt& a, const BigInt& b) {
        if (b.is_zero()) throw Error("BigInt: division by zero");
        BigInt q, r;
        divmod_mag(a.limbs_, b.limbs_, q.limbs_, r.limbs_);
        q.neg_ = a.neg_ != b.neg_;
        r.neg_ = a.neg_;
        q.trim();
        r.trim();
        return {q, r};
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) { return divmod(a, b).first; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { return divmod(a, b).second; }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> work = limbs_;
        std::string digits;
        while (!work.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = work.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (neg_) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    // Top-96-bits approximation: value ~= mantissa * 2^exponent.
    long double mantissa(int* exponent) const {
        if (is_zero()) {
            *exponent = 0;
            return 0.0L;
        }
        long double m = 0.0L;
        std::size_t top = limbs_.size();
        std::size_t lo = top >= 3 ? top - 3 : 0;
        for (std::size_t i = top; i-- > lo;) m = m * 4294967296.0L + limbs_[i];
        *exponent = static_cast<int>(32 * lo);
        return neg_ ? -m : m;
    }

    double to_double() const {
        int e = 0;
        long double m = mantissa(&e);
        return static_cast<double>(std::ldexp(m, e));
    }

private:
    bool neg_ = false;
    std::vector<std::uint32_t> limbs_;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        const auto& big = a.size() >= b.size() ? a : b;
        const auto& small = a.size() >= b.size() ? b : a;
        std::vector<std::uint32_t> r(big.size() + 1, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < big.size(); ++i) {
            std::uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0u);
            r[i] = static_cast<std::uint32_t>(s);
            carry = s >> 32;
        }
        r[big.size()] = static_cast<std::uint32_t>(carry);
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Requires |a| >= |b|.
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(a.size(), 0);
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t s = static_cast<std::int64_t>(a[i]) - borrow -
                             (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = s < 0 ? 1 : 0;
            if (s < 0) s += 1LL << 32;
            r[i] = static_cast<std::uint32_t>(s);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a[i]) * b[j] + r[i + j] + carry;
                r[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            r[i + b.size()] = static_cast<std::uint32_t>(carry);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Knuth algorithm D on magnitudes.
    static void divmod_mag(const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
        q.clear();
        r.clear();
        if (cmp_mag(u, v) < 0) {
            r = u;
            return;
        }
        const std::size_t n = v.size();
        if (n == 1) {
            q.assign(u.size(), 0);
            std::uint64_t rem = 0;
            for (std::size_t i = u.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | u[i];
                q[i] = static_cast<std::uint32_t>(cur / v[0]);
                rem = cur % v[0];
            }
            if (rem) r.push_back(static_cast<std::uint32_t>(rem));
            while (!q.empty() && q.back() == 0) q.pop_back();
            return;
        }
        const std::size_t m = u.size() - n;
        const int shift = std::countl_zero(v.back());
        std::vector<std::uint32_t> vn(n), un(u.size() + 1, 0);
        for (std::size_t i = n; i-- > 0;) {
            vn[i] = (v[i] << shift);
            if (shift && i > 0) vn[i] |= static_cast<std::uint32_t>(v[i - 1] >> (32 - shift));
        }
        un[u.size()] = shift ? static_cast<std::uint32_t>(u.back() >> (32 - shift)) : 0;
        for (std::size_t i = u.size(); i-- > 0;) {
            un[i] = (u[i] << shift);
            if (shift && i > 0) un[i] |= static_cast<std::uint32_t>(u[i - 1] >> (32 - shift));
        }
        q.assign(m + 1, 0);
        const std::uint64_t base = 1ULL << 32;
        for (std::size_t j = m + 1; j-- > 0;) {
            std::uint64_t num = (static_cast<std::uint64_t>(un[j + n]) << 32) | un[j + n - 1];
            std::uint64_t qhat = num / vn[n - 1];
            std::uint64_t rhat = num % vn[n - 1];
            while (qhat >= base || qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2])) {
                --qhat;
                rhat += vn[n - 1];
                if (rhat >= base) break;
            }
            std::uint64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * vn[i] + carry;
                carry = p >> 32;
                std::uint64_t sub = static_cast<std::uint64_t>(un[i + j]) - (p & 0xffffffffULL) - borrow;
                un[i + j] = static_cast<std::uint32_t>(sub);
                borrow = (sub >> 32) ? 1 : 0;
            }
            std::uint64_t top = static_cast<std::uint64_t>(un[j + n]) - carry - borrow;
            un[j + n] = static_cast<std::uint32_t>(top);
            if (top >> 32) {  // qhat one too large: add divisor back
                --qhat;
                std::uint64_t c = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::uint64_t s = static_cast<std::uint64_t>(un[i + j]) + vn[i] + c;
                    un[i + j] = static_cast<std::uint32_t>(s);
                    c = s >> 32;
                }
                un[j + n] = static_cast<std::uint32_t>(un[j + n] + c);
            }
            q[j] = static_cast<std::uint32_t>(qhat);
        }
        r.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = un[i] >> shift;
            if (shift && i + 1 < un.size()) r[i] |= static_cast<std::uint32_t>(un[i + 1] << (32 - shift));
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        while (!q.empty() && q.back() == 0) q.pop_back();
    }
};

// Exact rational number, always normalized: gcd(num, den) == 1, den > 0.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw Error("Rational: zero denominator");
        if (den_.negative()) {
            num_ = -num_;
            den_ = -den_;
        }
        normalize();
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw Error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

    double to_double() const {
        int en = 0, ed = 0;
        long double mn = num_.mantissa(&en);
        long double md = den_.mantissa(&ed);
        return static_cast<double>(std::ldexp(mn / md, en - ed));
    }

private:
    BigInt num_, den_;

    void normalize() {
        if (num_.is_zero()) {
            den_ = 1;
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (g != BigInt(1)) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

}  // namespace idl
