#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pvif {

/// Exact arbitrary-precision rational. Always stored reduced with a
/// positive denominator (canonical form maintained by GMP).
class BigRational {
public:
    BigRational() { mpq_init(q_); }
    BigRational(long num) {
        mpq_init(q_);
        mpq_set_si(q_, num, 1);
    }
    BigRational(long num, unsigned long den) {
        if (den == 0) throw std::domain_error("BigRational: zero denominator");
        mpq_init(q_);
        mpq_set_si(q_, num, den);
        mpq_canonicalize(q_);
    }
    explicit BigRational(const std::string& s) {
        mpq_init(q_);
        if (mpq_set_str(q_, s.c_str(), 10) != 0) {
            mpq_clear(q_);
            throw std::invalid_argument("BigRational: bad literal '" + s + "'");
        }
        if (mpz_sgn(mpq_denref(q_)) == 0) {
            mpq_clear(q_);
            throw std::domain_error("BigRational: zero denominator");
        }
        mpq_canonicalize(q_);
    }
    BigRational(const BigRational& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    BigRational(BigRational&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    BigRational& operator=(const BigRational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    BigRational& operator=(BigRational&& o) noexcept {
        mpq_swap(q_, o.q_);
        return *this;
    }
    ~BigRational() { mpq_clear(q_); }

    friend BigRational operator+(const BigRational& a, const BigRational& b) {
        BigRational r;
        mpq_add(r.q_, a.q_, b.q_);
        return r;
    }
    friend BigRational operator-(const BigRational& a, const BigRational& b) {
        BigRational r;
        mpq_sub(r.q_, a.q_, b.q_);
        return r;
    }
    friend BigRational operator*(const BigRational& a, const BigRational& b) {
        BigRational r;
        mpq_mul(r.q_, a.q_, b.q_);
        return r;
    }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.is_zero()) throw std::domain_error("BigRational: division by zero");
        BigRational r;
        mpq_div(r.q_, a.q_, b.q_);
        return r;
    }
    BigRational operator-() const {
        BigRational r;
        mpq_neg(r.q_, q_);
        return r;
    }
    BigRational& operator+=(const BigRational& o) { mpq_add(q_, q_, o.q_); return *this; }
    BigRational& operator-=(const BigRational& o) { mpq_sub(q_, q_, o.q_); return *this; }
    BigRational& operator*=(const BigRational& o) { mpq_mul(q_, q_, o.q_); return *this; }
    BigRational& operator/=(const BigRational& o) { *this = *this / o; return *this; }

    friend bool operator==(const BigRational& a, const BigRational& b) {
        return mpq_equal(a.q_, b.q_) != 0;
    }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return !(a == b); }
    friend bool operator<(const BigRational& a, const BigRational& b) {
        return mpq_cmp(a.q_, b.q_) < 0;
    }
    friend bool operator<=(const BigRational& a, const BigRational& b) {
        return mpq_cmp(a.q_, b.q_) <= 0;
    }
    friend bool operator>(const BigRational& a, const BigRational& b) { return b < a; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return b <= a; }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    double to_double() const { return mpq_get_d(q_); }

    std::string str() const {
        char* c = mpq_get_str(nullptr, 10, q_);
        std::string s(c);
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(c, s.size() + 1);
        return s;
    }
    std::string numerator_str() const {
        char* c = mpz_get_str(nullptr, 10, mpq_numref(q_));
        std::string s(c);
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(c, s.size() + 1);
        return s;
    }

    /// Decimal digit count of the numerator (sign excluded).
    size_t numerator_digits() const { return mpz_sizeinbase(mpq_numref(q_), 10); }
    size_t denominator_digits() const { return mpz_sizeinbase(mpq_denref(q_), 10); }

    /// Base-2 exponent estimate: floor(log2 |num|) - floor(log2 den).
    long exponent2() const {
        if (is_zero()) throw std::domain_error("BigRational: log of zero");
        return static_cast<long>(mpz_sizeinbase(mpq_numref(q_), 2)) -
               static_cast<long>(mpz_sizeinbase(mpq_denref(q_), 2));
    }

    static BigRational factorial(unsigned long n) {
        BigRational r;
        mpz_fac_ui(mpq_numref(r.q_), n);
        return r;
    }

    BigRational pow(long e) const {
        if (e == 0) return BigRational(1);
        if (is_zero() && e < 0) throw std::domain_error("BigRational: 0^negative");
        BigRational base = e > 0 ? *this : BigRational(1) / *this;
        unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
        BigRational r(1);
        while (n) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    const mpq_t& raw() const { return q_; }

private:
    mpq_t q_;
};

}  // namespace pvif
