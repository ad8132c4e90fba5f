#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pvif {

/// Small exact rational on int64, normalized (den > 0, gcd = 1).
/// Used for exponents and scaling laws, not for coefficient arithmetic.
struct Rat64 {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat64() = default;
    Rat64(std::int64_t n) : num(n), den(1) {}
    Rat64(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat64: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    static std::int64_t checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rat64 overflow");
        return static_cast<std::int64_t>(v);
    }
    static Rat64 make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rat64: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        return Rat64{checked(n), checked(d)};
    }

    friend Rat64 operator+(Rat64 a, Rat64 b) {
        return make((__int128)a.num * b.den + (__int128)b.num * a.den,
                    (__int128)a.den * b.den);
    }
    friend Rat64 operator-(Rat64 a, Rat64 b) {
        return make((__int128)a.num * b.den - (__int128)b.num * a.den,
                    (__int128)a.den * b.den);
    }
    friend Rat64 operator*(Rat64 a, Rat64 b) {
        return make((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Rat64 operator/(Rat64 a, Rat64 b) {
        if (b.num == 0) throw std::domain_error("Rat64: division by zero");
        return make((__int128)a.num * b.den, (__int128)a.den * b.num);
    }
    Rat64 operator-() const { return Rat64{-num, den}; }

    friend bool operator==(Rat64 a, Rat64 b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(Rat64 a, Rat64 b) { return !(a == b); }
    friend bool operator<(Rat64 a, Rat64 b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(Rat64 a, Rat64 b) { return !(b < a); }
    friend bool operator>(Rat64 a, Rat64 b) { return b < a; }
    friend bool operator>=(Rat64 a, Rat64 b) { return !(a < b); }

    bool is_integer() const { return den == 1; }
    double to_double() const { return double(num) / double(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num)
                        : std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace pvif
