#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include "pvif/puiseux.hpp"
#include "pvif/rat64.hpp"

namespace pvif::series {

/// Series with exact rational exponents: the product of the explicit
/// "specialize sigma = p/q" pass. Carrier for the reconstruction pipeline,
/// where fractional powers of whole series are needed.
template <typename C = cplx>
class RationalSeries {
public:
    using coeff_type = C;
    using real_type = typename C::value_type;
    using term_map = std::map<Rat64, C>;

    RationalSeries() = default;
    explicit RationalSeries(Rat64 grade) : grade_(grade) {}

    static RationalSeries monomial(Rat64 grade, Rat64 e, C c) {
        RationalSeries r(grade);
        r.set(e, c);
        return r;
    }
    static RationalSeries constant(Rat64 grade, C c) {
        return monomial(grade, Rat64(0), c);
    }

    Rat64 grade() const { return grade_; }
    const term_map& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    C coeff(Rat64 e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? C(0) : it->second;
    }
    void set(Rat64 e, C c) {
        if (c == C(0) || grade_ < e) return;
        terms_[e] = c;
    }
    void add_term(Rat64 e, C c) {
        if (grade_ < e) return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    std::pair<Rat64, C> leading() const {
        if (terms_.empty())
            throw series_error("zero_leading", "leading term of empty series");
        return *terms_.begin();
    }

    RationalSeries cleaned(real_type eps) const {
        real_type scale = 0;
        for (auto& [e, c] : terms_) scale = std::max(scale, std::abs(c));
        RationalSeries r(grade_);
        for (auto& [e, c] : terms_)
            if (std::abs(c) > eps * scale) r.terms_[e] = c;
        return r;
    }

    RationalSeries truncated(Rat64 g) const {
        RationalSeries r(g < grade_ ? g : grade_);
        for (auto& [e, c] : terms_)
            if (e <= r.grade_) r.terms_[e] = c;
        return r;
    }

    friend RationalSeries operator+(const RationalSeries& a, const RationalSeries& b) {
        RationalSeries r(a.grade_ < b.grade_ ? a.grade_ : b.grade_);
        for (auto& [e, c] : a.terms_) if (e <= r.grade_) r.add_term(e, c);
        for (auto& [e, c] : b.terms_) if (e <= r.grade_) r.add_term(e, c);
        return r;
    }
    friend RationalSeries operator-(const RationalSeries& a, const RationalSeries& b) {
        return a + (b * C(-1));
    }
    friend RationalSeries operator*(const RationalSeries& a, C c) {
        RationalSeries r(a.grade_);
        if (c == C(0)) return r;
        for (auto& [e, v] : a.terms_) r.terms_[e] = v * c;
        return r;
    }
    friend RationalSeries operator*(C c, const RationalSeries& a) { return a * c; }
    friend RationalSeries operator*(const RationalSeries& a, const RationalSeries& b) {
        RationalSeries r(a.grade_ < b.grade_ ? a.grade_ : b.grade_);
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Rat64 e = ea + eb;
                if (r.grade_ < e) continue;
                r.add_term(e, ca * cb);
            }
        return r;
    }

    RationalSeries reciprocal() const { return pow_frac(Rat64(-1)); }
    RationalSeries sqrt(int sign = +1) const {
        auto r = pow_frac(Rat64(1, 2));
        return sign < 0 ? r * C(-1) : r;
    }

    /// p^r for exact rational r; leading coefficient taken on the principal
    /// branch. Result exponents: r*e0 + lattice of (e - e0).
    RationalSeries pow_frac(Rat64 r) const {
        auto [e0, c0] = leading();
        RationalSeries u(grade_);  // (p / lead) - 1
        for (auto& [e, c] : terms_)
            if (!(e == e0)) u.terms_[e - e0] = c / c0;
        RationalSeries sum = constant(grade_, C(1));
        RationalSeries acc = sum;
        real_type rr = real_type(r.to_double());
        real_type binom = 1;
        int cap = iteration_cap(u);
        for (int i = 1; i <= cap && !acc.empty(); ++i) {
            binom *= (rr - (i - 1)) / i;
            acc = acc * u;
            sum = sum + acc * C(binom);
        }
        C c0r = std::exp(C(rr) * std::log(c0));
        Rat64 e0r = e0 * r;
        RationalSeries out(grade_);
        for (auto& [e, c] : sum.terms_) out.add_term(e + e0r, c * c0r);
        return out;
    }

    RationalSeries differentiate() const {
        RationalSeries r(grade_ - Rat64(1));
        for (auto& [e, c] : terms_) {
            if (e == Rat64(0)) continue;
            r.add_term(e - Rat64(1), c * C(e.to_double()));
        }
        return r;
    }

    /// Antiderivative with zero constant; exponent -1 rejected.
    RationalSeries antiderivative() const {
        RationalSeries r(grade_ + Rat64(1));
        for (auto& [e, c] : terms_) {
            if (e == Rat64(-1))
                throw series_error("logarithm",
                                   "antiderivative: exponent -1 needs a logarithm");
            Rat64 e1 = e + Rat64(1);
            r.add_term(e1, c / C(e1.to_double()));
        }
        return r;
    }

    /// exp of a series with strictly positive exponents.
    RationalSeries exp() const {
        for (auto& [e, c] : terms_)
            if (e <= Rat64(0))
                throw series_error("exp_nonpositive", "exp: needs positive exponents");
        RationalSeries sum = constant(grade_, C(1));
        RationalSeries acc = sum;
        int cap = iteration_cap(*this);
        for (int i = 1; i <= cap && !acc.empty(); ++i) {
            acc = acc * *this * C(real_type(1) / real_type(i));
            sum = sum + acc;
        }
        return sum;
    }

    C eval(C x, real_type branch) const {
        C logx = std::log(std::abs(x)) + C(0, 1) * C(branch);
        C s(0);
        for (auto& [e, c] : terms_) s += c * std::exp(C(e.to_double()) * logx);
        return s;
    }

private:
    int iteration_cap(const RationalSeries& u) const {
        if (u.terms_.empty()) return 0;
        Rat64 emin = u.terms_.begin()->first;
        if (emin.num <= 0) throw series_error("nonpositive_tail",
                                              "series tail must have positive exponents");
        double steps = grade_.to_double() / emin.to_double();
        return static_cast<int>(steps) + 3;
    }

    Rat64 grade_{64};
    term_map terms_;
};

/// The explicit "specialize sigma = p/q" pass: re-keys lattice exponents to
/// exact rationals (m + n p/q)/2, merging realized collisions.
template <typename C>
RationalSeries<C> specialize(const Puiseux<C>& s, Rat64 sigma) {
    double sv = sigma.to_double();
    if (std::abs(C(sv) - s.sigma()) > 1e-9)
        throw series_error("mismatched_sigma", "specialize: sigma != p/q");
    RationalSeries<C> r(Rat64(s.grade(), 2) + Rat64(1));
    for (auto& [k, c] : s.terms()) {
        Rat64 e = (Rat64(k.m) + Rat64(k.n) * sigma) / Rat64(2);
        r.add_term(e, c);
    }
    return r;
}

}  // namespace pvif::series
