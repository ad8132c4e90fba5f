#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvif/rat64.hpp"

namespace pvif::series {

using cplx = std::complex<double>;

/// Lattice exponent (m + n*sigma)/2, keyed exactly by the integer pair.
/// Key addition matches monomial multiplication.
struct ExponentKey {
    std::int64_t m = 0;  // doubled sigma-free part
    std::int64_t n = 0;  // doubled sigma coefficient

    friend ExponentKey operator+(ExponentKey a, ExponentKey b) {
        return {a.m + b.m, a.n + b.n};
    }
    friend ExponentKey operator-(ExponentKey a, ExponentKey b) {
        return {a.m - b.m, a.n - b.n};
    }
    friend bool operator==(ExponentKey a, ExponentKey b) { return a.m == b.m && a.n == b.n; }
    friend bool operator<(ExponentKey a, ExponentKey b) {
        return a.m != b.m ? a.m < b.m : a.n < b.n;
    }

    template <typename C>
    C realized(C sigma) const {
        return (C(double(m)) + C(double(n)) * sigma) / C(2.0);
    }
};

struct series_error : std::runtime_error {
    std::string tag;
    series_error(std::string t, const std::string& msg)
        : std::runtime_error(msg), tag(std::move(t)) {}
};

/// Truncated Puiseux series with exponents on the lattice {(m + n*sigma)/2}.
/// Terms are kept only while m <= grade and |n| <= band. Immutable in spirit:
/// operations return new values.
template <typename C = cplx>
class Puiseux {
public:
    using coeff_type = C;
    using real_type = typename C::value_type;
    using term_map = std::map<ExponentKey, C>;

    Puiseux() = default;
    Puiseux(std::string var, C sigma, int grade, int band)
        : var_(std::move(var)), sigma_(sigma), grade_(grade), band_(band) {}

    static Puiseux monomial(std::string var, C sigma, int grade, int band,
                            ExponentKey k, C c) {
        Puiseux p(std::move(var), sigma, grade, band);
        p.set(k, c);
        return p;
    }
    static Puiseux constant(std::string var, C sigma, int grade, int band, C c) {
        return monomial(std::move(var), sigma, grade, band, {0, 0}, c);
    }

    const std::string& var() const { return var_; }
    C sigma() const { return sigma_; }
    int grade() const { return grade_; }
    int band() const { return band_; }
    const term_map& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    C coeff(ExponentKey k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }

    void set(ExponentKey k, C c) {
        if (c == C(0) || k.m > grade_ || std::abs(k.n) > band_) return;
        terms_[k] = c;
    }
    void add_term(ExponentKey k, C c) {
        if (k.m > grade_ || std::abs(k.n) > band_) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    /// Drop terms with |coeff| <= eps * scale (numerical cleanup).
    Puiseux cleaned(real_type eps) const {
        real_type scale = 0;
        for (auto& [k, c] : terms_) scale = std::max(scale, std::abs(c));
        Puiseux r = shell();
        for (auto& [k, c] : terms_)
            if (std::abs(c) > eps * scale) r.terms_[k] = c;
        return r;
    }

    Puiseux truncated(int grade, int band) const {
        Puiseux r(var_, sigma_, std::min(grade, grade_), std::min(band, band_));
        for (auto& [k, c] : terms_)
            if (k.m <= r.grade_ && std::abs(k.n) <= r.band_) r.terms_[k] = c;
        return r;
    }

    friend Puiseux operator+(const Puiseux& a, const Puiseux& b) {
        a.check_compat(b);
        Puiseux r(a.var_, a.sigma_, std::min(a.grade_, b.grade_),
                  std::max(a.band_, b.band_));
        for (auto& [k, c] : a.terms_)
            if (k.m <= r.grade_) r.add_term(k, c);
        for (auto& [k, c] : b.terms_)
            if (k.m <= r.grade_) r.add_term(k, c);
        return r;
    }
    friend Puiseux operator-(const Puiseux& a, const Puiseux& b) { return a + (b * C(-1)); }
    friend Puiseux operator*(const Puiseux& a, C c) {
        Puiseux r = a.shell();
        if (c == C(0)) return r;
        for (auto& [k, v] : a.terms_) r.terms_[k] = v * c;
        return r;
    }
    friend Puiseux operator*(C c, const Puiseux& a) { return a * c; }
    friend Puiseux operator*(const Puiseux& a, const Puiseux& b) {
        a.check_compat(b);
        Puiseux r(a.var_, a.sigma_, std::min(a.grade_, b.grade_), a.band_ + b.band_);
        for (auto& [ka, ca] : a.terms_) {
            if (ka.m > r.grade_) continue;
            for (auto& [kb, cb] : b.terms_) {
                ExponentKey k = ka + kb;
                if (k.m > r.grade_) continue;
                r.add_term(k, ca * cb);
            }
        }
        return r;
    }

    /// Leading term: unique key minimizing the realized real part.
    std::pair<ExponentKey, C> leading() const {
        if (terms_.empty())
            throw series_error("zero_leading", "leading term of empty series");
        auto best = terms_.begin();
        real_type bm = realized_re(best->first);
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
            real_type m = realized_re(it->first);
            if (m < bm - real_type(1e-12)) { best = it; bm = m; }
            else if (std::abs(m - bm) <= real_type(1e-12) && !(best->first == it->first) &&
                     !(best->first < it->first)) {
                best = it;
            }
        }
        // ambiguity check: another distinct key at the same realized Re
        for (auto& [k, c] : terms_)
            if (!(k == best->first) && std::abs(realized_re(k) - bm) <= real_type(1e-12))
                throw series_error("ambiguous_leading",
                                   "leading exponent not unique (realized collision)");
        return {best->first, best->second};
    }

    /// 1/p. Requires a unique nonzero leading term.
    Puiseux reciprocal() const {
        auto [k0, c0] = leading();
        // u = p/(c0 s^k0) - 1, all exponents strictly positive realized part
        Puiseux u = shell();
        for (auto& [k, c] : terms_)
            if (!(k == k0)) u.terms_[k - k0] = c / c0;
        Puiseux acc = constant(var_, sigma_, grade_, band_, C(1));
        Puiseux sum = acc;
        int cap = grade_ + 2 * band_ + 8;
        for (int i = 0; i < cap && !acc.empty(); ++i) {
            acc = acc * u * C(-1);
            sum = sum + acc;
        }
        Puiseux r = shell();
        for (auto& [k, c] : sum.terms_) r.add_term(k - k0, c / c0);
        return r;
    }

    /// Square root; `sign=+1` takes the principal root of the leading
    /// coefficient, `sign=-1` its negative. Leading key must be halvable.
    Puiseux sqrt(int sign = +1) const {
        auto [k0, c0] = leading();
        if (k0.m % 2 != 0 || k0.n % 2 != 0)
            throw series_error("exponent_not_halvable",
                               "sqrt: leading exponent not on the half-lattice");
        C r0 = std::sqrt(c0) * C(double(sign));
        Puiseux u = shell();
        for (auto& [k, c] : terms_)
            if (!(k == k0)) u.terms_[k - k0] = c / c0;
        // (1+u)^(1/2) binomial series
        Puiseux sum = constant(var_, sigma_, grade_, band_, C(1));
        Puiseux acc = sum;
        real_type binom = 1;
        int cap = grade_ + 2 * band_ + 8;
        for (int i = 1; i <= cap && !acc.empty(); ++i) {
            binom *= (real_type(0.5) - (i - 1)) / i;
            acc = acc * u;
            sum = sum + acc * C(binom);
        }
        ExponentKey kh{k0.m / 2, k0.n / 2};
        Puiseux r = shell();
        for (auto& [k, c] : sum.terms_) r.add_term(k + kh, c * r0);
        return r;
    }

    Puiseux pow(int e) const {
        if (e < 0) return reciprocal().pow(-e);
        Puiseux r = constant(var_, sigma_, grade_, band_, C(1));
        Puiseux base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = e > 1 ? base * base : base;
            e >>= 1;
        }
        return r;
    }

    Puiseux differentiate() const {
        Puiseux r = shell();
        for (auto& [k, c] : terms_) {
            C e = k.realized(sigma_);
            if (e == C(0)) continue;
            r.add_term({k.m - 2, k.n}, c * e);
        }
        return r;
    }

    /// Antiderivative with integration constant 0. A term with realized
    /// exponent -1 would need a logarithm and is rejected.
    Puiseux antiderivative() const {
        Puiseux r = shell();
        for (auto& [k, c] : terms_) {
            C e1 = k.realized(sigma_) + C(1);
            if ((k.m == -2 && k.n == 0) || std::abs(e1) < real_type(1e-13))
                throw series_error("logarithm",
                                   "antiderivative: exponent -1 needs a logarithm");
            r.add_term({k.m + 2, k.n}, c / e1);
        }
        return r;
    }

    /// Evaluate at x with x^e = exp(e (ln|x| + i*branch)); branch = arg(x).
    C eval(C x, real_type branch) const {
        if (x == C(0)) {
            for (auto& [k, c] : terms_)
                if (realized_re(k) < 0)
                    throw series_error("eval_at_zero",
                                       "eval at 0 with negative exponent present");
        }
        C logx = std::log(std::abs(x)) + C(0, 1) * C(branch);
        C s(0);
        for (auto& [k, c] : terms_) s += c * std::exp(k.realized(sigma_) * logx);
        return s;
    }

    /// Series reversion (Lagrange): this = X(s) with integer exponents,
    /// X(0)=0, X'(0) != 0; returns s = t(X) with X(t(X)) = X to the grade.
    Puiseux revert() const {
        int half_grade = grade_ / 2;
        std::vector<C> a(static_cast<std::size_t>(half_grade) + 1, C(0));
        for (auto& [k, c] : terms_) {
            if (k.n != 0 || k.m % 2 != 0 || k.m < 0)
                throw series_error("not_integer_lattice",
                                   "revert: non-integer exponent lattice");
            if (k.m == 0)
                throw series_error("nonzero_constant", "revert: constant term present");
            if (k.m / 2 <= half_grade) a[static_cast<std::size_t>(k.m / 2)] = c;
        }
        if (a.size() < 2 || a[1] == C(0))
            throw series_error("zero_linear", "revert: vanishing linear coefficient");
        std::vector<C> b(a.size(), C(0));
        b[1] = C(1) / a[1];
        // determine b_k order by order from [X^k] sum_j a_j (t(X))^j = delta_{k1}
        for (std::size_t k = 2; k < b.size(); ++k) {
            // coefficient of X^k of sum_{j>=2} a_j t^j with t known through b_{k-1}
            std::vector<C> tpow(b.begin(), b.end());  // t^1
            C acc(0);
            for (std::size_t j = 2; j <= k; ++j) {
                // tpow = t^j truncated at X^k
                std::vector<C> nt(k + 1, C(0));
                for (std::size_t p = 1; p <= k; ++p)
                    for (std::size_t q = 1; p + q <= k; ++q)
                        nt[p + q] += tpow[p] * b[q];
                tpow.assign(nt.begin(), nt.end());
                tpow.resize(b.size(), C(0));
                if (j < a.size()) acc += a[j] * tpow[k];
            }
            b[k] = -acc / a[1];
        }
        Puiseux r(var_, sigma_, grade_, band_);
        for (std::size_t k = 1; k < b.size(); ++k)
            if (b[k] != C(0)) r.terms_[{std::int64_t(2 * k), 0}] = b[k];
        return r;
    }

    /// Substitute s -> g (composition). Requires g's terms to have positive
    /// realized exponent and this to have integer lattice exponents >= 0.
    Puiseux compose(const Puiseux& g) const {
        Puiseux r = g.shell();
        Puiseux gp = constant(g.var_, g.sigma_, g.grade_, g.band_, C(1));
        // gather integer powers of this in increasing m
        std::map<std::int64_t, C> ic;
        for (auto& [k, c] : terms_) {
            if (k.n != 0 || k.m % 2 != 0 || k.m < 0)
                throw series_error("not_integer_lattice",
                                   "compose: outer series must be a power series");
            ic[k.m / 2] = c;
        }
        std::int64_t maxp = ic.empty() ? 0 : ic.rbegin()->first;
        for (std::int64_t p = 0; p <= maxp; ++p) {
            if (p > 0) gp = gp * g;
            auto it = ic.find(p);
            if (it != ic.end()) r = r + gp * it->second;
        }
        return r;
    }

    real_type realized_re(ExponentKey k) const {
        return (real_type(double(k.m)) + real_type(double(k.n)) * sigma_.real()) / 2;
    }

private:
    Puiseux shell() const { return Puiseux(var_, sigma_, grade_, band_); }
    void check_compat(const Puiseux& o) const {
        if (var_ != o.var_)
            throw series_error("mismatched_variable", "series variable tags differ");
        if (sigma_ != o.sigma_)
            throw series_error("mismatched_sigma", "series sigma values differ");
    }

    std::string var_ = "x";
    C sigma_{0, 0};
    int grade_ = 24;
    int band_ = 12;
    term_map terms_;
};

using PuiseuxSeries = Puiseux<cplx>;

}  // namespace pvif::series
