#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvif/bigrational.hpp"
#include "pvif/frobenius.hpp"

namespace pvif::frobenius {

namespace qh_detail {

/// Element of Q(i sqrt 3): a + b t with t^2 = -3. The whole QH*(CP^2)
/// pipeline at x_c = e^{-i pi/3} closes over this field.
struct QR3 {
    BigRational a, b;
    QR3() = default;
    QR3(BigRational a_, BigRational b_ = BigRational(0)) : a(std::move(a_)), b(std::move(b_)) {}
    QR3(long v) : a(v), b(0) {}

    friend QR3 operator+(const QR3& x, const QR3& y) { return {x.a + y.a, x.b + y.b}; }
    friend QR3 operator-(const QR3& x, const QR3& y) { return {x.a - y.a, x.b - y.b}; }
    friend QR3 operator*(const QR3& x, const QR3& y) {
        return {x.a * y.a - BigRational(3) * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    QR3 inv() const {
        BigRational d = a * a + BigRational(3) * b * b;
        if (d.is_zero()) throw std::domain_error("QR3: division by zero");
        return {a / d, -(b / d)};
    }
    friend QR3 operator/(const QR3& x, const QR3& y) { return x * y.inv(); }
    QR3 operator-() const { return {-a, -b}; }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    friend bool operator==(const QR3& x, const QR3& y) { return x.a == y.a && x.b == y.b; }
    std::complex<double> to_complex() const {
        return {a.to_double(), b.to_double() * std::sqrt(3.0)};
    }
};

using Ser = std::vector<QR3>;  // Taylor coefficients in s = x - x_c

inline Ser zero_ser(std::size_t n) { return Ser(n); }

inline Ser add(const Ser& p, const Ser& q) {
    Ser r(p.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p[i] + q[i];
    return r;
}
inline Ser sub(const Ser& p, const Ser& q) {
    Ser r(p.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p[i] - q[i];
    return r;
}
inline Ser mul(const Ser& p, const Ser& q) {
    Ser r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < q.size(); ++j) {
            if (q[j].is_zero()) continue;
            r[i + j] = r[i + j] + p[i] * q[j];
        }
    }
    return r;
}
inline Ser scale(const Ser& p, const QR3& c) {
    Ser r(p.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p[i] * c;
    return r;
}
inline Ser inv(const Ser& p) {
    if (p.empty() || p[0].is_zero())
        throw std::domain_error("QH series: reciprocal of series with zero constant");
    Ser r(p.size());
    r[0] = p[0].inv();
    for (std::size_t n = 1; n < p.size(); ++n) {
        QR3 acc;
        for (std::size_t k = 1; k <= n; ++k) acc = acc + p[k] * r[n - k];
        r[n] = -(r[0] * acc);
    }
    return r;
}
inline Ser integrate(const Ser& p) {  // zero constant
    Ser r(p.size());
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
        r[k + 1] = p[k] * QR3(BigRational(1, (unsigned long)(k + 1)));
    return r;
}
inline Ser exp_series(const Ser& p) {  // p[0] = 0
    Ser r(p.size());
    r[0] = QR3(1);
    Ser dp(p.size());
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
        dp[k] = p[k + 1] * QR3(BigRational(long(k + 1)));
    for (std::size_t n = 0; n + 1 < p.size(); ++n) {
        QR3 acc;
        for (std::size_t k = 0; k <= n; ++k) acc = acc + dp[k] * r[n - k];
        r[n + 1] = acc * QR3(BigRational(1, (unsigned long)(n + 1)));
    }
    return r;
}

}  // namespace qh_detail

/// Exact Gromov-Witten table slice from the geometric pipeline.
struct QhResult {
    ClosedForm closed_form;                 // QH exponential law, coefficients A_k/q0^k
    std::vector<BigRational> coefficients;  // c_k = A_k / q0^k (exact, q0 rational)
    std::vector<BigRational> nk;            // N_k = c_k (3k-1)! q0^k
    std::vector<long> nk_int;               // rounded (exactness asserted)
    double max_round_residual = 0;          // relative residual before rounding
    bool shortcut_identity_ok = false;      // d^2(F-F0)/d(t2)^2 = H(1+x-3a(x))
};

/// Reconstruction of QH*(CP^2) (mu = -1): Taylor expansion of the Omega
/// system at x_c = e^{-i pi/3}, frame and structure functions, Kontsevich
/// normalization, and exact N_k extraction.
inline QhResult qh_reconstruct(int order, const BigRational& q0 = BigRational(1)) {
    using namespace qh_detail;
    if (order < 3) throw frobenius_error("bad_order", "qh_reconstruct needs order >= 3");
    if (q0.is_zero()) throw frobenius_error("bad_q0", "q0 must be nonzero");
    const std::size_t N = std::size_t(order) + 2;
    const QR3 T{BigRational(0), BigRational(1)};          // i sqrt 3
    const QR3 xc = (QR3(1) - T) / QR3(2);                 // e^{-i pi/3}
    const BigRational half(1, 2), third(1, 3);

    auto cser = [&](const QR3& c) {
        Ser s = zero_ser(N);
        s[0] = c;
        return s;
    };
    Ser x_ser = cser(xc);
    x_ser[1] = QR3(1);
    Ser inv_x = inv(x_ser);
    Ser one_minus_x = sub(cser(QR3(1)), x_ser);
    Ser inv_1mx = inv(one_minus_x);
    Ser w_ser = scale(mul(inv_x, inv_1mx), QR3(-1));  // 1/(x(x-1))

    // Omega system Taylor recursion; initial data Omega^(0) = (-T/3, T/3, T/3)
    Ser O1 = cser(-(T / QR3(3))), O2 = cser(T / QR3(3)), O3 = cser(T / QR3(3));
    for (std::size_t n = 0; n + 1 < N; ++n) {
        Ser r1 = mul(inv_x, mul(O2, O3));
        Ser r2 = mul(inv_1mx, mul(O1, O3));
        Ser r3 = mul(w_ser, mul(O1, O2));
        BigRational inv_n1(1, (unsigned long)(n + 1));
        O1[n + 1] = r1[n] * QR3(inv_n1);
        O2[n + 1] = r2[n] * QR3(inv_n1);
        O3[n + 1] = r3[n] * QR3(inv_n1);
    }

    // E-frame at mu = -1, with the factor i of E_{i2} folded out:
    // b = i bt, b1 = i bt1 (bt, bt1 in the field); all downstream quantities
    // depend on b, b1 only through b^2 = -bt^2 and b b1 = -bt bt1.
    Ser S13 = add(mul(O1, O1), mul(O3, O3));
    Ser invS13 = inv(S13);
    Ser E21 = scale(S13, QR3(BigRational(-1, 2)));
    Ser E31 = scale(sub(mul(O2, O3), O1), QR3(half));
    Ser E33 = mul(sub(scale(O1, QR3(-1)), mul(O2, O3)), invS13);
    Ser E23 = cser(QR3(1));
    Ser a_x = add(mul(E21, E23), mul(x_ser, mul(E31, E33)));
    Ser bt = add(mul(O2, E21), mul(x_ser, mul(O3, E31)));
    Ser bt1 = add(mul(O2, E23), mul(x_ser, mul(O3, E33)));
    Ser a1 = add(mul(E23, E23), mul(x_ser, mul(E33, E33)));
    Ser b2 = scale(add(mul(O2, O2), mul(x_ser, mul(O3, O3))), QR3(-1));
    Ser c_x = add(mul(E21, E21), mul(x_ser, mul(E31, E31)));

    // t^3 = -9 c/b^2 H^{-1} = 9 c/bt^2 H^{-1};  F-F0 = -9 G H / bt^2
    Ser bt2 = mul(bt, bt);
    Ser inv_bt2 = inv(bt2);
    Ser tau3 = scale(mul(c_x, inv_bt2), QR3(9));
    Ser G = add(add(scale(mul(a1, mul(c_x, c_x)), QR3(BigRational(1, 6))),
                    scale(mul(mul(bt, bt1), c_x), QR3(BigRational(-3, 4)))),
                scale(mul(sub(b2, a_x), bt2), QR3(-1)));
    Ser FmF0 = scale(mul(G, inv_bt2), QR3(-9));  // times H

    // t^2 = 3 ln H + 3 int dz/(z + E21 E22/(E31 E32)) + ln(i sqrt3/243) + ln q0:
    // the last constant is the Kontsevich normalization.
    Ser ratio = mul(mul(E21, O2), inv(mul(E31, O3)));
    Ser p_ser = scale(integrate(inv(add(x_ser, ratio))), QR3(3));
    Ser eP = exp_series(p_ser);

    // Z = q (t^3)^3 = lambda q0 e^p tau3^3, lambda = i sqrt3 / 243
    QR3 lambda = T / QR3(243);
    Ser Z = scale(mul(eP, mul(tau3, mul(tau3, tau3))), lambda * QR3(q0));
    Ser W = mul(tau3, FmF0);  // t^3 (F - F0), H-free

    // solve W = sum_{k>=1} c_k Z^k (triangular in s^3 blocks)
    int kmax = (order - 1) / 3;
    QhResult out;
    out.closed_form.case_tag = "qh_cp2";
    out.closed_form.mu = -1.0;
    out.closed_form.law = ScalingLaw::qh_exponential;
    std::vector<QR3> cks;
    Ser Wr = W;
    Ser Zk = cser(QR3(1));
    for (int k = 1; k <= kmax; ++k) {
        Zk = mul(Zk, Z);
        std::size_t idx = std::size_t(3 * k);
        if (idx >= N || Zk[idx].is_zero())
            throw frobenius_error("insufficient_order",
                                  "order too small for k = " + std::to_string(k));
        QR3 ck = Wr[idx] / Zk[idx];
        cks.push_back(ck);
        Wr = sub(Wr, scale(Zk, ck));
        // all coefficients below the next block must cancel exactly
        std::size_t check_hi = std::min(N, std::size_t(3 * k + 3));
        for (std::size_t j = 0; j < check_hi; ++j)
            if (!Wr[j].is_zero())
                throw frobenius_error("inconsistent",
                                      "t^3 (F-F0) is not a series in q (t^3)^3");
    }

    // exactness: c_k must be rational (field component b = 0), and
    // N_k = c_k (3k-1)! q0^k integral
    BigRational q0k(1);
    for (int k = 1; k <= kmax; ++k) {
        const QR3& ck = cks[std::size_t(k - 1)];
        if (!ck.b.is_zero())
            throw frobenius_error("exactness", "coefficient not rational");
        q0k *= q0;
        out.coefficients.push_back(ck.a);
        BigRational nk = ck.a * BigRational::factorial((unsigned long)(3 * k - 1)) * q0k;
        out.nk.push_back(nk);
        if (!nk.is_integer())
            throw frobenius_error("exactness", "N_k not an integer");
        double nd = nk.to_double();
        long rounded = std::lround(nd);
        out.nk_int.push_back(rounded);
        double rel = std::abs(nd - double(rounded)) / std::max(1.0, std::abs(nd));
        out.max_round_residual = std::max(out.max_round_residual, rel);
        out.closed_form.phi.push_back(ck.to_complex());
        out.closed_form.k0_pow.push_back(Rat64(0));
    }

    // Remark shortcut: t^3 d^2(F-F0)/d(t^2)^2 = tau3 (1 + x - 3 a(x)),
    // i.e. sum k^2 c_k Z^k = tau3 (1 + x - 3a)
    {
        Ser lhs = zero_ser(N);
        Ser Zk2 = cser(QR3(1));
        for (int k = 1; k <= kmax; ++k) {
            Zk2 = mul(Zk2, Z);
            lhs = add(lhs, scale(Zk2, cks[std::size_t(k - 1)] * QR3(long(k) * long(k))));
        }
        Ser rhs = mul(tau3, sub(add(cser(QR3(1)), x_ser), scale(a_x, QR3(3))));
        out.shortcut_identity_ok = true;
        std::size_t hi = std::min(N, std::size_t(3 * kmax + 3));
        for (std::size_t j = 0; j < hi; ++j)
            if (!(lhs[j] == rhs[j])) out.shortcut_identity_ok = false;
    }
    return out;
}

}  // namespace pvif::frobenius
