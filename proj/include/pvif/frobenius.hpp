#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvif/painleve.hpp"
#include "pvif/rat64.hpp"
#include "pvif/rational_series.hpp"

namespace pvif::frobenius {

using cplx = std::complex<double>;
using series::Rat64;
using series::RationalSeries;
using painleve::LocalSolution;
using painleve::OmegaState;

struct frobenius_error : std::runtime_error {
    std::string tag;
    frobenius_error(std::string t, const std::string& msg)
        : std::runtime_error(msg), tag(std::move(t)) {}
};

namespace detail {
inline cplx inv(cplx v) {
    if (std::abs(v) < 1e-300) throw frobenius_error("division", "1/0 in frame");
    return 1.0 / v;
}
inline RationalSeries<cplx> inv(const RationalSeries<cplx>& v) { return v.reciprocal(); }

/// Rational recognition for mu, sigma (continued fraction, small denominator).
inline std::optional<Rat64> as_rational(cplx z, std::int64_t max_den = 64,
                                        double tol = 1e-9) {
    if (std::abs(z.imag()) > tol) return std::nullopt;
    double v = z.real();
    for (std::int64_t q = 1; q <= max_den; ++q) {
        double p = std::round(v * double(q));
        if (std::abs(v - p / double(q)) < tol && std::abs(p) < 1e15)
            return Rat64(std::int64_t(p), q);
    }
    return std::nullopt;
}
}  // namespace detail

/// The nine E-values of phi_0 = (E_{i1}/f, E_{i2}, E_{i3} f).
template <typename V>
struct EijFrame {
    V E11, E12, E13, E21, E22, E23, E31, E32, E33;
};

/// Build the frame from Omega values (numbers or series). Requires
/// Omega_1^2 + Omega_3^2 to be invertible. `one` is the multiplicative unit
/// of the carrier (E23 = 1).
template <typename V>
EijFrame<V> build_frame(const V& o1, const V& o2, const V& o3, cplx mu, const V& one) {
    V s13 = o1 * o1 + o3 * o3;
    V is13 = detail::inv(s13);
    cplx m2 = 2.0 * mu * mu;
    cplx imu = 1.0 / (cplx(0, 1) * mu);
    EijFrame<V> f;
    f.E11 = (o1 * o2 - o3 * mu) * (1.0 / m2);
    f.E12 = o1 * imu;
    f.E13 = (o1 * o2 + o3 * mu) * is13 * cplx(-1);
    f.E21 = s13 * (-1.0 / m2);
    f.E22 = o2 * imu;
    f.E23 = one;
    f.E31 = (o2 * o3 + o1 * mu) * (1.0 / m2);
    f.E32 = o3 * imu;
    f.E33 = (o2 * o3 - o1 * mu) * is13 * cplx(-1);
    return f;
}

inline EijFrame<cplx> build_frame(const OmegaState& s) {
    return build_frame<cplx>(s.omega[0], s.omega[1], s.omega[2], s.mu, cplx(1.0));
}

/// The six structure functions a, b, b1, a1, b2, c of the reconstruction.
template <typename V>
struct StructureFunctions {
    V a, b, b1, a1, b2, c;
};

template <typename V>
StructureFunctions<V> structure_functions(const EijFrame<V>& f, const V& x) {
    StructureFunctions<V> s;
    s.a = f.E21 * f.E23 + x * (f.E31 * f.E33);
    s.b = f.E22 * f.E21 + x * (f.E32 * f.E31);
    s.b1 = f.E23 * f.E22 + x * (f.E33 * f.E32);
    s.a1 = f.E23 * f.E23 + x * (f.E33 * f.E33);
    s.b2 = f.E22 * f.E22 + x * (f.E32 * f.E32);
    s.c = f.E21 * f.E21 + x * (f.E31 * f.E31);
    return s;
}

/// Parametric solution for generic rational mu: x-parts of t^2, t^3, F - F0
/// with their exact H- and k0-scaling exponents.
struct ParametricSolution {
    Rat64 mu;
    cplx k0 = 1.0;
    RationalSeries<cplx> tau2, tau3, Fcal;     // x-parts (k0 included numerically)
    Rat64 h_t2, h_t3, h_F;                     // H-exponents 1+mu, 1+2mu, 3+2mu
    Rat64 k0_t2, k0_t3, k0_F;                  // k0-exponents -1/2, -1, -1
    RationalSeries<cplx> y;                    // the specialized transcendent
    RationalSeries<cplx> a_of_x;               // t^1 = u1 + a(x) H
};

/// Generic-case reconstruction from a point-zero local solution.
/// Requires sigma and mu rational; mu outside {+-1/2, +-1, +-3/2, +-2, +-3}.
inline ParametricSolution parametric_generic(const LocalSolution& local, cplx k0 = 1.0) {
    auto sig_r = detail::as_rational(local.data.sigma);
    auto mu_r = detail::as_rational(local.data.mu);
    if (!sig_r || !mu_r)
        throw frobenius_error("irrational_exponents",
                              "closed-form pipeline needs rational sigma and mu");
    Rat64 mu = *mu_r;
    for (int num : {-3, -2, -1, 1, 2, 3})
        if (mu == Rat64(num) || mu == Rat64(num, 2))
            throw frobenius_error("excluded_mu",
                                  "mu in {+-1/2,+-1,+-3/2,+-2,+-3}: generic formulas "
                                  "degenerate (mu = -1 is the QH case)");
    if (!local.has_omega)
        throw frobenius_error("bad_input", "need a point-zero solution with Omega series");

    cplx muc = local.data.mu;
    using S = RationalSeries<cplx>;
    S y = series::specialize(local.y, *sig_r).cleaned(1e-12);
    S O1 = series::specialize(local.omega[0], *sig_r).cleaned(1e-12);
    S O2 = series::specialize(local.omega[1], *sig_r).cleaned(1e-12);
    S O3 = series::specialize(local.omega[2], *sig_r).cleaned(1e-12);
    Rat64 g = y.grade();
    auto con = [&](cplx c) { return S::constant(g, c); };
    auto mono = [&](Rat64 e, cplx c) { return S::monomial(g, e, c); };
    S x = mono(Rat64(1), 1.0);

    auto frame = build_frame<S>(O1, O2, O3, muc, con(1.0));
    auto sf = structure_functions<S>(frame, x);

    // k(x,H) = k0 exp{(2mu-1) int (y-z)/(z(z-1)) dz} H^{1-2mu}
    S integrand = (y - x) * mono(Rat64(-1), 1.0) * (x - con(1.0)).reciprocal();
    S kx = (integrand.antiderivative() * (2.0 * muc - 1.0)).exp();
    // f(x,H) = i sqrt(k) sqrt(y-1)/(sqrt(H) sqrt(1-x)); x-part below
    S fx = cplx(0, 1) * kx.sqrt() * (y - con(1.0)).sqrt() *
           (con(1.0) - x).sqrt().reciprocal();
    S inv_f = fx.reciprocal();
    cplx k0half = std::sqrt(k0);

    ParametricSolution p;
    p.mu = mu;
    p.k0 = k0;
    p.y = y;
    p.a_of_x = sf.a;
    p.tau2 = sf.b * inv_f * (1.0 / (1.0 + muc) / k0half);
    p.tau3 = sf.c * (inv_f * inv_f) * (1.0 / (1.0 + 2.0 * muc) / k0);
    cplx c1 = 1.0 / (2.0 * (1.0 - 2.0 * muc) * (3.0 + 2.0 * muc));
    cplx c2 = (muc + 4.0) / (2.0 * (1.0 - muc) * (2.0 + muc) * (3.0 + 2.0 * muc));
    cplx c3 = 1.0 / ((2.0 + muc) * (3.0 + 2.0 * muc));
    S Fx = sf.a1 * (sf.c * sf.c) * c1 + (sf.b * sf.b1 * sf.c) * c2 +
           (sf.b * sf.b) * (sf.b2 - sf.a) * c3;
    p.Fcal = Fx * (inv_f * inv_f) * (1.0 / k0);

    // H-scaling split, verified in exact exponent arithmetic:
    // k ~ H^{1-2mu} => f ~ H^{-mu}; t2 = b H/((1+mu) f), t3 = c H/((1+2mu) f^2),
    // F - F0 = [...] H^3/f^2.
    Rat64 hk = Rat64(1) - Rat64(2) * mu;
    Rat64 hf = (hk - Rat64(1)) / Rat64(2);
    p.h_t2 = Rat64(1) - hf;
    p.h_t3 = Rat64(1) - Rat64(2) * hf;
    p.h_F = Rat64(3) - Rat64(2) * hf;
    if (p.h_t2 != Rat64(1) + mu || p.h_t3 != Rat64(1) + Rat64(2) * mu ||
        p.h_F != Rat64(3) + Rat64(2) * mu)
        throw frobenius_error("h_split", "H-exponent split failed symbolically");
    p.k0_t2 = Rat64(-1, 2);
    p.k0_t3 = Rat64(-1);
    p.k0_F = Rat64(-1);
    return p;
}

enum class ScalingLaw { power, qh_exponential };

/// Closed form F - F0, either as phi-coefficients over the scaling variable
/// X = t^2/(t^3)^r (- zeta0) with F-F0 = (t^3)^p [A0 + sum A_k X^k], or as
/// the QH exponential form F-F0 = (1/t^3) sum A_k [(t^3)^3 e^{t^2}]^k.
struct ClosedForm {
    std::string case_tag;
    cplx mu;
    ScalingLaw law = ScalingLaw::power;
    Rat64 p_exp, r_exp;             // power law exponents
    cplx zeta0 = 0.0;               // nonzero for the finite-limit case
    std::vector<cplx> phi;          // phi[k] = A_k
    std::vector<Rat64> k0_pow;      // k0-power of each A_k
    double extraction_residual = 0; // consistency of the triangular solve
};

enum class LimitHint { automatic, limit_zero, limit_infinity, limit_zeta0, no_limit };

/// Steps iii)-vii): classify the limit of t^2/(t^3)^r, form the small
/// variable X, and extract the phi-coefficients.
inline ClosedForm closed_form_invert(const ParametricSolution& p,
                                     LimitHint hint = LimitHint::automatic) {
    if (hint == LimitHint::no_limit)
        throw frobenius_error("no_limit",
                              "ratio has no limit: use qh_reconstruct for the QH case");
    using S = RationalSeries<cplx>;
    Rat64 one(1), two(2), three(3);
    Rat64 r = (one + p.mu) / (one + two * p.mu);
    Rat64 pe = (three + two * p.mu) / (one + two * p.mu);
    // H-free checks: h(t2) - r h(t3) = 0 and h(F) - pe h(t3) = 0
    if (!(p.h_t2 - r * p.h_t3 == Rat64(0)) || !(p.h_F - pe * p.h_t3 == Rat64(0)))
        throw frobenius_error("h_split", "scaling variable is not H-free");

    S ratio = (p.tau2 * p.tau3.pow_frac(-r)).cleaned(1e-11);
    auto [e0, c0] = ratio.leading();
    S X(ratio.grade());
    cplx zeta0 = 0.0;
    if (hint == LimitHint::limit_zeta0 || (hint == LimitHint::automatic && e0 == Rat64(0))) {
        zeta0 = c0;
        X = ratio - S::constant(ratio.grade(), c0);
    } else if (hint == LimitHint::limit_infinity ||
               (hint == LimitHint::automatic && e0 < Rat64(0))) {
        X = ratio.reciprocal();
    } else {
        X = ratio;
    }
    X = X.cleaned(1e-11);

    S Y = (p.Fcal * p.tau3.pow_frac(-pe)).cleaned(1e-11);

    // triangular extraction Y = A0 + sum_{k>=1} A_k X^k
    ClosedForm cf;
    cf.mu = cplx(p.mu.to_double());
    cf.law = ScalingLaw::power;
    cf.p_exp = pe;
    cf.r_exp = r;
    cf.zeta0 = zeta0;
    auto [eX, cX] = X.leading();
    if (!(Rat64(0) < eX))
        throw frobenius_error("reversion", "small variable X does not vanish at s=0");
    double yscale = 0;
    for (auto& [e, c] : Y.terms()) yscale = std::max(yscale, std::abs(c));
    S Yr = Y;
    cf.phi.push_back(Yr.coeff(Rat64(0)));
    Yr = Yr - S::constant(Y.grade(), cf.phi[0]);
    S Xk = S::constant(X.grade(), 1.0);
    // usable exponent range: conservative bound from the series grades
    Rat64 glim = std::min(X.grade(), Y.grade());
    int kmax = int(glim.to_double() / eX.to_double()) - 1;
    for (int k = 1; k <= kmax; ++k) {
        Xk = Xk * X;
        auto [ek, ck] = Xk.leading();
        if (glim < ek) break;
        cplx ak = Yr.coeff(ek) / ck;
        // residual below the matched exponent must already vanish
        for (auto& [e, c] : Yr.terms())
            if (e < ek)
                cf.extraction_residual =
                    std::max(cf.extraction_residual, std::abs(c) / std::max(1.0, yscale));
        cf.phi.push_back(ak);
        if (ak != cplx(0)) Yr = (Yr - Xk * ak).cleaned(1e-12);
    }
    for (auto& [e, c] : Yr.terms())
        if (e <= glim)
            cf.extraction_residual =
                std::max(cf.extraction_residual, std::abs(c) / std::max(1.0, yscale));
    // k0-power bookkeeping: A_k ~ k0^{(pe-1) - k (r - 1/2)}
    for (std::size_t k = 0; k < cf.phi.size(); ++k)
        cf.k0_pow.push_back((pe - Rat64(1)) - Rat64(std::int64_t(k)) * (r - Rat64(1, 2)));
    return cf;
}

}  // namespace pvif::frobenius
