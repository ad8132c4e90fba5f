#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "pvif/gammafn.hpp"
#include "pvif/monodromy.hpp"

namespace pvif::connection {

using cplx = std::complex<double>;
using monodromy::MonodromyTriple;

struct connection_error : std::runtime_error {
    std::string tag;
    connection_error(std::string t, const std::string& msg)
        : std::runtime_error(msg), tag(std::move(t)) {}
};

enum class CriticalPoint { zero, one, infinity };
enum class CaseLabel { I, II, III1, III2, III3, III4 };

inline const char* to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::I: return "I";
        case CaseLabel::II: return "II";
        case CaseLabel::III1: return "III1";
        case CaseLabel::III2: return "III2";
        case CaseLabel::III3: return "III3";
        case CaseLabel::III4: return "III4";
    }
    return "?";
}
inline const char* to_string(CriticalPoint p) {
    switch (p) {
        case CriticalPoint::zero: return "zero";
        case CriticalPoint::one: return "one";
        case CriticalPoint::infinity: return "infinity";
    }
    return "?";
}

/// Local data (sigma, a) of y ~ a x^{1-sigma} at a critical point.
/// sigma is restricted to Omega = C \ ((-inf,0) u [1,+inf)).
struct CriticalData {
    cplx sigma;
    cplx a;
    CriticalPoint point = CriticalPoint::zero;
    cplx mu;
    CaseLabel used_case = CaseLabel::I;
    int branch_shift = 0;  // metadata: which +-sigma+2n window produced it
};

inline bool in_omega(cplx sigma, double tol = 1e-12) {
    if (std::abs(sigma.imag()) > tol) return true;
    double re = sigma.real();
    return re >= 0.0 && re < 1.0;
}

inline void validate(const CriticalData& c) {
    if (!in_omega(c.sigma))
        throw connection_error("sigma_outside_omega",
                               "sigma lies on (-inf,0) or [1,+inf)");
    if (c.a == cplx(0)) throw connection_error("a_zero", "coefficient a must be nonzero");
    if (c.mu == cplx(0)) throw connection_error("mu_zero", "mu must be nonzero");
}

/// f(sigma, mu) = 2 cos^2(pi sigma/2) / (cos(pi sigma) - cos(2 pi mu)).
inline cplx f_factor(cplx sigma, cplx mu) {
    cplx c = std::cos(M_PI * sigma / 2.0);
    cplx den = std::cos(M_PI * sigma) - std::cos(2.0 * M_PI * mu);
    if (std::abs(den) < 1e-14)
        throw connection_error("f_pole", "f(sigma,mu) pole: sigma = +-2mu + 2m");
    return 2.0 * c * c / den;
}

/// G(sigma, mu) = 4^sigma Gamma((sigma+1)/2)^2 /
///                (2 Gamma(1-mu+sigma/2) Gamma(mu+sigma/2)).
inline cplx g_factor(cplx sigma, cplx mu) {
    cplx num = std::pow(4.0, sigma) * std::pow(cgamma((sigma + 1.0) / 2.0), 2);
    return num / (2.0 * cgamma(1.0 - mu + sigma / 2.0) * cgamma(mu + sigma / 2.0));
}

struct AuxFactors {
    cplx f, G;
};

namespace detail {

inline std::array<cplx, 3> pre_transform(const MonodromyTriple& t, CriticalPoint p) {
    switch (p) {
        case CriticalPoint::zero: return {t.x0, t.x1, t.xinf};
        case CriticalPoint::one: return {t.x1, t.x0, t.x0 * t.x1 - t.xinf};
        case CriticalPoint::infinity: return {t.xinf, -t.x1, t.x0 - t.x1 * t.xinf};
    }
    std::abort();
}

inline std::array<cplx, 3> post_transform(std::array<cplx, 3> x, CriticalPoint p) {
    auto [x0, x1, xi] = x;
    switch (p) {
        case CriticalPoint::zero: return x;
        case CriticalPoint::one: return {x1, x0, x0 * x1 - xi};  // involution
        case CriticalPoint::infinity: return {xi - x0 * x1, -x1, x0};
    }
    std::abort();
}

/// Nearest resonance sigma ~ +-2mu + 2m; returns (sign, m) when within tol.
inline std::optional<std::pair<int, long>> resonance(cplx sigma, cplx mu, double tol) {
    for (int s : {+1, -1}) {
        cplx d = (sigma - 2.0 * double(s) * mu) / 2.0;
        long m = std::lround(d.real());
        if (std::abs(d - cplx(double(m), 0)) < tol) return std::make_pair(s, m);
    }
    return std::nullopt;
}

}  // namespace detail

enum class BranchKind { principal, reflected, shift };

struct BranchChoice {
    BranchKind kind = BranchKind::principal;
    int n = 0;  // for shift: sigma -> +-sigma + 2n
    bool negate = false;  // for shift: use -sigma before the 2n shift
};

/// Theorem-2 converse: monodromy triple -> (sigma, a) at the chosen point.
inline CriticalData triple_to_critical(const MonodromyTriple& t,
                                       CriticalPoint point = CriticalPoint::zero,
                                       BranchChoice branch = {}) {
    if (t.mu == cplx(0)) throw connection_error("mu_zero", "mu must be nonzero");
    auto [x0, x1, xi] = detail::pre_transform(t, point);
    cplx mu = t.mu;
    double zero_tol = 1e-12;

    bool all_zero = std::abs(t.x0) < zero_tol && std::abs(t.x1) < zero_tol &&
                    std::abs(t.xinf) < zero_tol;
    if (all_zero) {
        if (std::abs(mu - std::round(mu.real())) < 1e-9 && std::abs(mu.imag()) < 1e-9)
            throw connection_error(
                "rational_family",
                "triple (0,0,0) with integer mu: one-parameter family "
                "y = a x / (1 - (1-a) x) (R = 0), not an admissible triple");
        throw connection_error("not_admissible", "triple has more than one zero entry");
    }
    if (!monodromy::admissible(t))
        throw connection_error("not_admissible", "triple is not admissible");

    if (std::abs(x0 * x0 - 4.0) < 1e-12)
        throw connection_error("sigma_one", "x0^2 = 4 gives sigma = 1 outside Omega");

    // principal sigma: cos(pi sigma) = 1 - x0^2/2, 0 <= Re sigma <= 1
    cplx sigma = std::acos(1.0 - x0 * x0 / 2.0) / M_PI;
    if (std::abs(sigma.real()) < 1e-13 && sigma.imag() < 0) sigma = -sigma;
    if (std::abs(sigma.real() - 1.0) < 1e-13 && sigma.imag() < 0) sigma = 2.0 - sigma;

    int shift_n = 0;
    if (branch.kind == BranchKind::shift) {
        sigma = (branch.negate ? -sigma : sigma) + 2.0 * double(branch.n);
        shift_n = branch.n;
        if (!in_omega(sigma))
            throw connection_error("sigma_outside_omega", "shifted sigma leaves Omega");
    } else if (branch.kind == BranchKind::reflected) {
        sigma = -sigma;
        if (!in_omega(sigma))
            throw connection_error("sigma_outside_omega", "reflected sigma leaves Omega");
    }

    CriticalData out;
    out.sigma = sigma;
    out.point = point;
    out.mu = mu;
    out.branch_shift = shift_n;

    // case II: x0 = 0 (sigma = 0)
    if (std::abs(x0) < zero_tol) {
        if (std::abs(x1) < zero_tol || std::abs(xi) < zero_tol)
            throw connection_error("not_admissible", "two zero entries at this point");
        out.used_case = CaseLabel::II;
        out.sigma = 0.0;
        out.a = xi * xi / (x1 * x1 + xi * xi);
        validate(out);
        return out;
    }

    // case III: sigma = +-2mu + 2m (gamma-pole proximity routes here)
    if (auto res = detail::resonance(sigma, mu, 1e-9)) {
        auto [sgn, m] = *res;
        cplx a;
        if (sgn > 0 && m >= 0) {
            out.used_case = CaseLabel::III1;
            cplx G2 = std::pow(16.0, mu + double(m)) * std::pow(cgamma(mu + double(m) + 0.5), 2) /
                      (cgamma(cplx(double(m) + 1.0)) * cgamma(2.0 * mu + double(m)));
            a = -G2 * G2 / (4.0 * x1 * x1);
        } else if (sgn > 0) {
            out.used_case = CaseLabel::III2;
            cplx c = std::cos(M_PI * mu);
            cplx P = std::pow(16.0, mu + double(m)) * std::pow(cgamma(mu + double(m) + 0.5), 2) *
                     cgamma(-2.0 * mu - double(m) + 1.0) * cgamma(cplx(double(-m), 0));
            a = -(c * c * c * c) / (4.0 * std::pow(M_PI, 4)) * P * P * x1 * x1;
        } else if (m >= 1) {
            out.used_case = CaseLabel::III3;
            cplx G2 = std::pow(16.0, -mu + double(m)) * std::pow(cgamma(-mu + double(m) + 0.5), 2) /
                      (cgamma(double(m) - 2.0 * mu + 1.0) * cgamma(cplx(double(m), 0)));
            a = -G2 * G2 / (4.0 * x1 * x1);
        } else {
            out.used_case = CaseLabel::III4;
            cplx c = std::cos(M_PI * mu);
            cplx P = std::pow(16.0, -mu + double(m)) * std::pow(cgamma(-mu + double(m) + 0.5), 2) *
                     cgamma(2.0 * mu - double(m)) * cgamma(1.0 - double(m));
            a = -(c * c * c * c) / (4.0 * std::pow(M_PI, 4)) * P * P * x1 * x1;
        }
        out.a = a;
        validate(out);
        return out;
    }

    // case I (generic; valid verbatim for resonant 2mu as well)
    out.used_case = CaseLabel::I;
    cplx f = (4.0 - x0 * x0) / (x1 * x1 + xi * xi - x0 * x1 * xi);
    cplx G = g_factor(sigma, mu);
    cplx e = std::exp(cplx(0, -1) * M_PI * sigma);
    cplx a = cplx(0, 1) * G * G / (2.0 * std::sin(M_PI * sigma)) *
             (2.0 * (1.0 + e) - f * (xi * xi + e * x1 * x1)) * f;
    // compatibility of the defining linear system: X*Y == 1
    {
        cplx F = f * (2.0 * G) * (2.0 * G);
        cplx X = (2.0 * (1.0 + e) - f * (x1 * x1 + xi * xi * e)) / (F * (e * e - 1.0));
        cplx Y = F * (f * e * (e * x1 * x1 + xi * xi) - 2.0 * e * (1.0 + e)) / (e * e - 1.0);
        if (std::abs(X * Y - 1.0) > 1e-10 * std::max(1.0, std::abs(X * Y)))
            throw connection_error("compatibility",
                                   "case-I linear system inconsistent (X*Y != 1)");
    }
    out.a = a;
    validate(out);
    return out;
}

/// Theorem-2 direct: (sigma, a) -> monodromy triple (principal sqrt(a)).
inline MonodromyTriple critical_to_triple(const CriticalData& c) {
    validate(c);
    cplx sigma = c.sigma, a = c.a, mu = c.mu;
    std::array<cplx, 3> x;

    if (std::abs(sigma) < 1e-12) {
        // case ii)
        cplx s2m = 2.0 * std::sin(M_PI * mu);
        x = {0.0, std::sqrt(s2m * std::sqrt(1.0 - a)), std::sqrt(s2m * std::sqrt(a))};
    } else if (auto res = detail::resonance(sigma, mu, 1e-9)) {
        auto [sgn, m] = *res;
        cplx sqa = std::sqrt(a);
        if (sgn > 0 && m >= 0) {
            // iii1
            cplx x0 = 2.0 * std::sin(M_PI * mu);
            cplx x1 = cplx(0, -0.5) * std::pow(16.0, mu + double(m)) *
                      std::pow(cgamma(mu + double(m) + 0.5), 2) /
                      (cgamma(cplx(double(m) + 1.0)) * cgamma(2.0 * mu + double(m))) / sqa;
            x = {x0, x1, cplx(0, 1) * x1 * std::exp(cplx(0, -1) * M_PI * mu)};
        } else if (sgn > 0) {
            // iii2
            cplx x0 = 2.0 * std::sin(M_PI * mu);
            cplx c2 = std::cos(M_PI * mu);
            cplx x1 = cplx(0, 2) * M_PI * M_PI / (c2 * c2) /
                      (std::pow(16.0, mu + double(m)) * std::pow(cgamma(mu + double(m) + 0.5), 2) *
                       cgamma(-2.0 * mu - double(m) + 1.0) * cgamma(cplx(double(-m), 0))) * sqa;
            x = {x0, x1, cplx(0, -1) * x1 * std::exp(cplx(0, 1) * M_PI * mu)};
        } else if (m >= 1) {
            // iii3
            cplx x0 = -2.0 * std::sin(M_PI * mu);
            cplx x1 = cplx(0, -0.5) * std::pow(16.0, -mu + double(m)) *
                      std::pow(cgamma(-mu + double(m) + 0.5), 2) /
                      (cgamma(double(m) - 2.0 * mu + 1.0) * cgamma(cplx(double(m), 0))) / sqa;
            x = {x0, x1, cplx(0, 1) * x1 * std::exp(cplx(0, 1) * M_PI * mu)};
        } else {
            // iii4
            cplx x0 = -2.0 * std::sin(M_PI * mu);
            cplx c2 = std::cos(M_PI * mu);
            cplx x1 = cplx(0, 2) * M_PI * M_PI / (c2 * c2) /
                      (std::pow(16.0, -mu + double(m)) * std::pow(cgamma(-mu + double(m) + 0.5), 2) *
                       cgamma(2.0 * mu - double(m)) * cgamma(1.0 - double(m))) * sqa;
            x = {x0, x1, cplx(0, -1) * x1 * std::exp(cplx(0, -1) * M_PI * mu)};
        }
    } else {
        // case i) generic
        cplx f = f_factor(sigma, mu);
        cplx G = g_factor(sigma, mu);
        cplx sqa = std::sqrt(a);
        cplx eh = std::exp(cplx(0, -1) * M_PI * sigma / 2.0);
        x = {2.0 * std::sin(M_PI * sigma / 2.0),
             cplx(0, 1) * (sqa / (f * G) - G / sqa),
             sqa / (f * G * eh) + G * eh / sqa};
    }

    x = detail::post_transform(x, c.point);
    MonodromyTriple t(x[0], x[1], x[2], mu, /*trusted=*/true);
    cplx q = monodromy::quadratic_form(t);
    cplx rhs = 4.0 * std::pow(std::sin(M_PI * mu), 2);
    if (std::abs(q - rhs) > 1e-8 * std::max(1.0, std::abs(rhs)))
        throw connection_error("quadratic_form",
                               "constructed triple violates the quadratic relation");
    return t;
}

enum class CriticalAction { beta1_sq, reflect };

/// (sigma, a) -> (sigma, a e^{-2 pi i sigma})  [loop around 0]
/// or (sigma, a) -> (-sigma, 1/(16 a))         [Remark 2 reflection].
inline CriticalData critical_actions(const CriticalData& c, CriticalAction act) {
    CriticalData out = c;
    switch (act) {
        case CriticalAction::beta1_sq:
            out.a = c.a * std::exp(cplx(0, -2.0 * M_PI) * c.sigma);
            break;
        case CriticalAction::reflect:
            if (std::abs(c.sigma.imag()) < 1e-12 && c.sigma.real() > 0.0)
                throw connection_error("sigma_outside_omega",
                                       "reflect: -sigma leaves Omega for real sigma in (0,1)");
            out.sigma = -c.sigma;
            out.a = 1.0 / (16.0 * c.a);
            break;
    }
    return out;
}

}  // namespace pvif::connection
