#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvif/connection.hpp"
#include "pvif/puiseux.hpp"
#include "pvif/rational_series.hpp"

namespace pvif::painleve {

using cplx = std::complex<double>;
using series::Puiseux;
using series::PuiseuxSeries;
using series::RationalSeries;
using series::ExponentKey;
using connection::CriticalData;
using connection::CriticalPoint;

struct painleve_error : std::runtime_error {
    std::string tag;
    painleve_error(std::string t, const std::string& msg)
        : std::runtime_error(msg), tag(std::move(t)) {}
};

/// PVI_mu right-hand side: y'' = rhs(x, y, y').
inline cplx pvi_rhs(cplx x, cplx y, cplx yp, cplx mu) {
    cplx y1 = y - 1.0, yx = y - x, x1 = x - 1.0;
    cplx A = 0.5 * (1.0 / y + 1.0 / y1 + 1.0 / yx) * yp * yp;
    cplx B = (1.0 / x + 1.0 / x1 + 1.0 / yx) * yp;
    cplx twomu1 = 2.0 * mu - 1.0;
    cplx C = 0.5 * y * y1 * yx / (x * x * x1 * x1) *
             (twomu1 * twomu1 + x * x1 / (yx * yx));
    return A - B + C;
}

struct PviPoint {
    cplx x, y, yprime;
};

/// (Omega_1, Omega_2, Omega_3) at x; mu^2 = -(sum of squares) is conserved.
struct OmegaState {
    cplx x;
    std::array<cplx, 3> omega;
    cplx mu;
};

/// Complex integration path: straight segments through the waypoints.
struct PathSpec {
    std::vector<cplx> waypoints;
    double initial_step = 1e-3;
    double max_step = 0.1;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double pole_abort = 1e8;
    double clearance = 1e-3;  // distance kept from x = 0 and x = 1

    void validate() const {
        if (waypoints.size() < 2)
            throw painleve_error("bad_path", "need at least two waypoints");
        for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
            if (waypoints[i] == waypoints[i + 1])
                throw painleve_error("bad_path", "consecutive waypoints equal");
            for (cplx sing : {cplx(0, 0), cplx(1, 0)}) {
                // distance from sing to segment
                cplx a = waypoints[i], b = waypoints[i + 1];
                cplx d = b - a;
                double t = std::clamp(((sing - a) * std::conj(d)).real() / std::norm(d),
                                      0.0, 1.0);
                if (std::abs(a + t * d - sing) < clearance)
                    throw painleve_error("bad_path", "path violates clearance at a critical point");
            }
        }
    }
};

enum class StopFlag { completed, pole_suspected, step_underflow };

template <std::size_t N>
struct Trajectory {
    std::vector<cplx> x;
    std::vector<std::array<cplx, N>> state;
    StopFlag flag = StopFlag::completed;
    cplx stop_location{0, 0};
};

namespace detail {

// Dormand-Prince 5(4) pair.
template <std::size_t N, typename F>
Trajectory<N> dp45(const PathSpec& path, std::array<cplx, N> y0, F&& rhs,
                   const std::function<bool(cplx, const std::array<cplx, N>&)>& abort_pred) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    path.validate();
    Trajectory<N> out;
    auto y = y0;
    out.x.push_back(path.waypoints.front());
    out.state.push_back(y);

    for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
        cplx a = path.waypoints[seg], b = path.waypoints[seg + 1];
        cplx dir = b - a;
        double len = std::abs(dir);
        cplx unit = dir / len;
        double t = 0.0;
        double h = std::min(path.initial_step, len);
        int rejects_in_row = 0;
        while (t < len) {
            h = std::min(h, len - t);
            if (h < 1e-14 * std::max(1.0, len)) {
                out.flag = StopFlag::step_underflow;
                out.stop_location = a + t * unit;
                return out;
            }
            auto f = [&](double tt, const std::array<cplx, N>& yy) {
                std::array<cplx, N> d = rhs(a + tt * unit, yy);
                for (auto& v : d) v *= unit;
                return d;
            };
            auto k1 = f(t, y);
            auto stage = [&](double cc, std::initializer_list<std::pair<double,
                             const std::array<cplx, N>*>> terms) {
                std::array<cplx, N> yy = y;
                for (auto& [w, kp] : terms)
                    for (std::size_t i = 0; i < N; ++i) yy[i] += h * w * (*kp)[i];
                return f(t + cc * h, yy);
            };
            auto k2 = stage(c2, {{a21, &k1}});
            auto k3 = stage(c3, {{a31, &k1}, {a32, &k2}});
            auto k4 = stage(c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
            auto k5 = stage(c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
            auto k6 = stage(1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
            std::array<cplx, N> y5;
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                    b6 * k6[i]);
            auto k7 = f(t + h, y5);
            double err = 0;
            for (std::size_t i = 0; i < N; ++i) {
                cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
                double sc = path.abs_tol +
                            path.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(e) / sc);
            }
            if (err <= 1.0 || rejects_in_row > 40) {
                t += h;
                y = y5;
                cplx xv = a + t * unit;
                out.x.push_back(xv);
                out.state.push_back(y);
                if (abort_pred(xv, y)) {
                    out.flag = StopFlag::pole_suspected;
                    out.stop_location = xv;
                    return out;
                }
                rejects_in_row = 0;
            } else {
                ++rejects_in_row;
            }
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
            h = std::min(h, path.max_step);
        }
    }
    return out;
}

}  // namespace detail

/// Integrate PVI_mu along the path; aborts with pole_suspected once
/// |y|, 1/|y|, 1/|y-1| or 1/|y-x| exceeds the abort threshold.
inline Trajectory<2> integrate_pvi(const PviPoint& start, const PathSpec& path, cplx mu) {
    if (start.x != path.waypoints.front())
        throw painleve_error("bad_start", "start.x must equal the first waypoint");
    for (cplx bad : {cplx(0, 0), cplx(1, 0), start.x}) {
        if (bad == start.x && bad != cplx(0, 0) && bad != cplx(1, 0)) continue;
        if (std::abs(start.y - bad) < 1e-12)
            throw painleve_error("invalid_start", "start lies on a pole of the equation");
    }
    double thr = path.pole_abort;
    auto pred = [thr](cplx x, const std::array<cplx, 2>& s) {
        cplx y = s[0];
        return std::abs(y) > thr || std::abs(y) < 1.0 / thr ||
               std::abs(y - 1.0) < 1.0 / thr || std::abs(y - x) < 1.0 / thr;
    };
    auto rhs = [mu](cplx x, const std::array<cplx, 2>& s) {
        return std::array<cplx, 2>{s[1], pvi_rhs(x, s[0], s[1], mu)};
    };
    return detail::dp45<2>(path, {start.y, start.yprime}, rhs, pred);
}

/// Integrate the Omega system along the path.
inline Trajectory<3> integrate_omega(const OmegaState& start, const PathSpec& path) {
    if (start.omega[0] == cplx(0) && start.omega[1] == cplx(0) && start.omega[2] == cplx(0))
        throw painleve_error("invalid_start", "zero Omega state (mu = 0) rejected");
    double thr = path.pole_abort;
    auto pred = [thr](cplx, const std::array<cplx, 3>& s) {
        return std::abs(s[0]) > thr || std::abs(s[1]) > thr || std::abs(s[2]) > thr;
    };
    auto rhs = [](cplx x, const std::array<cplx, 3>& s) {
        return std::array<cplx, 3>{s[1] * s[2] / x, s[0] * s[2] / (1.0 - x),
                                   s[0] * s[1] / (x * (x - 1.0))};
    };
    return detail::dp45<3>(path, start.omega, rhs, pred);
}

/// mu^2 drift max |mu^2 + sum Omega_i^2| along a trajectory.
inline double mu2_drift(const Trajectory<3>& tr, cplx mu) {
    double d = 0;
    for (auto& s : tr.state) {
        cplx q = mu * mu + s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        d = std::max(d, std::abs(q));
    }
    return d;
}

// ---------------------------------------------------------------------------
// y <-> Omega conversion
// ---------------------------------------------------------------------------

/// Omega -> (y, y'). Requires mu^2 + Omega_2^2 != 0.
inline PviPoint omega_to_y(const OmegaState& s) {
    cplx x = s.x, mu = s.mu;
    auto [o1, o2, o3] = s.omega;
    cplx Nn = o1 * o2 + mu * o3;
    cplx D = mu * mu + o2 * o2;
    if (std::abs(D) < 1e-14)
        throw painleve_error("degenerate_denominator", "mu^2 + Omega_2^2 = 0");
    cplx R = (Nn / D) * (Nn / D);
    cplx den = x * (1.0 + R) - 1.0;
    if (std::abs(den) < 1e-14)
        throw painleve_error("degenerate_denominator", "x(1+R) = 1");
    cplx y = x * R / den;
    // derivative through the Omega system
    cplx o1p = o2 * o3 / x;
    cplx o2p = o1 * o3 / (1.0 - x);
    cplx o3p = o1 * o2 / (x * (x - 1.0));
    cplx Np = o1p * o2 + o1 * o2p + mu * o3p;
    cplx Dp = 2.0 * o2 * o2p;
    cplx Rp = 2.0 * (Nn / D) * (Np * D - Nn * Dp) / (D * D);
    cplx yp = (R + x * Rp) / den - x * R * (1.0 + R + x * Rp) / (den * den);
    return {x, y, yp};
}

/// (y, y') -> Omega with explicit square-root sign choices for
/// (sqrt(y), sqrt(y-1), sqrt(y-x)). Any two flips are a gauge.
inline OmegaState y_to_omega(const PviPoint& p, cplx mu,
                             std::array<int, 3> signs = {1, 1, 1}) {
    cplx x = p.x, y = p.y, yp = p.yprime;
    if (std::abs(y) < 1e-14 || std::abs(y - 1.0) < 1e-14 || std::abs(y - x) < 1e-14)
        throw painleve_error("degenerate_denominator", "y in {0, 1, x}");
    cplx A = 0.5 * (yp * x * (x - 1.0) - y * (y - 1.0));
    cplx sy = double(signs[0]) * std::sqrt(y);
    cplx sy1 = double(signs[1]) * std::sqrt(y - 1.0);
    cplx syx = double(signs[2]) * std::sqrt(y - x);
    cplx sx = std::sqrt(x);
    cplx s1x = std::sqrt(1.0 - x);
    cplx o1 = cplx(0, 1) * sy1 * syx / sx * (A / ((y - 1.0) * (y - x)) + mu);
    cplx o2 = cplx(0, 1) * sy * syx / s1x * (A / (y * (y - x)) + mu);
    cplx o3 = -sy * sy1 / (sx * s1x) * (A / (y * (y - 1.0)) + mu);
    return {x, {o1, o2, o3}, mu};
}

// ---------------------------------------------------------------------------
// Local series at a critical point
// ---------------------------------------------------------------------------

/// Formal local solution: y-series and Omega-series on the exponent lattice.
struct LocalSolution {
    CriticalData data;
    PuiseuxSeries y;
    std::array<PuiseuxSeries, 3> omega;
    int order = 0;
    bool has_omega = true;
};

namespace detail {

/// Seed constants (a00, b00) from (sigma, a, mu): Omega_1 ~ b s^{-sigma/2} +
/// a s^{sigma/2} with the y-leading coefficient forced to a and
/// a00*b00 = (sigma^2 - 4 mu^2)/16.
inline std::pair<cplx, cplx> seed_constants(cplx sigma, cplx a, cplx mu) {
    cplx sqa = std::sqrt(a);
    if (std::abs(sigma) < 1e-12) {
        cplx sqam1 = std::sqrt(a - 1.0);
        return {(mu / 2.0) * (-sqa + sqam1), (mu / 2.0) * (sqa + sqam1)};
    }
    cplx b00 = (mu - sigma / 2.0) * sqa;
    cplx a00 = -(sigma / 2.0 + mu) / (4.0 * sqa);
    return {a00, b00};
}

}  // namespace detail

/// Solve the Omega system formally at s = 0 for critical data (sigma, a, mu),
/// then convert to the y-series. Exponents live on {(m + n sigma)/2}.
inline LocalSolution local_series_at_zero(const CriticalData& c, int order) {
    connection::validate(c);
    cplx sigma = c.sigma, mu = c.mu;
    if (std::abs(mu * mu - sigma * sigma / 4.0) < 1e-12)
        throw painleve_error("sigma_resonant",
                             "sigma = +-2mu: y-series from Omega degenerates (case III data)");
    int grade = 2 * order + 2;
    int band = order + 4;
    auto [a00, b00] = detail::seed_constants(sigma, c.a, mu);

    using S = PuiseuxSeries;
    const std::string v = "s";
    auto mono = [&](ExponentKey k, cplx coef) {
        return S::monomial(v, sigma, grade, band, k, coef);
    };
    auto con = [&](cplx coef) { return S::constant(v, sigma, grade, band, coef); };

    // homogeneous parts: P = O1 + i O3 ~ 2 a00 s^{sigma/2},
    //                    M = O1 - i O3 ~ 2 b00 s^{-sigma/2}
    S P0 = mono({0, 1}, 2.0 * a00);
    S M0 = mono({0, -1}, 2.0 * b00);
    S P = P0, M = M0;
    S O2 = mono({0, 0}, cplx(0, 1) * sigma / 2.0);

    S geom(v, sigma, grade, band);  // s + s^2 + ...
    for (int k = 1; 2 * k <= grade; ++k) geom.set({2 * k, 0}, 1.0);
    S one_over_1ms = con(1.0) + geom;

    const cplx I(0, 1);
    int iters = 2 * order + 10;
    for (int it = 0; it < iters; ++it) {
        S O1 = (P + M) * cplx(0.5);
        S O3 = (P - M) * cplx(0, -0.5);
        S newO2 = mono({0, 0}, I * sigma / 2.0);
        {
            S integrand = one_over_1ms * O1 * O3;
            newO2 = newO2 + integrand.antiderivative();
        }
        S dO2 = newO2 - mono({0, 0}, I * sigma / 2.0);
        S h1 = dO2 * O3;
        S h3 = (dO2 * O1) * cplx(-1) + (geom * (O1 * newO2)) * cplx(-1);
        S hp = h1 + h3 * I;
        S hm = h1 + h3 * (-I);
        // s P' = (sigma/2) P + hp : monomial c s^e -> c/(e - sigma/2) s^e
        S newP = P0;
        for (auto& [k, coef] : hp.terms()) {
            cplx d = k.realized(sigma) - sigma / 2.0;
            if (std::abs(d) < 1e-11)
                throw painleve_error("exponent_collision",
                                     "resonant exponent (m=" + std::to_string(k.m) +
                                         ", n=" + std::to_string(k.n) + ") in local solver");
            newP.add_term(k, coef / d);
        }
        S newM = M0;
        for (auto& [k, coef] : hm.terms()) {
            cplx d = k.realized(sigma) + sigma / 2.0;
            if (std::abs(d) < 1e-11)
                throw painleve_error("exponent_collision",
                                     "resonant exponent (m=" + std::to_string(k.m) +
                                         ", n=" + std::to_string(k.n) + ") in local solver");
            newM.add_term(k, coef / d);
        }
        P = newP;
        M = newM;
        O2 = newO2;
    }

    LocalSolution sol;
    sol.data = c;
    sol.order = order;
    S O1 = (P + M) * cplx(0.5);
    S O3 = (P - M) * cplx(0, -0.5);
    sol.omega = {O1, O2, O3};

    // y from R = ((O1 O2 + mu O3)/(mu^2 + O2^2))^2, y = s R/(s(1+R) - 1)
    S num = O1 * O2 + O3 * mu;
    S den = con(mu * mu) + O2 * O2;
    S Rt = num * den.reciprocal();
    S R = Rt * Rt;
    S s_ser = mono({2, 0}, 1.0);
    S sR = s_ser * R;
    S denom = sR + s_ser - con(1.0);
    sol.y = (sR * denom.reciprocal()).cleaned(1e-13);
    return sol;
}

/// Map a point-zero local solution to the series at x=1 (sim2) or x=inf (sim1).
inline LocalSolution transform_critical_point(const LocalSolution& s, CriticalPoint target) {
    if (s.data.point != CriticalPoint::zero)
        throw painleve_error("bad_input", "transform expects a point-zero solution");
    LocalSolution out;
    out.order = s.order;
    out.data = s.data;
    out.data.point = target;
    out.has_omega = false;
    switch (target) {
        case CriticalPoint::zero:
            return s;
        case CriticalPoint::one: {
            // x = 1 - t, y(x) = 1 - yhat(t): series in t = 1 - x
            auto one = PuiseuxSeries::constant("s", s.y.sigma(), s.y.grade(), s.y.band(), 1.0);
            out.y = one - s.y;
            return out;
        }
        case CriticalPoint::infinity: {
            // x = 1/t, y(x) = (1/t) yhat(t): series in t = 1/x
            auto tinv = PuiseuxSeries::monomial("s", s.y.sigma(), s.y.grade(), s.y.band(),
                                                {-2, 0}, 1.0);
            out.y = tinv * s.y;
            return out;
        }
    }
    std::abort();
}

// ---------------------------------------------------------------------------
// PVI residual
// ---------------------------------------------------------------------------

struct ResidualReport {
    double max_scaled = 0;           // samples: max |lhs-rhs| / max(1,|y''|)
    double leading_exponent = 0;     // series: realized Re of leading residual term
    bool empty = true;               // series: residual vanished entirely
};

/// Residual of the PVI_mu equation for a lattice y-series about s = 0.
inline PuiseuxSeries pvi_residual_series(const PuiseuxSeries& y, cplx mu) {
    using S = PuiseuxSeries;
    const std::string v = y.var();
    cplx sigma = y.sigma();
    int grade = y.grade(), band = y.band();
    auto con = [&](cplx c) { return S::constant(v, sigma, grade, band, c); };
    auto mono = [&](ExponentKey k, cplx c) { return S::monomial(v, sigma, grade, band, k, c); };

    S x = mono({2, 0}, 1.0);
    S yp = y.differentiate();
    S ypp = yp.differentiate();
    S ym1 = y - con(1.0);
    S yx = y - x;
    S xm1 = x - con(1.0);
    S invy = y.reciprocal();
    S invym1 = ym1.reciprocal();
    S invyx = yx.reciprocal();
    S invx = mono({-2, 0}, 1.0);
    S invxm1 = xm1.reciprocal();

    S t1 = (invy + invym1 + invyx) * (yp * yp) * cplx(0.5);
    S t2 = (invx + invxm1 + invyx) * yp;
    S invx2 = invx * invx;
    S invxm12 = invxm1 * invxm1;
    cplx w = (2.0 * mu - 1.0) * (2.0 * mu - 1.0);
    S brk = con(w) + (x * xm1) * (invyx * invyx);
    S t3 = (y * ym1 * yx * invx2 * invxm12 * brk) * cplx(0.5);
    return ypp - t1 + t2 - t3;
}

/// Same residual on the specialized rational lattice.
inline RationalSeries<cplx> pvi_residual_series(const RationalSeries<cplx>& y, cplx mu) {
    using S = RationalSeries<cplx>;
    Rat64 g = y.grade();
    auto con = [&](cplx c) { return S::constant(g, c); };
    auto mono = [&](Rat64 e, cplx c) { return S::monomial(g, e, c); };
    S x = mono(Rat64(1), 1.0);
    S yp = y.differentiate();
    S ypp = yp.differentiate();
    S ym1 = y - con(1.0);
    S yx = y - x;
    S xm1 = x - con(1.0);
    S invy = y.reciprocal();
    S invym1 = ym1.reciprocal();
    S invyx = yx.reciprocal();
    S invx = mono(Rat64(-1), 1.0);
    S invxm1 = xm1.reciprocal();
    S t1 = (invy + invym1 + invyx) * (yp * yp) * cplx(0.5);
    S t2 = (invx + invxm1 + invyx) * yp;
    cplx w = (2.0 * mu - 1.0) * (2.0 * mu - 1.0);
    S brk = con(w) + (x * xm1) * (invyx * invyx);
    S t3 = (y * ym1 * yx * (invx * invx) * (invxm1 * invxm1) * brk) * cplx(0.5);
    return ypp - t1 + t2 - t3;
}

/// Leading realized exponent of the residual after noise cleaning.
inline ResidualReport residual_report(const PuiseuxSeries& y, cplx mu,
                                      double noise = 1e-9) {
    auto r = pvi_residual_series(y, mu);
    double scale = 1.0;
    for (auto& [k, c] : r.terms()) scale = std::max(scale, std::abs(c));
    ResidualReport rep;
    rep.empty = true;
    double lead = 1e300;
    for (auto& [k, c] : r.terms()) {
        if (std::abs(c) <= noise * scale) continue;
        rep.empty = false;
        lead = std::min(lead, r.realized_re(k));
    }
    rep.leading_exponent = rep.empty ? double(y.grade()) / 2.0 : lead;
    return rep;
}

/// Pointwise residual on samples (x, y, y', y''): max |y'' - rhs| scaled.
inline ResidualReport pvi_residual_samples(const std::vector<std::array<cplx, 4>>& samples,
                                           cplx mu) {
    ResidualReport rep;
    rep.empty = samples.empty();
    for (auto& s : samples) {
        cplx lhs = s[3];
        cplx rhs = pvi_rhs(s[0], s[1], s[2], mu);
        double sc = std::max(1.0, std::abs(lhs));
        rep.max_scaled = std::max(rep.max_scaled, std::abs(lhs - rhs) / sc);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Elliptic periods, Picard, Shimomura, Chazy
// ---------------------------------------------------------------------------

struct EllipticPeriods {
    cplx omega1, omega2, F, F1;
};

/// omega1 = (pi/2) F(x), omega2 = -(i/2)(F ln x + F1), truncated sums.
inline EllipticPeriods elliptic_periods(cplx x, int order) {
    if (std::abs(x) >= 1.0)
        throw painleve_error("outside_disk", "elliptic periods need |x| < 1");
    if (order < 1) throw painleve_error("bad_order", "order >= 1");
    static const double egamma = 0.57721566490153286060651209008240243;
    double psi_half = -egamma - 2.0 * std::log(2.0);  // psi(1/2)
    double psi_one = -egamma;                         // psi(1)
    cplx F = 0, F1 = 0, term = 1;
    double ph = psi_half, p1 = psi_one;
    for (int n = 0; n < order; ++n) {
        if (n > 0) {
            double r = (n - 0.5) / n;  // ((1/2)_n / n!)^2 growth
            term *= x * r * r;
            ph += 1.0 / (0.5 + (n - 1));
            p1 += 1.0 / double(n);
        }
        F += term;
        F1 += term * 2.0 * (ph - p1);
    }
    EllipticPeriods ep;
    ep.F = F;
    ep.F1 = F1;
    ep.omega1 = M_PI / 2.0 * F;
    ep.omega2 = cplx(0, -0.5) * (F * std::log(x) + F1);
    return ep;
}

/// Domain of the Picard/elliptic representation (Im nu2 != 0 strip bounds).
inline bool picard_domain_contains(cplx nu1, cplx nu2, cplx x, double r = 0.3) {
    if (std::abs(x) >= r) return false;
    if (std::abs(nu2.imag()) < 1e-14) return true;
    double L = std::log(std::abs(x)), th = std::arg(x);
    double lo = (nu2.real() + 2.0) * L - M_PI * nu1.imag() - 4.0 * std::log(2.0) * (nu2.real() + 2.0);
    double hi = (nu2.real() - 2.0) * L - M_PI * nu1.imag() - 4.0 * std::log(2.0) * (nu2.real() - 2.0);
    double v = nu2.imag() * th;
    return lo < v && v < hi;
}

struct PicardResult {
    PviPoint point;
    monodromy::MonodromyTriple triple;
};

/// Picard two-parameter family at mu = 1/2 via the truncated Fourier
/// expansion; also returns the companion monodromy triple.
inline PicardResult picard_eval(cplx nu1, cplx nu2, cplx x, int nterms = 24) {
    if (nu1 == cplx(0) && nu2 == cplx(0))
        throw painleve_error("bad_parameters", "(nu1, nu2) = (0,0) excluded");
    if (!picard_domain_contains(nu1, nu2, x))
        throw painleve_error("outside_domain", "x outside the elliptic-representation domain");

    auto yval = [&](cplx xx) {
        auto ep = elliptic_periods(xx, 64);
        cplx F = ep.F, F1 = ep.F1;
        cplx lF = F1 / F;
        cplx theta = -0.5 * (cplx(0, 1) * nu2 * (std::log(xx) + lF) - M_PI * nu1);
        cplx s0 = std::sin(theta);
        if (std::abs(s0) < 1e-12)
            throw painleve_error("pole", "sin^2 vanishes: pole of the Picard solution");
        cplx acc = 1.0 / (s0 * s0) - 1.0 / 3.0;
        cplx x2n = 1.0;
        for (int n = 1; n <= nterms; ++n) {
            x2n *= xx * xx;
            cplx sn = std::sin(double(n) * theta);
            acc += 8.0 * x2n / (std::exp(-2.0 * double(n) * lF) - x2n) * sn * sn;
        }
        return (xx + 1.0) / 3.0 + acc / (F * F);
    };

    // holomorphic derivative by a small Cauchy circle
    double rad = 1e-3 * std::abs(x);
    cplx y = yval(x), yp = 0;
    const int M = 16;
    for (int k = 0; k < M; ++k) {
        double th = 2.0 * M_PI * k / M;
        cplx e(std::cos(th), std::sin(th));
        yp += yval(x + rad * e) * std::conj(e) / double(M);
        // conj(e) = e^{-i th}; first Fourier mode / rad gives y'
    }
    yp /= rad;

    cplx r1, r2, r3;
    if (nu1.real() > nu2.real()) {
        r1 = nu2 / 2.0;
        r2 = 1.0 - nu1 / 2.0;
        r3 = (nu1 - nu2) / 2.0;
    } else {
        r1 = 1.0 - nu2 / 2.0;
        r2 = nu1 / 2.0;
        r3 = (nu2 - nu1) / 2.0;
    }
    monodromy::MonodromyTriple tr(-2.0 * std::cos(M_PI * r1), -2.0 * std::cos(M_PI * r2),
                                  -2.0 * std::cos(M_PI * r3), 0.5, /*trusted=*/true);
    return {{x, y, yp}, tr};
}

/// Shimomura leading form (v = 0): y = 1/cosh^2((sigma-1)/2 ln x + k/2).
inline cplx shimomura_leading(cplx sigma, cplx k, cplx x) {
    cplx u = (sigma - 1.0) / 2.0 * std::log(x) + k / 2.0;
    cplx ch = std::cosh(u);
    if (std::abs(ch) < 1e-12)
        throw painleve_error("pole", "cosh^2 vanishes (outside the Shimomura domain)");
    return 1.0 / (ch * ch);
}

inline bool shimomura_domain_contains(cplx sigma, cplx k, cplx x, double r = 0.3) {
    if (std::abs(x) >= r) return false;
    double L = std::log(std::abs(x)), th = std::arg(x);
    double lo = sigma.real() * L + k.real() - std::log(r);
    double hi = (sigma.real() - 1.0) * L + k.real() + std::log(r);
    double v = sigma.imag() * th;
    return lo < v && v < hi;
}

/// Leading Chazy Omega values at mu^2 = 1/4:
/// Omega_1 = i/(sqrt(s)(ln s + C)), Omega_3 = -1/(sqrt(s)(ln s + C)),
/// Omega_2 = i/2 + i/(ln s + C).
inline OmegaState chazy_omega(cplx s, cplx C) {
    cplx L = std::log(s) + C;
    if (std::abs(L) < 1e-12)
        throw painleve_error("log_zero", "ln s + C = 0");
    cplx rs = std::sqrt(s);
    cplx o1 = cplx(0, 1) / (rs * L);
    cplx o3 = -1.0 / (rs * L);
    cplx o2 = cplx(0, 0.5) + cplx(0, 1) / L;
    return {s, {o1, o2, o3}, cplx(0.5)};
}

}  // namespace pvif::painleve
