#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvif::monodromy {

using cplx = std::complex<double>;

constexpr double kQuadFormTol = 1e-10;

struct monodromy_error : std::runtime_error {
    std::string tag;
    monodromy_error(std::string t, const std::string& msg)
        : std::runtime_error(msg), tag(std::move(t)) {}
};

/// Trace coordinates (x0, x1, xinf) of the monodromy representation
/// attached to PVI_mu, constrained by the quadratic relation.
struct MonodromyTriple {
    cplx x0, x1, xinf;
    cplx mu;

    MonodromyTriple(cplx x0_, cplx x1_, cplx xinf_, cplx mu_, bool trusted = false)
        : x0(x0_), x1(x1_), xinf(xinf_), mu(mu_) {
        if (mu == cplx(0)) throw monodromy_error("mu_zero", "mu must be nonzero");
        if (!trusted) {
            cplx q = x0 * x0 + x1 * x1 + xinf * xinf - x0 * x1 * xinf;
            cplx rhs = 4.0 * std::sin(M_PI * mu) * std::sin(M_PI * mu);
            if (std::abs(q - rhs) > kQuadFormTol * std::max(1.0, std::abs(rhs)))
                throw monodromy_error("quadratic_form",
                                      "triple violates x0^2+x1^2+xinf^2-x0 x1 xinf = 4 sin^2(pi mu)");
        }
    }
};

inline cplx quadratic_form(const MonodromyTriple& t) {
    return t.x0 * t.x0 + t.x1 * t.x1 + t.xinf * t.xinf - t.x0 * t.x1 * t.xinf;
}

/// b is a with exactly zero or two entries negated.
inline bool sign_equivalent(const MonodromyTriple& a, const MonodromyTriple& b,
                            double tol = 1e-9) {
    auto near = [tol](cplx u, cplx v) { return std::abs(u - v) <= tol; };
    for (int s0 : {1, -1})
        for (int s1 : {1, -1}) {
            int s2 = s0 * s1;
            if (near(a.x0, double(s0) * b.x0) && near(a.x1, double(s1) * b.x1) &&
                near(a.xinf, double(s2) * b.xinf))
                return true;
        }
    return false;
}

/// At most one entry zero and not sign-equivalent to (2,2,2).
inline bool admissible(const MonodromyTriple& t, double tol = 1e-9) {
    int zeros = (std::abs(t.x0) <= tol) + (std::abs(t.x1) <= tol) + (std::abs(t.xinf) <= tol);
    if (zeros > 1) return false;
    static const std::array<std::array<double, 3>, 4> bad = {{
        {2, 2, 2}, {-2, -2, 2}, {2, -2, -2}, {-2, 2, -2}}};
    for (auto& b : bad)
        if (std::abs(t.x0 - b[0]) <= tol && std::abs(t.x1 - b[1]) <= tol &&
            std::abs(t.xinf - b[2]) <= tol)
            return false;
    return true;
}

enum class BraidGen { b1, b2, b1_inv, b2_inv };

/// Word in the braid generators, applied left to right.
struct BraidWord {
    std::vector<BraidGen> gens;

    /// Parse words like "b1 b1 B2" (capital = inverse).
    static BraidWord parse(const std::string& s) {
        BraidWord w;
        std::istringstream is(s);
        std::string tok;
        while (is >> tok) {
            if (tok == "b1") w.gens.push_back(BraidGen::b1);
            else if (tok == "b2") w.gens.push_back(BraidGen::b2);
            else if (tok == "B1") w.gens.push_back(BraidGen::b1_inv);
            else if (tok == "B2") w.gens.push_back(BraidGen::b2_inv);
            else throw monodromy_error("bad_braid_word", "unknown braid token '" + tok + "'");
        }
        return w;
    }
};

namespace detail {
inline std::array<cplx, 3> gen_apply(BraidGen g, std::array<cplx, 3> x) {
    auto [x0, x1, xi] = x;
    switch (g) {
        case BraidGen::b1:      return {-x0, xi - x0 * x1, x1};
        case BraidGen::b2:      return {xi, -x1, x0 - x1 * xi};
        case BraidGen::b1_inv:  return {-x0, xi, x1 - x0 * xi};
        case BraidGen::b2_inv:  return {xi - x0 * x1, -x1, x0};
    }
    std::abort();
}
}  // namespace detail

inline MonodromyTriple apply_braid(const MonodromyTriple& t, const BraidWord& w) {
    std::array<cplx, 3> x{t.x0, t.x1, t.xinf};
    for (auto g : w.gens) x = detail::gen_apply(g, x);
    return MonodromyTriple(x[0], x[1], x[2], t.mu, /*trusted=*/true);
}

/// Unit-upper-triangular Stokes matrix, dimension n; only the strict upper
/// triangle is stored.
struct StokesMatrix {
    int n = 0;
    std::vector<cplx> upper;  // row-major strict upper triangle

    explicit StokesMatrix(int dim) : n(dim), upper(std::size_t(dim) * (dim - 1) / 2) {}

    static std::size_t idx(int n, int i, int j) {
        // i<j, zero-based
        std::size_t before = std::size_t(i) * (2 * n - i - 1) / 2;
        return before + std::size_t(j - i - 1);
    }
    cplx at(int i, int j) const {
        if (i == j) return 1.0;
        if (i > j) return 0.0;
        return upper[idx(n, i, j)];
    }
    void set(int i, int j, cplx v) {
        if (i >= j) throw monodromy_error("lower_triangle", "only i<j entries settable");
        upper[idx(n, i, j)] = v;
    }
};

/// Canonical Stokes matrix of QH*(CP^d): s_ij = (-1)^(j-i) C(d+1, j-i).
inline StokesMatrix cp_d_stokes(int d) {
    if (d < 1) throw monodromy_error("bad_dimension", "cp_d_stokes: d >= 1 required");
    StokesMatrix s(d + 1);
    auto binom = [](long n, long k) {
        double r = 1;
        for (long i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
        return r;
    };
    for (int i = 0; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) {
            int k = j - i;
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            s.set(i, j, sgn * binom(d + 1, k));
        }
    return s;
}

/// Braid action S -> A S A with the elementary matrix built from s_{i,i+1}.
/// `gen` is 1-based (1 <= gen <= n-1).
inline StokesMatrix braid_on_stokes(const StokesMatrix& s, int gen, bool inverse = false) {
    int n = s.n;
    if (gen < 1 || gen > n - 1)
        throw monodromy_error("bad_generator", "braid generator out of range");
    int i = gen - 1;  // zero-based row
    std::vector<cplx> A(std::size_t(n) * n, 0.0);
    for (int k = 0; k < n; ++k)
        if (k != i && k != i + 1) A[std::size_t(k) * n + k] = 1.0;
    cplx sii1 = s.at(i, i + 1);
    if (!inverse) {
        A[std::size_t(i + 1) * n + (i + 1)] = -sii1;
        A[std::size_t(i) * n + (i + 1)] = 1.0;
        A[std::size_t(i + 1) * n + i] = 1.0;
    } else {
        A[std::size_t(i) * n + i] = -sii1;
        A[std::size_t(i) * n + (i + 1)] = 1.0;
        A[std::size_t(i + 1) * n + i] = 1.0;
    }
    auto mult = [n](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        std::vector<cplx> c(std::size_t(n) * n, 0.0);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                cplx ark = a[std::size_t(r) * n + k];
                if (ark == cplx(0)) continue;
                for (int cidx = 0; cidx < n; ++cidx)
                    c[std::size_t(r) * n + cidx] += ark * b[std::size_t(k) * n + cidx];
            }
        return c;
    };
    std::vector<cplx> S(std::size_t(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) S[std::size_t(r) * n + c] = s.at(r, c);
    auto res = mult(A, mult(S, A));
    StokesMatrix out(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < r; ++c)
            if (std::abs(res[std::size_t(r) * n + c]) > 1e-9)
                throw monodromy_error("not_triangular", "braid action left lower triangle");
        if (std::abs(res[std::size_t(r) * n + r] - 1.0) > 1e-9)
            throw monodromy_error("not_unit_diagonal", "braid action broke unit diagonal");
        for (int c = r + 1; c < n; ++c) out.set(r, c, res[std::size_t(r) * n + c]);
    }
    return out;
}

/// Bounded search of the braid+sign orbit of a 3x3 Stokes matrix for a
/// target triple (s12, s13, s23); used for orbit membership questions.
inline bool stokes_orbit_contains(const StokesMatrix& start,
                                  const std::array<cplx, 3>& target,
                                  int max_depth = 8, double tol = 1e-8) {
    if (start.n != 3) throw monodromy_error("bad_dimension", "orbit search is 3x3 only");
    auto key = [](const StokesMatrix& s) {
        auto q = [](cplx v) { return std::llround(v.real() * 1e6) * 1000003 +
                                     std::llround(v.imag() * 1e6); };
        return std::array<long long, 3>{q(s.at(0, 1)), q(s.at(0, 2)), q(s.at(1, 2))};
    };
    auto matches = [&](const StokesMatrix& s) {
        // sign changes J S J with J = diag(+-1): flips pairs of off-diagonal entries
        for (int j0 : {1, -1})
            for (int j1 : {1, -1})
                for (int j2 : {1, -1}) {
                    cplx a = double(j0 * j1) * s.at(0, 1);
                    cplx b = double(j0 * j2) * s.at(0, 2);
                    cplx c = double(j1 * j2) * s.at(1, 2);
                    if (std::abs(a - target[0]) < tol && std::abs(b - target[1]) < tol &&
                        std::abs(c - target[2]) < tol)
                        return true;
                }
        return false;
    };
    std::set<std::array<long long, 3>> seen;
    std::queue<std::pair<StokesMatrix, int>> q;
    q.push({start, 0});
    seen.insert(key(start));
    while (!q.empty()) {
        auto [s, d] = q.front();
        q.pop();
        if (matches(s)) return true;
        if (d >= max_depth) continue;
        for (int g : {1, 2})
            for (bool inv : {false, true}) {
                StokesMatrix nx = braid_on_stokes(s, g, inv);
                if (seen.insert(key(nx)).second) q.push({nx, d + 1});
            }
    }
    return false;
}

}  // namespace pvif::monodromy
