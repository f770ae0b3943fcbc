#include "binq4/curvecount.hpp"

#include "binq4/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace binq4 {

namespace {

using U64 = std::uint64_t;
using Point = std::pair<Int, Int>;

// ---------------------------------------------------------------------------
// Bivariate helpers: f(x, y) = sum_b ys[b](x) y^b.
// ---------------------------------------------------------------------------

using YPoly = std::vector<IntPolynomial>;

void ytrim(YPoly& f) {
    while (!f.empty() && f.back().is_zero())
        f.pop_back();
}

int ydeg(const YPoly& f) { return int(f.size()) - 1; }

int ytotal_degree(const YPoly& f) {
    int d = -1;
    for (int b = 0; b <= ydeg(f); ++b)
        if (!f[size_t(b)].is_zero())
            d = std::max(d, f[size_t(b)].degree() + b);
    return d;
}

YPoly ysub(const YPoly& a, const YPoly& b) {
    YPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size())
            r[i] = r[i] + a[i];
        if (i < b.size())
            r[i] = r[i] - b[i];
    }
    ytrim(r);
    return r;
}

/// a * s * y^shift with a scalar polynomial s in x.
YPoly yshift_mul(const YPoly& a, const IntPolynomial& s, int shift) {
    YPoly r(a.size() + size_t(shift));
    for (size_t i = 0; i < a.size(); ++i)
        r[i + size_t(shift)] = a[i] * s;
    ytrim(r);
    return r;
}

YPoly yscale(const YPoly& a, const IntPolynomial& s) { return yshift_mul(a, s, 0); }

YPoly yderiv_y(const YPoly& f) {
    YPoly r;
    for (int b = 1; b <= ydeg(f); ++b)
        r.push_back(f[size_t(b)] * Int(b));
    ytrim(r);
    return r;
}

YPoly yderiv_x(const YPoly& f) {
    YPoly r;
    for (const auto& c : f)
        r.push_back(c.derivative());
    ytrim(r);
    return r;
}

/// gcd of the coefficient polynomials (the content in Z[x], integer factors
/// included: content = gcd of integer contents times the primitive gcd).
IntPolynomial ycontent(const YPoly& f) {
    IntPolynomial g;
    Int ic = 0;
    for (const auto& c : f) {
        g = poly_gcd(g, c);
        ic = gcd(ic, c.content());
    }
    if (g.is_zero())
        return g;
    return g * ic;
}

YPoly ydiv_coeff(const YPoly& f, const IntPolynomial& d) {
    YPoly r;
    for (const auto& c : f)
        r.push_back(c.is_zero() ? c : c.divexact(d));
    ytrim(r);
    return r;
}

Int yint_content(const YPoly& f) {
    Int g = 0;
    for (const auto& c : f)
        g = gcd(g, c.content());
    return g;
}

/// Pseudo-remainder of a by b in y (b nonzero, ydeg b >= 0).
YPoly yprem(const YPoly& a, const YPoly& b) {
    YPoly r = a;
    ytrim(r);
    const IntPolynomial& lb = b.back();
    while (!r.empty() && ydeg(r) >= ydeg(b)) {
        int e = ydeg(r) - ydeg(b);
        IntPolynomial lr = r.back();
        r = ysub(yscale(r, lb), yshift_mul(b, lr, e));
        if (!r.empty() && ydeg(r) >= ydeg(b) + e)
            throw std::logic_error("yprem: leading term did not cancel");
    }
    return r;
}

/// Divides out the Z[x]-content and normalizes the sign.
YPoly yprimitive(const YPoly& a) {
    YPoly r = a;
    ytrim(r);
    if (r.empty())
        return r;
    IntPolynomial c = ycontent(r);
    r = ydiv_coeff(r, c);
    if (r.back().leading() < 0)
        for (auto& q : r)
            q = q * Int(-1);
    return r;
}

/// Primitive gcd in Z[x][y] by a primitive pseudo-remainder sequence.
YPoly ygcd(YPoly a, YPoly b) {
    ytrim(a);
    ytrim(b);
    if (a.empty())
        return b.empty() ? b : yprimitive(b);
    if (b.empty())
        return yprimitive(a);
    if (ydeg(a) < ydeg(b))
        std::swap(a, b);
    IntPolynomial ca = ycontent(a), cb = ycontent(b);
    IntPolynomial c = poly_gcd(ca, cb);
    a = ydiv_coeff(a, ca);
    b = ydiv_coeff(b, cb);
    while (ydeg(b) > 0) {
        YPoly r = yprem(a, b);
        a = b;
        if (r.empty()) {
            return yscale(yprimitive(a), c);
        }
        ytrim(r);
        b = (ydeg(r) == 0) ? YPoly{IntPolynomial::constant(1)} : yprimitive(r);
    }
    // b is y-free: primitive parts are coprime in y, so the gcd is the content.
    return YPoly{c};
}

/// Exact division in Z[x][y]; throws if not exact.
YPoly ydivexact(YPoly a, const YPoly& b) {
    ytrim(a);
    if (b.empty())
        throw std::invalid_argument("ydivexact: division by zero");
    if (a.empty())
        return a;
    if (ydeg(a) < ydeg(b))
        throw std::invalid_argument("ydivexact: not divisible");
    YPoly q(size_t(ydeg(a) - ydeg(b)) + 1);
    const IntPolynomial& lb = b.back();
    while (!a.empty() && ydeg(a) >= ydeg(b)) {
        int e = ydeg(a) - ydeg(b);
        IntPolynomial t = a.back().divexact(lb);
        q[size_t(e)] = t;
        a = ysub(a, yshift_mul(b, t, e));
        if (!a.empty() && ydeg(a) >= ydeg(b) + e)
            throw std::logic_error("ydivexact: leading term did not cancel");
    }
    if (!a.empty())
        throw std::invalid_argument("ydivexact: nonzero remainder");
    ytrim(q);
    return q;
}

/// The squarefree part f / gcd(f, f_x, f_y); same zero set as f. Expects f
/// with integer content 1 and nonconstant.
YPoly ysquarefree(const YPoly& f) {
    YPoly gx = yderiv_x(f), gy = yderiv_y(f);
    YPoly g = ygcd(ygcd(f, gx), gy);
    if (ydeg(g) == 0 && g[0].degree() == 0)
        return f;
    return ydivexact(f, g);
}

/// Univariate slice f(x0, y) as a polynomial in y.
IntPolynomial yeval_x(const YPoly& f, const Int& x) {
    std::vector<Int> c;
    c.reserve(f.size());
    for (const auto& b : f)
        c.push_back(b.eval(x));
    return IntPolynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Resultant in y with polynomial entries (Sylvester + fraction-free Bareiss).
// ---------------------------------------------------------------------------

IntPolynomial poly_matrix_det(std::vector<std::vector<IntPolynomial>> m) {
    int n = int(m.size());
    int sign = 1;
    IntPolynomial prev = IntPolynomial::constant(1);
    for (int r = 0; r + 1 < n; ++r) {
        int piv = -1;
        for (int i = r; i < n && piv < 0; ++i)
            if (!m[size_t(i)][size_t(r)].is_zero())
                piv = i;
        if (piv < 0)
            return IntPolynomial();
        if (piv != r) {
            std::swap(m[size_t(piv)], m[size_t(r)]);
            sign = -sign;
        }
        for (int i = r + 1; i < n; ++i) {
            for (int j = r + 1; j < n; ++j) {
                IntPolynomial t =
                    m[size_t(r)][size_t(r)] * m[size_t(i)][size_t(j)] -
                    m[size_t(i)][size_t(r)] * m[size_t(r)][size_t(j)];
                m[size_t(i)][size_t(j)] = t.is_zero() ? t : t.divexact(prev);
            }
            m[size_t(i)][size_t(r)] = IntPolynomial();
        }
        prev = m[size_t(r)][size_t(r)];
    }
    IntPolynomial d = m[size_t(n - 1)][size_t(n - 1)];
    return sign < 0 ? d * Int(-1) : d;
}

/// Res_y(f, g) as a polynomial in x; zero iff f and g share a factor of
/// positive y-degree (or a common x-only factor).
IntPolynomial resultant_y(const YPoly& f, const YPoly& g) {
    int m = ydeg(f), n = ydeg(g);
    if (m < 0 || n < 0)
        throw std::invalid_argument("resultant_y: zero polynomial");
    auto power = [](const IntPolynomial& p, int e) {
        IntPolynomial r = IntPolynomial::constant(1);
        for (int i = 0; i < e; ++i)
            r = r * p;
        return r;
    };
    if (n == 0)
        return power(g[0], m);
    if (m == 0)
        return power(f[0], n);
    int s = m + n;
    std::vector<std::vector<IntPolynomial>> syl(static_cast<size_t>(s),
                                                std::vector<IntPolynomial>(static_cast<size_t>(s)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j)
            syl[size_t(i)][size_t(i + j)] = f[size_t(m - j)];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j)
            syl[size_t(n + i)][size_t(i + j)] = g[size_t(n - j)];
    return poly_matrix_det(std::move(syl));
}

// ---------------------------------------------------------------------------
// Univariate root finding modulo a word-sized prime.
// ---------------------------------------------------------------------------

U64 mulmod(U64 a, U64 b, U64 m) { return U64((unsigned __int128)(a)*b % m); }
U64 addmod(U64 a, U64 b, U64 m) { return (a + b) % m; }
U64 submod(U64 a, U64 b, U64 m) { return (a + m - b) % m; }

U64 powmod_u64(U64 a, U64 e, U64 m) {
    U64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Dense polynomial over F_m, constant term first.
using MPoly = std::vector<U64>;

void mtrim(MPoly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

MPoly mmul(const MPoly& a, const MPoly& b, U64 m) {
    if (a.empty() || b.empty())
        return {};
    MPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], m), m);
    }
    mtrim(r);
    return r;
}

/// Remainder of a modulo the monic polynomial f.
MPoly mrem(MPoly a, const MPoly& f, U64 m) {
    mtrim(a);
    while (a.size() >= f.size()) {
        U64 c = a.back();
        size_t shift = a.size() - f.size();
        if (c != 0)
            for (size_t i = 0; i < f.size(); ++i)
                a[shift + i] = submod(a[shift + i], mulmod(c, f[i], m), m);
        a.pop_back();
        mtrim(a);
    }
    return a;
}

MPoly mmonic(MPoly a, U64 m) {
    mtrim(a);
    if (a.empty())
        return a;
    U64 inv = powmod_u64(a.back(), m - 2, m);
    for (auto& c : a)
        c = mulmod(c, inv, m);
    return a;
}

MPoly mgcd(MPoly a, MPoly b, U64 m) {
    a = mmonic(std::move(a), m);
    b = mmonic(std::move(b), m);
    while (!b.empty()) {
        MPoly r = mrem(a, b, m);
        a = std::move(b);
        b = mmonic(std::move(r), m);
    }
    return a;
}

/// base^e modulo the monic polynomial f.
MPoly mpowmod(MPoly base, U64 e, const MPoly& f, U64 m) {
    MPoly r{1 % m};
    base = mrem(std::move(base), f, m);
    while (e) {
        if (e & 1)
            r = mrem(mmul(r, base, m), f, m);
        base = mrem(mmul(base, base, m), f, m);
        e >>= 1;
    }
    return r;
}

MPoly mquot(MPoly a, const MPoly& f, U64 m) {
    // Quotient of a by the monic f (exact division callers only).
    mtrim(a);
    if (a.size() < f.size())
        return {};
    MPoly q(a.size() - f.size() + 1, 0);
    while (a.size() >= f.size()) {
        U64 c = a.back();
        size_t shift = a.size() - f.size();
        q[shift] = c;
        if (c != 0)
            for (size_t i = 0; i < f.size(); ++i)
                a[shift + i] = submod(a[shift + i], mulmod(c, f[i], m), m);
        a.pop_back();
        mtrim(a);
    }
    mtrim(q);
    return q;
}

/// Simple deterministic 64-bit generator (splitmix64) for the equal-degree
/// splitting; the seed is derived from the residue class so the output does
/// not depend on thread scheduling.
struct SplitMix {
    U64 s;
    U64 next() {
        s += 0x9e3779b97f4a7c15ULL;
        U64 z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

void msplit_roots(const MPoly& h, U64 m, SplitMix& rng, std::vector<U64>& out) {
    // h monic, a product of distinct linear factors.
    if (h.size() <= 1)
        return;
    if (h.size() == 2) {
        out.push_back(submod(0, h[0], m));
        return;
    }
    for (int attempt = 0; attempt < 1000; ++attempt) {
        U64 a = rng.next() % m;
        MPoly w = mpowmod(MPoly{a, 1}, (m - 1) / 2, h, m);
        if (w.empty())
            w = MPoly{0};
        w[0] = submod(w[0], 1, m);
        MPoly d = mgcd(w, h, m);
        if (d.size() > 1 && d.size() < h.size()) {
            MPoly q = mquot(h, d, m);
            msplit_roots(d, m, rng, out);
            msplit_roots(q, m, rng, out);
            return;
        }
    }
    if (m <= 2000000) { // tiny modulus: scan directly
        for (U64 r = 0; r < m; ++r) {
            U64 v = 0;
            for (size_t i = h.size(); i-- > 0;)
                v = addmod(mulmod(v, r, m), h[i], m);
            if (v == 0)
                out.push_back(r);
        }
        return;
    }
    throw std::runtime_error("msplit_roots: equal-degree splitting failed");
}

/// All roots of f in F_m (m an odd prime), ascending.
std::vector<U64> roots_mod(const MPoly& f0, U64 m, U64 seed) {
    MPoly f = f0;
    mtrim(f);
    std::vector<U64> out;
    if (f.size() <= 1)
        return out;
    f = mmonic(std::move(f), m);
    MPoly xp = mpowmod(MPoly{0, 1}, m, f, m);
    if (xp.size() < 2)
        xp.resize(2, 0);
    xp[1] = submod(xp[1], 1, m);
    MPoly h = mgcd(xp, f, m);
    SplitMix rng{seed * 0x9e3779b97f4a7c15ULL + 0x1234567};
    msplit_roots(h, m, rng, out);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Truncated power series over Z/ell^K: elements of (Z/ell^K)[t]/(t^len).
// All tracked series have t^j coefficients divisible by ell^j, which makes
// the truncation at t^K exact modulo ell^K.
// ---------------------------------------------------------------------------

struct SerCtx {
    long K = 0;
    Int M; ///< ell^K
};

using Ser = std::vector<Int>; ///< t-coefficients in [0, M)

Int smod(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0)
        r += m;
    return r;
}

Ser ser_const(const Int& v, const SerCtx& c) { return Ser{smod(v, c.M)}; }

void ser_truncate(Ser& a, long len) {
    if (long(a.size()) > len)
        a.resize(size_t(len));
}

Ser ser_add(const Ser& a, const Ser& b, const SerCtx& c, long len) {
    Ser r(std::min(size_t(len), std::max(a.size(), b.size())), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        Int v = (i < a.size() ? a[i] : Int(0)) + (i < b.size() ? b[i] : Int(0));
        r[i] = smod(v, c.M);
    }
    return r;
}

Ser ser_sub(const Ser& a, const Ser& b, const SerCtx& c, long len) {
    Ser r(std::min(size_t(len), std::max(a.size(), b.size())), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        Int v = (i < a.size() ? a[i] : Int(0)) - (i < b.size() ? b[i] : Int(0));
        r[i] = smod(v, c.M);
    }
    return r;
}

Ser ser_mul(const Ser& a, const Ser& b, const SerCtx& c, long len) {
    if (a.empty() || b.empty())
        return {};
    size_t n = std::min(size_t(len), a.size() + b.size() - 1);
    Ser r(n, 0);
    Int acc;
    for (size_t k = 0; k < n; ++k) {
        acc = 0;
        size_t lo = k >= b.size() ? k - b.size() + 1 : 0;
        for (size_t i = lo; i < a.size() && i <= k; ++i)
            acc += a[i] * b[k - i];
        r[k] = smod(acc, c.M);
    }
    return r;
}

bool ser_is_zero(const Ser& a) {
    for (const auto& v : a)
        if (v != 0)
            return false;
    return true;
}

/// Inverse of a unit series (constant term prime to ell).
Ser ser_inv(const Ser& u, const SerCtx& c, long len) {
    Int v0;
    if (mpz_invert(v0.get_mpz_t(), u[0].get_mpz_t(), c.M.get_mpz_t()) == 0)
        throw std::logic_error("ser_inv: non-unit constant term");
    Ser v{v0};
    long cur = 1;
    while (cur < len) {
        cur = std::min(2 * cur, len);
        Ser uv = ser_mul(u, v, c, cur);
        Ser two{smod(Int(2), c.M)};
        v = ser_mul(v, ser_sub(two, uv, c, cur), c, cur);
    }
    return v;
}

/// f(X(t), Y(t)) for a bivariate f with integer coefficients.
Ser ser_eval_curve(const YPoly& f, const Ser& x, const Ser& y, const SerCtx& c, long len) {
    Ser acc;
    for (size_t b = f.size(); b-- > 0;) {
        acc = ser_mul(acc, y, c, len);
        // add f[b](x)
        const auto& coeffs = f[b].coeffs();
        Ser cb;
        for (size_t a = coeffs.size(); a-- > 0;) {
            cb = ser_mul(cb, x, c, len);
            if (cb.empty())
                cb = Ser{Int(0)};
            cb[0] = smod(cb[0] + coeffs[a], c.M);
        }
        acc = ser_add(acc, cb, c, len);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Determinant method internals.
// ---------------------------------------------------------------------------

struct Monomial {
    int a, b;
};

struct BranchContext {
    const YPoly* fsq;
    const YPoly* fyy; ///< d fsq / dy
    const YPoly* txp; ///< fsq with the roles of x and y swapped
    long ell;
    Int bx, by;
    Int bmax;
};

/// Hensel expansion of the branch through (x0, y0): the series psi(t) with
/// f(x0 + ell t, psi(t)) == 0 mod (ell^K, t^K). Returns false when Newton
/// iteration fails to converge (it cannot for a smooth branch, but the guard
/// keeps the fallback path safe).
bool branch_series(const BranchContext& bc, long x0, long y0, const SerCtx& c, Ser& psi) {
    Ser x{smod(Int(x0), c.M), smod(Int(bc.ell), c.M)};
    psi = ser_const(Int(y0), c);
    long len = 2;
    for (int iter = 0; iter < 200; ++iter) {
        long cur = std::min(len, c.K);
        Ser r = ser_eval_curve(*bc.fsq, x, psi, c, cur);
        if (ser_is_zero(r)) {
            if (cur >= c.K)
                return true;
            len = std::min(2 * len, c.K);
            continue;
        }
        Ser d = ser_eval_curve(*bc.fyy, x, psi, c, cur);
        if (d.empty() || gcd(d[0], c.M) != 1)
            return false;
        Ser di = ser_inv(d, c, cur);
        psi = ser_sub(psi, ser_mul(r, di, c, cur), c, cur);
        len = std::min(2 * len, c.K);
    }
    return false;
}

/// One smooth residue class: builds the interpolation lattice along the
/// branch, extracts a short auxiliary polynomial with a height certificate,
/// and recovers the class points by resultant root extraction. Returns
/// std::nullopt when no certificate is found (callers sweep the class).
std::optional<std::vector<Point>> process_branch(const BranchContext& bc, long x0, long y0,
                                                 int dprime, AuxPolynomial* aux_out) {
    const YPoly& fsq = *bc.fsq;
    int dy = ydeg(fsq);
    std::vector<Monomial> mons;
    for (int b = 0; b < dy; ++b)
        for (int a = 0; a + b <= dprime; ++a)
            mons.push_back({a, b});
    int nmon = int(mons.size());
    if (nmon < 2)
        return std::nullopt;

    long dd = long(dprime) * (dprime + 3) / 2;
    double lb = std::log(2.0 * bc.bmax.get_d() + 1.0);
    long K = long(std::ceil(double(dd) * lb / std::log(double(bc.ell)))) + 2;
    K = std::max(K, 3L);
    SerCtx c;
    c.K = K;
    mpz_ui_pow_ui(c.M.get_mpz_t(), ulong(bc.ell), ulong(K));

    Ser psi;
    if (!branch_series(bc, x0, y0, c, psi))
        return std::nullopt;
    Ser x{smod(Int(x0), c.M), smod(Int(bc.ell), c.M)};

    // Monomial series x^a psi^b, then the K x nmon condition matrix of
    // t-coefficients mod ell^K.
    std::vector<Ser> xpow(size_t(dprime) + 1), ypow(static_cast<size_t>(dy));
    xpow[0] = ser_const(Int(1), c);
    for (int a = 1; a <= dprime; ++a)
        xpow[size_t(a)] = ser_mul(xpow[size_t(a - 1)], x, c, K);
    ypow[0] = ser_const(Int(1), c);
    for (int b = 1; b < dy; ++b)
        ypow[size_t(b)] = ser_mul(ypow[size_t(b - 1)], psi, c, K);

    IntMatrix t(int(K), nmon);
    for (int j = 0; j < nmon; ++j) {
        Ser row = ser_mul(xpow[size_t(mons[size_t(j)].a)], ypow[size_t(mons[size_t(j)].b)], c, K);
        for (long i = 0; i < K && i < long(row.size()); ++i)
            t.at(int(i), j) = row[size_t(i)];
    }

    // Monomial weights from the box: |x^a y^b| <= bx^a by^b. The kernel is
    // reduced in the weighted metric so the short vectors respect the box.
    std::vector<Int> weight(static_cast<size_t>(nmon));
    for (int j = 0; j < nmon; ++j) {
        Int w = 1;
        for (int a = 0; a < mons[size_t(j)].a; ++a)
            w *= std::max(bc.bx, Int(1));
        for (int b = 0; b < mons[size_t(j)].b; ++b)
            w *= std::max(bc.by, Int(1));
        weight[size_t(j)] = w;
    }

    IntMatrix ker = kernel_mod(t, c.M);
    IntMatrix wker = ker;
    for (int i = 0; i < wker.rows(); ++i)
        for (int j = 0; j < wker.cols(); ++j)
            wker.at(i, j) *= weight[size_t(i)];
    IntMatrix gram = wker.transpose() * wker;
    IntMatrix u = lll_transform(gram);
    IntMatrix red = ker * u;

    // Columns ordered by weighted norm; take the first passing the height
    // certificate.
    std::vector<std::pair<Int, int>> order;
    for (int j = 0; j < red.cols(); ++j) {
        Int norm = 0;
        for (int i = 0; i < red.rows(); ++i) {
            Int v = red.at(i, j) * weight[size_t(i)];
            norm += v * v;
        }
        order.emplace_back(norm, j);
    }
    std::sort(order.begin(), order.end());

    for (const auto& [norm, col] : order) {
        if (norm == 0)
            continue;
        Int height = 0;
        for (int j = 0; j < nmon; ++j)
            height += abs(red.at(j, col)) * weight[size_t(j)];
        if (height >= c.M)
            continue;

        YPoly g(static_cast<size_t>(dy));
        for (int j = 0; j < nmon; ++j) {
            const auto& mo = mons[size_t(j)];
            std::vector<Int> coeffs(size_t(mo.a) + 1, Int(0));
            coeffs[size_t(mo.a)] = red.at(j, col);
            g[size_t(mo.b)] = g[size_t(mo.b)] + IntPolynomial(std::move(coeffs));
        }
        ytrim(g);
        if (g.empty())
            continue;

        IntPolynomial r = resultant_y(fsq, g);
        if (r.is_zero())
            continue; // common component; try the next short vector

        std::vector<Point> pts;
        bool ok = true;
        for (const Int& xs : integer_roots(r, bc.bx)) {
            IntPolynomial slice = yeval_x(fsq, xs);
            if (slice.is_zero()) {
                ok = false; // x-only factor should have been removed
                break;
            }
            for (const Int& ys : integer_roots(slice, bc.by))
                pts.emplace_back(xs, ys);
        }
        if (!ok)
            return std::nullopt;
        if (aux_out) {
            aux_out->x0 = x0;
            aux_out->y0 = y0;
            aux_out->coeffs.assign(size_t(dprime) + 1,
                                   std::vector<Int>(size_t(dy), Int(0)));
            for (int j = 0; j < nmon; ++j)
                aux_out->coeffs[size_t(mons[size_t(j)].a)][size_t(mons[size_t(j)].b)] =
                    red.at(j, col);
        }
        return pts;
    }
    return std::nullopt;
}

/// Smallest representative of the class r mod ell that is >= -bound.
Int class_start(long r, long ell, const Int& bound) {
    Int rr = smod(Int(r), Int(ell));
    Int lo = -bound;
    return lo + smod(rr - lo, Int(ell));
}

/// Direct sweep of one residue class (x ≡ x0, y ≡ y0 mod ell): iterates the
/// narrower direction and solves each slice exactly in the other variable.
void sweep_class(const BranchContext& bc, long x0, long y0, std::vector<Point>& out) {
    long ell = bc.ell;
    if (bc.bx <= bc.by) {
        for (Int x = class_start(x0, ell, bc.bx); x <= bc.bx; x += ell) {
            IntPolynomial slice = yeval_x(*bc.fsq, x);
            if (slice.is_zero()) {
                for (Int y = class_start(y0, ell, bc.by); y <= bc.by; y += ell)
                    out.emplace_back(x, y);
                continue;
            }
            for (const Int& ys : integer_roots(slice, bc.by))
                if ((ys - y0) % ell == 0)
                    out.emplace_back(x, ys);
        }
    } else {
        for (Int y = class_start(y0, ell, bc.by); y <= bc.by; y += ell) {
            IntPolynomial slice = yeval_x(*bc.txp, y);
            if (slice.is_zero()) {
                for (Int x = class_start(x0, ell, bc.bx); x <= bc.bx; x += ell)
                    out.emplace_back(x, y);
                continue;
            }
            for (const Int& xs : integer_roots(slice, bc.bx))
                if ((xs - x0) % ell == 0)
                    out.emplace_back(xs, y);
        }
    }
}

/// Sweep of a whole column class x ≡ x0 mod ell (slice vanished mod ell).
void sweep_column(const BranchContext& bc, long x0, std::vector<Point>& out) {
    long ell = bc.ell;
    if (bc.bx / ell <= 2 * bc.by + 1) {
        for (Int x = class_start(x0, ell, bc.bx); x <= bc.bx; x += ell) {
            IntPolynomial slice = yeval_x(*bc.fsq, x);
            if (slice.is_zero()) {
                for (Int y = -bc.by; y <= bc.by; ++y)
                    out.emplace_back(x, y);
                continue;
            }
            for (const Int& ys : integer_roots(slice, bc.by))
                out.emplace_back(x, ys);
        }
    } else {
        for (Int y = -bc.by; y <= bc.by; ++y) {
            IntPolynomial slice = yeval_x(*bc.txp, y);
            if (slice.is_zero()) {
                for (Int x = class_start(x0, ell, bc.bx); x <= bc.bx; x += ell)
                    out.emplace_back(x, y);
                continue;
            }
            for (const Int& xs : integer_roots(slice, bc.bx))
                if ((xs - x0) % ell == 0)
                    out.emplace_back(xs, y);
        }
    }
}

void sort_unique(std::vector<Point>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

} // namespace

// ---------------------------------------------------------------------------
// Public interface.
// ---------------------------------------------------------------------------

PlanarCurve planar_curve(const std::vector<std::vector<Int>>& coeff, const Int& bx,
                         const Int& by) {
    if (bx < 0 || by < 0)
        throw std::invalid_argument("planar_curve: negative box bound");
    size_t maxb = 0;
    for (const auto& row : coeff)
        maxb = std::max(maxb, row.size());
    YPoly ys(maxb);
    for (size_t b = 0; b < maxb; ++b) {
        std::vector<Int> c(coeff.size(), Int(0));
        for (size_t a = 0; a < coeff.size(); ++a)
            if (b < coeff[a].size())
                c[a] = coeff[a][b];
        ys[b] = IntPolynomial(std::move(c));
    }
    ytrim(ys);
    if (ys.empty())
        throw std::invalid_argument("planar_curve: zero polynomial");
    return PlanarCurve{std::move(ys), bx, by};
}

Int curve_eval(const PlanarCurve& c, const Int& x, const Int& y) {
    return yeval_x(c.ys, x).eval(y);
}

int curve_degree(const PlanarCurve& c) { return ytotal_degree(c.ys); }

int curve_degree_y(const PlanarCurve& c) {
    YPoly f = c.ys;
    ytrim(f);
    return ydeg(f);
}

std::vector<Int> integer_roots(const IntPolynomial& r0, const Int& bound) {
    if (r0.is_zero())
        throw std::invalid_argument("integer_roots: zero polynomial");
    std::vector<Int> out;
    if (bound < 0)
        return out;
    if (bound > Int("100000000000000000"))
        throw std::length_error("integer_roots: bound too large");
    IntPolynomial r = r0.primitive_part();
    if (r.degree() >= 1 && r.coeff(0) == 0)
        out.push_back(0);
    while (r.degree() >= 1 && r.coeff(0) == 0)
        r = r.divexact(IntPolynomial::monomial(Int(1), 1));
    if (r.degree() >= 1) {
        Int p = 2 * bound + 2;
        if (p < 101)
            p = 101;
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        while (r.leading() % p == 0)
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        U64 m = p.get_ui();
        MPoly f(r.coeffs().size());
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = mpz_fdiv_ui(r.coeffs()[i].get_mpz_t(), m);
        for (U64 rho : roots_mod(f, m, 1)) {
            Int z = (rho <= m / 2) ? Int(rho) : Int(rho) - Int(m);
            if (abs(z) <= bound && r.eval(z) == 0)
                out.push_back(z);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Point> count_points_bruteforce(const PlanarCurve& curve, long budget) {
    YPoly f = curve.ys;
    ytrim(f);
    if (f.empty())
        throw std::invalid_argument("count_points_bruteforce: zero polynomial");
    const Int &bx = curve.bx, &by = curve.by;
    Int volume = (2 * bx + 1) * (2 * by + 1);
    if (volume > budget)
        throw std::length_error("count_points_bruteforce: box volume exceeds budget");

    std::vector<Point> pts;
    int dy = ydeg(f);
    if (dy == 0) {
        // f depends on x alone: vertical lines through its integer roots.
        for (const Int& xs : integer_roots(f[0], bx))
            for (Int y = -by; y <= by; ++y)
                pts.emplace_back(xs, y);
        sort_unique(pts);
        return pts;
    }

    // Special shape s x^2 + G(y): iterate y and test s x^2 = -G(y) directly.
    bool special = f[0].degree() == 2 && f[0].coeff(1) == 0;
    for (int b = 1; b <= dy && special; ++b)
        special = f[size_t(b)].degree() <= 0;
    if (special) {
        Int s = f[0].coeff(2);
        std::vector<Int> gc(size_t(dy) + 1, Int(0));
        gc[0] = f[0].coeff(0);
        for (int b = 1; b <= dy; ++b)
            gc[size_t(b)] = f[size_t(b)].coeff(0);
        IntPolynomial g = IntPolynomial(std::move(gc));
        // Solve s x^2 = -G(y); flip both sides when s < 0.
        if (s < 0) {
            s = -s;
            g = g * Int(-1);
        }
        for (Int y = -by; y <= by; ++y) {
            Int target = -g.eval(y);
            if (target < 0)
                continue;
            auto x0 = perfect_square_part(target, s);
            if (!x0 || *x0 > bx)
                continue;
            pts.emplace_back(*x0, y);
            if (*x0 != 0)
                pts.emplace_back(-*x0, y);
        }
        sort_unique(pts);
        return pts;
    }

    // General scan over x with exact univariate root extraction per slice.
    Int width_i = 2 * bx + 1;
    long width = width_i.get_si();
    long chunk = 512;
    long nchunks = (width + chunk - 1) / chunk;
    std::vector<std::vector<Point>> parts(static_cast<size_t>(nchunks));
    parallel_for(nchunks, [&](long ci) {
        Int x = -bx + ci * chunk;
        Int hi = x + chunk;
        if (hi > bx + 1)
            hi = bx + 1;
        auto& local = parts[size_t(ci)];
        for (; x < hi; ++x) {
            IntPolynomial slice = yeval_x(f, x);
            if (slice.is_zero()) {
                for (Int y = -by; y <= by; ++y)
                    local.emplace_back(x, y);
                continue;
            }
            for (const Int& ys : integer_roots(slice, by))
                local.emplace_back(x, ys);
        }
    });
    for (auto& part : parts)
        pts.insert(pts.end(), part.begin(), part.end());
    sort_unique(pts);
    return pts;
}

std::vector<Point> count_points_detmethod(const PlanarCurve& curve, const Int& ell,
                                          DetMethodStats* stats) {
    if (ell < 3 || ell % 2 == 0 ||
        mpz_probab_prime_p(ell.get_mpz_t(), 30) == 0)
        throw std::invalid_argument("count_points_detmethod: ell must be an odd prime");
    if (ell > 1000000)
        throw std::invalid_argument("count_points_detmethod: ell too large");

    YPoly f = curve.ys;
    ytrim(f);
    if (f.empty())
        throw std::invalid_argument("count_points_detmethod: zero polynomial");
    const Int &bx = curve.bx, &by = curve.by;

    // Leading-form content check: the prime must not kill the top form.
    int d0 = ytotal_degree(f);
    Int lead_content = 0;
    for (int b = 0; b <= ydeg(f); ++b)
        if (d0 - b >= 0)
            lead_content = gcd(lead_content, f[size_t(b)].coeff(d0 - b));
    if (lead_content % ell == 0)
        throw std::invalid_argument(
            "count_points_detmethod: ell divides the leading form content; "
            "retry with a larger auxiliary prime");

    Int icont = yint_content(f);
    if (icont > 1)
        for (auto& c : f)
            c = c.divexact(IntPolynomial::constant(icont));

    std::vector<Point> pts;
    YPoly fsq = (d0 == 0) ? f : ysquarefree(f);

    // Split off factors depending on x alone: their roots give vertical lines.
    IntPolynomial contx = ycontent(fsq);
    if (contx.degree() > 0) {
        for (const Int& xs : integer_roots(contx, bx))
            for (Int y = -by; y <= by; ++y)
                pts.emplace_back(xs, y);
        fsq = ydiv_coeff(fsq, contx);
    }

    int dy = ydeg(fsq);
    if (dy <= 0 || ytotal_degree(fsq) <= 0) {
        sort_unique(pts);
        return pts;
    }

    int dtot = ytotal_degree(fsq);
    YPoly fy = yderiv_y(fsq);
    long el = ell.get_si();

    // fsq with x and y swapped, for sweeps that iterate over y.
    int dx = 0;
    for (const auto& cb : fsq)
        dx = std::max(dx, cb.degree());
    YPoly txp(size_t(dx) + 1);
    for (int a = 0; a <= dx; ++a) {
        std::vector<Int> cc(size_t(dy) + 1, Int(0));
        for (int b = 0; b <= dy; ++b)
            cc[size_t(b)] = fsq[size_t(b)].coeff(a);
        txp[size_t(a)] = IntPolynomial(std::move(cc));
    }
    ytrim(txp);

    // Per-class slice coefficients mod ell, for fast root finding.
    std::vector<std::vector<U64>> ftab(size_t(dy) + 1), fytab(size_t(ydeg(fy)) + 1);
    U64 em = U64(el);
    for (int b = 0; b <= dy; ++b) {
        const auto& c = fsq[size_t(b)].coeffs();
        for (const auto& v : c)
            ftab[size_t(b)].push_back(mpz_fdiv_ui(v.get_mpz_t(), em));
    }
    for (int b = 0; b <= ydeg(fy); ++b) {
        const auto& c = fy[size_t(b)].coeffs();
        for (const auto& v : c)
            fytab[size_t(b)].push_back(mpz_fdiv_ui(v.get_mpz_t(), em));
    }
    auto horner = [em](const std::vector<U64>& c, U64 x) {
        U64 v = 0;
        for (size_t i = c.size(); i-- > 0;)
            v = addmod(mulmod(v, x, em), c[i], em);
        return v;
    };

    BranchContext bc;
    bc.fsq = &fsq;
    bc.fyy = &fy;
    bc.txp = &txp;
    bc.ell = el;
    bc.bx = bx;
    bc.by = by;
    bc.bmax = std::max(bx, by);

    bool narrow = Int(el) > 2 * bx + 1; // classes may miss the box entirely
    std::vector<std::vector<Point>> parts(static_cast<size_t>(el));
    std::vector<DetMethodStats> stat_parts(static_cast<size_t>(el));
    parallel_for(el, [&](long x0) {
        if (narrow) {
            Int rep = class_start(x0, el, bx);
            if (rep > bx)
                return;
        }
        auto& local = parts[size_t(x0)];
        auto& st = stat_parts[size_t(x0)];
        U64 xm = U64(smod(Int(x0), Int(el)).get_ui());
        MPoly slice(size_t(dy) + 1);
        bool allzero = true;
        for (int b = 0; b <= dy; ++b) {
            slice[size_t(b)] = horner(ftab[size_t(b)], xm);
            allzero = allzero && slice[size_t(b)] == 0;
        }
        if (allzero) {
            st.fallbacks++;
            sweep_column(bc, x0, local);
            return;
        }
        for (U64 y0 : roots_mod(slice, em, U64(x0) + 1)) {
            if (Int(el) > 2 * by + 1 && class_start(long(y0), el, by) > by)
                continue; // the y-residue class misses the box
            U64 fyv = 0;
            for (size_t b = fytab.size(); b-- > 0;)
                fyv = addmod(mulmod(fyv, y0, em), horner(fytab[b], xm), em);
            if (fyv == 0) {
                st.fallbacks++;
                sweep_class(bc, x0, long(y0), local);
                continue;
            }
            st.branches++;
            std::optional<std::vector<Point>> got;
            AuxPolynomial aux;
            for (int dp = dtot; dp <= dtot + 1 && !got; ++dp)
                got = process_branch(bc, x0, long(y0), dp, &aux);
            if (got) {
                st.certified++;
                st.aux.push_back(std::move(aux));
                local.insert(local.end(), got->begin(), got->end());
            } else {
                st.fallbacks++;
                sweep_class(bc, x0, long(y0), local);
            }
        }
    });
    for (auto& part : parts)
        pts.insert(pts.end(), part.begin(), part.end());
    if (stats) {
        for (auto& st : stat_parts) {
            stats->branches += st.branches;
            stats->certified += st.certified;
            stats->fallbacks += st.fallbacks;
            for (auto& a : st.aux)
                stats->aux.push_back(std::move(a));
        }
    }
    sort_unique(pts);
    return pts;
}

FiberCount count_fiber_curve(const FiberCurve& fc, const Int& b1, long brute_limit) {
    if (b1 < 0)
        throw std::invalid_argument("count_fiber_curve: negative range");
    FiberCount out;
    out.sqrt_b1 = std::sqrt(b1.get_d());
    out.degenerate = fc.degenerate;
    if (fc.p.is_zero()) {
        // det2 x0^2 = 0: only x0 = 0, for every z1.
        Int width = 2 * b1 + 1;
        out.count = width.get_si();
        return out;
    }
    if (b1 <= brute_limit || (fc.degenerate && fc.c > 2000000)) {
        if (b1 > 50000000)
            throw std::length_error("count_fiber_curve: range too large for direct scan");
        for (Int z = -b1; z <= b1; ++z) {
            Int v = fc.p.eval(z);
            if (v < 0)
                continue;
            if (perfect_square_part(v, fc.c))
                out.count++;
        }
        return out;
    }
    if (fc.degenerate) {
        // c P = R^2, so solutions are exactly the z with c | R(z): count by
        // residue class of z mod c.
        auto r = poly_square_root(fc.p * fc.c);
        if (!r)
            throw std::logic_error("count_fiber_curve: degenerate curve without square root");
        long c = fc.c.get_si();
        long total = 0;
        for (long rem = 0; rem < c; ++rem) {
            if (r->eval(rem) % c != 0)
                continue;
            // number of z in [-b1, b1] with z ≡ rem mod c
            Int first = class_start(rem, c, b1);
            if (first > b1)
                continue;
            Int cnt = (b1 - first) / c + 1;
            total += cnt.get_si();
        }
        out.count = total;
        return out;
    }
    // Large non-degenerate range: route through the determinant method on
    // det2 x^2 - P(z) with z as the y-variable.
    Int pmax = 0;
    for (int i = 0; i <= fc.p.degree(); ++i) {
        Int term = abs(fc.p.coeff(i));
        for (int k = 0; k < i; ++k)
            term *= b1;
        pmax += term;
    }
    Int bxlim = sqrt(pmax / fc.c) + 1;
    std::vector<std::vector<Int>> coeff(3);
    coeff[0] = fc.p.coeffs();
    for (auto& v : coeff[0])
        v = -v;
    coeff[1] = {Int(0)};
    coeff[2] = {fc.c};
    PlanarCurve curve = planar_curve(coeff, bxlim, b1);
    Int ell = 16 * (sqrt(2 * b1 + 1) + 1);
    mpz_nextprime(ell.get_mpz_t(), ell.get_mpz_t());
    out.used_detmethod = true;
    for (const auto& pt : count_points_detmethod(curve, ell))
        if (pt.first >= 0)
            out.count++;
    return out;
}

} // namespace binq4
