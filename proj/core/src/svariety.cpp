#include "binq4/svariety.hpp"

#include "binq4/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace binq4 {

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int isqrt(const Int& v) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

bool tuple_less(const SnPoint& a, const SnPoint& b) {
    int c = cmp(a.x1, b.x1);
    if (c != 0)
        return c < 0;
    c = cmp(a.x2, b.x2);
    if (c != 0)
        return c < 0;
    c = cmp(a.x3, b.x3);
    if (c != 0)
        return c < 0;
    return cmp(a.x4, b.x4) < 0;
}

/// Square roots mod M as a flat table: roots of r are
/// root_data[root_off[r] .. root_off[r+1]).
struct SqrtTable {
    std::vector<int32_t> off;
    std::vector<int32_t> data;

    explicit SqrtTable(long m) : off(size_t(m) + 1, 0), data(size_t(m)) {
        for (long x = 0; x < m; ++x)
            ++off[size_t(x * x % m) + 1];
        for (long r = 0; r < m; ++r)
            off[size_t(r) + 1] += off[size_t(r)];
        std::vector<int32_t> cursor(off.begin(), off.end() - 1);
        for (long x = 0; x < m; ++x)
            data[size_t(cursor[size_t(x * x % m)]++)] = int32_t(x);
    }
};

long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long ll_sqrt(long v) {
    if (v < 0)
        return -1;
    long r = (long)std::sqrt((double)v);
    while (r > 0 && r * r > v)
        --r;
    while ((r + 1) * (r + 1) <= v)
        ++r;
    return r;
}

struct SnParams {
    long a, b, c, fourD, det2;
    long m;  ///< p^{4n}
    long bigl; ///< floor(sqrt(4ac))
};

/// Checks a fully-determined candidate (X1, X2, X3, X4) and appends the S(n)
/// point when the degree-4 identity has an integer solution x0 >= 0 passing
/// the boundary bullets. All quantities are bounded so that the widest
/// intermediate fits in __int128.
void try_candidate(const SnParams& pp, long x1, long x2, long x3, long x4,
                   std::vector<SnPoint>& out) {
    __int128 w = (__int128)x1 * x4 - (__int128)x2 * x3 - pp.fourD;
    __int128 u = (__int128)pp.c * x1 - (__int128)pp.a * x4;
    __int128 v1 = (__int128)pp.b * x1 - (__int128)pp.a * (x2 + x3);
    __int128 v2 = (__int128)pp.b * x4 - (__int128)pp.c * (x2 + x3);
    __int128 s = w * w - 4 * u * u - 4 * v1 * v2;
    if (s < 0 || s % pp.det2 != 0)
        return;
    // For fourD <= 1e8: s <= (12ac)^2 <= (6 (fourD + b^2))^2 < 2^63.
    long y = (long)(s / pp.det2);
    long x0 = ll_sqrt(y);
    if (x0 < 0 || (__int128)x0 * x0 != y)
        return;
    for (int sign = -1; sign <= 1; sign += 2) {
        if (x1 == sign * 2 * pp.a || x4 == sign * 2 * pp.c)
            if (x0 != 0 || x2 != sign * pp.b || x3 != sign * pp.b)
                return;
    }
    out.push_back(SnPoint{Int(x0), Int(x1), Int(x2), Int(x3), Int(x4)});
}

} // namespace

bool sn_membership(const GramTuple& t, const CorrelationInstance& inst) {
    const Int &a = inst.q.a, &b = inst.q.b, &c = inst.q.c;
    if (t.x0 < 0)
        return false;
    if (inst.quat.det2 * t.x0 * t.x0 != degree4_rhs(inst.q, t))
        return false;
    if (abs(t.x1) > 2 * a || abs(t.x4) > 2 * c)
        return false;
    if (t.x2 * t.x2 > 4 * a * c || t.x3 * t.x3 > 4 * a * c)
        return false;
    Int m = sn_modulus(inst);
    if (mod_pos(t.x1 * t.x4 - t.x2 * t.x3 - inst.q.fourD, m) != 0)
        return false;
    if (mod_pos(c * t.x1 - a * t.x4, m) != 0)
        return false;
    if (mod_pos(c * (t.x2 + t.x3) - b * t.x4, m) != 0)
        return false;
    if (mod_pos(a * (t.x2 + t.x3) - b * t.x1, m) != 0)
        return false;
    for (int sign = -1; sign <= 1; sign += 2) {
        if (t.x1 == sign * 2 * a || t.x4 == sign * 2 * c)
            if (t.x0 != 0 || t.x2 != sign * b || t.x3 != sign * b)
                return false;
    }
    return true;
}

std::vector<SnPoint> enumerate_Sn(const CorrelationInstance& inst, long budget) {
    Int m = sn_modulus(inst);
    if (!m.fits_slong_p() || m.get_si() > 20000000)
        throw std::length_error("enumerate_Sn: modulus exceeds the table budget");
    if (inst.q.fourD > 100000000)
        throw std::length_error("enumerate_Sn: fourD exceeds the 64-bit safe range");
    SnParams pp;
    pp.a = inst.q.a.get_si();
    pp.b = inst.q.b.get_si();
    pp.c = inst.q.c.get_si();
    pp.fourD = inst.q.fourD.get_si();
    pp.det2 = inst.quat.det2.get_si();
    pp.m = m.get_si();
    pp.bigl = ll_sqrt(4 * pp.a * pp.c);

    // Lattice of (X1, u = X2 + X3, X4) satisfying the three linear
    // congruences mod p^{4n}, as a lower-triangular basis.
    IntMatrix t3(3, 3);
    t3.at(0, 0) = pp.c;
    t3.at(0, 2) = -pp.a;
    t3.at(1, 1) = pp.c;
    t3.at(1, 2) = -pp.b;
    t3.at(2, 0) = -pp.b;
    t3.at(2, 1) = pp.a;
    IntMatrix kern = kernel_mod(t3, m);
    IntMatrix lower = hnf(kern.transpose()).h.transpose();
    long bas[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            bas[i][j] = lower.at(i, j).get_si();
    if (bas[0][0] <= 0 || bas[1][1] <= 0 || bas[2][2] <= 0)
        throw std::logic_error("enumerate_Sn: triangular basis is degenerate");

    SqrtTable table(pp.m);

    // Budget check: candidate volume = triples times average v-range.
    {
        double triples = (4.0 * pp.a / bas[0][0] + 1) * (4.0 * pp.bigl / bas[1][1] + 1) *
                         (4.0 * pp.c / bas[2][2] + 1);
        double vper = 2.0 * (2.0 * pp.bigl / pp.m + 1);
        if (triples * vper > double(budget))
            throw std::length_error("enumerate_Sn: enumeration volume exceeds budget");
    }

    long c1_lo = ceil_div(-2 * pp.a, bas[0][0]);
    long c1_hi = floor_div(2 * pp.a, bas[0][0]);
    long chunks = long(c1_hi - c1_lo + 1);
    std::vector<std::vector<SnPoint>> results;
    if (chunks > 0)
        results.resize(size_t(chunks));

    parallel_for(chunks, [&](long chunk) {
        long c1 = c1_lo + chunk;
        std::vector<SnPoint>& out = results[size_t(chunk)];
        long x1 = bas[0][0] * c1;
        long u_base = bas[1][0] * c1;
        long c2_lo = ceil_div(-2 * pp.bigl - u_base, bas[1][1]);
        long c2_hi = floor_div(2 * pp.bigl - u_base, bas[1][1]);
        for (long c2 = c2_lo; c2 <= c2_hi; ++c2) {
            long u = u_base + bas[1][1] * c2;
            long x4_base = bas[2][0] * c1 + bas[2][1] * c2;
            long c3_lo = ceil_div(-2 * pp.c - x4_base, bas[2][2]);
            long c3_hi = floor_div(2 * pp.c - x4_base, bas[2][2]);
            long au = u >= 0 ? u : -u;
            long vmax = 2 * pp.bigl - au;
            for (long c3 = c3_lo; c3 <= c3_hi; ++c3) {
                long x4 = x4_base + bas[2][2] * c3;
                // v = X2 - X3 solves v^2 == u^2 - 4 X1 X4 + 4 fourD mod m,
                // with v == u mod 2 (m odd, so mod 4 comes free from parity).
                __int128 tt = (__int128)u * u - (__int128)4 * x1 * x4 + 4 * pp.fourD;
                long target = (long)(tt % pp.m);
                if (target < 0)
                    target += pp.m;
                for (int32_t k = table.off[size_t(target)]; k < table.off[size_t(target) + 1];
                     ++k) {
                    long rho = table.data[size_t(k)];
                    // Lift to the class mod 2m matching the parity of u.
                    long v0 = ((rho ^ u) & 1) ? rho + pp.m : rho;
                    long step = 2 * pp.m;
                    long start = v0 + step * ceil_div(-vmax - v0, step);
                    for (long v = start; v <= vmax; v += step) {
                        long x2 = (u + v) / 2, x3 = (u - v) / 2;
                        try_candidate(pp, x1, x2, x3, x4, out);
                    }
                }
            }
        }
    });

    std::vector<SnPoint> sn;
    for (auto& part : results)
        for (auto& pt : part)
            sn.push_back(std::move(pt));
    std::sort(sn.begin(), sn.end(), tuple_less);
    // Exact re-verification of every emitted point in arbitrary precision.
    for (const auto& pt : sn)
        if (!sn_membership(pt, inst))
            throw std::logic_error("enumerate_Sn: emitted point fails exact membership");
    return sn;
}

SnStatistics sn_statistics(const CorrelationInstance& inst, const std::vector<SnPoint>& sn) {
    SnStatistics st;
    st.count = long(sn.size());
    auto fib = fibers(inst, sn);
    st.fiber_count = long(fib.size());
    for (const auto& f : fib) {
        ++st.fiber_histogram[long(f.points.size())];
        if (f.removed)
            st.removed_fiber_points += long(f.points.size());
    }
    double d = inst.q.fourD.get_d() / 4.0;
    st.sqrt_d = std::sqrt(d);
    double p12 = std::pow(inst.p.get_d(), 12.0 * double(inst.n));
    st.trivial_bound = d * d / p12;
    st.ratio_sqrt_d = st.sqrt_d > 0 ? double(st.count) / st.sqrt_d : 0.0;
    st.ratio_trivial = st.trivial_bound > 0 ? double(st.count) / st.trivial_bound : 0.0;
    return st;
}

std::vector<FiberData> fibers(const CorrelationInstance& inst, const std::vector<SnPoint>& sn,
                              double delta) {
    Int p2n = xn_modulus(inst);
    std::map<std::array<Int, 4>, std::vector<SnPoint>> classes;
    for (const auto& pt : sn) {
        std::array<Int, 4> w{mod_pos(pt.x1, p2n), mod_pos(pt.x2, p2n), mod_pos(pt.x3, p2n),
                             mod_pos(pt.x4, p2n)};
        classes[w].push_back(pt);
    }
    Int p4n = sn_modulus(inst);
    double d = inst.q.fourD.get_d() / 4.0;
    Int b2_threshold = Int(long(std::floor(std::pow(d, delta))));
    std::vector<FiberData> out;
    for (auto& [w, pts] : classes) {
        FiberData f;
        f.w = w;
        f.lift = {pts.front().x1, pts.front().x2, pts.front().x3, pts.front().x4};
        Int diff = w[1] - w[2];
        if (diff == 0)
            f.nu = 2 * inst.n;
        else {
            Int tmp;
            f.nu = long(mpz_remove(tmp.get_mpz_t(), diff.get_mpz_t(), inst.p.get_mpz_t()));
            f.nu = std::min<long>(f.nu, 2 * inst.n);
        }
        f.removed = f.nu >= 1;
        IntMatrix rows(4, 4);
        // Linearized quadratic congruence: w4 y1 - w3 y2 - w2 y3 + w1 y4.
        rows.at(0, 0) = w[3];
        rows.at(0, 1) = -w[2];
        rows.at(0, 2) = -w[1];
        rows.at(0, 3) = w[0];
        rows.at(1, 0) = inst.q.c;
        rows.at(1, 3) = -inst.q.a;
        rows.at(2, 1) = inst.q.c;
        rows.at(2, 2) = inst.q.c;
        rows.at(2, 3) = -inst.q.b;
        rows.at(3, 0) = -inst.q.b;
        rows.at(3, 1) = inst.q.a;
        rows.at(3, 2) = inst.q.a;
        IntMatrix basis = kernel_mod(rows, p2n);
        f.index = lattice_index(basis);
        f.lambda = make_basis(basis);
        f.reduced = reduce_basis(f.lambda);
        for (int i = 0; i < 4; ++i) {
            Int gii = f.reduced.gram.at(i, i);
            Int q = inst.q.fourD / (p4n * gii);
            Int bi = isqrt(q);
            f.boxes[size_t(i)] = bi < 1 ? Int(1) : bi;
        }
        f.small_b2 = f.boxes[1] <= b2_threshold;
        f.points = std::move(pts);
        out.push_back(std::move(f));
    }
    return out;
}

FiberCurve fiber_curve(const FiberData& f, const Int& z2, const Int& z3, const Int& z4,
                       const CorrelationInstance& inst) {
    for (int i = 1; i < 4; ++i) {
        const Int& z = i == 1 ? z2 : (i == 2 ? z3 : z4);
        if (abs(z) > f.boxes[size_t(i)])
            throw std::invalid_argument("fiber_curve: |z_i| exceeds the box bound");
    }
    Int p2n = xn_modulus(inst);
    std::vector<IntPolynomial> x(4);
    for (int i = 0; i < 4; ++i) {
        Int cst = f.lift[size_t(i)] +
                  p2n * (z2 * f.reduced.vectors.at(i, 1) + z3 * f.reduced.vectors.at(i, 2) +
                         z4 * f.reduced.vectors.at(i, 3));
        Int slope = p2n * f.reduced.vectors.at(i, 0);
        x[size_t(i)] = IntPolynomial({cst, slope});
    }
    const Int &a = inst.q.a, &b = inst.q.b, &c = inst.q.c;
    IntPolynomial w = x[0] * x[3] - x[1] * x[2] - IntPolynomial::constant(inst.q.fourD);
    IntPolynomial u = x[0] * c - x[3] * a;
    IntPolynomial v1 = x[0] * b - (x[1] + x[2]) * a;
    IntPolynomial v2 = x[3] * b - (x[1] + x[2]) * c;
    FiberCurve fc;
    fc.c = inst.quat.det2;
    fc.p = w * w - u * u * Int(4) - v1 * v2 * Int(4);
    fc.degenerate = fc.p.is_zero() || poly_square_root(fc.p * fc.c).has_value();
    return fc;
}

long level_rule(const BinaryForm& q, const Int& p, double delta) {
    double quarter = 0.25 * std::log(q.fourD.get_d() / 4.0);
    double per_level = (2.0 + delta) * std::log(p.get_d());
    long n = long(std::floor(quarter / per_level + 1e-12));
    return n < 1 ? 1 : n;
}

} // namespace binq4
