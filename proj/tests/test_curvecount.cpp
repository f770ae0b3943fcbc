#include "doctest.h"

#include "binq4/curvecount.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace binq4;

namespace {

using Point = std::pair<Int, Int>;

PlanarCurve curve_from(std::initializer_list<std::initializer_list<long>> coeff, long bx,
                       long by) {
    std::vector<std::vector<Int>> c;
    for (const auto& row : coeff)
        c.emplace_back(row.begin(), row.end());
    return planar_curve(c, bx, by);
}

/// Fully independent oracle: direct double scan of the whole box.
std::vector<Point> oracle_points(const PlanarCurve& c) {
    std::vector<Point> pts;
    for (Int x = -c.bx; x <= c.bx; ++x)
        for (Int y = -c.by; y <= c.by; ++y)
            if (curve_eval(c, x, y) == 0)
                pts.emplace_back(x, y);
    return pts;
}

/// Deterministic linear congruential values for random curve generation.
struct Lcg {
    unsigned long long s;
    long next(long lo, long hi) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + long((s >> 33) % (unsigned long long)(hi - lo + 1));
    }
};

} // namespace

TEST_CASE("planar_curve validates input") {
    CHECK_THROWS(curve_from({{0}}, 5, 5));
    CHECK_THROWS(planar_curve({{Int(1)}}, -1, 5));
    PlanarCurve c = curve_from({{1, 2}, {0, 3}}, 4, 4); // 1 + 2y + 3xy
    CHECK(curve_eval(c, 2, 3) == Int(1 + 2 * 3 + 3 * 2 * 3));
    CHECK(curve_degree(c) == 2);
    CHECK(curve_degree_y(c) == 1);
}

TEST_CASE("integer_roots on hand-checked polynomials") {
    // (x - 3)(x + 7)(2x - 1)
    IntPolynomial p = IntPolynomial{-3, 1} * IntPolynomial{7, 1} * IntPolynomial{-1, 2};
    CHECK(integer_roots(p, 10) == std::vector<Int>{Int(-7), Int(3)});
    CHECK(integer_roots(p, 5) == std::vector<Int>{Int(3)});
    CHECK(integer_roots(IntPolynomial{1, 0, 1}, 100).empty()); // x^2 + 1
    CHECK(integer_roots(IntPolynomial{0, 0, 0, 1}, 9) == std::vector<Int>{Int(0)}); // x^3
    // Repeated root: (x - 2)^2
    CHECK(integer_roots(IntPolynomial{4, -4, 1}, 9) == std::vector<Int>{Int(2)});
    // Constant polynomial has no roots; zero polynomial is rejected.
    CHECK(integer_roots(IntPolynomial{7}, 9).empty());
    CHECK_THROWS(integer_roots(IntPolynomial(), 9));
    // Large coefficients around a known root.
    IntPolynomial big = IntPolynomial{-123456789, 1} * IntPolynomial{1, 1000000007};
    CHECK(integer_roots(big, Int("200000000")) == std::vector<Int>{Int(123456789)});
}

TEST_CASE("brute force: Pell curve x^2 - 2y^2 - 1 in the 100-box") {
    // rows are x-degree: coeff[a][b]; the y^2 coefficient sits at [0][2]
    PlanarCurve c = curve_from({{-1, 0, -2}, {0}, {1}}, 100, 100);
    auto pts = count_points_bruteforce(c);
    CHECK(pts.size() == 14);
    std::set<Point> want;
    for (long x : {1, -1})
        want.emplace(x, 0);
    for (long x : {3, -3})
        for (long y : {2, -2})
            want.emplace(x, y);
    for (long x : {17, -17})
        for (long y : {12, -12})
            want.emplace(x, y);
    for (long x : {99, -99})
        for (long y : {70, -70})
            want.emplace(x, y);
    CHECK(std::set<Point>(pts.begin(), pts.end()) == want);
}

TEST_CASE("brute force: reducible curve (x - y)(x + y - 1)") {
    // (x - y)(x + y - 1) = x^2 - x - y^2 + y
    PlanarCurve c = curve_from({{0, 1, -1}, {-1}, {1}}, 5, 5);
    auto pts = count_points_bruteforce(c);
    CHECK(pts == oracle_points(c));
    CHECK(pts.size() == 21); // 11 on y = x, 10 more on x + y = 1
}

TEST_CASE("brute force: special shape x^2 - y^4 - 1 over a large box") {
    PlanarCurve c = curve_from({{-1, 0, 0, 0, -1}, {0}, {1}}, 10000, 10);
    auto pts = count_points_bruteforce(c);
    std::set<Point> want{{Int(1), Int(0)}, {Int(-1), Int(0)}};
    CHECK(std::set<Point>(pts.begin(), pts.end()) == want);
}

TEST_CASE("brute force: empty curve and budget guard") {
    // x^2 + y^2 + 1 has no real points at all
    PlanarCurve c = curve_from({{1, 0, 1}, {0}, {1}}, 50, 50);
    CHECK(count_points_bruteforce(c).empty());
    PlanarCurve big = curve_from({{1, 0, 1}, {0}, {1}}, 1000000, 1000000);
    CHECK_THROWS_AS(count_points_bruteforce(big), std::length_error);
}

TEST_CASE("brute force: x-only polynomial gives vertical lines") {
    // (x - 2)(x + 5) independent of y
    PlanarCurve c = curve_from({{-10}, {3}, {1}}, 6, 3);
    auto pts = count_points_bruteforce(c);
    CHECK(pts.size() == 14); // two lines, 7 points each
    for (const auto& pt : pts)
        CHECK((pt.first == 2 || pt.first == -5));
}

TEST_CASE("determinant method validates the auxiliary prime") {
    PlanarCurve c = curve_from({{-1, 0, -2}, {0}, {1}}, 100, 100);
    CHECK_THROWS_AS(count_points_detmethod(c, 10), std::invalid_argument);
    CHECK_THROWS_AS(count_points_detmethod(c, 2), std::invalid_argument);
    CHECK_THROWS_AS(count_points_detmethod(c, 9), std::invalid_argument);
    // 3x^4 + 3y^4 + 1: the leading form content is divisible by 3.
    PlanarCurve bad = curve_from({{1, 0, 0, 0, 3}, {0}, {0}, {0}, {3}}, 10, 10);
    CHECK_THROWS_AS(count_points_detmethod(bad, 3), std::invalid_argument);
    CHECK_NOTHROW(count_points_detmethod(bad, 101));
}

namespace {

/// Checks that each certified auxiliary polynomial vanishes at every listed
/// point of its residue class mod ell.
void check_aux_vanishing(const DetMethodStats& stats, const std::vector<Point>& pts,
                         long ell) {
    for (const auto& aux : stats.aux) {
        for (const auto& pt : pts) {
            if ((pt.first - aux.x0) % ell != 0 || (pt.second - aux.y0) % ell != 0)
                continue;
            Int v = 0;
            for (size_t a = 0; a < aux.coeffs.size(); ++a)
                for (size_t b = 0; b < aux.coeffs[a].size(); ++b) {
                    Int term = aux.coeffs[a][b];
                    for (size_t k = 0; k < a; ++k)
                        term *= pt.first;
                    for (size_t k = 0; k < b; ++k)
                        term *= pt.second;
                    v += term;
                }
            CHECK(v == 0);
        }
    }
}

} // namespace

TEST_CASE("determinant method agrees on the Pell curve at ell = 101") {
    // A conic never earns a height certificate (the monomial basis excludes
    // y^2), so every class falls back to the exact sweep.
    PlanarCurve c = curve_from({{-1, 0, -2}, {0}, {1}}, 100, 100);
    DetMethodStats stats;
    auto pts = count_points_detmethod(c, 101, &stats);
    auto brute = count_points_bruteforce(c);
    CHECK(pts == brute);
    CHECK(stats.branches + stats.fallbacks > 0);
    check_aux_vanishing(stats, brute, 101);
}

TEST_CASE("determinant method agrees on a reducible conic (fallback heavy)") {
    PlanarCurve c = curve_from({{0, 1, -1}, {-1}, {1}}, 60, 60);
    auto pts = count_points_detmethod(c, 101);
    CHECK(pts == count_points_bruteforce(c));
    CHECK(pts.size() == 121 + 120);
}

TEST_CASE("determinant method handles a non-squarefree input") {
    // (x + y)^2 (x - y) = x^3 + x^2 y - x y^2 - y^3
    PlanarCurve c = curve_from({{0, 0, 0, -1}, {0, 0, -1}, {0, 1}, {1}}, 20, 20);
    CHECK(curve_eval(c, 3, 2) == Int(25 * 1));
    auto pts = count_points_detmethod(c, 101);
    CHECK(pts == count_points_bruteforce(c));
    CHECK(pts == oracle_points(c));
    CHECK(pts.size() == 81); // two lines through the origin, overlap at 0
}

TEST_CASE("determinant method with an x-only factor (vertical line)") {
    // (x - 4)(x^2 - 2y^2 - 1)
    std::vector<std::vector<Int>> coeff(4, std::vector<Int>(3, Int(0)));
    // multiply out: x^3 - 4x^2 - 2xy^2 + 8y^2 - x + 4
    coeff[0] = {Int(4), Int(0), Int(8)};
    coeff[1] = {Int(-1), Int(0), Int(-2)};
    coeff[2] = {Int(-4), Int(0), Int(0)};
    coeff[3] = {Int(1), Int(0), Int(0)};
    PlanarCurve c = planar_curve(coeff, 30, 30);
    auto pts = count_points_detmethod(c, 101);
    CHECK(pts == count_points_bruteforce(c));
    CHECK(pts == oracle_points(c));
    // the vertical line x = 4 contributes all 61 y values
    long on_line = 0;
    for (const auto& pt : pts)
        on_line += pt.first == 4;
    CHECK(on_line == 61);
}

TEST_CASE("determinant method on x^2 - y^4 - 1 at a large prime") {
    PlanarCurve c = curve_from({{-1, 0, 0, 0, -1}, {0}, {1}}, 10000, 10);
    DetMethodStats stats;
    auto pts = count_points_detmethod(c, 10007, &stats);
    auto brute = count_points_bruteforce(c);
    CHECK(pts == brute);
    CHECK(pts.size() == 2);
    CHECK(stats.certified > 0);
    check_aux_vanishing(stats, brute, 10007);
}

TEST_CASE("determinant method equals the double-scan oracle on random curves") {
    Lcg rng{20240817};
    int curves = 0;
    while (curves < 25) {
        std::vector<std::vector<Int>> coeff(5, std::vector<Int>(5, Int(0)));
        bool nonzero = false;
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b) {
                long v = rng.next(-20, 20);
                coeff[size_t(a)][size_t(b)] = v;
                nonzero = nonzero || v != 0;
            }
        if (!nonzero)
            continue;
        long box = rng.next(20, 60);
        PlanarCurve c;
        try {
            c = planar_curve(coeff, box, box);
        } catch (const std::invalid_argument&) {
            continue;
        }
        ++curves;
        auto det = count_points_detmethod(c, 101);
        auto brute = count_points_bruteforce(c);
        auto oracle = oracle_points(c);
        CHECK(det == brute);
        CHECK(det == oracle);
    }
}

TEST_CASE("count_fiber_curve: degenerate and non-degenerate routes") {
    // Degenerate: 16 x^2 = 16 z^4, so x0 = z^2 for every z.
    FiberCurve deg;
    deg.c = 16;
    deg.p = IntPolynomial{0, 0, 0, 0, 16};
    deg.degenerate = true;
    FiberCount fcount = count_fiber_curve(deg, 10);
    CHECK(fcount.count == 21);
    CHECK(fcount.degenerate);
    CHECK(!fcount.used_detmethod);
    CHECK(fcount.sqrt_b1 == doctest::Approx(std::sqrt(10.0)));

    // Same curve over a large range: residue-class counting path.
    FiberCount big = count_fiber_curve(deg, 3000000);
    CHECK(big.count == 6000001);

    // Non-degenerate with no solutions: 16 x^2 = z^4 + 7 is impossible mod 16.
    FiberCurve nd;
    nd.c = 16;
    nd.p = IntPolynomial{7, 0, 0, 0, 1};
    nd.degenerate = false;
    CHECK(count_fiber_curve(nd, 100).count == 0);

    // Constant degenerate curve: 16 x^2 = 64 has x0 = 2 for every z.
    FiberCurve cst;
    cst.c = 16;
    cst.p = IntPolynomial{64};
    cst.degenerate = true;
    CHECK(count_fiber_curve(cst, 5).count == 11);
}

TEST_CASE("count_fiber_curve routes large non-degenerate ranges to the det method") {
    // 16 x^2 = z^4 + 7: no solutions (z^4 + 7 is 7 or 8 mod 16).
    FiberCurve nd;
    nd.c = 16;
    nd.p = IntPolynomial{7, 0, 0, 0, 1};
    nd.degenerate = false;
    FiberCount fcount = count_fiber_curve(nd, 200, /*brute_limit=*/50);
    CHECK(fcount.used_detmethod);
    CHECK(fcount.count == 0);
    // Same instance with solutions: 16 x^2 = 16 z^4 + 16 has (0, +-1) etc.
    FiberCurve sol;
    sol.c = 16;
    sol.p = IntPolynomial{16, 0, 0, 0, 16};
    sol.degenerate = false;
    FiberCount direct = count_fiber_curve(sol, 200);
    FiberCount routed = count_fiber_curve(sol, 200, /*brute_limit=*/50);
    CHECK(routed.used_detmethod);
    CHECK(direct.count == routed.count);
}
