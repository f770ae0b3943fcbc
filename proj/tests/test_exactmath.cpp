#include "doctest.h"

#include "binq4/intmatrix.hpp"
#include "binq4/lattice.hpp"
#include "binq4/polynomial.hpp"

#include <random>

using namespace binq4;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, long max_abs) {
    std::uniform_int_distribution<long> d(-max_abs, max_abs);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m.at(i, j) = d(rng);
    return m;
}

bool is_row_hnf(const IntMatrix& h) {
    int prev_col = -1;
    bool seen_zero_row = false;
    for (int i = 0; i < h.rows(); ++i) {
        int piv = -1;
        for (int j = 0; j < h.cols(); ++j)
            if (h.at(i, j) != 0) {
                piv = j;
                break;
            }
        if (piv < 0) {
            seen_zero_row = true;
            continue;
        }
        if (seen_zero_row || piv <= prev_col || h.at(i, piv) <= 0)
            return false;
        for (int k = 0; k < i; ++k)
            if (h.at(k, piv) < 0 || h.at(k, piv) >= h.at(i, piv))
                return false;
        prev_col = piv;
    }
    return true;
}

} // namespace

TEST_CASE("hnf identity and diagonal fixed points") {
    IntMatrix id = IntMatrix::identity(4);
    auto r = hnf(id);
    CHECK(r.h == id);
    CHECK(r.u == id);

    IntMatrix d{{2, 0}, {0, 4}};
    auto r2 = hnf(d);
    CHECK(r2.h == d);
    CHECK(r2.u == IntMatrix::identity(2));
}

TEST_CASE("hnf of [[2,1],[0,3]] preserves determinant via unimodular U") {
    IntMatrix m{{2, 1}, {0, 3}};
    auto r = hnf(m);
    CHECK(r.h.at(0, 0) > 0);
    CHECK(r.h.at(1, 0) == 0);
    CHECK(r.u * m == r.h);
    CHECK(abs(r.u.det()) == 1);
    CHECK(abs(r.h.det()) == 6);
}

TEST_CASE("snf reorders divisibility: diag(4,2) -> diag(2,4)") {
    IntMatrix m{{4, 0}, {0, 2}};
    auto r = snf(m);
    CHECK(r.s.at(0, 0) == 2);
    CHECK(r.s.at(1, 1) == 4);
    CHECK(r.u * m * r.v == r.s);
}

TEST_CASE("snf of a rank-2 4x2 matrix has diagonal (1,1)") {
    IntMatrix m{{1, 0}, {1, 0}, {0, 1}, {0, 1}};
    auto r = snf(m);
    CHECK(r.s.at(0, 0) == 1);
    CHECK(r.s.at(1, 1) == 1);
    CHECK(r.u * m * r.v == r.s);
}

TEST_CASE("snf of zero matrix is zero") {
    IntMatrix m(3, 3);
    auto r = snf(m);
    CHECK(r.s == m);
}

TEST_CASE("hnf/snf reconstruction on random matrices up to 6x6") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = 1 + int(rng() % 6), cols = 1 + int(rng() % 6);
        IntMatrix m = random_matrix(rng, rows, cols, 1000000);
        auto rh = hnf(m);
        CHECK(rh.u * m == rh.h);
        CHECK(abs(rh.u.det()) == 1);
        CHECK(is_row_hnf(rh.h));
        auto rs = snf(m);
        CHECK(rs.u * m * rs.v == rs.s);
        CHECK(abs(rs.u.det()) == 1);
        CHECK(abs(rs.v.det()) == 1);
        int n = std::min(rows, cols);
        for (int i = 0; i + 1 < n; ++i) {
            CHECK(rs.s.at(i, i) >= 0);
            if (rs.s.at(i, i) != 0)
                CHECK(rs.s.at(i + 1, i + 1) % rs.s.at(i, i) == 0);
            else
                CHECK(rs.s.at(i + 1, i + 1) == 0);
        }
    }
}

TEST_CASE("kernel_mod recovers the full congruence solution lattice") {
    // x + 2y == 0 mod 5 in Z^2: index 5 sublattice.
    IntMatrix t{{1, 2}};
    IntMatrix k = kernel_mod(t, 5);
    CHECK(abs(k.det()) == 5);
    for (int j = 0; j < 2; ++j) {
        Int v = t.at(0, 0) * k.at(0, j) + t.at(0, 1) * k.at(1, j);
        CHECK(v % 5 == 0);
    }
}

TEST_CASE("reduce_basis keeps orthonormal bases and fixes skewed ones") {
    LatticeBasis b = make_basis(IntMatrix{{1, 0}, {0, 1}, {0, 0}, {0, 0}});
    LatticeBasis r = reduce_basis(b);
    CHECK(r.gram == IntMatrix::identity(2));

    LatticeBasis skew = make_basis(IntMatrix{{1, 1}, {1, -1}, {0, 0}, {0, 0}});
    LatticeBasis rs = reduce_basis(skew);
    CHECK(rs.gram.at(0, 0) == 2);
    CHECK(rs.gram.at(1, 1) == 2);
    // Same lattice: identical column HNF after embedding.
    IntMatrix top(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            top.at(i, j) = rs.vectors.at(i, j);
    CHECK(column_hnf(IntMatrix{{1, 1}, {1, -1}}) == column_hnf(top));
}

TEST_CASE("reduce_basis returns successive minima on random rank-4 lattices") {
    std::mt19937_64 rng(991);
    for (int trial = 0; trial < 15; ++trial) {
        IntMatrix cols = random_matrix(rng, 4, 4, 8);
        if (cols.det() == 0)
            continue;
        LatticeBasis b = make_basis(cols);
        LatticeBasis r = reduce_basis(b);
        CHECK(abs(r.vectors.det()) == abs(cols.det()));
        // Sorted norms.
        for (int i = 0; i + 1 < 4; ++i)
            CHECK(r.gram.at(i, i) <= r.gram.at(i + 1, i + 1));
        // Each norm is the i-th successive minimum: no i independent vectors
        // of smaller max-norm exist (checked by enumeration below the norm).
        for (int i = 0; i < 4; ++i) {
            Int bound = r.gram.at(i, i) - 1;
            auto shorter = enumerate_gram_up_to(r.gram, bound);
            IntMatrix span(4, std::max<int>(1, int(shorter.size())));
            int rank_small = 0;
            if (!shorter.empty()) {
                IntMatrix m(4, int(shorter.size()));
                for (size_t j = 0; j < shorter.size(); ++j)
                    for (int row = 0; row < 4; ++row)
                        m.at(row, int(j)) = shorter[j][size_t(row)];
                rank_small = m.rank();
            }
            CHECK(rank_small <= i);
        }
    }
}

TEST_CASE("reduce_basis: lattices containing M*Z^4 have ||v4||^2 <= M^2") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 10; ++trial) {
        long M = 3 + long(rng() % 9);
        // Random lattice between M*Z^4 and Z^4.
        IntMatrix t = random_matrix(rng, 2, 4, M - 1);
        IntMatrix k = kernel_mod(t, M);
        LatticeBasis b = make_basis(k);
        LatticeBasis r = reduce_basis(b);
        CHECK(r.gram.at(3, 3) <= Int(M) * M);
    }
}

TEST_CASE("lattice_points_in_box simple counts") {
    LatticeBasis z2 = make_basis(IntMatrix{{1, 0}, {0, 1}});
    auto pts = lattice_points_in_box(z2, {Int(1), Int(1)});
    CHECK(pts.size() == 9);

    LatticeBasis l = make_basis(IntMatrix{{3, 0}, {0, 1}});
    auto pts2 = lattice_points_in_box(l, {Int(4), Int(1)});
    CHECK(pts2.size() == 9); // x in {-3,0,3}, y in {-1,0,1}
}

TEST_CASE("lattice_points_in_box matches a full box scan") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 8; ++trial) {
        IntMatrix cols = random_matrix(rng, 3, 3, 4);
        if (cols.det() == 0)
            continue;
        LatticeBasis b = make_basis(cols);
        std::vector<Int> bounds{Int(6), Int(5), Int(7)};
        auto pts = lattice_points_in_box(b, bounds);
        // Brute force: scan all integer coefficient combos in a safe range.
        long R = 40;
        size_t count = 0;
        for (long x = -R; x <= R; ++x)
            for (long y = -R; y <= R; ++y)
                for (long z = -R; z <= R; ++z) {
                    std::vector<Int> c{Int(x), Int(y), Int(z)};
                    std::vector<Int> amb = b.vectors * c;
                    bool in = true;
                    for (int i = 0; i < 3; ++i)
                        if (abs(amb[size_t(i)]) > bounds[size_t(i)])
                            in = false;
                    if (in)
                        ++count;
                }
        CHECK(pts.size() == count);
        // Uniqueness of emission.
        auto sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
}

TEST_CASE("resultant basics") {
    CHECK(resultant(IntPolynomial{-1, 1}, IntPolynomial{1, 1}) == 2);
    CHECK(resultant(IntPolynomial{-2, 0, 1}, IntPolynomial{-2, 0, 1}) == 0);
    // f = t^2+1, g = t^3+t+1 against the direct 5x5 Sylvester determinant.
    IntPolynomial f{1, 0, 1}, g{1, 1, 0, 1};
    IntMatrix syl{{1, 0, 1, 0, 0},
                  {0, 1, 0, 1, 0},
                  {0, 0, 1, 0, 1},
                  {1, 1, 0, 1, 0},
                  {0, 1, 1, 0, 1}};
    CHECK(resultant(f, g) == syl.det());
    CHECK_THROWS(resultant(IntPolynomial{}, f));
}

TEST_CASE("poly_square_root recognizes squares and rejects non-squares") {
    IntPolynomial p{1, 0, 1}; // t^2+1
    auto r = poly_square_root(p * p);
    REQUIRE(r.has_value());
    CHECK(*r == p);

    CHECK_FALSE(poly_square_root(IntPolynomial{1, 0, 0, 0, 1}).has_value()); // t^4+1

    auto r2 = poly_square_root(IntPolynomial{0, 0, 4}); // 4t^2
    REQUIRE(r2.has_value());
    CHECK(*r2 == IntPolynomial{0, 2});

    // gcd(P, P') degree certificate for the non-square case.
    IntPolynomial q{1, 0, 0, 0, 1};
    CHECK(poly_gcd(q, q.derivative()).degree() == 0);
}

TEST_CASE("poly_square_root random roundtrip and non-square rejection") {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Int> c(1 + rng() % 4);
        for (auto& x : c)
            x = d(rng);
        IntPolynomial r{std::move(c)};
        if (r.is_zero())
            continue;
        auto back = poly_square_root(r * r);
        REQUIRE(back.has_value());
        CHECK(*back * *back == r * r);
        // Perturbed squares are rejected or still exact squares.
        IntPolynomial p = r * r + IntPolynomial{1};
        auto maybe = poly_square_root(p);
        if (maybe.has_value())
            CHECK(*maybe * *maybe == p);
    }
}

TEST_CASE("perfect_square_part") {
    CHECK(perfect_square_part(0, 16) == Int(0));
    CHECK(perfect_square_part(64, 16) == Int(2));
    CHECK_FALSE(perfect_square_part(48, 16).has_value());
    CHECK_FALSE(perfect_square_part(-16, 16).has_value());
    CHECK_THROWS(perfect_square_part(4, 0));
}

TEST_CASE("enumerate_gram_exact finds all representations of a value") {
    IntMatrix g = IntMatrix::identity(3);
    auto v1 = enumerate_gram_exact(g, 1);
    CHECK(v1.size() == 6);
    auto v2 = enumerate_gram_exact(g, 2);
    CHECK(v2.size() == 12);
    CHECK(gram_minimum(g) == 1);
}
