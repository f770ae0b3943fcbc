#include "doctest.h"

#include "binq4/forms.hpp"
#include "binq4/lattice.hpp"

#include <random>

using namespace binq4;

namespace {

// Brute-force minimum of a binary form over |x|,|y| <= radius.
Int brute_min(const BinaryForm& q, long radius) {
    Int best = 0;
    for (long x = -radius; x <= radius; ++x)
        for (long y = -radius; y <= radius; ++y) {
            if (x == 0 && y == 0)
                continue;
            Int v = q.a * x * x + q.b * x * y + q.c * y * y;
            if (best == 0 || v < best)
                best = v;
        }
    return best;
}

} // namespace

TEST_CASE("constructors validate and compute discriminants") {
    CHECK(binary_from_coeffs(1, 0, 1).fourD == 4);
    CHECK(binary_from_coeffs(1, 1, 1).fourD == 3);
    CHECK_THROWS(binary_from_coeffs(1, 3, 1)); // indefinite
    CHECK_THROWS(binary_from_coeffs(-1, 0, -1));

    IntMatrix g = IntMatrix::identity(4);
    for (int i = 0; i < 4; ++i)
        g.at(i, i) = 2;
    QuaternaryForm q = quaternary_from_gram2(g);
    CHECK(q.det2 == 16); // disc(Q) = 1

    IntMatrix odd = g;
    odd.at(0, 0) = 3;
    CHECK_THROWS(quaternary_from_gram2(odd));
}

TEST_CASE("gauss_reduce matches brute-force minima and preserves fourD") {
    auto r1 = gauss_reduce(binary_from_coeffs(1, 2, 2));
    CHECK(r1.reduced.a == 1);
    CHECK(r1.reduced.b == 0);
    CHECK(r1.reduced.c == 1);

    auto r2 = gauss_reduce(binary_from_coeffs(3, 2, 1));
    CHECK(r2.reduced.a == 1);
    CHECK(r2.reduced.b == 0);
    CHECK(r2.reduced.c == 2);
    CHECK(r2.reduced.fourD == 8);

    auto r3 = gauss_reduce(binary_from_coeffs(1, 0, 1));
    CHECK(r3.reduced.a == 1);
    CHECK(r3.reduced.b == 0);
    CHECK(r3.reduced.c == 1);
    CHECK(r3.transform.is_identity());
}

TEST_CASE("gauss_reduce transform witnesses the equivalence") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<long> d(-12, 12);
    int done = 0;
    while (done < 40) {
        long a = 1 + rng() % 15, c = 1 + rng() % 15, b = d(rng);
        if (4 * a * c - b * b <= 0)
            continue;
        BinaryForm q = binary_from_coeffs(a, b, c);
        auto r = gauss_reduce(q);
        CHECK(r.reduced.fourD == q.fourD);
        CHECK(abs(r.transform.det()) == 1);
        CHECK(r.transform.transpose() * q.gram2() * r.transform == r.reduced.gram2());
        CHECK(r.reduced.is_reduced());
        CHECK(r.reduced.a == brute_min(q, 2 + long(Int(sqrt(q.fourD)).get_si())));
        ++done;
    }
}

TEST_CASE("min_quaternary on diagonal forms") {
    IntMatrix g = IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(2)});
    CHECK(min_quaternary(quaternary_from_gram2(g)) == 1);
    IntMatrix g2 = IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(18)});
    CHECK(min_quaternary(quaternary_from_gram2(g2)) == 1);
    IntMatrix g3 = IntMatrix::diagonal({Int(4), Int(6), Int(10), Int(14)});
    CHECK(min_quaternary(quaternary_from_gram2(g3)) == 2);
}

TEST_CASE("is_primitive_binary") {
    CHECK_FALSE(is_primitive_binary(binary_from_coeffs(2, 2, 2)));
    CHECK(is_primitive_binary(binary_from_coeffs(2, 1, 3)));
    CHECK(is_primitive_binary(binary_from_coeffs(4, 6, 9)));
}

TEST_CASE("splitting_check against Legendre symbol evaluation") {
    BinaryForm q = binary_from_coeffs(1, 0, 1);
    QuaternaryForm Q =
        quaternary_from_gram2(IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(2)}));
    // -fourD*det2 = -64: 1 mod 5 (square), 2 mod 3 (non-square).
    CHECK(splitting_check(q, Q, 5));
    CHECK_FALSE(splitting_check(q, Q, 3));
    // Zero class when p divides fourD*det2.
    BinaryForm q3 = binary_from_coeffs(1, 1, 1); // fourD = 3
    CHECK_FALSE(splitting_check(q3, Q, 3));
    CHECK_THROWS(splitting_check(q, Q, 2));
}

TEST_CASE("splitting_check is invariant under unimodular equivalence") {
    std::mt19937_64 rng(55);
    BinaryForm q = binary_from_coeffs(3, 1, 5);
    QuaternaryForm Q =
        quaternary_from_gram2(IntMatrix::diagonal({Int(2), Int(4), Int(6), Int(2)}));
    for (Int p : {Int(3), Int(5), Int(7), Int(11), Int(13)}) {
        bool base = splitting_check(q, Q, p);
        for (int trial = 0; trial < 5; ++trial) {
            // Random unimodular change of basis on q.
            long r = long(rng() % 5) - 2, s = long(rng() % 5) - 2;
            IntMatrix t{{1, r}, {0, 1}};
            IntMatrix u{{1, 0}, {s, 1}};
            IntMatrix v = t * u;
            IntMatrix g = v.transpose() * q.gram2() * v;
            BinaryForm q2 = binary_from_coeffs(g.at(0, 0) / 2, g.at(0, 1), g.at(1, 1) / 2);
            CHECK(splitting_check(q2, Q, p) == base);
        }
    }
}

TEST_CASE("balanced predicate reads min(q) >= sqrt(D)/2 by default") {
    CHECK(is_balanced(binary_from_coeffs(1, 0, 1)));       // min 1, D = 1
    CHECK_FALSE(is_balanced(binary_from_coeffs(1, 0, 60))); // min 1, D = 60
    CHECK(is_balanced(binary_from_coeffs(7, 0, 8)));       // min 7, D = 56
}
