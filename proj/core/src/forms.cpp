#include "binq4/forms.hpp"

#include "binq4/lattice.hpp"

namespace binq4 {

Int QuaternaryForm::value(const std::vector<Int>& v) const {
    Int s = 0;
    int n = gram2.rows();
    for (int i = 0; i < n; ++i) {
        if (v[size_t(i)] == 0)
            continue;
        for (int j = 0; j < n; ++j)
            s += v[size_t(i)] * gram2.at(i, j) * v[size_t(j)];
    }
    return s / 2;
}

BinaryForm binary_from_coeffs(const Int& a, const Int& b, const Int& c) {
    BinaryForm q{a, b, c, 4 * a * c - b * b};
    if (a <= 0 || q.fourD <= 0)
        throw std::invalid_argument("binary form must be positive definite");
    return q;
}

QuaternaryForm quaternary_from_gram2(const IntMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4 || !m.is_symmetric())
        throw std::invalid_argument("quaternary gram2 must be symmetric 4x4");
    for (int i = 0; i < 4; ++i)
        if (m.at(i, i) % 2 != 0)
            throw std::invalid_argument("quaternary gram2 must have even diagonal");
    // Positive definiteness via leading principal minors.
    for (int k = 1; k <= 4; ++k) {
        IntMatrix sub(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                sub.at(i, j) = m.at(i, j);
        if (sub.det() <= 0)
            throw std::invalid_argument("quaternary gram2 must be positive definite");
    }
    return QuaternaryForm{m, m.det()};
}

GaussReduction gauss_reduce(const BinaryForm& q) {
    Int a = q.a, b = q.b, c = q.c;
    IntMatrix t = IntMatrix::identity(2);
    // Alternate translation and swap until |b| <= a <= c.
    while (true) {
        if (a > c) {
            std::swap(a, c);
            b = -b;
            // (x,y) -> (-y,x)
            IntMatrix s{{0, -1}, {1, 0}};
            t = t * s;
            continue;
        }
        if (abs(b) > a) {
            // b -> b - 2ka with k = round(b / 2a)
            Int k, num = b, den = 2 * a;
            // round to nearest (ties toward -inf are fine for reduction)
            Int twice = 2 * num + den;
            Int den2 = 2 * den;
            mpz_fdiv_q(k.get_mpz_t(), twice.get_mpz_t(), den2.get_mpz_t());
            c = a * k * k - b * k + c;
            b = b - 2 * a * k;
            IntMatrix s(2, 2);
            s.at(0, 0) = 1;
            s.at(0, 1) = -k;
            s.at(1, 1) = 1;
            t = t * s;
            continue;
        }
        break;
    }
    BinaryForm r = binary_from_coeffs(a, b, c);
    return {r, t};
}

Int min_quaternary(const QuaternaryForm& q) {
    return gram_minimum(q.gram2) / 2;
}

bool is_primitive_binary(const BinaryForm& q) {
    Int g;
    mpz_gcd(g.get_mpz_t(), q.a.get_mpz_t(), q.b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.c.get_mpz_t());
    return g == 1;
}

bool splitting_check(const BinaryForm& q, const QuaternaryForm& quat, const Int& p) {
    if (p == 2 || p < 2)
        throw std::invalid_argument("splitting_check: p must be an odd prime");
    // -disc(q) disc(Q) is a square iff -fourD*det2 is: the scaling 64 is one.
    Int v = -q.fourD * quat.det2;
    if (v % p == 0)
        return false;
    return mpz_legendre(v.get_mpz_t(), p.get_mpz_t()) == 1;
}

bool is_balanced(const BinaryForm& q, long num, long den) {
    GaussReduction r = gauss_reduce(q);
    return r.reduced.a * r.reduced.a * den >= q.fourD * num;
}

} // namespace binq4
