#include "binq4/reps.hpp"

#include "binq4/lattice.hpp"
#include "binq4/polynomial.hpp"

#include <algorithm>

namespace binq4 {

namespace {

Int pairing2(const IntMatrix& gram2, const std::vector<Int>& v, const std::vector<Int>& w) {
    Int s = 0;
    int n = gram2.rows();
    for (int i = 0; i < n; ++i) {
        if (v[size_t(i)] == 0)
            continue;
        for (int j = 0; j < n; ++j)
            s += v[size_t(i)] * gram2.at(i, j) * w[size_t(j)];
    }
    return s;
}

bool rep_less(const Representation& a, const Representation& b) {
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 4; ++i) {
            int c = cmp(a.m.at(i, j), b.m.at(i, j));
            if (c != 0)
                return c < 0;
        }
    return false;
}

} // namespace

std::vector<Representation> enumerate_representations(const BinaryForm& q,
                                                      const QuaternaryForm& quat,
                                                      bool primitive_only) {
    auto firsts = enumerate_gram_exact(quat.gram2, 2 * q.a);
    auto seconds = (q.a == q.c) ? firsts : enumerate_gram_exact(quat.gram2, 2 * q.c);
    std::vector<Representation> out;
    for (const auto& v1 : firsts) {
        for (const auto& v2 : seconds) {
            if (pairing2(quat.gram2, v1, v2) != q.b)
                continue;
            Representation r{IntMatrix::from_columns({v1, v2})};
            if (primitive_only && !is_primitive_rep(r))
                continue;
            out.push_back(std::move(r));
        }
    }
    std::sort(out.begin(), out.end(), rep_less);
    return out;
}

bool is_primitive_rep(const Representation& m) {
    if (m.m.rank() < 2)
        throw std::invalid_argument("is_primitive_rep: rank < 2");
    return m.m.minor_gcd(2) == 1;
}

RepCounts count_representations(const BinaryForm& q, const QuaternaryForm& quat) {
    RepCounts c;
    for (const auto& r : enumerate_representations(q, quat, false)) {
        ++c.total;
        if (is_primitive_rep(r))
            ++c.primitive;
    }
    return c;
}

Int degree4_rhs(const BinaryForm& q, const GramTuple& t) {
    Int w = t.x1 * t.x4 - t.x2 * t.x3 - q.fourD;
    Int u = q.c * t.x1 - q.a * t.x4;
    Int v1 = q.b * t.x1 - q.a * (t.x2 + t.x3);
    Int v2 = q.b * t.x4 - q.c * (t.x2 + t.x3);
    return w * w - 4 * u * u - 4 * v1 * v2;
}

GramTuple gram_tuple(const Representation& i1, const Representation& i2, const BinaryForm& q,
                     const QuaternaryForm& quat) {
    IntMatrix gq = q.gram2();
    if (i1.m.transpose() * quat.gram2 * i1.m != gq || i2.m.transpose() * quat.gram2 * i2.m != gq)
        throw std::invalid_argument("gram_tuple: representations do not match the form");
    auto col = [&](const Representation& r, int j) { return r.m.column(j); };
    GramTuple t;
    t.x1 = pairing2(quat.gram2, col(i1, 0), col(i2, 0));
    t.x2 = pairing2(quat.gram2, col(i1, 0), col(i2, 1));
    t.x3 = pairing2(quat.gram2, col(i1, 1), col(i2, 0));
    t.x4 = pairing2(quat.gram2, col(i1, 1), col(i2, 1));
    // Doubled Gram determinant of the four image vectors.
    IntMatrix g4(4, 4);
    std::vector<std::vector<Int>> vs{col(i1, 0), col(i1, 1), col(i2, 0), col(i2, 1)};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g4.at(i, j) = pairing2(quat.gram2, vs[size_t(i)], vs[size_t(j)]);
    auto x0 = perfect_square_part(g4.det(), quat.det2);
    if (!x0)
        throw std::logic_error("gram_tuple: det(G4)/det2 is not a perfect square");
    t.x0 = *x0;
    return t;
}

RepCounts count_number_representations(const IntMatrix& gram2, const Int& n) {
    if (n <= 0)
        throw std::invalid_argument("count_number_representations: n must be positive");
    RepCounts c;
    for (const auto& v : enumerate_gram_exact(gram2, 2 * n)) {
        ++c.total;
        Int g = 0;
        for (const auto& x : v)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1)
            ++c.primitive;
    }
    return c;
}

} // namespace binq4
