#ifndef BINQ4_FORMS_HPP
#define BINQ4_FORMS_HPP

#include "binq4/intmatrix.hpp"

namespace binq4 {

/// Positive definite integral binary quadratic form a x^2 + b xy + c y^2.
/// Discriminants are carried doubled: fourD = 4ac - b^2 = 4 disc.
struct BinaryForm {
    Int a, b, c;
    Int fourD;

    IntMatrix gram2() const { return IntMatrix::from_columns({{2 * a, b}, {b, 2 * c}}); }
    bool is_reduced() const { return abs(b) <= a && a <= c; }
};

/// Positive definite integral quaternary form as a doubled Gram matrix
/// (integral with even diagonal); det2 = det(gram2) = 16 disc.
struct QuaternaryForm {
    IntMatrix gram2;
    Int det2;

    Int value(const std::vector<Int>& v) const; ///< Q(v) = v^T gram2 v / 2
};

BinaryForm binary_from_coeffs(const Int& a, const Int& b, const Int& c);
QuaternaryForm quaternary_from_gram2(const IntMatrix& m);

struct GaussReduction {
    BinaryForm reduced;
    IntMatrix transform; ///< unimodular 2x2 with T^T gram2(q) T = gram2(reduced)
};

/// Gauss reduction to |b| <= a <= c; the reduced a equals min(q).
GaussReduction gauss_reduce(const BinaryForm& q);

/// Least value of Q on nonzero integer vectors.
Int min_quaternary(const QuaternaryForm& q);

bool is_primitive_binary(const BinaryForm& q);

/// True iff -disc(q) disc(Q) is a nonzero square mod the odd prime p.
bool splitting_check(const BinaryForm& q, const QuaternaryForm& quat, const Int& p);

/// Experiment filter: min(q)^2 >= fourD * num / den (default num/den = 1/16,
/// i.e. min(q) >= sqrt(D)/2).
bool is_balanced(const BinaryForm& q, long num = 1, long den = 16);

} // namespace binq4

#endif
