#ifndef BINQ4_REPS_HPP
#define BINQ4_REPS_HPP

#include "binq4/forms.hpp"

namespace binq4 {

/// A representation of a binary form q by a quaternary form Q: the 4x2
/// integer matrix M with M^T gram2(Q) M = gram2(q).
struct Representation {
    IntMatrix m; ///< columns are the images of e1, e2

    bool operator==(const Representation& rhs) const = default;
};

/// The invariant tuple of a pair of representations, in doubled coordinates:
/// Xi = 2 * <iota1(e_j), iota2(e_k)>_Q and x0 the lattice index (0 when the
/// combined image has rank < 4).
struct GramTuple {
    Int x0;
    Int x1, x2, x3, x4;

    bool operator==(const GramTuple& rhs) const = default;
};

/// All M with M^T gram2(Q) M = gram2(q); q must be reduced. Deterministic
/// order (lexicographic by entries).
std::vector<Representation> enumerate_representations(const BinaryForm& q,
                                                      const QuaternaryForm& quat,
                                                      bool primitive_only);

/// True iff the image of M is a saturated rank-2 sublattice (gcd of the 2x2
/// minors is 1); throws if rank < 2.
bool is_primitive_rep(const Representation& m);

struct RepCounts {
    long total = 0;
    long primitive = 0;
};

RepCounts count_representations(const BinaryForm& q, const QuaternaryForm& quat);

/// The doubled right-hand side of the degree-4 variety equation:
/// s = (x1 x4 - x2 x3 - fourD)^2 - 4 (c x1 - a x4)^2
///     - 4 (b x1 - a (x2+x3)) (b x4 - c (x2+x3)).
Int degree4_rhs(const BinaryForm& q, const GramTuple& t);

/// Pairing tuple of two representations of the same q; throws if the forms
/// disagree or the determinant identity fails.
GramTuple gram_tuple(const Representation& i1, const Representation& i2, const BinaryForm& q,
                     const QuaternaryForm& quat);

/// Representation counts of the integer n by a rank <= 4 positive form given
/// by a doubled Gram matrix (used for m = 1 checks, e.g. ternary forms).
RepCounts count_number_representations(const IntMatrix& gram2, const Int& n);

} // namespace binq4

#endif
