#ifndef BINQ4_CORRELATION_HPP
#define BINQ4_CORRELATION_HPP

#include "binq4/reps.hpp"

namespace binq4 {

/// A correlation problem: a reduced primitive binary form q represented by
/// Q, studied at the odd prime p and level n (congruences mod p^{2n}).
struct CorrelationInstance {
    BinaryForm q;
    QuaternaryForm quat;
    Int p;
    long n = 1;
};

/// Validates p odd >= 3, n >= 1, q reduced and primitive.
CorrelationInstance make_instance(const BinaryForm& q, const QuaternaryForm& quat, const Int& p,
                                  long n);

/// p^{2n}, the congruence modulus of X(n).
Int xn_modulus(const CorrelationInstance& inst);

/// p^{4n}, the congruence modulus of the S(n) constraints.
Int sn_modulus(const CorrelationInstance& inst);

/// True iff some 2x2 matrix g over Z/p^{2n} has M2 == M1 g, g^T gram2(q) g ==
/// gram2(q), and det g == 1, all mod p^{2n}. Since a primitive M1 has an exact
/// integer left inverse L, the unique candidate is g = L M2.
bool rotation_congruent(const Representation& i1, const Representation& i2,
                        const CorrelationInstance& inst);

/// All ordered pairs of primitive representations with distinct image
/// lattices passing rotation_congruent, in enumeration order.
std::vector<std::pair<Representation, Representation>> build_Xn(const CorrelationInstance& inst);

struct XnReport {
    long ordered_pairs = 0;
    long unordered_pairs = 0;
    long primitive_reps = 0;
    long violations = 0;    ///< pairs whose Gram tuple fails S(n) membership
    double target = 0.0;    ///< D^{1+eps} / p^{(4+2delta)n}
    bool planar_test_only = false; ///< p | 2 disc(q) disc(Q): rotation test is
                                   ///< the planar condition, not certified
                                   ///< equivalent to the orthogonal one
};

/// Builds X(n), maps each pair to its Gram tuple, and checks membership in
/// S(n); violations are expected to be zero (the mod-p^{4n} bootstrap).
XnReport xn_to_sn_check(const CorrelationInstance& inst, double eps = 0.1, double delta = 0.1);

} // namespace binq4

#endif
