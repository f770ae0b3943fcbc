#ifndef BINQ4_GENUS_HPP
#define BINQ4_GENUS_HPP

#include "binq4/forms.hpp"
#include "binq4/reps.hpp"

namespace binq4 {

/// One isometry class in a neighbor closure: a reduced representative and
/// the exact order of its integral automorphism group.
struct GenusClass {
    QuaternaryForm form;
    Int aut_order;
};

/// p-neighbor closure of a starting form: pairwise non-isometric classes,
/// all sharing det2, with mass = sum of 1/aut_order.
struct SpinGenus {
    std::vector<GenusClass> classes;
    Int p;
    Rat mass;
};

/// Exact order of {U integral : U^T gram2 U = gram2}, by backtracking over
/// the vectors of each diagonal norm. Always even (-identity).
Int automorphism_order(const QuaternaryForm& q);

/// True iff an integral U with U^T gram2(a) U = gram2(b) exists. Cheap
/// invariants (det2, minimum, theta-series prefix of theta_len coefficients)
/// are compared before the backtracking search.
bool isometric(const QuaternaryForm& a, const QuaternaryForm& b, int theta_len = 20);

/// Kneser p-neighbors of q: one candidate per isotropic line v mod p, built
/// as {x : <x, v> == 0 mod p} + Z(v/p) with v lifted so Q(v) == 0 mod p^2,
/// reduced, and deduplicated by isometric. Requires p odd and p not dividing
/// det2; anisotropic forms mod p yield an empty list.
std::vector<QuaternaryForm> p_neighbors(const QuaternaryForm& q, const Int& p);

/// Breadth-first p-neighbor closure starting at q, deduplicated by
/// isometric. Throws std::length_error when more than class_budget classes
/// appear.
SpinGenus spin_closure(const QuaternaryForm& q, const Int& p, int class_budget = 512);

/// Weighted average representation number over the closure:
/// (sum_j r(q, Q_j)/aut_j) / (sum_j 1/aut_j), with r the primitive
/// representation count.
Rat r_spin(const BinaryForm& q, const SpinGenus& sg);

struct Theorem13Report {
    bool primitive = false;       ///< q primitive
    bool split_p1 = false;        ///< square condition at p1
    bool split_p2 = false;        ///< square condition at p2
    bool hypotheses_met = false;
    long r_qq = 0;                ///< primitive representation count r(q, Q)
    Rat r_spin_value;             ///< weighted average over the closure
    Rat ratio;                    ///< r(q,Q) / r_spin, zero when r_spin = 0
    long classes = 0;
    Rat mass;
};

/// Evaluates the hypotheses and both representation counts for the pair
/// (q, Q), using the neighbor closure at neighbor_p for the averaged count.
Theorem13Report theorem13_report(const BinaryForm& q, const QuaternaryForm& quat,
                                 const Int& p1, const Int& p2, const Int& neighbor_p,
                                 int class_budget = 512);

} // namespace binq4

#endif
