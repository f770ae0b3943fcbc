#ifndef BINQ4_SVARIETY_HPP
#define BINQ4_SVARIETY_HPP

#include "binq4/correlation.hpp"
#include "binq4/lattice.hpp"
#include "binq4/polynomial.hpp"

#include <array>
#include <map>

namespace binq4 {

/// Points of S(n) are Gram tuples (x0, X1..X4) in doubled coordinates.
using SnPoint = GramTuple;

/// Full membership test for Definition-style S(n): the degree-4 identity,
/// the Cauchy-Schwarz box, the four congruences mod p^{4n}, and the boundary
/// bullets at X1 = +-2a, X4 = +-2c.
bool sn_membership(const GramTuple& t, const CorrelationInstance& inst);

/// Complete list of S(n), sorted by (X1, X2, X3, X4). Enumerates the lattice
/// of (X1, X2+X3, X4) triples cut out by the three linear congruences mod
/// p^{4n}, then solves the quadratic congruence for X2-X3 residue classes and
/// the degree-4 identity for x0. Throws std::length_error when the
/// enumeration volume exceeds the budget (count of candidate points).
std::vector<SnPoint> enumerate_Sn(const CorrelationInstance& inst,
                                  long budget = 400000000000L);

struct SnStatistics {
    long count = 0;
    long removed_fiber_points = 0; ///< points in fibers with p | (w2 - w3)
    long fiber_count = 0;
    double sqrt_d = 0.0;         ///< sqrt(D)
    double trivial_bound = 0.0;  ///< D^2 / p^{12n}
    double ratio_sqrt_d = 0.0;   ///< count / sqrt(D)
    double ratio_trivial = 0.0;  ///< count * p^{12n} / D^2
    std::map<long, long> fiber_histogram; ///< fiber size -> number of fibers
};

SnStatistics sn_statistics(const CorrelationInstance& inst, const std::vector<SnPoint>& sn);

/// A residue fiber of S(n): the class w of (X1..X4) mod p^{2n} and the
/// linearized congruence lattice for y in X = w + p^{2n} y.
struct FiberData {
    std::array<Int, 4> w;    ///< residues in [0, p^{2n})
    std::array<Int, 4> lift; ///< first point of the fiber, a full solution of
                             ///< the congruences mod p^{4n}; base point of the
                             ///< linearization X = lift + p^{2n} y
    long nu = 0;           ///< p-valuation of w2 - w3, capped at 2n
    LatticeBasis lambda;   ///< the congruence lattice Lambda_w
    LatticeBasis reduced;  ///< Minkowski reduced basis of Lambda_w
    Int index;             ///< [Z^4 : Lambda_w]
    std::array<Int, 4> boxes; ///< B_i = max(1, floor(sqrt(fourD)/(p^{2n} |v_i|)))
    std::vector<SnPoint> points;
    bool removed = false;  ///< p | (w2 - w3)
    bool small_b2 = false; ///< B2 <= floor(D^delta) report bucket
};

/// Groups S(n) by residue mod p^{2n} and builds each fiber's lattice data.
/// Fibers are sorted by w.
std::vector<FiberData> fibers(const CorrelationInstance& inst, const std::vector<SnPoint>& sn,
                              double delta = 0.05);

/// The per-fiber curve: P(z1) = s(X(z1)) with X = w + p^{2n}(z1 v1 + z2 v2 +
/// z3 v3 + z4 v4) over the reduced basis, z2..z4 fixed.
struct FiberCurve {
    Int c;            ///< det2 of Q
    IntPolynomial p;  ///< degree <= 4 in z1
    bool degenerate = false; ///< c * P is a polynomial square
};

FiberCurve fiber_curve(const FiberData& f, const Int& z2, const Int& z3, const Int& z4,
                       const CorrelationInstance& inst);

/// Default level rule: the largest n >= 1 with p^{(2+delta)n} <= (fourD/4)^{1/4}
/// (never below 1).
long level_rule(const BinaryForm& q, const Int& p, double delta = 0.1);

} // namespace binq4

#endif
