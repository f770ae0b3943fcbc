#ifndef BINQ4_CURVECOUNT_HPP
#define BINQ4_CURVECOUNT_HPP

#include "binq4/polynomial.hpp"
#include "binq4/svariety.hpp"

#include <utility>

namespace binq4 {

/// Bivariate integer polynomial f(x, y) = sum_b ys[b](x) * y^b with an
/// integer point-search box |x| <= bx, |y| <= by.
struct PlanarCurve {
    std::vector<IntPolynomial> ys; ///< coefficient of y^b, as polynomial in x
    Int bx, by;
};

/// Builds a curve from dense coefficients coeff[a][b] of x^a y^b; throws on
/// the zero polynomial or nonpositive box bounds.
PlanarCurve planar_curve(const std::vector<std::vector<Int>>& coeff, const Int& bx,
                         const Int& by);

Int curve_eval(const PlanarCurve& c, const Int& x, const Int& y);
int curve_degree(const PlanarCurve& c);   ///< total degree
int curve_degree_y(const PlanarCurve& c); ///< degree in y

/// All integer roots z of r with |z| <= bound, ascending. Roots are found
/// modulo a 61-bit prime and verified exactly.
std::vector<Int> integer_roots(const IntPolynomial& r, const Int& bound);

/// All integer points (x, y) in the box with f(x, y) = 0, sorted by (x, y).
/// Scans x and solves each univariate slice exactly; curves of the shape
/// c x^2 - P(y) are scanned over y with perfect_square_part instead. Throws
/// std::length_error when the scan length exceeds the budget.
std::vector<std::pair<Int, Int>> count_points_bruteforce(const PlanarCurve& c,
                                                         long budget = 2000000000L);

/// One auxiliary polynomial constructed along a smooth branch, for
/// inspection: g = sum coeffs[a][b] x^a y^b vanishes at every curve point of
/// the residue class (x0, y0) mod ell inside the box.
struct AuxPolynomial {
    Int x0, y0;
    std::vector<std::vector<Int>> coeffs;
};

struct DetMethodStats {
    long branches = 0;        ///< smooth branches processed
    long certified = 0;       ///< branches closed by an auxiliary polynomial
    long fallbacks = 0;       ///< residue classes swept directly
    std::vector<AuxPolynomial> aux; ///< certified auxiliary polynomials
};

/// Same point set as count_points_bruteforce, computed by the p-adic
/// determinant method at the auxiliary prime ell: Hensel branch expansion to
/// precision ell^K, an interpolation lattice of monomials along the branch,
/// a short (LLL) kernel vector as auxiliary polynomial, and resultant root
/// extraction. Residue classes without a height certificate, singular
/// classes, and degenerate resultants are swept directly, so the output is
/// exact for every input. Throws std::invalid_argument when ell is not an
/// odd prime or divides the leading content of f.
std::vector<std::pair<Int, Int>> count_points_detmethod(const PlanarCurve& c, const Int& ell,
                                                        DetMethodStats* stats = nullptr);

struct FiberCount {
    long count = 0;       ///< points (z1, x0) with |z1| <= B1, x0 >= 0
    double sqrt_b1 = 0.0; ///< B1^{1/2}, the expected-order comparison scale
    bool degenerate = false;
    bool used_detmethod = false;
};

/// Counts solutions of det2 * x0^2 = P(z1) with |z1| <= b1, x0 >= 0.
/// Ranges up to brute_limit are scanned directly with perfect_square_part;
/// larger ranges go through residue-class counting (degenerate curves) or
/// the determinant method (non-degenerate ones).
FiberCount count_fiber_curve(const FiberCurve& fc, const Int& b1,
                             long brute_limit = 2000000);

} // namespace binq4

#endif
