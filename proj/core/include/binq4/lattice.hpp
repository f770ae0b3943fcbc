#ifndef BINQ4_LATTICE_HPP
#define BINQ4_LATTICE_HPP

#include "binq4/intmatrix.hpp"

namespace binq4 {

/// Lattice basis in a small ambient dimension, with the Gram matrix of
/// Euclidean inner products kept consistent with the vectors.
struct LatticeBasis {
    IntMatrix vectors; ///< ambient_dim x rank, basis vectors as columns
    IntMatrix gram;    ///< rank x rank, v_i . v_j

    int rank() const { return vectors.cols(); }
    int ambient_dim() const { return vectors.rows(); }
};

/// Builds a basis from independent columns; throws on dependent input.
LatticeBasis make_basis(const IntMatrix& columns);

/// All coefficient vectors x != 0 with x^T gram x <= bound, one per +-pair
/// (first nonzero coordinate positive), sorted by (norm, lex). Exact
/// Fincke-Pohst enumeration on the Gram matrix.
std::vector<std::vector<Int>> enumerate_gram_up_to(const IntMatrix& gram, const Int& bound);

/// Coefficient vectors with x^T gram x == value exactly, both signs included.
std::vector<std::vector<Int>> enumerate_gram_exact(const IntMatrix& gram, const Int& value);

/// Least nonzero value of the quadratic form given by gram.
Int gram_minimum(const IntMatrix& gram);

/// Exact LLL (delta = 0.99) on a Gram matrix; returns the unimodular
/// transform U with U^T gram U reduced.
IntMatrix lll_transform(const IntMatrix& gram, long delta_num = 99, long delta_den = 100);

/// Unimodular U such that the columns of U are a Minkowski reduced basis in
/// the given Gram metric: the k-th column is a shortest vector extending the
/// previous ones to a basis. For rank <= 4 the column norms are the
/// successive minima. LLL is used as preprocessing only.
IntMatrix minkowski_transform(const IntMatrix& gram);

/// Same-lattice reduction of a LatticeBasis (Euclidean metric).
LatticeBasis reduce_basis(const LatticeBasis& basis);

/// Exactly the lattice vectors whose ambient coordinates x_i satisfy
/// |x_i| <= bounds[i]; emitted in lexicographic order of basis coefficients.
/// The zero vector is included.
std::vector<std::vector<Int>> lattice_points_in_box(const LatticeBasis& basis,
                                                    const std::vector<Int>& bounds);

} // namespace binq4

#endif
