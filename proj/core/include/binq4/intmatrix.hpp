#ifndef BINQ4_INTMATRIX_HPP
#define BINQ4_INTMATRIX_HPP

#include <gmpxx.h>

#include <cassert>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace binq4 {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense matrix over Z with arbitrary-precision entries.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
        if (rows <= 0 || cols <= 0)
            throw std::invalid_argument("IntMatrix: dimensions must be positive");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(int n);
    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }
    static IntMatrix diagonal(const std::vector<Int>& d);
    static IntMatrix from_columns(const std::vector<std::vector<Int>>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[size_t(i) * cols_ + j];
    }
    const Int& at(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return a_[size_t(i) * cols_ + j];
    }

    std::vector<Int> column(int j) const;
    std::vector<Int> row(int i) const;
    void set_column(int j, const std::vector<Int>& v);

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    std::vector<Int> operator*(const std::vector<Int>& v) const;
    IntMatrix operator-() const;
    bool operator==(const IntMatrix& rhs) const = default;

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);

    /// Fraction-free (Bareiss) determinant; square matrices only.
    Int det() const;
    int rank() const;
    bool is_symmetric() const;
    bool is_identity() const;

    /// gcd of all k x k minors (k >= 1); zero if all vanish.
    Int minor_gcd(int k) const;

    std::string to_string() const;

  private:
    int rows_, cols_;
    std::vector<Int> a_;
};

struct HnfResult {
    IntMatrix h; ///< row-style Hermite normal form
    IntMatrix u; ///< unimodular, h = u * m
};

/// Hermite normal form by unimodular row operations: pivots positive,
/// entries above each pivot reduced into [0, pivot).
HnfResult hnf(const IntMatrix& m);

struct SnfResult {
    IntMatrix s; ///< diagonal, d_i | d_{i+1}, entries >= 0
    IntMatrix u; ///< unimodular
    IntMatrix v; ///< unimodular, s = u * m * v
};

SnfResult snf(const IntMatrix& m);

/// Basis of the lattice {x in Z^n : t*x == 0 mod modulus}, as the columns of
/// an n x n matrix in column Hermite form. The lattice always contains
/// modulus * Z^n.
IntMatrix kernel_mod(const IntMatrix& t, const Int& modulus);

/// Index [Z^n : L] for a full-rank lattice L given by basis columns.
Int lattice_index(const IntMatrix& basis_columns);

/// Canonical column-HNF basis of the column span (full column rank input).
IntMatrix column_hnf(const IntMatrix& basis_columns);

Int dot(const std::vector<Int>& a, const std::vector<Int>& b);

} // namespace binq4

#endif
