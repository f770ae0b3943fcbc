#ifndef BINQ4_POLYNOMIAL_HPP
#define BINQ4_POLYNOMIAL_HPP

#include "binq4/intmatrix.hpp"

#include <optional>

namespace binq4 {

/// Univariate polynomial over Z, dense coefficients, constant term first.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPolynomial(std::initializer_list<long> coeffs);
    static IntPolynomial constant(Int v);
    static IntPolynomial monomial(const Int& coeff, int degree);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; } ///< -1 for the zero polynomial
    const Int& leading() const;
    const Int& coeff(int i) const;
    const std::vector<Int>& coeffs() const { return c_; }

    IntPolynomial operator+(const IntPolynomial& rhs) const;
    IntPolynomial operator-(const IntPolynomial& rhs) const;
    IntPolynomial operator*(const IntPolynomial& rhs) const;
    IntPolynomial operator*(const Int& s) const;
    bool operator==(const IntPolynomial& rhs) const = default;

    Int eval(const Int& x) const;
    IntPolynomial derivative() const;
    Int content() const; ///< gcd of coefficients (0 for zero polynomial)
    IntPolynomial primitive_part() const;
    /// Exact division; throws if rhs does not divide *this over Q.
    IntPolynomial divexact(const IntPolynomial& rhs) const;
    bool divides(const IntPolynomial& rhs) const; ///< *this | rhs over Q

    std::string to_string() const;

  private:
    void trim();
    std::vector<Int> c_;
};

/// gcd over Z, primitive with positive leading coefficient (subresultant PRS).
IntPolynomial poly_gcd(const IntPolynomial& f, const IntPolynomial& g);

/// Sylvester resultant; throws on zero input.
Int resultant(const IntPolynomial& f, const IntPolynomial& g);

/// R with R*R == P (positive leading coefficient) when P is a square in Z[t].
std::optional<IntPolynomial> poly_square_root(const IntPolynomial& p);

/// x0 >= 0 with s == c * x0^2, if it exists. Requires c > 0.
std::optional<Int> perfect_square_part(const Int& s, const Int& c);

} // namespace binq4

#endif
