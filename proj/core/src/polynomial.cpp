#include "binq4/polynomial.hpp"

#include <sstream>

namespace binq4 {

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long x : coeffs)
        c_.emplace_back(x);
    trim();
}

IntPolynomial IntPolynomial::constant(Int v) {
    IntPolynomial p;
    if (v != 0)
        p.c_.push_back(std::move(v));
    return p;
}

IntPolynomial IntPolynomial::monomial(const Int& coeff, int degree) {
    IntPolynomial p;
    if (coeff != 0) {
        p.c_.assign(size_t(degree) + 1, Int(0));
        p.c_.back() = coeff;
    }
    return p;
}

void IntPolynomial::trim() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

const Int& IntPolynomial::leading() const {
    if (c_.empty())
        throw std::invalid_argument("leading: zero polynomial");
    return c_.back();
}

const Int& IntPolynomial::coeff(int i) const {
    static const Int zero(0);
    if (i < 0 || i >= int(c_.size()))
        return zero;
    return c_[size_t(i)];
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& rhs) const {
    std::vector<Int> r(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size())
            r[i] += c_[i];
        if (i < rhs.c_.size())
            r[i] += rhs.c_[i];
    }
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& rhs) const {
    std::vector<Int> r(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size())
            r[i] += c_[i];
        if (i < rhs.c_.size())
            r[i] -= rhs.c_[i];
    }
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& rhs) const {
    if (is_zero() || rhs.is_zero())
        return IntPolynomial();
    std::vector<Int> r(c_.size() + rhs.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        for (size_t j = 0; j < rhs.c_.size(); ++j)
            r[i + j] += c_[i] * rhs.c_[j];
    }
    return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator*(const Int& s) const {
    if (s == 0)
        return IntPolynomial();
    std::vector<Int> r = c_;
    for (auto& x : r)
        x *= s;
    return IntPolynomial(std::move(r));
}

Int IntPolynomial::eval(const Int& x) const {
    Int acc = 0;
    for (size_t i = c_.size(); i-- > 0;) {
        acc *= x;
        acc += c_[i];
    }
    return acc;
}

IntPolynomial IntPolynomial::derivative() const {
    if (c_.size() <= 1)
        return IntPolynomial();
    std::vector<Int> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
        r[i - 1] = c_[i] * Int(long(i));
    return IntPolynomial(std::move(r));
}

Int IntPolynomial::content() const {
    Int g = 0;
    for (const auto& x : c_)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
    if (is_zero())
        return IntPolynomial();
    Int g = content();
    if (leading() < 0)
        g = -g;
    std::vector<Int> r = c_;
    for (auto& x : r)
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return IntPolynomial(std::move(r));
}

namespace {

// Division over Q; returns {quotient, remainder}.
std::pair<std::vector<Rat>, std::vector<Rat>> qdiv(const IntPolynomial& a, const IntPolynomial& b) {
    if (b.is_zero())
        throw std::invalid_argument("polynomial division by zero");
    std::vector<Rat> rem(a.coeffs().begin(), a.coeffs().end());
    int db = b.degree();
    int dq = a.degree() - db;
    std::vector<Rat> quo(dq >= 0 ? size_t(dq) + 1 : 0);
    Rat lb(b.leading());
    for (int k = dq; k >= 0; --k) {
        if (int(rem.size()) <= db + k)
            continue;
        Rat f = rem[size_t(db + k)] / lb;
        if (f == 0)
            continue;
        quo[size_t(k)] = f;
        for (int i = 0; i <= db; ++i)
            rem[size_t(i + k)] -= f * Rat(b.coeff(i));
    }
    while (!rem.empty() && rem.back() == 0)
        rem.pop_back();
    return {std::move(quo), std::move(rem)};
}

} // namespace

IntPolynomial IntPolynomial::divexact(const IntPolynomial& rhs) const {
    auto [quo, rem] = qdiv(*this, rhs);
    if (!rem.empty())
        throw std::invalid_argument("divexact: not divisible");
    std::vector<Int> q(quo.size());
    for (size_t i = 0; i < quo.size(); ++i) {
        if (quo[i].get_den() != 1)
            throw std::invalid_argument("divexact: quotient not integral");
        q[i] = quo[i].get_num();
    }
    return IntPolynomial(std::move(q));
}

bool IntPolynomial::divides(const IntPolynomial& rhs) const {
    if (rhs.is_zero())
        return true;
    if (is_zero() || degree() > rhs.degree())
        return false;
    auto [quo, rem] = qdiv(rhs, *this);
    (void)quo;
    return rem.empty();
}

std::string IntPolynomial::to_string() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0)
            continue;
        if (!first)
            os << (c_[i] > 0 ? " + " : " - ");
        else if (c_[i] < 0)
            os << "-";
        Int a = abs(c_[i]);
        if (a != 1 || i == 0)
            os << a.get_str();
        if (i > 0) {
            os << "t";
            if (i > 1)
                os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

IntPolynomial poly_gcd(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero())
        return g.is_zero() ? g : g.primitive_part();
    if (g.is_zero())
        return f.primitive_part();
    IntPolynomial a = f.primitive_part();
    IntPolynomial b = g.primitive_part();
    if (a.degree() < b.degree())
        std::swap(a, b);
    // Primitive pseudo-remainder sequence.
    while (!b.is_zero()) {
        int d = a.degree() - b.degree();
        Int lb = b.leading();
        Int scale;
        mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), ulong(d) + 1);
        IntPolynomial r = a * scale;
        // r := r mod b via integer-exact long division
        while (!r.is_zero() && r.degree() >= b.degree()) {
            Int q = r.leading() / lb; // exact by the scaling
            if (r.leading() % lb != 0)
                throw std::logic_error("poly_gcd: pseudo-division not exact");
            r = r - IntPolynomial::monomial(q, r.degree() - b.degree()) * b;
        }
        a = b;
        b = r.is_zero() ? r : r.primitive_part();
    }
    return a.primitive_part();
}

Int resultant(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero() || g.is_zero())
        throw std::invalid_argument("resultant: zero polynomial input");
    int m = f.degree(), n = g.degree();
    if (m == 0 && n == 0)
        return 1;
    if (m == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), f.leading().get_mpz_t(), ulong(n));
        return r;
    }
    if (n == 0) {
        Int r;
        mpz_pow_ui(r.get_mpz_t(), g.leading().get_mpz_t(), ulong(m));
        return r;
    }
    IntMatrix syl(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j)
            syl.at(i, i + j) = f.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j)
            syl.at(n + i, i + j) = g.coeff(n - j);
    return syl.det();
}

std::optional<IntPolynomial> poly_square_root(const IntPolynomial& p) {
    if (p.is_zero())
        return IntPolynomial();
    int d = p.degree();
    if (d % 2 != 0 || p.leading() < 0)
        return std::nullopt;
    int m = d / 2;
    // Solve for R = sum r_i t^i over Q from the top coefficient down,
    // then verify integrality and R^2 == P.
    Int lead_sqrt;
    mpz_sqrt(lead_sqrt.get_mpz_t(), p.leading().get_mpz_t());
    if (lead_sqrt * lead_sqrt != p.leading())
        return std::nullopt;
    std::vector<Rat> r(size_t(m) + 1);
    r[size_t(m)] = lead_sqrt;
    for (int k = m - 1; k >= 0; --k) {
        // Coefficient of t^{m+k} in R^2 equals p.coeff(m+k); the ordered pairs
        // (i,j) with i+j = m+k split into (m,k),(k,m) and pairs inside
        // [k+1, m-1].
        Rat acc = 0;
        for (int i = k + 1; i <= m - 1; ++i) {
            int j = m + k - i;
            if (j >= k + 1 && j <= m - 1)
                acc += r[size_t(i)] * r[size_t(j)];
        }
        r[size_t(k)] = (Rat(p.coeff(m + k)) - acc) / (2 * r[size_t(m)]);
    }
    std::vector<Int> ri(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i].get_den() != 1)
            return std::nullopt;
        ri[i] = r[i].get_num();
    }
    IntPolynomial R{std::move(ri)};
    if (R * R == p)
        return R;
    return std::nullopt;
}

std::optional<Int> perfect_square_part(const Int& s, const Int& c) {
    if (c <= 0)
        throw std::invalid_argument("perfect_square_part: c must be positive");
    if (s < 0 || s % c != 0)
        return std::nullopt;
    Int q = s / c;
    Int r;
    mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
    if (r * r != q)
        return std::nullopt;
    return r;
}

} // namespace binq4
