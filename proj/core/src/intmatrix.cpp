#include "binq4/intmatrix.hpp"

#include <algorithm>
#include <sstream>

namespace binq4 {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = int(rows.size());
    cols_ = rows_ ? int(rows.begin()->size()) : 0;
    if (rows_ <= 0 || cols_ <= 0)
        throw std::invalid_argument("IntMatrix: dimensions must be positive");
    a_.reserve(size_t(rows_) * cols_);
    for (const auto& r : rows) {
        if (int(r.size()) != cols_)
            throw std::invalid_argument("IntMatrix: ragged initializer");
        for (long x : r)
            a_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<Int>& d) {
    IntMatrix m(int(d.size()), int(d.size()));
    for (size_t i = 0; i < d.size(); ++i)
        m.at(int(i), int(i)) = d[i];
    return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<Int>>& cols) {
    if (cols.empty())
        throw std::invalid_argument("from_columns: empty");
    IntMatrix m(int(cols[0].size()), int(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != cols[0].size())
            throw std::invalid_argument("from_columns: ragged");
        for (size_t i = 0; i < cols[j].size(); ++i)
            m.at(int(i), int(j)) = cols[j][i];
    }
    return m;
}

std::vector<Int> IntMatrix::column(int j) const {
    std::vector<Int> v(rows_);
    for (int i = 0; i < rows_; ++i)
        v[i] = at(i, j);
    return v;
}

std::vector<Int> IntMatrix::row(int i) const {
    std::vector<Int> v(cols_);
    for (int j = 0; j < cols_; ++j)
        v[j] = at(i, j);
    return v;
}

void IntMatrix::set_column(int j, const std::vector<Int>& v) {
    assert(int(v.size()) == rows_);
    for (int i = 0; i < rows_; ++i)
        at(i, j) = v[i];
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            t.at(j, i) = at(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("IntMatrix::operator*: shape mismatch");
    IntMatrix r(rows_, rhs.cols_);
    Int tmp;
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& x = at(i, k);
            if (x == 0)
                continue;
            for (int j = 0; j < rhs.cols_; ++j) {
                tmp = x * rhs.at(k, j);
                r.at(i, j) += tmp;
            }
        }
    return r;
}

std::vector<Int> IntMatrix::operator*(const std::vector<Int>& v) const {
    if (int(v.size()) != cols_)
        throw std::invalid_argument("IntMatrix::operator*: vector size mismatch");
    std::vector<Int> r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r[i] += at(i, j) * v[j];
    return r;
}

IntMatrix IntMatrix::operator-() const {
    IntMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r.at(i, j) = -at(i, j);
    return r;
}

void IntMatrix::swap_rows(int i, int j) {
    for (int k = 0; k < cols_; ++k)
        std::swap(at(i, k), at(j, k));
}

void IntMatrix::swap_cols(int i, int j) {
    for (int k = 0; k < rows_; ++k)
        std::swap(at(k, i), at(k, j));
}

Int IntMatrix::det() const {
    if (rows_ != cols_)
        throw std::invalid_argument("det: matrix not square");
    // Bareiss fraction-free elimination.
    IntMatrix m = *this;
    int n = rows_;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0)
                return 0;
            m.swap_rows(k, piv);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                m.at(i, j) = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

int IntMatrix::rank() const {
    // Fraction-free row echelon with column pivot search.
    IntMatrix m = *this;
    int r = 0;
    Int prev = 1;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
        int piv = -1;
        for (int i = r; i < rows_; ++i)
            if (m.at(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        m.swap_rows(r, piv);
        for (int i = r + 1; i < rows_; ++i)
            for (int j = col + 1; j < cols_; ++j) {
                m.at(i, j) = m.at(i, j) * m.at(r, col) - m.at(i, col) * m.at(r, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        for (int i = r + 1; i < rows_; ++i)
            m.at(i, col) = 0;
        prev = m.at(r, col);
        ++r;
    }
    return r;
}

bool IntMatrix::is_symmetric() const {
    if (rows_ != cols_)
        return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i))
                return false;
    return true;
}

bool IntMatrix::is_identity() const {
    if (rows_ != cols_)
        return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0))
                return false;
    return true;
}

namespace {

void minor_gcd_rec(const IntMatrix& m, int k, int start_row, std::vector<int>& rows, Int& g) {
    if (int(rows.size()) == k) {
        // All k-column subsets for this row subset.
        std::vector<int> c(k);
        for (int i = 0; i < k; ++i)
            c[i] = i;
        while (true) {
            IntMatrix sub(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    sub.at(i, j) = m.at(rows[i], c[j]);
            Int d = sub.det();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            int i = k - 1;
            while (i >= 0 && c[i] == m.cols() - k + i)
                --i;
            if (i < 0)
                break;
            ++c[i];
            for (int j = i + 1; j < k; ++j)
                c[j] = c[j - 1] + 1;
        }
        return;
    }
    for (int i = start_row; i <= m.rows() - (k - int(rows.size())); ++i) {
        rows.push_back(i);
        minor_gcd_rec(m, k, i + 1, rows, g);
        rows.pop_back();
        if (g == 1)
            return;
    }
}

} // namespace

Int IntMatrix::minor_gcd(int k) const {
    if (k < 1 || k > std::min(rows_, cols_))
        throw std::invalid_argument("minor_gcd: bad order");
    Int g = 0;
    std::vector<int> rows;
    minor_gcd_rec(*this, k, 0, rows, g);
    return g;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? " [" : "[");
        for (int j = 0; j < cols_; ++j)
            os << (j ? "," : "") << at(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

HnfResult hnf(const IntMatrix& m) {
    int rows = m.rows(), cols = m.cols();
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(rows);
    int r = 0;
    Int q, t;
    for (int col = 0; col < cols && r < rows; ++col) {
        // Clear below row r in this column by gcd steps.
        while (true) {
            int piv = -1;
            for (int i = r; i < rows; ++i)
                if (h.at(i, col) != 0 && (piv < 0 || abs(h.at(i, col)) < abs(h.at(piv, col))))
                    piv = i;
            if (piv < 0)
                break;
            if (piv != r) {
                h.swap_rows(r, piv);
                u.swap_rows(r, piv);
            }
            bool done = true;
            for (int i = r + 1; i < rows; ++i) {
                if (h.at(i, col) == 0)
                    continue;
                q = h.at(i, col) / h.at(r, col); // truncated division
                for (int j = 0; j < cols; ++j)
                    h.at(i, j) -= q * h.at(r, j);
                for (int j = 0; j < rows; ++j)
                    u.at(i, j) -= q * u.at(r, j);
                if (h.at(i, col) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (h.at(r, col) == 0)
            continue;
        if (h.at(r, col) < 0) {
            for (int j = 0; j < cols; ++j)
                h.at(r, j) = -h.at(r, j);
            for (int j = 0; j < rows; ++j)
                u.at(r, j) = -u.at(r, j);
        }
        // Reduce entries above the pivot into [0, pivot).
        for (int i = 0; i < r; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(r, col).get_mpz_t());
            if (q == 0)
                continue;
            for (int j = 0; j < cols; ++j)
                h.at(i, j) -= q * h.at(r, j);
            for (int j = 0; j < rows; ++j)
                u.at(i, j) -= q * u.at(r, j);
        }
        ++r;
    }
    return {std::move(h), std::move(u)};
}

SnfResult snf(const IntMatrix& m) {
    int rows = m.rows(), cols = m.cols();
    IntMatrix s = m;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);
    Int q;
    auto row_op = [&](int i, int r, const Int& f) { // row_i -= f * row_r
        for (int j = 0; j < cols; ++j)
            s.at(i, j) -= f * s.at(r, j);
        for (int j = 0; j < rows; ++j)
            u.at(i, j) -= f * u.at(r, j);
    };
    auto col_op = [&](int j, int c, const Int& f) { // col_j -= f * col_c
        for (int i = 0; i < rows; ++i)
            s.at(i, j) -= f * s.at(i, c);
        for (int i = 0; i < cols; ++i)
            v.at(i, j) -= f * v.at(i, c);
    };
    int n = std::min(rows, cols);
    for (int k = 0; k < n; ++k) {
        // Move a nonzero of minimal absolute value to (k,k).
        while (true) {
            int pi = -1, pj = -1;
            for (int i = k; i < rows; ++i)
                for (int j = k; j < cols; ++j)
                    if (s.at(i, j) != 0 &&
                        (pi < 0 || abs(s.at(i, j)) < abs(s.at(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0)
                goto done; // rest of the matrix is zero
            if (pi != k) {
                s.swap_rows(k, pi);
                u.swap_rows(k, pi);
            }
            if (pj != k) {
                s.swap_cols(k, pj);
                v.swap_cols(k, pj);
            }
            bool clean = true;
            for (int i = k + 1; i < rows; ++i)
                if (s.at(i, k) != 0) {
                    q = s.at(i, k) / s.at(k, k);
                    row_op(i, k, q);
                    if (s.at(i, k) != 0)
                        clean = false;
                }
            for (int j = k + 1; j < cols; ++j)
                if (s.at(k, j) != 0) {
                    q = s.at(k, j) / s.at(k, k);
                    col_op(j, k, q);
                    if (s.at(k, j) != 0)
                        clean = false;
                }
            if (!clean)
                continue;
            // Enforce divisibility of the remaining block by s(k,k).
            bool divides_all = true;
            for (int i = k + 1; i < rows && divides_all; ++i)
                for (int j = k + 1; j < cols && divides_all; ++j)
                    if (s.at(i, j) % s.at(k, k) != 0) {
                        // Add row i to row k, then restart reduction at k.
                        for (int jj = 0; jj < cols; ++jj)
                            s.at(k, jj) += s.at(i, jj);
                        for (int jj = 0; jj < rows; ++jj)
                            u.at(k, jj) += u.at(i, jj);
                        divides_all = false;
                    }
            if (divides_all)
                break;
        }
        if (s.at(k, k) < 0) {
            for (int j = 0; j < cols; ++j)
                s.at(k, j) = -s.at(k, j);
            for (int j = 0; j < rows; ++j)
                u.at(k, j) = -u.at(k, j);
        }
    }
done:
    return {std::move(s), std::move(u), std::move(v)};
}

IntMatrix kernel_mod(const IntMatrix& t, const Int& modulus) {
    if (modulus <= 0)
        throw std::invalid_argument("kernel_mod: modulus must be positive");
    int k = t.rows(), n = t.cols();
    // Kernel of [t | -modulus*I_k] in Z^{n+k}, projected to the first n
    // coordinates (the projection is a bijection onto the solution lattice).
    IntMatrix a(k, n + k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j)
            a.at(i, j) = t.at(i, j);
        a.at(i, n + i) = -modulus;
    }
    HnfResult hr = hnf(a.transpose()); // column ops on a, as row ops on a^T
    // Zero rows of hr.h correspond to kernel columns; a has full row rank k.
    IntMatrix basis(n, n);
    int out = 0;
    for (int i = 0; i < n + k; ++i) {
        bool zero = true;
        for (int j = 0; j < k; ++j)
            if (hr.h.at(i, j) != 0) {
                zero = false;
                break;
            }
        if (!zero)
            continue;
        if (out >= n)
            throw std::logic_error("kernel_mod: kernel rank exceeds n");
        for (int j = 0; j < n; ++j)
            basis.at(j, out) = hr.u.at(i, j);
        ++out;
    }
    if (out != n)
        throw std::logic_error("kernel_mod: kernel rank deficit");
    return column_hnf(basis);
}

IntMatrix column_hnf(const IntMatrix& basis_columns) {
    HnfResult hr = hnf(basis_columns.transpose());
    IntMatrix h = hr.h.transpose();
    if (h.rows() != h.cols())
        return h;
    return h;
}

Int lattice_index(const IntMatrix& basis_columns) {
    if (basis_columns.rows() != basis_columns.cols())
        throw std::invalid_argument("lattice_index: basis must be square");
    Int d = basis_columns.det();
    return d < 0 ? Int(-d) : d;
}

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    assert(a.size() == b.size());
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace binq4
