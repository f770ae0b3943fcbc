#include "binq4/lattice.hpp"

#include <algorithm>

namespace binq4 {

namespace {

// Fincke-Pohst quadratic decomposition of a positive definite Gram matrix:
// x^T G x = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2, all exact.
std::vector<std::vector<Rat>> fp_decompose(const IntMatrix& gram) {
    int r = gram.rows();
    std::vector<std::vector<Rat>> q(r, std::vector<Rat>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            q[i][j] = Rat(gram.at(i, j));
    for (int i = 0; i < r; ++i) {
        if (q[i][i] <= 0)
            throw std::invalid_argument("gram matrix not positive definite");
        for (int j = i + 1; j < r; ++j) {
            Rat t = q[i][j];
            q[j][i] = t;
            q[i][j] = t / q[i][i];
        }
        for (int k = i + 1; k < r; ++k)
            for (int l = k; l < r; ++l)
                q[k][l] -= q[k][i] * q[i][l];
    }
    return q;
}

// Integer range lo..hi with qii * (x + u)^2 <= t (t >= 0); empty as lo > hi.
void fp_range(const Rat& qii, const Rat& u, const Rat& t, Int& lo, Int& hi) {
    auto ok = [&](const Int& x) {
        Rat y = Rat(x) + u;
        return qii * y * y <= t;
    };
    Rat s = t / qii;
    // floor(sqrt(s)) exactly: sqrt(n/d) = sqrt(n*d)/d.
    Int nd = s.get_num() * s.get_den();
    Int root;
    mpz_sqrt(root.get_mpz_t(), nd.get_mpz_t());
    Int sq_floor;
    mpz_fdiv_q(sq_floor.get_mpz_t(), root.get_mpz_t(), s.get_den().get_mpz_t());
    Int u_floor, u_ceil;
    mpz_fdiv_q(u_floor.get_mpz_t(), u.get_num().get_mpz_t(), u.get_den().get_mpz_t());
    mpz_cdiv_q(u_ceil.get_mpz_t(), u.get_num().get_mpz_t(), u.get_den().get_mpz_t());
    // Guesses are within 2 of the true endpoints; fix up exactly.
    hi = sq_floor - u_floor + 1;
    while (ok(hi + 1))
        ++hi;
    lo = -sq_floor - u_ceil - 1;
    while (ok(lo - 1))
        --lo;
    while (lo <= hi && !ok(hi))
        --hi;
    while (lo <= hi && !ok(lo))
        ++lo;
}

void fp_enumerate(const std::vector<std::vector<Rat>>& q, int level, std::vector<Int>& x,
                  std::vector<Rat>& budget, std::vector<std::vector<Int>>* out) {
    int r = int(q.size());
    Rat u = 0;
    for (int j = level + 1; j < r; ++j)
        u += q[level][j] * Rat(x[size_t(j)]);
    Int lo, hi;
    fp_range(q[level][level], u, budget[size_t(level)], lo, hi);
    for (Int v = lo; v <= hi; ++v) {
        x[size_t(level)] = v;
        Rat y = Rat(v) + u;
        Rat used = q[level][level] * y * y;
        if (used > budget[size_t(level)])
            continue;
        if (level == 0) {
            out->push_back(x);
        } else {
            budget[size_t(level) - 1] = budget[size_t(level)] - used;
            fp_enumerate(q, level - 1, x, budget, out);
        }
    }
    x[size_t(level)] = 0;
}

Int gram_norm(const IntMatrix& gram, const std::vector<Int>& x) {
    Int s = 0;
    int r = gram.rows();
    for (int i = 0; i < r; ++i) {
        if (x[size_t(i)] == 0)
            continue;
        for (int j = 0; j < r; ++j)
            s += x[size_t(i)] * gram.at(i, j) * x[size_t(j)];
    }
    return s;
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0)
            return c < 0;
    }
    return false;
}

} // namespace

std::vector<std::vector<Int>> enumerate_gram_up_to(const IntMatrix& gram, const Int& bound) {
    if (!gram.is_symmetric())
        throw std::invalid_argument("enumerate_gram_up_to: gram not symmetric");
    std::vector<std::vector<Int>> out;
    if (bound < 0)
        return out;
    auto q = fp_decompose(gram);
    int r = gram.rows();
    std::vector<Int> x(size_t(r), Int(0));
    std::vector<Rat> budget(size_t(r), Rat(0));
    budget[size_t(r) - 1] = Rat(bound);
    fp_enumerate(q, r - 1, x, budget, &out);
    // Keep one representative per +-pair: first nonzero coordinate positive.
    std::vector<std::vector<Int>> keep;
    keep.reserve(out.size() / 2);
    for (auto& v : out) {
        int sign = 0;
        for (auto& c : v)
            if (c != 0) {
                sign = sgn(c);
                break;
            }
        if (sign > 0)
            keep.push_back(std::move(v));
    }
    std::vector<std::pair<Int, std::vector<Int>>> with_norm;
    with_norm.reserve(keep.size());
    for (auto& v : keep)
        with_norm.emplace_back(gram_norm(gram, v), std::move(v));
    std::sort(with_norm.begin(), with_norm.end(), [](const auto& a, const auto& b) {
        int c = cmp(a.first, b.first);
        if (c != 0)
            return c < 0;
        return lex_less(a.second, b.second);
    });
    keep.clear();
    for (auto& p : with_norm)
        keep.push_back(std::move(p.second));
    return keep;
}

std::vector<std::vector<Int>> enumerate_gram_exact(const IntMatrix& gram, const Int& value) {
    std::vector<std::vector<Int>> out;
    if (value < 0)
        return out;
    if (value == 0) {
        out.emplace_back(size_t(gram.rows()), Int(0));
        return out;
    }
    for (auto& v : enumerate_gram_up_to(gram, value)) {
        if (gram_norm(gram, v) != value)
            continue;
        std::vector<Int> neg(v.size());
        for (size_t i = 0; i < v.size(); ++i)
            neg[i] = -v[i];
        out.push_back(std::move(v));
        out.push_back(std::move(neg));
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

Int gram_minimum(const IntMatrix& gram) {
    Int bound = gram.at(0, 0);
    for (int i = 1; i < gram.rows(); ++i)
        bound = std::min(bound, gram.at(i, i));
    Int best = bound;
    for (const auto& v : enumerate_gram_up_to(gram, bound))
        best = std::min(best, gram_norm(gram, v));
    return best;
}

IntMatrix lll_transform(const IntMatrix& gram, long delta_num, long delta_den) {
    if (!gram.is_symmetric())
        throw std::invalid_argument("lll_transform: gram not symmetric");
    int n = gram.rows();
    IntMatrix g = gram;
    IntMatrix u = IntMatrix::identity(n);
    if (n <= 1)
        return u;

    // All-integer LLL on the gram matrix. D[j + 1] is the determinant of the
    // leading j+1 x j+1 Gram-Schmidt minor, lam[i][j] = mu_{i,j} * D[j + 1],
    // and every division below is exact, so no rationals appear.
    std::vector<Int> D(static_cast<size_t>(n) + 1);
    std::vector<std::vector<Int>> lam(static_cast<size_t>(n),
                                      std::vector<Int>(static_cast<size_t>(n)));
    D[0] = 1;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            Int s = g.at(i, j);
            for (int t = 0; t < j; ++t) {
                Int num = D[size_t(t) + 1] * s - lam[size_t(i)][size_t(t)] * lam[size_t(j)][size_t(t)];
                mpz_divexact(s.get_mpz_t(), num.get_mpz_t(), D[size_t(t)].get_mpz_t());
            }
            if (j < i)
                lam[size_t(i)][size_t(j)] = s;
            else {
                if (s <= 0)
                    throw std::invalid_argument("lll: gram not positive definite");
                D[size_t(i) + 1] = s;
            }
        }
    }

    // Subtracts q * b_l from b_k in the transform, the gram matrix, and lam.
    auto red = [&](int k, int l) {
        Int num = 2 * lam[size_t(k)][size_t(l)] + D[size_t(l) + 1];
        Int den = 2 * D[size_t(l) + 1];
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (q == 0)
            return;
        for (int row = 0; row < n; ++row)
            u.at(row, k) -= q * u.at(row, l);
        for (int j = 0; j < n; ++j) {
            if (j == k)
                continue;
            Int s = g.at(k, j) - q * g.at(l, j);
            g.at(k, j) = s;
            g.at(j, k) = s;
        }
        g.at(k, k) = g.at(k, k) - 2 * q * g.at(k, l) - q * q * g.at(l, l);
        lam[size_t(k)][size_t(l)] -= q * D[size_t(l) + 1];
        for (int i = 0; i < l; ++i)
            lam[size_t(k)][size_t(i)] -= q * lam[size_t(l)][size_t(i)];
    };

    int k = 1;
    while (k < n) {
        red(k, k - 1);
        // Lovasz condition d_k d_{k-2} >= delta d_{k-1}^2 - lam^2, cleared of
        // denominators with delta = delta_num / delta_den.
        Int lamk = lam[size_t(k)][size_t(k - 1)];
        Int lhs = delta_den * D[size_t(k) + 1] * D[size_t(k) - 1];
        Int rhs = delta_num * D[size_t(k)] * D[size_t(k)] - delta_den * lamk * lamk;
        if (lhs < rhs) {
            g.swap_rows(k, k - 1);
            g.swap_cols(k, k - 1);
            u.swap_cols(k, k - 1);
            for (int j = 0; j < k - 1; ++j)
                std::swap(lam[size_t(k)][size_t(j)], lam[size_t(k) - 1][size_t(j)]);
            Int num = D[size_t(k) - 1] * D[size_t(k) + 1] + lamk * lamk;
            Int B;
            mpz_divexact(B.get_mpz_t(), num.get_mpz_t(), D[size_t(k)].get_mpz_t());
            for (int i = k + 1; i < n; ++i) {
                Int t = lam[size_t(i)][size_t(k)];
                Int n1 = D[size_t(k) + 1] * lam[size_t(i)][size_t(k) - 1] - lamk * t;
                mpz_divexact(lam[size_t(i)][size_t(k)].get_mpz_t(), n1.get_mpz_t(),
                             D[size_t(k)].get_mpz_t());
                Int n2 = B * t + lamk * lam[size_t(i)][size_t(k)];
                mpz_divexact(lam[size_t(i)][size_t(k) - 1].get_mpz_t(), n2.get_mpz_t(),
                             D[size_t(k) + 1].get_mpz_t());
            }
            D[size_t(k)] = B;
            k = std::max(1, k - 1);
        } else {
            for (int l = k - 2; l >= 0; --l)
                red(k, l);
            ++k;
        }
    }
    return u;
}

IntMatrix minkowski_transform(const IntMatrix& gram) {
    int r = gram.rows();
    IntMatrix u0 = lll_transform(gram);
    IntMatrix g = u0.transpose() * gram * u0;
    Int bound = g.at(0, 0);
    for (int i = 1; i < r; ++i)
        bound = std::max(bound, g.at(i, i));
    auto candidates = enumerate_gram_up_to(g, bound);
    IntMatrix chosen(r, r);
    int taken = 0;
    for (const auto& cand : candidates) {
        if (taken == r)
            break;
        IntMatrix trial(r, taken + 1);
        for (int j = 0; j < taken; ++j)
            for (int i = 0; i < r; ++i)
                trial.at(i, j) = chosen.at(i, j);
        for (int i = 0; i < r; ++i)
            trial.at(i, taken) = cand[size_t(i)];
        if (trial.rank() != taken + 1)
            continue;
        // Extendability to a full basis: the chosen sublattice must be
        // saturated, i.e. all elementary divisors equal 1.
        SnfResult sr = snf(trial);
        bool sat = true;
        for (int i = 0; i <= taken; ++i)
            if (sr.s.at(i, i) != 1) {
                sat = false;
                break;
            }
        if (!sat)
            continue;
        for (int i = 0; i < r; ++i)
            chosen.at(i, taken) = cand[size_t(i)];
        ++taken;
    }
    if (taken != r)
        throw std::logic_error("minkowski_transform: incomplete greedy basis");
    return u0 * chosen;
}

LatticeBasis make_basis(const IntMatrix& columns) {
    if (columns.rank() != columns.cols())
        throw std::invalid_argument("make_basis: dependent input vectors");
    LatticeBasis b;
    b.vectors = columns;
    b.gram = columns.transpose() * columns;
    return b;
}

LatticeBasis reduce_basis(const LatticeBasis& basis) {
    IntMatrix u = minkowski_transform(basis.gram);
    LatticeBasis out;
    out.vectors = basis.vectors * u;
    out.gram = u.transpose() * basis.gram * u;
    return out;
}

std::vector<std::vector<Int>> lattice_points_in_box(const LatticeBasis& basis,
                                                    const std::vector<Int>& bounds) {
    if (int(bounds.size()) != basis.ambient_dim())
        throw std::invalid_argument("lattice_points_in_box: bounds size mismatch");
    for (const auto& b : bounds)
        if (b < 0)
            throw std::invalid_argument("lattice_points_in_box: negative bound");
    IntMatrix u = minkowski_transform(basis.gram);
    IntMatrix vecs = basis.vectors * u;
    IntMatrix g = u.transpose() * basis.gram * u;
    Int radius2 = 0;
    for (const auto& b : bounds)
        radius2 += b * b;
    auto in_box = [&](const std::vector<Int>& ambient) {
        for (size_t i = 0; i < ambient.size(); ++i)
            if (abs(ambient[i]) > bounds[i])
                return false;
        return true;
    };
    struct Hit {
        std::vector<Int> input_coeffs;
        std::vector<Int> ambient;
    };
    std::vector<Hit> hits;
    hits.push_back({std::vector<Int>(size_t(basis.rank()), Int(0)),
                    std::vector<Int>(size_t(basis.ambient_dim()), Int(0))});
    for (const auto& c : enumerate_gram_up_to(g, radius2)) {
        std::vector<Int> amb = vecs * c;
        if (!in_box(amb))
            continue;
        std::vector<Int> orig = u * c;
        std::vector<Int> norig(orig.size()), namb(amb.size());
        for (size_t i = 0; i < orig.size(); ++i)
            norig[i] = -orig[i];
        for (size_t i = 0; i < amb.size(); ++i)
            namb[i] = -amb[i];
        hits.push_back({std::move(orig), std::move(amb)});
        hits.push_back({std::move(norig), std::move(namb)});
    }
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return lex_less(a.input_coeffs, b.input_coeffs); });
    std::vector<std::vector<Int>> out;
    out.reserve(hits.size());
    for (auto& h : hits)
        out.push_back(std::move(h.ambient));
    return out;
}

} // namespace binq4
