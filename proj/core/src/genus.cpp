#include "binq4/genus.hpp"

#include "binq4/lattice.hpp"
#include "binq4/parallel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace binq4 {

namespace {

Int pos_mod(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0)
        r += m;
    return r;
}

Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::invalid_argument("inv_mod: not invertible");
    return r;
}

bool odd_prime(const Int& p) {
    return p > 2 && mpz_probab_prime_p(p.get_mpz_t(), 40) != 0;
}

/// Counts of the doubled norm values 1..bound (theta-series prefix).
std::map<Int, long> theta_prefix(const IntMatrix& gram, const Int& bound) {
    std::map<Int, long> counts;
    for (const auto& v : enumerate_gram_up_to(gram, bound)) {
        Int n = 0;
        auto gv = gram * v;
        for (size_t i = 0; i < v.size(); ++i)
            n += v[i] * gv[i];
        counts[n] += 2; // enumerate_gram_up_to returns one vector per +- pair
    }
    return counts;
}

/// Backtracking search for integral U with U^T g1 U = g2. Candidate columns
/// are the vectors of the right norm; inner products against the already
/// chosen columns prune the tree. In counting mode every completion is
/// tallied; otherwise the first completion stops the search.
struct IsometrySearch {
    const IntMatrix& g1;
    const IntMatrix& g2;
    std::vector<std::vector<std::vector<Int>>> cands; // per column, both signs
    std::vector<std::vector<Int>> chosen;             // columns picked so far
    std::vector<std::vector<Int>> gchosen;            // g1 * chosen column
    long count = 0;
    bool counting = false;
    bool found = false;

    IsometrySearch(const IntMatrix& a, const IntMatrix& b) : g1(a), g2(b) {
        int n = b.rows();
        cands.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            cands[size_t(i)] = enumerate_gram_exact(g1, b.at(i, i));
    }

    void run(int depth) {
        int n = g2.rows();
        if (depth == n) {
            if (counting)
                ++count;
            else
                found = true;
            return;
        }
        for (const auto& v : cands[size_t(depth)]) {
            bool ok = true;
            for (int j = 0; j < depth && ok; ++j)
                ok = dot(v, gchosen[size_t(j)]) == g2.at(depth, j);
            if (!ok)
                continue;
            chosen.push_back(v);
            gchosen.push_back(g1 * v);
            run(depth + 1);
            chosen.pop_back();
            gchosen.pop_back();
            if (found)
                return;
        }
    }
};

} // namespace

Int automorphism_order(const QuaternaryForm& q) {
    IsometrySearch s(q.gram2, q.gram2);
    s.counting = true;
    s.run(0);
    return s.count;
}

bool isometric(const QuaternaryForm& a, const QuaternaryForm& b, int theta_len) {
    if (a.det2 != b.det2)
        return false;
    Int ma = gram_minimum(a.gram2);
    if (ma != gram_minimum(b.gram2))
        return false;
    Int bound = ma + 2 * Int(theta_len);
    if (theta_prefix(a.gram2, bound) != theta_prefix(b.gram2, bound))
        return false;
    IsometrySearch s(a.gram2, b.gram2);
    s.run(0);
    return s.found;
}

std::vector<QuaternaryForm> p_neighbors(const QuaternaryForm& q, const Int& p) {
    if (!odd_prime(p))
        throw std::invalid_argument("p_neighbors: p must be an odd prime");
    if (q.det2 % p == 0)
        throw std::invalid_argument("p_neighbors: p divides det2");
    const IntMatrix& g = q.gram2;
    int n = g.rows();
    long pl = p.get_si();

    // Projective representatives mod p: leading coordinate 1.
    std::vector<std::vector<Int>> lines;
    for (int lead = 0; lead < n; ++lead) {
        long tail = n - lead - 1;
        long total = 1;
        for (long i = 0; i < tail; ++i)
            total *= pl;
        for (long idx = 0; idx < total; ++idx) {
            std::vector<Int> v(static_cast<size_t>(n), Int(0));
            v[size_t(lead)] = 1;
            long rem = idx;
            for (long i = 0; i < tail; ++i) {
                v[size_t(lead) + 1 + size_t(i)] = rem % pl;
                rem /= pl;
            }
            Int norm = 0;
            auto gv = g * v;
            for (int i = 0; i < n; ++i)
                norm += v[size_t(i)] * gv[size_t(i)];
            if (norm % p == 0)
                lines.push_back(std::move(v));
        }
    }

    Int p2 = p * p;
    std::vector<IntMatrix> grams(lines.size(), IntMatrix::identity(n));
    parallel_for(long(lines.size()), [&](long li) {
        std::vector<Int> v = lines[size_t(li)];
        // Lift v so that the doubled norm is divisible by 2 p^2: pick w with
        // <v, w> a unit mod p and shift v by a multiple of p w.
        auto gv = g * v;
        int wi = -1;
        for (int k = 0; k < n; ++k)
            if (gv[size_t(k)] % p != 0) {
                wi = k;
                break;
            }
        if (wi < 0)
            throw std::logic_error("p_neighbors: singular isotropic line");
        Int norm = 0;
        for (int i = 0; i < n; ++i)
            norm += v[size_t(i)] * gv[size_t(i)];
        Int t = pos_mod(-(norm / p) * inv_mod(2 * gv[size_t(wi)], p), p);
        v[size_t(wi)] += p * t;

        // Generators of p L' = p {x : <x, v> == 0 mod p} + Z v, as rows.
        IntMatrix vg(1, n);
        auto gv2 = g * v;
        for (int i = 0; i < n; ++i)
            vg.at(0, i) = gv2[size_t(i)];
        IntMatrix ker = kernel_mod(vg, p); // columns span {x : <x,v> == 0 mod p}
        IntMatrix gen(n + 1, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                gen.at(j, i) = p * ker.at(i, j);
        for (int i = 0; i < n; ++i)
            gen.at(n, i) = v[size_t(i)];
        IntMatrix h = hnf(gen).h;
        IntMatrix basis(n, n); // columns = first n rows of the row HNF
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                basis.at(i, j) = h.at(j, i);

        // Gram of L' = (p L') / p in doubled form.
        IntMatrix raw = basis.transpose() * g * basis;
        IntMatrix scaled(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                mpz_divexact(scaled.at(i, j).get_mpz_t(), raw.at(i, j).get_mpz_t(),
                             p2.get_mpz_t());
        IntMatrix u = minkowski_transform(scaled);
        grams[size_t(li)] = u.transpose() * scaled * u;
    });

    std::vector<QuaternaryForm> out;
    for (const auto& gm : grams) {
        QuaternaryForm cand = quaternary_from_gram2(gm);
        if (cand.det2 != q.det2)
            throw std::logic_error("p_neighbors: det2 not preserved");
        bool seen = false;
        for (const auto& prev : out)
            if (isometric(prev, cand)) {
                seen = true;
                break;
            }
        if (!seen)
            out.push_back(std::move(cand));
    }
    return out;
}

SpinGenus spin_closure(const QuaternaryForm& q, const Int& p, int class_budget) {
    SpinGenus sg;
    sg.p = p;
    if (class_budget < 1)
        throw std::length_error("spin_closure: class budget exceeded");
    IntMatrix u = minkowski_transform(q.gram2);
    std::vector<QuaternaryForm> reps{quaternary_from_gram2(u.transpose() * q.gram2 * u)};
    size_t next = 0;
    while (next < reps.size()) {
        QuaternaryForm cur = reps[next++];
        for (const auto& nb : p_neighbors(cur, p)) {
            bool seen = false;
            for (const auto& prev : reps)
                if (isometric(prev, nb)) {
                    seen = true;
                    break;
                }
            if (seen)
                continue;
            reps.push_back(nb);
            if (long(reps.size()) > class_budget)
                throw std::length_error("spin_closure: class budget exceeded");
        }
    }
    sg.mass = 0;
    for (const auto& rep : reps) {
        GenusClass cls{rep, automorphism_order(rep)};
        sg.mass += Rat(1) / Rat(cls.aut_order);
        sg.classes.push_back(std::move(cls));
    }
    sg.mass.canonicalize();
    return sg;
}

Rat r_spin(const BinaryForm& q, const SpinGenus& sg) {
    BinaryForm qr = q.is_reduced() ? q : gauss_reduce(q).reduced;
    Rat num = 0, den = 0;
    for (const auto& cls : sg.classes) {
        Rat w = Rat(1) / Rat(cls.aut_order);
        num += Rat(count_representations(qr, cls.form).primitive) * w;
        den += w;
    }
    if (den == 0)
        return Rat(0);
    Rat out = num / den;
    out.canonicalize();
    return out;
}

Theorem13Report theorem13_report(const BinaryForm& q, const QuaternaryForm& quat,
                                 const Int& p1, const Int& p2, const Int& neighbor_p,
                                 int class_budget) {
    if (!odd_prime(p1) || !odd_prime(p2) || p1 == p2)
        throw std::invalid_argument("theorem13_report: p1, p2 must be distinct odd primes");
    Theorem13Report rep;
    rep.primitive = is_primitive_binary(q);
    rep.split_p1 = splitting_check(q, quat, p1);
    rep.split_p2 = splitting_check(q, quat, p2);
    rep.hypotheses_met = rep.primitive && rep.split_p1 && rep.split_p2;
    BinaryForm qr = q.is_reduced() ? q : gauss_reduce(q).reduced;
    rep.r_qq = count_representations(qr, quat).primitive;
    SpinGenus sg = spin_closure(quat, neighbor_p, class_budget);
    rep.classes = long(sg.classes.size());
    rep.mass = sg.mass;
    rep.r_spin_value = r_spin(qr, sg);
    rep.ratio = rep.r_spin_value == 0 ? Rat(0) : Rat(rep.r_qq) / rep.r_spin_value;
    rep.ratio.canonicalize();
    return rep;
}

} // namespace binq4
