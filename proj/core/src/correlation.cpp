#include "binq4/correlation.hpp"

#include "binq4/svariety.hpp"

#include <cmath>

namespace binq4 {

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool congruent_matrices(const IntMatrix& a, const IntMatrix& b, const Int& m) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (mod_pos(a.at(i, j) - b.at(i, j), m) != 0)
                return false;
    return true;
}

/// Exact integer left inverse of a primitive 4x2 matrix, via SNF.
IntMatrix left_inverse(const IntMatrix& m) {
    SnfResult s = snf(m);
    if (s.s.at(0, 0) != 1 || s.s.at(1, 1) != 1)
        throw std::invalid_argument("left_inverse: matrix is not primitive");
    IntMatrix proj(2, 4);
    proj.at(0, 0) = 1;
    proj.at(1, 1) = 1;
    return s.v * proj * s.u;
}

} // namespace

CorrelationInstance make_instance(const BinaryForm& q, const QuaternaryForm& quat, const Int& p,
                                  long n) {
    if (p < 3 || p % 2 == 0 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        throw std::invalid_argument("make_instance: p must be an odd prime");
    if (n < 1)
        throw std::invalid_argument("make_instance: n must be positive");
    if (!q.is_reduced())
        throw std::invalid_argument("make_instance: q must be reduced");
    if (!is_primitive_binary(q))
        throw std::invalid_argument("make_instance: q must be primitive");
    return CorrelationInstance{q, quat, p, n};
}

Int xn_modulus(const CorrelationInstance& inst) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), inst.p.get_mpz_t(), 2 * static_cast<unsigned long>(inst.n));
    return m;
}

Int sn_modulus(const CorrelationInstance& inst) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), inst.p.get_mpz_t(), 4 * static_cast<unsigned long>(inst.n));
    return m;
}

bool rotation_congruent(const Representation& i1, const Representation& i2,
                        const CorrelationInstance& inst) {
    Int m = xn_modulus(inst);
    IntMatrix g = left_inverse(i1.m) * i2.m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g.at(i, j) = mod_pos(g.at(i, j), m);
    IntMatrix gq = inst.q.gram2();
    if (!congruent_matrices(i1.m * g, i2.m, m))
        return false;
    if (!congruent_matrices(g.transpose() * gq * g, gq, m))
        return false;
    return mod_pos(g.at(0, 0) * g.at(1, 1) - g.at(0, 1) * g.at(1, 0) - 1, m) == 0;
}

std::vector<std::pair<Representation, Representation>> build_Xn(const CorrelationInstance& inst) {
    auto reps = enumerate_representations(inst.q, inst.quat, true);
    std::vector<IntMatrix> images;
    images.reserve(reps.size());
    for (const auto& r : reps)
        images.push_back(column_hnf(r.m));
    std::vector<std::pair<Representation, Representation>> out;
    for (size_t i = 0; i < reps.size(); ++i)
        for (size_t j = 0; j < reps.size(); ++j) {
            if (images[i] == images[j])
                continue;
            if (rotation_congruent(reps[i], reps[j], inst))
                out.emplace_back(reps[i], reps[j]);
        }
    return out;
}

XnReport xn_to_sn_check(const CorrelationInstance& inst, double eps, double delta) {
    XnReport rep;
    auto pairs = build_Xn(inst);
    rep.ordered_pairs = long(pairs.size());
    rep.unordered_pairs = rep.ordered_pairs / 2;
    rep.primitive_reps = long(enumerate_representations(inst.q, inst.quat, true).size());
    for (const auto& pr : pairs) {
        GramTuple t = gram_tuple(pr.first, pr.second, inst.q, inst.quat);
        if (!sn_membership(t, inst))
            ++rep.violations;
    }
    double d = inst.q.fourD.get_d() / 4.0;
    rep.target = std::pow(d, 1.0 + eps) /
                 std::pow(inst.p.get_d(), (4.0 + 2.0 * delta) * double(inst.n));
    rep.planar_test_only = mod_pos(2 * inst.q.fourD * inst.quat.det2, inst.p) == 0;
    return rep;
}

} // namespace binq4
