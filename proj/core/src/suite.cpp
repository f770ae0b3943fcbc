#include "binq4/suite.hpp"

#include "binq4/correlation.hpp"
#include "binq4/curvecount.hpp"
#include "binq4/genus.hpp"
#include "binq4/svariety.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>

namespace binq4 {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Lcg {
    std::uint64_t s;
    std::uint64_t next() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return s >> 33;
    }
    long pick(long lo, long hi) { return lo + long(next() % std::uint64_t(hi - lo + 1)); }
    double unit() { return double(next() % (1ULL << 40)) / double(1ULL << 40); }
};

QuaternaryForm four_squares() {
    return quaternary_from_gram2(IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(2)}));
}

QuaternaryForm mixed_form() {
    return quaternary_from_gram2(
        IntMatrix{{2, 1, 0, 0}, {1, 2, 1, 0}, {0, 1, 4, 0}, {0, 0, 0, 6}});
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. The ternary form x^2 + xy + y^2 + 9 z^2 represents 4 m^2 for small m,
//    but never primitively.
CheckResult check_watson() {
    auto t0 = Clock::now();
    CheckResult r{"watson-regression", false, "", 0.0};
    IntMatrix g{{2, 1, 0}, {1, 2, 0}, {0, 0, 18}};
    bool ok = true;
    std::ostringstream detail;
    for (long m : {1L, 4L, 7L, 10L}) {
        RepCounts counts = count_number_representations(g, Int(4) * m * m);
        if (counts.primitive != 0 || counts.total <= 0)
            ok = false;
        detail << (m == 1 ? "" : " ") << "m=" << m << ":total=" << counts.total
               << ",primitive=" << counts.primitive;
    }
    r.seconds = elapsed(t0);
    r.pass = ok && r.seconds < 5.0;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 2. The degree-4 identity det(G4) = s, first symbolically on a grid that
//    exceeds every per-variable degree, then on random representation pairs.
bool identity_symbolic() {
    // Both sides have degree <= 4 in each of the seven variables, so
    // agreement on {-2..2}^7 proves the polynomial identity.
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            for (long c = -2; c <= 2; ++c)
                for (long x1 = -2; x1 <= 2; ++x1)
                    for (long x2 = -2; x2 <= 2; ++x2)
                        for (long x3 = -2; x3 <= 2; ++x3)
                            for (long x4 = -2; x4 <= 2; ++x4) {
                                IntMatrix g4{{2 * a, b, x1, x2},
                                             {b, 2 * c, x3, x4},
                                             {x1, x3, 2 * a, b},
                                             {x2, x4, b, 2 * c}};
                                long long fourD = 4 * a * c - b * b;
                                long long w = x1 * x4 - x2 * x3 - fourD;
                                long long u = c * x1 - a * x4;
                                long long v1 = b * x1 - a * (x2 + x3);
                                long long v2 = b * x4 - c * (x2 + x3);
                                long long s = w * w - 4 * u * u - 4 * v1 * v2;
                                if (g4.det() != Int(long(s)))
                                    return false;
                            }
    return true;
}

CheckResult check_identity(const SuiteOptions& opt) {
    auto t0 = Clock::now();
    CheckResult r{"degree4-identity", false, "", 0.0};
    bool symbolic = identity_symbolic();

    Lcg rng{opt.seed * 2 + 1};
    long instances = 0, pairs = 0, failures = 0, attempts = 0;
    while ((instances < opt.identity_instances || pairs < opt.identity_pairs) &&
           attempts < 500) {
        ++attempts;
        // Random positive even gram via 2 B^T B and a random plane inside it.
        IntMatrix bmat(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                bmat.at(i, j) = rng.pick(-2, 2);
        if (bmat.det() == 0)
            continue;
        IntMatrix gram = bmat.transpose() * bmat;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                gram.at(i, j) *= 2;
        QuaternaryForm quat = quaternary_from_gram2(gram);
        IntMatrix m(4, 2);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 2; ++j)
                m.at(i, j) = rng.pick(-2, 2);
        IntMatrix qg = m.transpose() * gram * m;
        Int fourD = qg.at(0, 0) * qg.at(1, 1) - qg.at(0, 1) * qg.at(0, 1);
        if (fourD <= 0 || fourD > 4000)
            continue;
        BinaryForm q = binary_from_coeffs(qg.at(0, 0) / 2, qg.at(0, 1), qg.at(1, 1) / 2);
        BinaryForm qr = gauss_reduce(q).reduced;
        auto reps = enumerate_representations(qr, quat, false);
        if (reps.size() < 2)
            continue;
        ++instances;
        long local = 0;
        for (size_t i = 0; i < reps.size() && local < 200; ++i)
            for (size_t j = 0; j < reps.size() && local < 200; ++j) {
                try {
                    GramTuple t = gram_tuple(reps[i], reps[j], qr, quat);
                    if (quat.det2 * t.x0 * t.x0 != degree4_rhs(qr, t))
                        ++failures;
                } catch (const std::exception&) {
                    ++failures;
                }
                ++pairs;
                ++local;
            }
    }
    r.seconds = elapsed(t0);
    r.pass = symbolic && failures == 0 && instances >= opt.identity_instances &&
             pairs >= opt.identity_pairs && r.seconds < 60.0;
    std::ostringstream detail;
    detail << "symbolic=" << (symbolic ? "ok" : "FAIL") << " instances=" << instances
           << " pairs=" << pairs << " failures=" << failures;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 3. enumerate_Sn against an independent full-box scan in plain integers.
std::vector<GramTuple> oracle_Sn(const CorrelationInstance& inst) {
    long a = inst.q.a.get_si(), b = inst.q.b.get_si(), c = inst.q.c.get_si();
    long fourD = inst.q.fourD.get_si(), det2 = inst.quat.det2.get_si();
    long m = sn_modulus(inst).get_si();
    long bigl = 0;
    while ((bigl + 1) * (bigl + 1) <= 4 * a * c)
        ++bigl;
    auto modz = [m](long long v) { return ((v % m) + m) % m; };
    std::vector<GramTuple> out;
    for (long x1 = -2 * a; x1 <= 2 * a; ++x1)
        for (long x4 = -2 * c; x4 <= 2 * c; ++x4) {
            if (modz((long long)c * x1 - (long long)a * x4) != 0)
                continue;
            for (long x2 = -bigl; x2 <= bigl; ++x2)
                for (long x3 = -bigl; x3 <= bigl; ++x3) {
                    long u = x2 + x3;
                    if (modz((long long)c * u - (long long)b * x4) != 0)
                        continue;
                    if (modz((long long)a * u - (long long)b * x1) != 0)
                        continue;
                    if (modz((long long)x1 * x4 - (long long)x2 * x3 - fourD) != 0)
                        continue;
                    long long w = (long long)x1 * x4 - (long long)x2 * x3 - fourD;
                    long long uu = (long long)c * x1 - (long long)a * x4;
                    long long v1 = (long long)b * x1 - (long long)a * u;
                    long long v2 = (long long)b * x4 - (long long)c * u;
                    long long s = w * w - 4 * uu * uu - 4 * v1 * v2;
                    if (s < 0 || s % det2 != 0)
                        continue;
                    long long y = s / det2;
                    long long x0 = 0;
                    while (x0 * x0 < y)
                        ++x0;
                    if (x0 * x0 != y)
                        continue;
                    bool ok = true;
                    for (int sign = -1; sign <= 1; sign += 2)
                        if (x1 == sign * 2 * a || x4 == sign * 2 * c)
                            if (x0 != 0 || x2 != sign * b || x3 != sign * b)
                                ok = false;
                    if (ok)
                        out.push_back(GramTuple{Int(long(x0)), Int(x1), Int(x2), Int(x3), Int(x4)});
                }
        }
    return out;
}

const std::vector<std::array<long, 3>>& sn_q_family() {
    static const std::vector<std::array<long, 3>> fam = {
        {1, 0, 1},   {2, 1, 3},    {3, 2, 5},    {5, 2, 7},   {7, 6, 11},
        {6, 1, 9},   {10, 3, 30},  {17, 10, 23}, {31, 2, 40}, {25, 0, 99},
        {49, 0, 50}, {49, 48, 51}, {50, 1, 50}};
    return fam;
}

CheckResult check_sn_oracle() {
    auto t0 = Clock::now();
    CheckResult r{"sn-oracle-equivalence", false, "", 0.0};
    long cases = 0, mismatches = 0;
    Int max_fourd = 0;
    for (const auto& quat : {four_squares(), mixed_form()})
        for (long p : {3L, 5L})
            for (const auto& [a, b, c] : sn_q_family()) {
                auto inst = make_instance(binary_from_coeffs(a, b, c), quat, p, 1);
                max_fourd = std::max(max_fourd, inst.q.fourD);
                auto fast = enumerate_Sn(inst);
                auto slow = oracle_Sn(inst);
                auto key = [](const GramTuple& t) {
                    return std::array<Int, 5>{t.x0, t.x1, t.x2, t.x3, t.x4};
                };
                auto lt = [&](const GramTuple& x, const GramTuple& y) {
                    return key(x) < key(y);
                };
                std::sort(fast.begin(), fast.end(), lt);
                std::sort(slow.begin(), slow.end(), lt);
                if (fast.size() != slow.size() ||
                    !std::equal(fast.begin(), fast.end(), slow.begin()))
                    ++mismatches;
                ++cases;
            }
    r.seconds = elapsed(t0);
    r.pass = mismatches == 0 && cases >= 40 && max_fourd <= 10000 && r.seconds < 600.0;
    std::ostringstream detail;
    detail << "instances=" << cases << " mismatches=" << mismatches
           << " max_fourD=" << max_fourd.get_str();
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 4. Every pair of X(n) lands in S(n), on a family with at least one
//    instance where X(n) is nonempty.
CheckResult check_xn_to_sn() {
    auto t0 = Clock::now();
    CheckResult r{"xn-to-sn-bootstrap", false, "", 0.0};
    std::vector<CorrelationInstance> insts;
    insts.push_back(make_instance(
        binary_from_coeffs(1, 0, 82),
        quaternary_from_gram2(IntMatrix::diagonal({Int(2), Int(2), Int(2), Int(164)})), 3,
        1));
    insts.push_back(make_instance(binary_from_coeffs(1, 0, 1), four_squares(), 3, 1));
    insts.push_back(make_instance(binary_from_coeffs(2, 1, 3), four_squares(), 3, 1));
    insts.push_back(make_instance(binary_from_coeffs(5, 2, 7), four_squares(), 5, 1));
    long pairs = 0, violations = 0, nonempty = 0;
    for (const auto& inst : insts) {
        XnReport rep = xn_to_sn_check(inst);
        pairs += rep.ordered_pairs;
        violations += rep.violations;
        if (rep.ordered_pairs > 0)
            ++nonempty;
    }
    r.seconds = elapsed(t0);
    r.pass = violations == 0 && nonempty > 0;
    std::ostringstream detail;
    detail << "instances=" << insts.size() << " nonempty=" << nonempty
           << " ordered_pairs=" << pairs << " violations=" << violations;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 5. Fiber invariants: index >= p^{6n - nu} and |v4| <= p^{2n}, no
//    exceptions over the instance family.
CheckResult check_fiber_invariants() {
    auto t0 = Clock::now();
    CheckResult r{"fiber-invariants", false, "", 0.0};
    long fiber_count = 0, violations = 0;
    for (const auto& quat : {four_squares(), mixed_form()})
        for (long p : {3L, 5L})
            for (const auto& [a, b, c] : sn_q_family()) {
                auto inst = make_instance(binary_from_coeffs(a, b, c), quat, p, 1);
                Int p2n = xn_modulus(inst);
                auto sn = enumerate_Sn(inst);
                for (const auto& f : fibers(inst, sn)) {
                    ++fiber_count;
                    Int bound;
                    mpz_pow_ui(bound.get_mpz_t(), inst.p.get_mpz_t(),
                               static_cast<unsigned long>(6 * inst.n - f.nu));
                    if (f.index < bound)
                        ++violations;
                    if (f.reduced.gram.at(3, 3) > p2n * p2n)
                        ++violations;
                }
            }
    r.seconds = elapsed(t0);
    r.pass = violations == 0 && fiber_count > 0;
    std::ostringstream detail;
    detail << "fibers=" << fiber_count << " violations=" << violations;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 6. The two slice counts with their expected orders of magnitude.
CheckResult check_slices() {
    auto t0 = Clock::now();
    CheckResult r{"slice-counts", false, "", 0.0};
    bool ok = true;
    long slices = 0;
    // X1 = 2a slice: expected within factor 4 of 2c/p^{4n} + 1 when p does
    // not divide a and p^{4n} <= c.
    for (const auto& [a, b, c] :
         std::vector<std::array<long, 3>>{{1, 0, 100}, {2, 1, 150}, {4, 1, 120},
                                          {1, 0, 200}, {5, 2, 101}}) {
        auto inst = make_instance(binary_from_coeffs(a, b, c), four_squares(), 3, 1);
        auto sn = enumerate_Sn(inst);
        long slice = 0;
        for (const auto& pt : sn)
            if (pt.x0 == 0 && pt.x1 == 2 * a && pt.x2 == b && pt.x3 == b)
                ++slice;
        double expected = 2.0 * double(c) / 81.0 + 1.0;
        if (!(double(slice) <= 4.0 * expected && 4.0 * double(slice) >= expected))
            ok = false;
        ++slices;
    }
    // q = A(x^2 + y^2) diagnostic slice: within factor 8 of A^2/p^{4n}.
    for (long A : {50L, 100L, 140L, 200L}) {
        CorrelationInstance inst{binary_from_coeffs(A, 0, A), four_squares(), 3, 1};
        auto sn = enumerate_Sn(inst);
        long slice = 0;
        for (const auto& pt : sn)
            if (pt.x1 == pt.x4 && pt.x2 + pt.x3 == 0)
                ++slice;
        double expected = double(A) * double(A) / 81.0;
        if (!(double(slice) <= 8.0 * expected && 8.0 * double(slice) >= expected))
            ok = false;
        ++slices;
    }
    r.seconds = elapsed(t0);
    r.pass = ok;
    std::ostringstream detail;
    detail << "slices=" << slices << " in_range=" << (ok ? "all" : "violated");
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 7. Determinant method versus the direct scan on random planar curves.
CheckResult check_detmethod(const SuiteOptions& opt, std::ostream& log) {
    auto t0 = Clock::now();
    CheckResult r{"detmethod-oracle", false, "", 0.0};
    Lcg rng{opt.seed * 3 + 7};
    long agree = 0, total = 0, certified_curves = 0;
    std::vector<double> times;
    while (total < opt.curve_samples) {
        int deg = int(rng.pick(2, 4));
        std::vector<std::vector<Int>> coeff(static_cast<size_t>(deg) + 1);
        bool nonzero = false;
        for (int a = 0; a <= deg; ++a) {
            coeff[size_t(a)].resize(static_cast<size_t>(deg - a) + 1);
            for (int b = 0; a + b <= deg; ++b) {
                long v = rng.pick(-50, 50);
                coeff[size_t(a)][size_t(b)] = v;
                nonzero = nonzero || v != 0;
            }
        }
        if (!nonzero)
            continue;
        long bx = long(std::lround(10.0 * std::pow(1000.0, rng.unit())));
        long by = long(std::lround(10.0 * std::pow(1000.0, rng.unit())));
        bx = std::min(bx, 10000L);
        by = std::min(by, 10000L);
        PlanarCurve curve = planar_curve(coeff, bx, by);
        auto tc = Clock::now();
        DetMethodStats stats;
        auto det_pts = count_points_detmethod(curve, 101, &stats);
        times.push_back(elapsed(tc));
        auto brute_pts = count_points_bruteforce(curve);
        if (det_pts == brute_pts)
            ++agree;
        if (stats.certified > 0)
            ++certified_curves;
        ++total;
    }
    std::sort(times.begin(), times.end());
    double median = times.empty() ? 0.0 : times[times.size() / 2];
    log << "[time] detmethod median per curve: " << fmt(median) << " s\n";
    r.seconds = elapsed(t0);
    r.pass = total >= opt.curve_samples && agree == total;
    std::ostringstream detail;
    detail << "curves=" << total << " agree=" << agree
           << " certified_curves=" << certified_curves;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 8. Spin genus of the four-square form.
CheckResult check_genus() {
    auto t0 = Clock::now();
    CheckResult r{"spin-genus", false, "", 0.0};
    SpinGenus sg = spin_closure(four_squares(), 3);
    bool ok = sg.classes.size() == 1 && sg.classes[0].aut_order == 384 &&
              sg.mass == Rat(1, 384);
    long family_ok = 0, family = 0;
    for (const auto& [a, b, c] :
         std::vector<std::array<long, 3>>{{1, 0, 1}, {1, 0, 2}, {2, 1, 3}, {1, 0, 5}}) {
        BinaryForm q = binary_from_coeffs(a, b, c);
        Rat avg = r_spin(q, sg);
        Rat direct(count_representations(q, sg.classes[0].form).primitive);
        if (avg == direct)
            ++family_ok;
        ++family;
    }
    Rat r1 = r_spin(binary_from_coeffs(1, 0, 1), sg);
    ok = ok && family_ok == family && r1 == 48;
    r.seconds = elapsed(t0);
    r.pass = ok;
    std::ostringstream detail;
    detail << "classes=" << sg.classes.size() << " aut=" << sg.classes[0].aut_order.get_str()
           << " mass=" << sg.mass.get_str() << " r_1_0_1=" << r1.get_str()
           << " family_consistent=" << family_ok << "/" << family;
    r.detail = detail.str();
    return r;
}

// ---------------------------------------------------------------------------
// 9. Trend report over balanced primitive forms.
CheckResult check_trend(const SuiteOptions& opt, std::string& table) {
    auto t0 = Clock::now();
    CheckResult r{"trend-report", false, "", 0.0};
    long rows = 0, monotonicity_failures = 0, membership_violations = 0;
    std::ostringstream tsv;
    tsv << "a\tb\tc\tfourD\tn\tcount_n\tcount_n1\tcount_over_sqrtD\t"
           "count_scaled_trivial\n";
    QuaternaryForm quat = four_squares();
    long steps = std::max(opt.family_size - 1, 1L);
    long prev_a = 0;
    for (long i = 0; i < opt.family_size; ++i) {
        long a = long(std::lround(100.0 * std::pow(999.0 / 100.0, double(i) / double(steps))));
        if (a == prev_a)
            ++a;
        prev_a = a;
        BinaryForm q = binary_from_coeffs(a, 0, a + 1);
        long n = level_rule(q, 3);
        auto inst = make_instance(q, quat, 3, n);
        auto inst_next = make_instance(q, quat, 3, n + 1);
        auto sn = enumerate_Sn(inst);
        auto sn_next = enumerate_Sn(inst_next);
        for (const auto& pt : sn)
            if (!sn_membership(pt, inst))
                ++membership_violations;
        if (sn_next.size() > sn.size())
            ++monotonicity_failures;
        double d = inst.q.fourD.get_d() / 4.0;
        double p12n = std::pow(3.0, 12.0 * double(n));
        tsv << a << "\t0\t" << (a + 1) << "\t" << inst.q.fourD.get_str() << "\t" << n
            << "\t" << sn.size() << "\t" << sn_next.size() << "\t"
            << fmt(double(sn.size()) / std::sqrt(d)) << "\t"
            << fmt(double(sn.size()) * p12n / (d * d)) << "\n";
        ++rows;
    }
    table = tsv.str();
    r.seconds = elapsed(t0);
    r.pass = rows >= 50 && monotonicity_failures == 0 && membership_violations == 0 &&
             r.seconds < 1800.0;
    std::ostringstream detail;
    detail << "rows=" << rows << " monotonicity_failures=" << monotonicity_failures
           << " membership_violations=" << membership_violations;
    r.detail = detail.str();
    return r;
}

SuiteReport run_once(const SuiteOptions& opt, std::ostream& log) {
    SuiteReport rep;
    auto push = [&](CheckResult r) {
        log << "[time] " << r.name << ": " << fmt(r.seconds) << " s\n";
        log.flush();
        rep.checks.push_back(std::move(r));
    };
    push(check_watson());
    push(check_identity(opt));
    push(check_sn_oracle());
    push(check_xn_to_sn());
    push(check_fiber_invariants());
    push(check_slices());
    push(check_detmethod(opt, log));
    push(check_genus());
    push(check_trend(opt, rep.trend_table));
    return rep;
}

} // namespace

std::string render_report(const SuiteReport& report) {
    std::ostringstream out;
    for (const auto& c : report.checks)
        out << (c.pass ? "PASS" : "FAIL") << " " << c.name << " " << c.detail << "\n";
    out << "\n" << report.trend_table;
    return out.str();
}

SuiteReport run_suite(const SuiteOptions& options, std::ostream& log) {
    SuiteReport rep = run_once(options, log);
    if (options.check_determinism) {
        auto t0 = Clock::now();
        std::ostringstream sink;
        SuiteReport second = run_once(options, sink);
        CheckResult det{"determinism", false, "", 0.0};
        bool same = render_report(rep) == render_report(second);
        det.seconds = elapsed(t0);
        det.pass = same;
        det.detail = std::string("reruns=1 byte_identical=") + (same ? "yes" : "no");
        log << "[time] determinism: " << fmt(det.seconds) << " s\n";
        rep.checks.push_back(std::move(det));
    }
    rep.all_pass = true;
    for (const auto& c : rep.checks)
        rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace binq4
