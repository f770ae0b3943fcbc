// binq4: batch experiment runner for the representation-counting library.
//
// Subcommands: reps, xn, sn, fibers, curve, genus, thm13, suite. Options can
// come from a JSON config (--config) whose numbers are decimal strings;
// command-line flags mirror the config keys and take precedence. Exit codes:
// 0 success, 2 config error, 3 budget exceeded, 4 acceptance failure.

#include "CLI11.hpp"
#include "json.hpp"

#include "binq4/correlation.hpp"
#include "binq4/curvecount.hpp"
#include "binq4/genus.hpp"
#include "binq4/suite.hpp"
#include "binq4/svariety.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace binq4;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Int parse_int(const std::string& s, const std::string& what) {
    if (s.empty())
        throw ConfigError(what + ": empty value");
    try {
        return Int(s);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a decimal integer: " + s);
    }
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch)))
            cur.push_back(ch);
    }
    out.push_back(cur);
    return out;
}

/// Flag values override config keys; all numbers travel as decimal strings.
struct Params {
    json config;
    std::map<std::string, std::string> flags;

    std::optional<std::string> raw(const std::string& key) const {
        auto it = flags.find(key);
        if (it != flags.end() && !it->second.empty())
            return it->second;
        if (config.contains(key)) {
            const json& v = config.at(key);
            if (v.is_string())
                return v.get<std::string>();
            if (v.is_array()) {
                std::string joined;
                for (const auto& e : v) {
                    if (!e.is_string())
                        throw ConfigError(key + ": config numbers must be decimal strings");
                    if (!joined.empty())
                        joined += ",";
                    joined += e.get<std::string>();
                }
                return joined;
            }
            throw ConfigError(key + ": config numbers must be decimal strings");
        }
        return std::nullopt;
    }

    std::string require(const std::string& key) const {
        auto v = raw(key);
        if (!v)
            throw ConfigError("missing required key: " + key);
        return *v;
    }

    Int get_int(const std::string& key) const { return parse_int(require(key), key); }

    Int get_int_or(const std::string& key, const Int& dflt) const {
        auto v = raw(key);
        return v ? parse_int(*v, key) : dflt;
    }

    BinaryForm get_q() const {
        auto parts = split_commas(require("q"));
        if (parts.size() != 3)
            throw ConfigError("q: expected three comma-separated integers a,b,c");
        return binary_from_coeffs(parse_int(parts[0], "q"), parse_int(parts[1], "q"),
                                  parse_int(parts[2], "q"));
    }

    QuaternaryForm get_gram2() const {
        auto parts = split_commas(require("gram2"));
        if (parts.size() != 16)
            throw ConfigError("gram2: expected sixteen comma-separated integers, row-major");
        IntMatrix m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m.at(i, j) = parse_int(parts[size_t(4 * i + j)], "gram2");
        return quaternary_from_gram2(m);
    }
};

std::string istr(const Int& v) { return v.get_str(); }
std::string istr(long v) { return std::to_string(v); }
std::string rstr(const Rat& v) { return v.get_str(); }

void emit(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else {
        std::ofstream f(out_path);
        if (!f)
            throw ConfigError("cannot open output file: " + out_path);
        f << text;
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else {
        std::ofstream f(out_path);
        if (!f)
            throw ConfigError("cannot open output file: " + out_path);
        f << text;
    }
}

int cmd_reps(const Params& par, const std::string& out) {
    BinaryForm q = par.get_q();
    QuaternaryForm quat = par.get_gram2();
    BinaryForm qr = q.is_reduced() ? q : gauss_reduce(q).reduced;
    RepCounts counts = count_representations(qr, quat);
    json rep;
    rep["q"] = {istr(qr.a), istr(qr.b), istr(qr.c)};
    rep["fourD"] = istr(qr.fourD);
    rep["total"] = istr(counts.total);
    rep["primitive"] = istr(counts.primitive);
    rep["paper_ref"] = "Theorem 1.3, r(q,Q)";
    emit(rep, out);
    return 0;
}

int cmd_xn(const Params& par, const std::string& out) {
    auto inst = make_instance(par.get_q(), par.get_gram2(), par.get_int("p"),
                              par.get_int_or("n", 1).get_si());
    XnReport xr = xn_to_sn_check(inst);
    json rep;
    rep["p"] = istr(inst.p);
    rep["n"] = istr(inst.n);
    rep["ordered_pairs"] = istr(xr.ordered_pairs);
    rep["unordered_pairs"] = istr(xr.unordered_pairs);
    rep["primitive_reps"] = istr(xr.primitive_reps);
    rep["violations"] = istr(xr.violations);
    rep["planar_test_only"] = xr.planar_test_only;
    rep["paper_ref"] = "Section 2.3, X(n) and the bound D^{1+eps}/p^{(4+2delta)n}";
    emit(rep, out);
    return 0;
}

int cmd_sn(const Params& par, const std::string& out) {
    auto inst = make_instance(par.get_q(), par.get_gram2(), par.get_int("p"),
                              par.get_int_or("n", 1).get_si());
    long budget = par.get_int_or("budget", Int(400000000000L)).get_si();
    auto sn = enumerate_Sn(inst, budget);
    auto fib = fibers(inst, sn);
    // fiber-id: index of the fiber (sorted by w) containing the point.
    std::map<std::array<Int, 5>, long> owner;
    for (size_t fi = 0; fi < fib.size(); ++fi)
        for (const auto& pt : fib[fi].points)
            owner[{pt.x0, pt.x1, pt.x2, pt.x3, pt.x4}] = long(fi);
    std::ostringstream tsv;
    tsv << "x0\tX1\tX2\tX3\tX4\tfiber-id\n";
    for (const auto& pt : sn)
        tsv << istr(pt.x0) << "\t" << istr(pt.x1) << "\t" << istr(pt.x2) << "\t"
            << istr(pt.x3) << "\t" << istr(pt.x4) << "\t"
            << owner.at({pt.x0, pt.x1, pt.x2, pt.x3, pt.x4}) << "\n";
    emit_text(tsv.str(), out);
    return 0;
}

int cmd_fibers(const Params& par, const std::string& out) {
    auto inst = make_instance(par.get_q(), par.get_gram2(), par.get_int("p"),
                              par.get_int_or("n", 1).get_si());
    auto sn = enumerate_Sn(inst);
    auto fib = fibers(inst, sn);
    json rep;
    rep["fiber_count"] = istr(long(fib.size()));
    rep["paper_ref"] = "Section 2.3, Lambda_w with index at least p^{6n-nu}";
    json list = json::array();
    for (const auto& f : fib) {
        json jf;
        jf["w"] = {istr(f.w[0]), istr(f.w[1]), istr(f.w[2]), istr(f.w[3])};
        jf["nu"] = istr(f.nu);
        jf["index"] = istr(f.index);
        jf["boxes"] = {istr(f.boxes[0]), istr(f.boxes[1]), istr(f.boxes[2]),
                       istr(f.boxes[3])};
        jf["points"] = istr(long(f.points.size()));
        jf["removed"] = f.removed;
        list.push_back(jf);
    }
    rep["fibers"] = list;
    emit(rep, out);
    return 0;
}

int cmd_curve(const Params& par, const std::string& out) {
    // coeffs: semicolon-separated rows (one per x power), commas inside.
    std::string raw = par.require("coeffs");
    std::vector<std::vector<Int>> coeff;
    std::string row;
    std::istringstream stream(raw);
    while (std::getline(stream, row, ';')) {
        std::vector<Int> r;
        for (const auto& s : split_commas(row))
            r.push_back(parse_int(s, "coeffs"));
        coeff.push_back(std::move(r));
    }
    PlanarCurve curve = planar_curve(coeff, par.get_int("bx"), par.get_int("by"));
    json rep;
    rep["paper_ref"] = "Section 2.3, determinant method point counts";
    auto ell = par.raw("ell");
    if (ell) {
        DetMethodStats stats;
        auto pts = count_points_detmethod(curve, parse_int(*ell, "ell"), &stats);
        rep["method"] = "detmethod";
        rep["ell"] = *ell;
        rep["count"] = istr(long(pts.size()));
        rep["branches"] = istr(stats.branches);
        rep["certified"] = istr(stats.certified);
        rep["fallbacks"] = istr(stats.fallbacks);
    } else {
        auto pts = count_points_bruteforce(curve);
        rep["method"] = "bruteforce";
        rep["count"] = istr(long(pts.size()));
    }
    emit(rep, out);
    return 0;
}

int cmd_genus(const Params& par, const std::string& out) {
    QuaternaryForm quat = par.get_gram2();
    Int p = par.get_int_or("p", 3);
    long budget = par.get_int_or("class_budget", 512).get_si();
    SpinGenus sg = spin_closure(quat, p, int(budget));
    json rep;
    rep["p"] = istr(p);
    rep["mass"] = rstr(sg.mass);
    rep["paper_ref"] = "Section 1, the spin genus of Q (p-neighbor closure)";
    json classes = json::array();
    for (const auto& cls : sg.classes) {
        json jc;
        json rows = json::array();
        for (int i = 0; i < 4; ++i) {
            json r = json::array();
            for (int j = 0; j < 4; ++j)
                r.push_back(istr(cls.form.gram2.at(i, j)));
            rows.push_back(r);
        }
        jc["gram2"] = rows;
        jc["autOrder"] = istr(cls.aut_order);
        classes.push_back(jc);
    }
    rep["classes"] = classes;
    emit(rep, out);
    return 0;
}

int cmd_thm13(const Params& par, const std::string& out) {
    BinaryForm q = par.get_q();
    QuaternaryForm quat = par.get_gram2();
    Theorem13Report tr =
        theorem13_report(q, quat, par.get_int("p1"), par.get_int("p2"),
                         par.get_int_or("p", 3), int(par.get_int_or("class_budget", 512).get_si()));
    json rep;
    rep["hypotheses_met"] = tr.hypotheses_met;
    rep["primitive"] = tr.primitive;
    rep["split_p1"] = tr.split_p1;
    rep["split_p2"] = tr.split_p2;
    rep["r_qQ"] = istr(tr.r_qq);
    rep["r_spin"] = rstr(tr.r_spin_value);
    rep["ratio"] = rstr(tr.ratio);
    rep["classes"] = istr(tr.classes);
    rep["mass"] = rstr(tr.mass);
    rep["normalization"] =
        "r_spin = (sum_j r(q,Q_j)/|Aut_j|) / (sum_j 1/|Aut_j|) over the neighbor closure";
    rep["paper_ref"] = "Theorem 1.3, r(q,Q) >= r(q,spin(Q))";
    emit(rep, out);
    return 0;
}

int cmd_suite(const Params& par, const std::string& out) {
    SuiteOptions opt;
    opt.curve_samples = par.get_int_or("curve_samples", opt.curve_samples).get_si();
    opt.family_size = par.get_int_or("family_size", opt.family_size).get_si();
    opt.identity_pairs = par.get_int_or("identity_pairs", opt.identity_pairs).get_si();
    opt.identity_instances =
        par.get_int_or("identity_instances", opt.identity_instances).get_si();
    opt.seed = static_cast<unsigned long long>(par.get_int_or("seed", 20240817).get_ui());
    auto det = par.raw("check_determinism");
    if (det)
        opt.check_determinism = *det != "0" && *det != "false";
    SuiteReport rep = run_suite(opt, std::cerr);
    emit_text(render_report(rep), out);
    return rep.all_pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counting experiments for binary-by-quaternary representations"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config; numbers as decimal strings");

    // Flags mirror the config keys exactly; a given flag overrides the key.
    static const std::vector<std::string> keys = {
        "q",          "gram2",        "p",           "p1",
        "p2",         "n",            "seed",        "budget",
        "class_budget", "coeffs",     "bx",          "by",
        "ell",        "b1",           "curve_samples", "family_size",
        "identity_pairs", "identity_instances", "check_determinism", "out"};

    std::map<std::string, std::map<std::string, std::string>> flag_store;
    std::vector<CLI::App*> subs;
    for (const char* name : {"reps", "xn", "sn", "fibers", "curve", "genus", "thm13", "suite"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough(); // let --config reach the parent parser
        for (const auto& key : keys)
            sub->add_option("--" + key, flag_store[name][key]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Params par;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f)
                throw ConfigError("cannot open config file: " + config_path);
            try {
                par.config = json::parse(f);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config parse error: ") + e.what());
            }
        }
        for (const auto& sub : subs) {
            if (!sub->parsed())
                continue;
            par.flags = flag_store[sub->get_name()];
            std::string out = par.flags["out"];
            if (out.empty() && par.config.contains("out"))
                out = par.config.at("out").get<std::string>();
            const std::string& name = sub->get_name();
            if (name == "reps")
                return cmd_reps(par, out);
            if (name == "xn")
                return cmd_xn(par, out);
            if (name == "sn")
                return cmd_sn(par, out);
            if (name == "fibers")
                return cmd_fibers(par, out);
            if (name == "curve")
                return cmd_curve(par, out);
            if (name == "genus")
                return cmd_genus(par, out);
            if (name == "thm13")
                return cmd_thm13(par, out);
            if (name == "suite")
                return cmd_suite(par, out);
        }
        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
