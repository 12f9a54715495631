// Certificate pipeline driver. Stages write JSON artifacts under output_dir
// and later stages consume them, so each subcommand can also run on its own
// against previously stored files. Exit codes: 0 certified, 2 validation
// failed (bounds written and reported), 1 operational error.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "parmval/certificates.hpp"

namespace fs = std::filesystem;
using namespace parmval;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

// shortest decimal that parses back to the same double; keeps CSV output
// deterministic without drowning it in digits
std::string num(double x) { return cert_json(x).dump(); }

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// list-valued fields are vectors of tokens: the config reader splits
// comma-separated values while the command line passes them as one string,
// so both are re-joined before parsing
struct raw_config {
    std::string alpha = "2.1";
    std::string c = "poisson:0.2";
    std::string nu = "1.1";
    int K = 20;
    std::vector<std::string> M{"60"};
    int d = 1;
    std::vector<std::string> scalings{"auto"};
    std::string norm_target;
    std::vector<std::string> theta;
    std::vector<std::string> seed{"0.3", "0.35"};
    bool connect = false;
    std::string output_dir = "out";
};

std::string join_list(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

struct run_config {
    fisher_problem prob;
    mindex M{0, 0};
    int d = 1;
    std::vector<interval> scalings;  // empty = pick automatically
    std::optional<interval> norm_target;
    std::vector<interval> theta;  // empty = line search where one is needed
    std::vector<double> seed;
    bool connect = false;
    fs::path outdir;
};

// decimals cross this boundary as enclosing intervals, never nearest floats
run_config resolve(const raw_config& rc) {
    run_config out;
    const interval nu = interval::enclose_decimal(rc.nu);
    const interval alpha = interval::enclose_decimal(rc.alpha);
    cosine_seq c;
    if (rc.c == "constant") {
        c = cosine_seq::basis(nu, rc.K, 0);
    } else if (rc.c.rfind("poisson:", 0) == 0) {
        c = poisson_coeffs(interval::enclose_decimal(rc.c.substr(8)), rc.K, nu);
    } else {
        throw interval_error("config: c must be \"constant\" or \"poisson:<decimal>\"");
    }
    out.prob = fisher_problem(alpha, c, rc.K, nu);
    const auto ms = split_list(join_list(rc.M));
    if (ms.size() == 1) {
        out.M = {std::stoi(ms[0]), 0};
    } else if (ms.size() == 2) {
        out.M = {std::stoi(ms[0]), std::stoi(ms[1])};
    } else {
        throw interval_error("config: M must be an integer or a pair m0,m1");
    }
    out.d = rc.d;
    if ((out.d == 2) != (ms.size() == 2))
        throw interval_error("config: d and the shape of M disagree");
    const std::string scalings = join_list(rc.scalings);
    if (scalings != "auto") {
        for (const auto& s : split_list(scalings))
            out.scalings.push_back(interval::enclose_decimal(s));
        if (static_cast<int>(out.scalings.size()) != out.d)
            throw interval_error("config: need one scaling per chart dimension");
    }
    if (!rc.norm_target.empty()) out.norm_target = interval::enclose_decimal(rc.norm_target);
    for (const auto& t : split_list(join_list(rc.theta))) {
        // the enclosing parse of a boundary decimal like 1 sticks one ulp out
        // of the closed unit chart domain; narrow to the part inside, where
        // the chart certificate speaks
        const interval th = interval::enclose_decimal(t);
        const double lo = std::max(th.lo(), -1.0), hi = std::min(th.hi(), 1.0);
        if (lo > hi)
            throw interval_error("config: theta lies outside the closed unit chart domain");
        out.theta.push_back(interval(lo, hi));
    }
    for (const auto& s : split_list(join_list(rc.seed)))
        out.seed.push_back(interval::enclose_decimal(s).mid());
    out.connect = rc.connect;
    out.outdir = rc.output_dir;
    return out;
}

double u_at(const cosine_seq& a, double x) {
    double u = a[0].mid();
    for (int k = 1; k <= a.order(); ++k)
        u += 2.0 * a[k].mid() * std::cos(static_cast<double>(k) * x);
    return u;
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw interval_error("figures: cannot open " + path.string() + " for writing");
    return out;
}

bool stage_equilibrium(const run_config& rc) {
    fs::create_directories(rc.outdir);
    cosine_seq a0(rc.prob.nu, rc.prob.K);
    if (static_cast<int>(rc.seed.size()) > rc.prob.K + 1)
        throw interval_error("config: Newton seed is longer than the truncation");
    for (std::size_t i = 0; i < rc.seed.size(); ++i)
        a0[static_cast<int>(i)] = interval(rc.seed[i]);
    const cosine_seq a = newton_equilibrium(rc.prob, a0);
    const equilibrium_certificate eq = validate_equilibrium(rc.prob, a);
    write_certificate(rc.outdir / "equilibrium.json",
                      certificate_document("equilibrium", rc.prob, json_of(eq)));
    if (eq.success)
        std::cout << "equilibrium: certified, r = " << fmt(eq.r.hi()) << "  (Y0 = "
                  << fmt(eq.Y0.hi()) << ", Z0 = " << fmt(eq.Z0.hi()) << ", Z1 = "
                  << fmt(eq.Z1.hi()) << ", Z2 = " << fmt(eq.Z2.hi()) << ")\n";
    else
        std::cout << "equilibrium: FAILED, no negative radii-polynomial value  (Y0 = "
                  << fmt(eq.Y0.hi()) << ", Z0 = " << fmt(eq.Z0.hi()) << ", Z1 = "
                  << fmt(eq.Z1.hi()) << ", Z2 = " << fmt(eq.Z2.hi()) << ")\n";
    return eq.success;
}

bool stage_eigen(const fs::path& outdir) {
    const cert_json doc = read_certificate(outdir / "equilibrium.json", "equilibrium");
    const fisher_problem prob = problem_from_json(doc.at("problem"));
    const equilibrium_certificate eq = equilibrium_from_json(doc);
    if (!eq.success)
        throw interval_error("eigen: the stored equilibrium certificate is not validated");
    const auto evs = approx_eigs(dg_matrix(prob, eq.a_bar));
    cert_json pairs = cert_json::array();
    bool ok = true;
    int count = 0;
    for (const auto& ev : evs) {
        if (!(ev.value.real() > 0.0)) continue;
        if (std::abs(ev.value.imag()) > 1e-9)
            throw interval_error("eigen: an unstable eigenvalue is not real");
        std::vector<double> xi0(static_cast<std::size_t>(prob.K) + 1);
        for (int k = 0; k <= prob.K; ++k) xi0[static_cast<std::size_t>(k)] = ev.vec(k).real();
        const eigenpair_certificate ec = validate_eigenpair(prob, eq, ev.value.real(), xi0);
        pairs.push_back(json_of(ec));
        ok = ok && ec.success;
        std::cout << "eigen: lambda = " << num(ec.lambda_bar.mid()) << ", r = " << fmt(ec.r.hi())
                  << (ec.success ? "" : "  [FAILED]") << "\n";
        ++count;
    }
    write_certificate(outdir / "eigen.json",
                      certificate_document("eigenpairs", prob, cert_json{{"pairs", pairs}}));
    if (count == 0) std::cout << "eigen: no unstable eigenvalues at this equilibrium\n";
    return ok;
}

bool stage_morse(const fs::path& outdir) {
    const cert_json doc = read_certificate(outdir / "equilibrium.json", "equilibrium");
    const fisher_problem prob = problem_from_json(doc.at("problem"));
    const equilibrium_certificate eq = equilibrium_from_json(doc);
    std::vector<eigenpair_certificate> certs;
    if (fs::exists(outdir / "eigen.json")) {
        const cert_json ed = read_certificate(outdir / "eigen.json", "eigenpairs");
        for (const auto& p : ed.at("pairs")) {
            eigenpair_certificate ec = eigenpair_from_json(p);
            if (ec.success) certs.push_back(std::move(ec));
        }
    }
    const morse_certificate mc = verify_morse_index(prob, eq, certs);
    write_certificate(outdir / "morse.json", certificate_document("morse", prob, json_of(mc)));
    if (mc.success)
        std::cout << "morse: certified index m = " << mc.m << "  (spectral gap product = "
                  << fmt(mc.product.hi()) << " < 1)\n";
    else
        std::cout << "morse: FAILED, spectral gap product = " << fmt(mc.product.hi())
                  << " does not stay below 1\n";
    return mc.success;
}

bool stage_manifold(const run_config& rc) {
    const cert_json doc = read_certificate(rc.outdir / "equilibrium.json", "equilibrium");
    const fisher_problem prob = problem_from_json(doc.at("problem"));
    const equilibrium_certificate eq = equilibrium_from_json(doc);
    linear_data L;
    if (rc.d == 2) {
        for (int k = 0; k <= eq.a_bar.order(); ++k)
            if (!(eq.a_bar[k] == interval(0.0)))
                throw interval_error(
                    "manifold: two-parameter charts are implemented at the zero equilibrium only");
        interval s1(1.0), s2(1.0);
        if (!rc.scalings.empty()) {
            s1 = rc.scalings[0];
            s2 = rc.scalings[1];
        }
        L = origin_linear_data(prob, s1, s2);
        if (rc.scalings.empty()) {
            const auto s = auto_scalings(solve_homological(L, prob, rc.M));
            L = origin_linear_data(prob, s[0], s[1]);
        }
    } else {
        const cert_json ed = read_certificate(rc.outdir / "eigen.json", "eigenpairs");
        const auto& pairs = ed.at("pairs");
        if (pairs.empty())
            throw interval_error("manifold: no validated unstable eigenpair to chart");
        const eigenpair_certificate ec = eigenpair_from_json(pairs[0]);
        interval s(1.0);
        if (rc.norm_target)
            s = norm_target_scaling(ec.xi_bar, *rc.norm_target);
        else if (!rc.scalings.empty())
            s = rc.scalings[0];
        L = saddle_linear_data(eq, ec, s);
        if (!rc.norm_target && rc.scalings.empty()) {
            s = auto_scalings(solve_homological(L, prob, rc.M))[0];
            L = saddle_linear_data(eq, ec, s);
        }
    }
    const manifold_approx mf = solve_homological(L, prob, rc.M);
    write_certificate(rc.outdir / "manifold.json",
                      certificate_document("manifold_chart", prob,
                                           cert_json{{"linear", json_of(mf.linear)},
                                                     {"p", json_of(mf.p)}}));
    double hmax = 0.0;
    for (double h : homological_residuals(mf)) hmax = std::max(hmax, h);
    std::cout << "manifold: chart solved, d = " << rc.d << ", M = " << rc.M[0];
    if (rc.d == 2) std::cout << "," << rc.M[1];
    std::cout << ", scalings = [";
    for (std::size_t j = 0; j < mf.linear.scalings.size(); ++j)
        std::cout << (j ? ", " : "") << num(mf.linear.scalings[j].mid());
    std::cout << "], max homological residual = " << fmt(hmax) << "\n";
    return true;
}

bool stage_validate(const fs::path& outdir) {
    const cert_json doc = read_certificate(outdir / "manifold.json", "manifold_chart");
    const manifold_approx mf = chart_from_json(doc);
    const manifold_certificate mc = validate_manifold(mf);
    write_certificate(outdir / "manifold_certificate.json",
                      certificate_document("manifold", mf.problem, json_of(mc)));
    if (mc.success)
        std::cout << "validate: certified, r_P = " << fmt(mc.r_P.hi()) << "  (Y = "
                  << fmt(mc.Y.hi()) << ", Z1 = " << fmt(mc.Z1.hi()) << ", Z2 = "
                  << fmt(mc.Z2.hi()) << ", epsilon = " << fmt(mc.epsilon.hi())
                  << ", k_support = " << mc.k_support << ")\n";
    else
        std::cout << "validate: FAILED, dominating bound is " << mc.dominant << "  (Y = "
                  << fmt(mc.Y.hi()) << ", Z1 = " << fmt(mc.Z1.hi()) << ", epsilon = "
                  << fmt(mc.epsilon.hi()) << ")\n";
    return mc.success;
}

void write_trace_csv(const fs::path& path, const manifold_approx& mf,
                     const std::vector<double>& theta0, double time) {
    const int nt = 41, nx = 65;
    const auto trace = flow_trace(mf, theta0, -time, 0.0, nt);
    std::ofstream out = open_csv(path);
    out << "t,x,u\n";
    for (int i = 0; i < nt; ++i) {
        const double t = -time + time * static_cast<double>(i) / (nt - 1);
        for (int j = 0; j < nx; ++j) {
            const double x = std::numbers::pi * static_cast<double>(j) / (nx - 1);
            out << num(t) << ',' << num(x) << ',' << num(u_at(trace[static_cast<std::size_t>(i)], x))
                << '\n';
        }
    }
}

bool stage_connect(const run_config& rc) {
    const cert_json doc = read_certificate(rc.outdir / "manifold_certificate.json", "manifold");
    const manifold_certificate mc = manifold_from_json(doc);
    std::vector<interval> theta = rc.theta;
    if (theta.empty()) {
        theta = {connection_parameter(mc.approx)};
        std::cout << "connect: line search proposes theta = " << num(theta[0].mid()) << "\n";
    }
    const connection_certificate cc = prove_connection(mc, theta);
    write_certificate(rc.outdir / "connection.json",
                      certificate_document("connection", mc.approx.problem, json_of(cc)));
    std::vector<double> th0;
    for (const interval& t : cc.theta) th0.push_back(t.mid());
    write_trace_csv(rc.outdir / "connection_trajectory.csv", mc.approx, th0, 1.0);
    if (cc.success)
        std::cout << "connect: certified, |P(theta) - sink|_nu + r_P <= "
                  << fmt(cc.image_distance.hi()) << " < 1 at theta = " << num(th0[0]) << "\n";
    else
        std::cout << "connect: FAILED, image distance " << fmt(cc.image_distance.hi())
                  << " does not land inside the unit basin\n";
    return cc.success;
}

int cmd_pipeline(const run_config& rc) {
    if (!stage_equilibrium(rc)) {
        std::cout << "pipeline: halted at equilibrium\n";
        return 2;
    }
    if (!stage_eigen(rc.outdir)) {
        std::cout << "pipeline: halted at eigen\n";
        return 2;
    }
    if (!stage_morse(rc.outdir)) {
        std::cout << "pipeline: halted at morse\n";
        return 2;
    }
    stage_manifold(rc);
    if (!stage_validate(rc.outdir)) {
        std::cout << "pipeline: halted at validate\n";
        return 2;
    }
    if (rc.connect || !rc.theta.empty()) {
        if (!stage_connect(rc)) {
            std::cout << "pipeline: halted at connect\n";
            return 2;
        }
    }
    std::cout << "pipeline: all stages certified\n";
    return 0;
}

int cmd_figures(const run_config& rc, const std::string& kind, double time) {
    fs::create_directories(rc.outdir);
    if (kind == "decay") {
        const manifold_approx mf =
            chart_from_json(read_certificate(rc.outdir / "manifold.json", "manifold_chart"));
        std::ofstream out = open_csv(rc.outdir / "decay.csv");
        if (mf.p.dim() == 1) {
            out << "m,norm\n";
            for (int m = 0; m <= mf.p.box()[0]; ++m)
                out << m << ',' << num(norm_nu(mf.p.at(m)).mid()) << '\n';
        } else {
            out << "m0,m1,norm\n";
            for (int i = 0; i < mf.p.count(); ++i) {
                const mindex m = mf.p.unflat(i);
                out << m[0] << ',' << m[1] << ',' << num(norm_nu(mf.p.block(i)).mid()) << '\n';
            }
        }
    } else if (kind == "surface") {
        const manifold_approx mf =
            chart_from_json(read_certificate(rc.outdir / "manifold.json", "manifold_chart"));
        std::ofstream out = open_csv(rc.outdir / "surface.csv");
        const int nx = mf.p.dim() == 1 ? 65 : 33;
        const int nth = mf.p.dim() == 1 ? 101 : 21;
        if (mf.p.dim() == 1) {
            out << "theta,x,u\n";
            for (int i = 0; i < nth; ++i) {
                const double th = -1.0 + 2.0 * static_cast<double>(i) / (nth - 1);
                const cosine_seq a = tf_eval(mf.p, {interval(th)});
                for (int j = 0; j < nx; ++j) {
                    const double x = std::numbers::pi * static_cast<double>(j) / (nx - 1);
                    out << num(th) << ',' << num(x) << ',' << num(u_at(a, x)) << '\n';
                }
            }
        } else {
            out << "theta1,theta2,x,u\n";
            for (int i1 = 0; i1 < nth; ++i1)
                for (int i2 = 0; i2 < nth; ++i2) {
                    const double t1 = -1.0 + 2.0 * static_cast<double>(i1) / (nth - 1);
                    const double t2 = -1.0 + 2.0 * static_cast<double>(i2) / (nth - 1);
                    const cosine_seq a = tf_eval(mf.p, {interval(t1), interval(t2)});
                    for (int j = 0; j < nx; ++j) {
                        const double x = std::numbers::pi * static_cast<double>(j) / (nx - 1);
                        out << num(t1) << ',' << num(t2) << ',' << num(x) << ',' << num(u_at(a, x))
                            << '\n';
                    }
                }
        }
    } else if (kind == "trajectory") {
        const manifold_approx mf =
            chart_from_json(read_certificate(rc.outdir / "manifold.json", "manifold_chart"));
        std::vector<double> th0;
        for (const interval& t : rc.theta) th0.push_back(t.mid());
        if (th0.empty()) {
            if (mf.p.dim() != 1)
                throw interval_error("figures: trajectory on a 2D chart needs an explicit theta");
            th0 = {0.9};
        }
        write_trace_csv(rc.outdir / "trajectory.csv", mf, th0, time);
    } else if (kind == "eigenfunction") {
        const cert_json ed = read_certificate(rc.outdir / "eigen.json", "eigenpairs");
        std::vector<eigenpair_certificate> certs;
        for (const auto& p : ed.at("pairs")) certs.push_back(eigenpair_from_json(p));
        if (certs.empty()) throw interval_error("figures: no stored eigenpairs to sample");
        std::ofstream out = open_csv(rc.outdir / "eigenfunction.csv");
        out << "x";
        for (std::size_t i = 0; i < certs.size(); ++i) out << ",xi_" << (i + 1);
        out << "\n";
        const int nx = 129;
        for (int j = 0; j < nx; ++j) {
            const double x = std::numbers::pi * static_cast<double>(j) / (nx - 1);
            out << num(x);
            for (const auto& ec : certs) out << ',' << num(u_at(ec.xi_bar, x));
            out << '\n';
        }
    } else {
        throw interval_error("figures: kind must be decay, surface, trajectory, or eigenfunction");
    }
    std::cout << "figures: wrote " << kind << " data under " << rc.outdir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"validated unstable-manifold certificates for Fisher-type PDEs"};
    app.require_subcommand(1);
    app.allow_config_extras(true);
    app.set_config("--config", "", "flat key=value configuration file");

    raw_config rc;
    app.add_option("--alpha", rc.alpha, "reaction coefficient (decimal string)")
        ->capture_default_str();
    app.add_option("--c", rc.c, "inhomogeneity: constant | poisson:<decimal>")
        ->capture_default_str();
    app.add_option("--nu", rc.nu, "sequence-space weight (decimal string)")->capture_default_str();
    app.add_option("--K", rc.K, "Fourier truncation")->capture_default_str();
    app.add_option("--M", rc.M, "Taylor truncation (integer or pair m0,m1)")
        ->expected(1, 2)
        ->capture_default_str();
    app.add_option("--d", rc.d, "chart dimension (1 or 2)")->capture_default_str();
    app.add_option("--scalings", rc.scalings, "eigenvector scalings: auto | comma decimals")
        ->expected(1, 2)
        ->capture_default_str();
    app.add_option("--norm_target", rc.norm_target,
                   "scale the chart so the linear coefficient norm hits this decimal");
    app.add_option("--theta", rc.theta, "chart parameter(s), comma decimals")->expected(0, 2);
    app.add_option("--seed", rc.seed, "Newton seed coefficients, comma decimals")
        ->expected(0, 64)
        ->capture_default_str();
    app.add_flag("--connect", rc.connect, "attempt the connection stage after validation");
    app.add_option("--output_dir", rc.output_dir, "artifact directory")->capture_default_str();

    CLI::App* sub_eq = app.add_subcommand("equilibrium", "validate an equilibrium from the Newton seed");
    CLI::App* sub_ei = app.add_subcommand("eigen", "enclose the unstable eigenpairs of the stored equilibrium");
    CLI::App* sub_mo = app.add_subcommand("morse", "certify the Morse index of the stored equilibrium");
    CLI::App* sub_ma = app.add_subcommand("manifold", "solve the homological equations for the chart");
    CLI::App* sub_va = app.add_subcommand("validate", "run the contraction argument on the stored chart");
    CLI::App* sub_co = app.add_subcommand("connect", "prove the heteroclinic orbit from the stored chart");
    CLI::App* sub_pi = app.add_subcommand("pipeline", "run every stage in order");
    CLI::App* sub_fi = app.add_subcommand("figures", "emit CSV figure data from stored certificates");

    std::string kind;
    double time = 1.0;
    sub_fi->add_option("--kind", kind, "decay | surface | trajectory | eigenfunction")->required();
    sub_fi->add_option("--time", time, "backward time span for trajectory data")
        ->capture_default_str();

    for (CLI::App* s : {sub_eq, sub_ei, sub_mo, sub_ma, sub_va, sub_co, sub_pi, sub_fi})
        s->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const run_config cfg = resolve(rc);
        if (sub_eq->parsed()) return stage_equilibrium(cfg) ? 0 : 2;
        if (sub_ei->parsed()) return stage_eigen(cfg.outdir) ? 0 : 2;
        if (sub_mo->parsed()) return stage_morse(cfg.outdir) ? 0 : 2;
        if (sub_ma->parsed()) {
            stage_manifold(cfg);
            return 0;
        }
        if (sub_va->parsed()) return stage_validate(cfg.outdir) ? 0 : 2;
        if (sub_co->parsed()) return stage_connect(cfg) ? 0 : 2;
        if (sub_pi->parsed()) return cmd_pipeline(cfg);
        if (sub_fi->parsed()) return cmd_figures(cfg, kind, time);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
