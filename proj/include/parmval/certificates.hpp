#ifndef PARMVAL_CERTIFICATES_HPP
#define PARMVAL_CERTIFICATES_HPP

// JSON persistence for every proof artifact. Endpoints are stored as plain
// JSON numbers: the serializer emits shortest round-trip decimals and the
// parser recovers the exact double, so write -> read -> write is stable
// byte for byte and no interval ever widens across the file boundary.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "parmval/fisher.hpp"
#include "parmval/eigenpairs.hpp"
#include "parmval/manifold.hpp"
#include "parmval/manifold_bounds.hpp"
#include "parmval/orbit.hpp"

namespace parmval {

using cert_json = nlohmann::ordered_json;

inline constexpr int certificate_schema = 1;

inline cert_json json_of(const interval& x) { return cert_json::array({x.lo(), x.hi()}); }

inline interval interval_from_json(const cert_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw interval_error("certificate: an interval is a [lo, hi] pair");
    return interval(j[0].get<double>(), j[1].get<double>());
}

inline cert_json json_of(const std::vector<interval>& v) {
    cert_json a = cert_json::array();
    for (const interval& x : v) a.push_back(json_of(x));
    return a;
}

inline std::vector<interval> iv_vector_from_json(const cert_json& j) {
    std::vector<interval> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(interval_from_json(e));
    return v;
}

inline cert_json json_of(const cosine_seq& s) {
    cert_json coeffs = cert_json::array();
    for (int k = 0; k <= s.order(); ++k) coeffs.push_back(json_of(s[k]));
    return cert_json{{"nu", json_of(s.nu())}, {"coeffs", coeffs}, {"tail", json_of(s.tail_norm())}};
}

inline cosine_seq seq_from_json(const cert_json& j) {
    const cert_json& coeffs = j.at("coeffs");
    if (coeffs.empty()) throw interval_error("certificate: empty coefficient list");
    cosine_seq s(interval_from_json(j.at("nu")), static_cast<int>(coeffs.size()) - 1);
    for (int k = 0; k <= s.order(); ++k) s[k] = interval_from_json(coeffs[static_cast<std::size_t>(k)]);
    s.set_tail_norm(interval_from_json(j.at("tail")));
    return s;
}

inline std::string tail_rule_name(tail_rule::kind k) {
    switch (k) {
        case tail_rule::kind::zero: return "zero";
        case tail_rule::kind::identity: return "identity";
        case tail_rule::kind::inv_k2_minus_alpha: return "inv_k2_minus_alpha";
        case tail_rule::kind::k2_minus_alpha: return "k2_minus_alpha";
    }
    throw interval_error("certificate: unknown tail rule");
}

inline tail_rule::kind tail_rule_kind(const std::string& name) {
    if (name == "zero") return tail_rule::kind::zero;
    if (name == "identity") return tail_rule::kind::identity;
    if (name == "inv_k2_minus_alpha") return tail_rule::kind::inv_k2_minus_alpha;
    if (name == "k2_minus_alpha") return tail_rule::kind::k2_minus_alpha;
    throw interval_error("certificate: unknown tail rule \"" + name + "\"");
}

inline cert_json json_of(const block_operator& op) {
    cert_json entries = cert_json::array();
    for (const interval& x : op.block.d) entries.push_back(json_of(x));
    return cert_json{{"rows", op.block.rows},
                     {"cols", op.block.cols},
                     {"entries", entries},
                     {"tail_kind", tail_rule_name(op.tail.k)},
                     {"tail_alpha", json_of(op.tail.alpha)},
                     {"nu", json_of(op.nu)}};
}

inline block_operator block_operator_from_json(const cert_json& j) {
    block_operator op;
    op.block = iv_matrix(j.at("rows").get<int>(), j.at("cols").get<int>());
    const cert_json& entries = j.at("entries");
    if (entries.size() != op.block.d.size())
        throw interval_error("certificate: operator entry count does not match its shape");
    for (std::size_t i = 0; i < op.block.d.size(); ++i)
        op.block.d[i] = interval_from_json(entries[i]);
    op.tail = {tail_rule_kind(j.at("tail_kind").get<std::string>()),
               interval_from_json(j.at("tail_alpha"))};
    op.nu = interval_from_json(j.at("nu"));
    return op;
}

inline cert_json json_of(const fisher_problem& prob) {
    return cert_json{{"alpha", json_of(prob.alpha)},
                     {"c", json_of(prob.c)},
                     {"K", prob.K},
                     {"nu", json_of(prob.nu)}};
}

inline fisher_problem problem_from_json(const cert_json& j) {
    return fisher_problem(interval_from_json(j.at("alpha")), seq_from_json(j.at("c")),
                          j.at("K").get<int>(), interval_from_json(j.at("nu")));
}

inline cert_json json_of(const radii_report& rep) {
    return cert_json{{"success", rep.success},
                     {"r", rep.r},
                     {"r_max", rep.r_max},
                     {"value", json_of(rep.value)}};
}

inline radii_report radii_from_json(const cert_json& j) {
    radii_report rep;
    rep.success = j.at("success").get<bool>();
    rep.r = j.at("r").get<double>();
    rep.r_max = j.at("r_max").get<double>();
    rep.value = interval_from_json(j.at("value"));
    return rep;
}

inline cert_json json_of(const equilibrium_certificate& eq) {
    return cert_json{{"a_bar", json_of(eq.a_bar)},
                     {"A_K", json_of(eq.A_K)},
                     {"Y0", json_of(eq.Y0)},
                     {"Z0", json_of(eq.Z0)},
                     {"Z1", json_of(eq.Z1)},
                     {"Z2", json_of(eq.Z2)},
                     {"Z1_printed", json_of(eq.Z1_printed)},
                     {"r", json_of(eq.r)},
                     {"radii", json_of(eq.radii)},
                     {"success", eq.success}};
}

inline equilibrium_certificate equilibrium_from_json(const cert_json& j) {
    equilibrium_certificate eq;
    eq.a_bar = seq_from_json(j.at("a_bar"));
    eq.A_K = block_operator_from_json(j.at("A_K"));
    eq.Y0 = interval_from_json(j.at("Y0"));
    eq.Z0 = interval_from_json(j.at("Z0"));
    eq.Z1 = interval_from_json(j.at("Z1"));
    eq.Z2 = interval_from_json(j.at("Z2"));
    eq.Z1_printed = interval_from_json(j.at("Z1_printed"));
    eq.r = interval_from_json(j.at("r"));
    eq.radii = radii_from_json(j.at("radii"));
    eq.success = j.at("success").get<bool>();
    return eq;
}

inline cert_json json_of(const eigen_bounds& b) {
    return cert_json{{"Y0_1", json_of(b.Y0_1)}, {"Y0_2", json_of(b.Y0_2)},
                     {"Z0_1", json_of(b.Z0_1)}, {"Z0_2", json_of(b.Z0_2)},
                     {"Z1_1", json_of(b.Z1_1)}, {"Z1_2", json_of(b.Z1_2)},
                     {"Z2_1", json_of(b.Z2_1)}, {"Z2_2", json_of(b.Z2_2)}};
}

inline eigen_bounds eigen_bounds_from_json(const cert_json& j) {
    eigen_bounds b;
    b.Y0_1 = interval_from_json(j.at("Y0_1"));
    b.Y0_2 = interval_from_json(j.at("Y0_2"));
    b.Z0_1 = interval_from_json(j.at("Z0_1"));
    b.Z0_2 = interval_from_json(j.at("Z0_2"));
    b.Z1_1 = interval_from_json(j.at("Z1_1"));
    b.Z1_2 = interval_from_json(j.at("Z1_2"));
    b.Z2_1 = interval_from_json(j.at("Z2_1"));
    b.Z2_2 = interval_from_json(j.at("Z2_2"));
    return b;
}

inline cert_json json_of(const eigenpair_certificate& ec) {
    return cert_json{{"lambda_bar", json_of(ec.lambda_bar)},
                     {"xi_bar", json_of(ec.xi_bar)},
                     {"r", json_of(ec.r)},
                     {"s", json_of(ec.s)},
                     {"phase_mode", ec.phase_mode},
                     {"bounds", json_of(ec.bounds)},
                     {"printed", json_of(ec.printed)},
                     {"p1", json_of(ec.p1)},
                     {"p2", json_of(ec.p2)},
                     {"p1_printed", json_of(ec.p1_printed)},
                     {"p2_printed", json_of(ec.p2_printed)},
                     {"radii", json_of(ec.radii)},
                     {"success", ec.success}};
}

inline eigenpair_certificate eigenpair_from_json(const cert_json& j) {
    eigenpair_certificate ec;
    ec.lambda_bar = interval_from_json(j.at("lambda_bar"));
    ec.xi_bar = seq_from_json(j.at("xi_bar"));
    ec.r = interval_from_json(j.at("r"));
    ec.s = interval_from_json(j.at("s"));
    ec.phase_mode = j.at("phase_mode").get<int>();
    ec.bounds = eigen_bounds_from_json(j.at("bounds"));
    ec.printed = eigen_bounds_from_json(j.at("printed"));
    ec.p1 = interval_from_json(j.at("p1"));
    ec.p2 = interval_from_json(j.at("p2"));
    ec.p1_printed = interval_from_json(j.at("p1_printed"));
    ec.p2_printed = interval_from_json(j.at("p2_printed"));
    ec.radii = radii_from_json(j.at("radii"));
    ec.success = j.at("success").get<bool>();
    return ec;
}

inline cert_json json_of(const morse_certificate& mc) {
    return cert_json{{"m", mc.m},
                     {"mu0", json_of(mc.mu0)},
                     {"epsilon", json_of(mc.epsilon)},
                     {"qnorm_product", json_of(mc.qnorm_product)},
                     {"product", json_of(mc.product)},
                     {"spectrum", json_of(mc.spectrum)},
                     {"success", mc.success}};
}

inline morse_certificate morse_from_json(const cert_json& j) {
    morse_certificate mc;
    mc.m = j.at("m").get<int>();
    mc.mu0 = interval_from_json(j.at("mu0"));
    mc.epsilon = interval_from_json(j.at("epsilon"));
    mc.qnorm_product = interval_from_json(j.at("qnorm_product"));
    mc.product = interval_from_json(j.at("product"));
    mc.spectrum = iv_vector_from_json(j.at("spectrum"));
    mc.success = j.at("success").get<bool>();
    return mc;
}

inline cert_json json_of(const linear_data& L) {
    cert_json xis = cert_json::array();
    for (const cosine_seq& x : L.xis) xis.push_back(json_of(x));
    return cert_json{{"a_bar", json_of(L.a_bar)},
                     {"r_a", json_of(L.r_a)},
                     {"lambdas", json_of(L.lambdas)},
                     {"xis", xis},
                     {"r_xis", json_of(L.r_xis)},
                     {"scalings", json_of(L.scalings)}};
}

inline linear_data linear_from_json(const cert_json& j) {
    linear_data L;
    L.a_bar = seq_from_json(j.at("a_bar"));
    L.r_a = interval_from_json(j.at("r_a"));
    L.lambdas = iv_vector_from_json(j.at("lambdas"));
    for (const auto& x : j.at("xis")) L.xis.push_back(seq_from_json(x));
    L.r_xis = iv_vector_from_json(j.at("r_xis"));
    L.scalings = iv_vector_from_json(j.at("scalings"));
    return L;
}

inline cert_json json_of(const fourier_taylor_seq& p) {
    cert_json blocks = cert_json::array();
    for (int i = 0; i < p.count(); ++i) blocks.push_back(json_of(p.block(i)));
    return cert_json{{"d", p.dim()},
                     {"M", cert_json::array({p.box()[0], p.box()[1]})},
                     {"K", p.trunc()},
                     {"nu", json_of(p.nu())},
                     {"tail", json_of(p.tail_norm())},
                     {"blocks", blocks}};
}

inline fourier_taylor_seq tf_seq_from_json(const cert_json& j) {
    const cert_json& M = j.at("M");
    fourier_taylor_seq p(j.at("d").get<int>(), mindex{M[0].get<int>(), M[1].get<int>()},
                         j.at("K").get<int>(), interval_from_json(j.at("nu")));
    const cert_json& blocks = j.at("blocks");
    if (static_cast<int>(blocks.size()) != p.count())
        throw interval_error("certificate: chart block count does not match its box");
    for (int i = 0; i < p.count(); ++i) p.block(i) = seq_from_json(blocks[static_cast<std::size_t>(i)]);
    p.set_tail_norm(interval_from_json(j.at("tail")));
    return p;
}

inline cert_json json_of(const manifold_approx& mf) {
    return cert_json{{"problem", json_of(mf.problem)},
                     {"linear", json_of(mf.linear)},
                     {"p", json_of(mf.p)}};
}

inline manifold_approx chart_from_json(const cert_json& j) {
    manifold_approx mf;
    mf.problem = problem_from_json(j.at("problem"));
    mf.linear = linear_from_json(j.at("linear"));
    mf.p = tf_seq_from_json(j.at("p"));
    return mf;
}

inline cert_json json_of(const manifold_certificate& mc) {
    return cert_json{{"approx", json_of(mc.approx)},
                     {"r_P", json_of(mc.r_P)},
                     {"Y", json_of(mc.Y)},
                     {"Z1", json_of(mc.Z1)},
                     {"Z2", json_of(mc.Z2)},
                     {"epsilon", json_of(mc.epsilon)},
                     {"sigma1", json_of(mc.sigma1)},
                     {"sigma2", json_of(mc.sigma2)},
                     {"d", mc.d},
                     {"k_support", mc.k_support},
                     {"radii", json_of(mc.radii)},
                     {"success", mc.success},
                     {"dominant", mc.dominant}};
}

inline manifold_certificate manifold_from_json(const cert_json& j) {
    manifold_certificate mc;
    mc.approx = chart_from_json(j.at("approx"));
    mc.r_P = interval_from_json(j.at("r_P"));
    mc.Y = interval_from_json(j.at("Y"));
    mc.Z1 = interval_from_json(j.at("Z1"));
    mc.Z2 = interval_from_json(j.at("Z2"));
    mc.epsilon = interval_from_json(j.at("epsilon"));
    mc.sigma1 = interval_from_json(j.at("sigma1"));
    mc.sigma2 = interval_from_json(j.at("sigma2"));
    mc.d = j.at("d").get<int>();
    mc.k_support = j.at("k_support").get<int>();
    mc.radii = radii_from_json(j.at("radii"));
    mc.success = j.at("success").get<bool>();
    mc.dominant = j.at("dominant").get<std::string>();
    return mc;
}

inline cert_json json_of(const connection_certificate& cc) {
    return cert_json{{"source", json_of(cc.source)},
                     {"theta", json_of(cc.theta)},
                     {"image_distance", json_of(cc.image_distance)},
                     {"sink", json_of(cc.sink)},
                     {"success", cc.success}};
}

inline connection_certificate connection_from_json(const cert_json& j) {
    connection_certificate cc;
    cc.source = manifold_from_json(j.at("source"));
    cc.theta = iv_vector_from_json(j.at("theta"));
    cc.image_distance = interval_from_json(j.at("image_distance"));
    cc.sink = seq_from_json(j.at("sink"));
    cc.success = j.at("success").get<bool>();
    return cc;
}

// every file carries the schema version, its kind, and the full problem so
// that later stages chain from the artifacts alone
inline cert_json certificate_document(const std::string& kind, const fisher_problem& prob,
                                      cert_json body) {
    cert_json doc{{"schema", certificate_schema}, {"kind", kind}, {"problem", json_of(prob)}};
    for (auto& [key, val] : body.items()) doc[key] = std::move(val);
    return doc;
}

inline void write_certificate(const std::filesystem::path& path, const cert_json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw interval_error("certificate: cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw interval_error("certificate: write to " + path.string() + " failed");
}

inline cert_json read_certificate(const std::filesystem::path& path, const std::string& kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw interval_error("certificate: cannot open " + path.string());
    cert_json doc = cert_json::parse(in, nullptr, true);
    if (!doc.contains("schema") || doc.at("schema").get<int>() != certificate_schema)
        throw interval_error("certificate: " + path.string() + " has an unsupported schema version");
    if (!doc.contains("kind") || doc.at("kind").get<std::string>() != kind)
        throw interval_error("certificate: " + path.string() + " is not a \"" + kind + "\" file");
    return doc;
}

} // namespace parmval

#endif
