#ifndef PARMVAL_ORBIT_HPP
#define PARMVAL_ORBIT_HPP

// Saddle-to-sink connections. The constant-inhomogeneity sink (1,0,0,...)
// attracts everything in the open unit ball around it, so a heteroclinic
// orbit follows once a certified chart image lands strictly inside that
// ball: no rigorous time integration is needed.

#include <cmath>
#include <string>
#include <vector>

#include <parmval/manifold_bounds.hpp>

namespace parmval {

namespace detail {

inline bool constant_unit_c(const cosine_seq& c) {
    if (!(c.tail_norm() == interval(0.0))) return false;
    if (!(c[0] == interval(1.0))) return false;
    for (int k = 1; k <= c.order(); ++k)
        if (!(c[k] == interval(0.0))) return false;
    return true;
}

// |a - (1,0,0,...)|_nu as an interval, tail included
inline interval sink_distance(const cosine_seq& a) {
    cosine_seq d = a;
    d[0] = d[0] - interval(1.0);
    return norm_nu(d);
}

} // namespace detail

// basin membership: true iff the rigorous upper bound on |a - sink|_nu is
// strictly below one; the ball radius is an analytic fact of the constant
// unit inhomogeneity and is not re-derived here
inline bool attracting_check(const fisher_problem& prob, const cosine_seq& a) {
    if (!detail::constant_unit_c(prob.c))
        throw interval_error(
            "attracting_check: the basin lemma needs the constant unit inhomogeneity");
    return detail::sink_distance(a).hi() < 1.0;
}

struct connection_certificate {
    manifold_certificate source;
    std::vector<interval> theta;
    interval image_distance{0.0}; // |P(theta) - sink|_nu + r_P
    cosine_seq sink;
    bool success = false;
};

// triangle inequality around the certified chart: the true manifold point at
// theta lies within r_P of the evaluated polynomial, so landing the sum
// strictly inside the unit ball proves the connecting orbit
inline connection_certificate prove_connection(const manifold_certificate& cert,
                                               const std::vector<interval>& theta) {
    if (!cert.success)
        throw interval_error("prove_connection: needs a validated manifold certificate");
    if (static_cast<int>(theta.size()) != cert.d)
        throw interval_error("prove_connection: parameter dimension mismatch");
    for (const interval& t : theta)
        if (!(mag(t).hi() <= 1.0))
            throw interval_error(
                "prove_connection: parameter outside the closed unit chart domain");
    const fisher_problem& prob = cert.approx.problem;
    if (!detail::constant_unit_c(prob.c))
        throw interval_error(
            "prove_connection: the sink basin is only explicit for the constant unit "
            "inhomogeneity");

    connection_certificate out;
    out.source = cert;
    out.theta = theta;
    out.sink = cosine_seq::basis(prob.nu, prob.K, 0);
    out.image_distance = detail::sink_distance(tf_eval(cert.approx.p, theta)) + cert.r_P;
    out.success = out.image_distance.hi() < 1.0;
    return out;
}

// float line search for the chart parameter whose image lands deepest in the
// basin; the result is only a candidate and must be re-checked rigorously
inline interval connection_parameter(const manifold_approx& mf, int grid = 201) {
    if (mf.p.dim() != 1)
        throw interval_error("connection_parameter: line search needs a one-parameter chart");
    if (grid < 3) throw interval_error("connection_parameter: grid too small");
    const auto dist = [&](double t) {
        return detail::sink_distance(tf_eval(mf.p, {interval(t)})).mid();
    };
    double best_t = -1.0;
    double best = dist(best_t);
    for (int i = 1; i < grid; ++i) {
        const double t = -1.0 + 2.0 * static_cast<double>(i) / (grid - 1);
        const double v = dist(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    const double h = 2.0 / (grid - 1);
    double lo = std::max(-1.0, best_t - h);
    double hi = std::min(1.0, best_t + h);
    for (int it = 0; it < 100; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (dist(m1) <= dist(m2))
            hi = m2;
        else
            lo = m1;
    }
    return interval(0.5 * (lo + hi));
}

// non-rigorous orbit samples a(t_i) = P(e^{lambda t_i} theta0) on a uniform
// time grid; the exponential must keep every parameter inside the closed
// unit chart domain, which bounds how far forward the trace can go
inline std::vector<cosine_seq> flow_trace(const manifold_approx& mf,
                                          const std::vector<double>& theta0, double t0,
                                          double t1, int n) {
    if (theta0.size() != mf.linear.lambdas.size())
        throw interval_error("flow_trace: parameter dimension mismatch");
    if (n < 2) throw interval_error("flow_trace: need at least two samples");
    std::vector<cosine_seq> out;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
        std::vector<interval> th;
        for (std::size_t j = 0; j < theta0.size(); ++j) {
            const double v = std::exp(mf.linear.lambdas[j].mid() * t) * theta0[j];
            if (!(std::abs(v) <= 1.0))
                throw interval_error("flow_trace: the trajectory leaves the unit chart domain at t = " +
                                     std::to_string(t));
            th.push_back(interval(v));
        }
        cosine_seq a = tf_eval(mf.p, th);
        for (int k = 0; k <= a.order(); ++k) a[k] = interval(a[k].mid());
        out.push_back(a);
    }
    return out;
}

} // namespace parmval

#endif
