#ifndef PARMVAL_FISHER_HPP
#define PARMVAL_FISHER_HPP

// Fisher vector field in cosine space,
//     g_k(a) = (alpha - k^2) a_k - alpha (c * a * a)_k,
// with numerical equilibria from a truncated Newton iteration and rigorous
// a-posteriori validation via the radii polynomial
//     p(r) = Z2 r^2 - (1 - Z0 - Z1) r + Y0 < 0.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "parmval/fft_conv.hpp"
#include "parmval/interval.hpp"
#include "parmval/linalg.hpp"
#include "parmval/radii.hpp"
#include "parmval/sequence.hpp"

namespace parmval {

struct fisher_problem {
    interval alpha{0.0};
    cosine_seq c;
    int K = 0;
    interval nu{2.0};

    fisher_problem() = default;
    fisher_problem(const interval& alpha_, const cosine_seq& c_, int K_, const interval& nu_)
        : alpha(alpha_), c(c_), K(K_), nu(nu_) {
        if (!(alpha.lo() > 0.0)) throw std::invalid_argument("fisher_problem: alpha must be positive");
        if (K < 1) throw std::invalid_argument("fisher_problem: K must be at least 1");
        if (!(sqrt(alpha).hi() < static_cast<double>(K) + 1.0))
            throw std::invalid_argument("fisher_problem: need sqrt(alpha) < K+1");
        if (!(c.nu() == nu)) throw std::invalid_argument("fisher_problem: inhomogeneity weight mismatch");
        if (c.order() > K) c = truncate(c, K);  // keep the split c = c^K + c^infty
    }
};

struct equilibrium_certificate {
    cosine_seq a_bar;          // validated approximate equilibrium (degenerate)
    block_operator A_K;        // approximate inverse, tail 1/(alpha - k^2)
    interval Y0{0.0}, Z0{0.0}, Z1{0.0}, Z2{0.0};
    interval Z1_printed{0.0};  // without the finite-row c^infty coupling term
    interval r{0.0};           // validation radius (degenerate, set on success)
    radii_report radii;
    bool success = false;
};

namespace detail {

inline std::vector<double> seq_mid(const cosine_seq& s) {
    std::vector<double> v(static_cast<std::size_t>(s.order()) + 1);
    for (int k = 0; k <= s.order(); ++k) v[static_cast<std::size_t>(k)] = s[k].mid();
    return v;
}

inline std::vector<double> g_trunc(double alpha, const std::vector<double>& c,
                                   const std::vector<double>& a, int K) {
    std::vector<double> cub = fft_cos_conv(fft_cos_conv(c, a), a);
    std::vector<double> g(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        const double kk = static_cast<double>(k) * k;
        g[static_cast<std::size_t>(k)] =
            (alpha - kk) * a[static_cast<std::size_t>(k)] - alpha * cub[static_cast<std::size_t>(k)];
    }
    return g;
}

// matrix of h -> (w * h)^K for the reflected convolution: column 0 is w_k,
// column j >= 1 is w_{|k-j|} + w_{k+j}
inline Eigen::MatrixXd conv_op(const std::vector<double>& w, int K) {
    auto w_at = [&](int m) {
        return m < static_cast<int>(w.size()) ? w[static_cast<std::size_t>(m)] : 0.0;
    };
    Eigen::MatrixXd T(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        T(k, 0) = w_at(k);
        for (int j = 1; j <= K; ++j) T(k, j) = w_at(std::abs(k - j)) + w_at(k + j);
    }
    return T;
}

inline Eigen::MatrixXd dg_trunc(double alpha, const std::vector<double>& c,
                                const std::vector<double>& a, int K) {
    Eigen::MatrixXd J = -2.0 * alpha * conv_op(fft_cos_conv(c, a), K);
    for (int k = 0; k <= K; ++k) J(k, k) += alpha - static_cast<double>(k) * k;
    return J;
}

} // namespace detail

// enclosure of g(a) on modes 0..order(c)+2*order(a) plus a tail bound; the
// argument must be tail-free (the linear part has no bounded image otherwise)
inline cosine_seq g_eval(const fisher_problem& prob, const cosine_seq& a) {
    if (!(a.tail_norm() == interval(0.0)))
        throw std::invalid_argument("g_eval: argument must be tail-free");
    cosine_seq cub = conv(conv(prob.c, a), a);
    cosine_seq g(a.nu(), cub.order());
    for (int k = 0; k <= cub.order(); ++k) {
        g[k] = interval(0.0) - prob.alpha * cub[k];
        if (k <= a.order()) {
            const interval k2(static_cast<double>(k) * k);
            g[k] = g[k] + (prob.alpha - k2) * a[k];
        }
    }
    g.set_tail_norm(mag(prob.alpha) * cub.tail_norm());
    return g;
}

// Newton iteration on the K-truncation until the sup norm of g^K drops below
// 1e-14; returns the equilibrium as degenerate intervals
inline cosine_seq newton_equilibrium(const fisher_problem& prob, const cosine_seq& a0) {
    if (!(a0.tail_norm() == interval(0.0)))
        throw std::invalid_argument("newton_equilibrium: seed must be tail-free");
    const int K = prob.K;
    const double alpha = prob.alpha.mid();
    const std::vector<double> c = detail::seq_mid(prob.c);

    std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= std::min(K, a0.order()); ++k) a[static_cast<std::size_t>(k)] = a0[k].mid();

    std::ostringstream trace;
    for (int it = 0; it < 50; ++it) {
        std::vector<double> g = detail::g_trunc(alpha, c, a, K);
        double res = 0.0;
        for (double v : g) res = std::max(res, std::abs(v));
        trace << "iter " << it << ": |g|_inf = " << res << "\n";
        if (!std::isfinite(res))
            throw std::runtime_error("newton_equilibrium diverged:\n" + trace.str());
        if (res < 1e-14) {
            cosine_seq out(prob.nu, K);
            for (int k = 0; k <= K; ++k) out[k] = interval(a[static_cast<std::size_t>(k)]);
            return out;
        }
        Eigen::MatrixXd J = detail::dg_trunc(alpha, c, a, K);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (std::abs(lu.determinant()) < 1e-300)
            throw std::runtime_error("newton_equilibrium: singular Jacobian:\n" + trace.str());
        Eigen::VectorXd rhs(K + 1);
        for (int k = 0; k <= K; ++k) rhs(k) = g[static_cast<std::size_t>(k)];
        Eigen::VectorXd step = lu.solve(rhs);
        for (int k = 0; k <= K; ++k) a[static_cast<std::size_t>(k)] -= step(k);
    }
    throw std::runtime_error("newton_equilibrium: no convergence in 50 iterations:\n" + trace.str());
}

// finite block Dg^K(a^K) (diagonal alpha - k^2 minus 2 alpha times the
// convolution operator of c^K * a^K) with diagonal tail rule alpha - k^2
inline block_operator dg_matrix(const fisher_problem& prob, const cosine_seq& a) {
    const int K = prob.K;
    cosine_seq aK(a.nu(), std::min(a.order(), K));
    for (int k = 0; k <= aK.order(); ++k) aK[k] = a[k];
    cosine_seq w = conv(finite_part(prob.c), aK);
    auto w_at = [&](int m) { return m <= w.order() ? w[m] : interval(0.0); };

    const interval two_alpha = interval(2.0) * prob.alpha;
    iv_matrix B(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        B.at(k, 0) = interval(0.0) - two_alpha * w_at(k);
        for (int j = 1; j <= K; ++j)
            B.at(k, j) = interval(0.0) - two_alpha * (w_at(std::abs(k - j)) + w_at(k + j));
        B.at(k, k) = B.at(k, k) + (prob.alpha - interval(static_cast<double>(k) * k));
    }
    return block_operator{B, tail_rule::diag(prob.alpha), prob.nu};
}

inline equilibrium_certificate validate_equilibrium(const fisher_problem& prob,
                                                    const cosine_seq& a_in) {
    const int K = prob.K;
    const interval nu = prob.nu;
    if (!(a_in.tail_norm() == interval(0.0)))
        throw std::invalid_argument("validate_equilibrium: approximation must be tail-free");
    if (a_in.order() > K)
        throw std::invalid_argument("validate_equilibrium: approximation exceeds truncation order");
    cosine_seq a(nu, K);
    for (int k = 0; k <= a_in.order(); ++k) a[k] = a_in[k];

    const interval alpha = prob.alpha;
    const cosine_seq c_fin = finite_part(prob.c);
    const interval ctail = prob.c.tail_norm();
    const interval kp1sq = interval((static_cast<double>(K) + 1.0) * (K + 1.0)) - alpha;

    block_operator DgK = dg_matrix(prob, a);
    iv_matrix AK = approx_inverse(DgK.block);

    const iv_vector w = norm_weights(nu, K);
    const interval normA_fin = weighted_op_norm(AK, w);
    const interval norm_a = norm_nu(a);
    const interval norm_c = norm_nu(prob.c);

    // Y0: defect of the approximation under the preconditioner
    cosine_seq cub = conv(conv(c_fin, a), a);
    iv_vector gk(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        gk[static_cast<std::size_t>(k)] =
            (alpha - interval(static_cast<double>(k) * k)) * a[k] - alpha * cub[k];
    iv_vector AgK = AK * gk;
    interval t1(0.0);
    for (int k = 0; k <= K; ++k) t1 = t1 + w[static_cast<std::size_t>(k)] * mag(AgK[static_cast<std::size_t>(k)]);
    const interval a_sq = pow_int(norm_a, 2);
    interval t2 = alpha * normA_fin * a_sq * ctail;
    interval t3 = alpha * ctail * a_sq / kp1sq;
    const iv_vector nup = nu_powers(nu, cub.order());
    interval t4(0.0);
    for (int k = K + 1; k <= cub.order(); ++k)
        t4 = t4 + mag(cub[k]) * nup[static_cast<std::size_t>(k)] /
                      (interval(static_cast<double>(k) * k) - alpha);
    t4 = interval(2.0) * alpha * t4;
    const interval Y0 = t1 + t2 + t3 + t4;

    // Z0: quality of the approximate inverse on the finite block
    const interval Z0 = weighted_op_norm(iv_matrix::identity(K + 1) - AK * DgK.block, w);

    // Z1: truncation coupling through the shifted windows of c^K * a^K, the
    // tail rows, and (beyond the printed bound) the finite-row c^infty part
    cosine_seq w2 = conv(c_fin, a);
    const iv_vector nupw = nu_powers(nu, w2.order() + K);
    iv_vector beta(static_cast<std::size_t>(K) + 1, interval(0.0));
    for (int k = 0; k <= K; ++k) {
        interval b1(0.0), b2(0.0);
        for (int j = K + 1; j <= w2.order() - k; ++j)
            b1 = max(b1, mag(w2[j + k]) / (interval(2.0) * nupw[static_cast<std::size_t>(j)]));
        for (int j = K + 1; j <= w2.order() + k; ++j)
            b2 = max(b2, mag(w2[j - k]) / (interval(2.0) * nupw[static_cast<std::size_t>(j)]));
        beta[static_cast<std::size_t>(k)] = b1 + b2;
    }
    interval row0(0.0);
    for (int k = 0; k <= K; ++k) row0 = row0 + mag(AK.at(0, k)) * beta[static_cast<std::size_t>(k)];
    interval rows(0.0);
    for (int n = 1; n <= K; ++n) {
        interval s(0.0);
        for (int k = 0; k <= K; ++k) s = s + mag(AK.at(n, k)) * beta[static_cast<std::size_t>(k)];
        rows = rows + s * nupw[static_cast<std::size_t>(n)];
    }
    const interval Z1_printed = interval(2.0) * alpha * row0 + interval(4.0) * alpha * rows +
                                interval(2.0) * alpha * norm_c * norm_a / kp1sq;
    const interval Z1 = Z1_printed + interval(2.0) * alpha * normA_fin * ctail * norm_a;

    equilibrium_certificate cert;
    cert.a_bar = a;
    cert.A_K = block_operator{AK, tail_rule::inv_diag(alpha), nu};
    const interval Z2 = interval(2.0) * alpha * max(op_norm(cert.A_K), interval(1.0)) *
                        max(norm_c, interval(1.0));

    cert.Y0 = Y0;
    cert.Z0 = Z0;
    cert.Z1 = Z1;
    cert.Z1_printed = Z1_printed;
    cert.Z2 = Z2;
    cert.radii = find_radius(Y0, Z0 + Z1, Z2);
    cert.success = cert.radii.success;
    if (cert.success) cert.r = interval(cert.radii.r);
    return cert;
}

} // namespace parmval

#endif
