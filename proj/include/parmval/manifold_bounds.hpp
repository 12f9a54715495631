#ifndef PARMVAL_MANIFOLD_BOUNDS_HPP
#define PARMVAL_MANIFOLD_BOUNDS_HPP

// Contraction bounds for the chart zero-finding problem in the summed
// ell^1_nu norm over Taylor orders: a residual bound Y >= ||A F(p)||, a
// Lipschitz pair Z(r) = Z1 r + Z2 r^2 valid on the closed r-ball, and the
// approximate-inverse defect eps >= ||Id - A Adag||, which lives entirely on
// the finite block because the diagonal tail rules of A and Adag cancel
// exactly. A radius with negative upper endpoint of Y + Z(r) - r certifies a
// true chart within r of the computed coefficients, uniformly on the
// parameter polydisc.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fisher.hpp"
#include "fourier_taylor.hpp"
#include "interval.hpp"
#include "linalg.hpp"
#include "manifold.hpp"
#include "radii.hpp"
#include "sequence.hpp"

namespace parmval {

// upper bounds for |(c * p_l * v)_k| over unit-norm tail vectors v supported
// beyond mode K: the product sees c * p_l only through modes j +- k with
// j > K, and each such coefficient is worth at most |.|/(2 nu^j)
inline std::pair<iv_vector, iv_vector> tail_product_bound(const cosine_seq& c_bar,
                                                          const cosine_seq& p_l, int K) {
    const cosine_seq w = conv(finite_part(c_bar), finite_part(p_l));
    const std::vector<interval> nup = nu_powers(w.nu(), w.order() + K);
    const interval two(2.0);
    iv_vector h1(static_cast<std::size_t>(K) + 1, interval(0.0));
    iv_vector h2(static_cast<std::size_t>(K) + 1, interval(0.0));
    for (int k = 0; k <= K; ++k) {
        for (int j = K + 1; j + k <= w.order(); ++j)
            h1[static_cast<std::size_t>(k)] =
                max(h1[static_cast<std::size_t>(k)], mag(w[j + k]) / (two * nup[static_cast<std::size_t>(j)]));
        for (int j = K + 1; j - k <= w.order(); ++j) {
            if (j - k < 0) continue;
            h2[static_cast<std::size_t>(k)] =
                max(h2[static_cast<std::size_t>(k)], mag(w[j - k]) / (two * nup[static_cast<std::size_t>(j)]));
        }
    }
    return {h1, h2};
}

namespace detail {

// interval mirror of the reflected-convolution operator matrix
inline iv_matrix iv_conv_op(const cosine_seq& w, int K) {
    iv_matrix T(K + 1, K + 1);
    auto at = [&](int k) { return (k <= w.order()) ? w[k] : interval(0.0); };
    for (int k = 0; k <= K; ++k) {
        T.at(k, 0) = at(k);
        for (int j = 1; j <= K; ++j) T.at(k, j) = at(std::abs(k - j)) + at(k + j);
    }
    return T;
}

// block mat-vec through the finite float blocks, optionally entrywise-absolute
inline fourier_taylor_seq blocks_apply(const tf_blocks& A, const fourier_taylor_seq& x,
                                       bool absolute) {
    if (A.M != x.box() || A.K != x.trunc())
        throw interval_error("blocks_apply: shape mismatch");
    fourier_taylor_seq out(x.dim(), x.box(), x.trunc(), x.nu());
    for (int i = 0; i < out.count(); ++i) {
        const mindex m = out.unflat(i);
        for (int j = 0; j <= i; ++j) {
            const mindex l = out.unflat(j);
            if (!mindex_leq(l, m) || !A.filled(m, l)) continue;
            const Eigen::MatrixXd& G = A.at(m, l);
            for (int k = 0; k <= A.K; ++k) {
                interval acc = out.block(i)[k];
                for (int jj = 0; jj <= A.K; ++jj) {
                    double g = G(k, jj);
                    if (g == 0.0) continue;
                    if (absolute) g = std::abs(g);
                    acc = acc + interval(g) * x.block(j)[jj];
                }
                out.block(i)[k] = acc;
            }
        }
    }
    return out;
}

inline std::vector<interval> lambda_radii(const manifold_approx& mf) {
    std::vector<interval> rad;
    for (const interval& lam : mf.linear.lambdas) rad.push_back(mag(lam - interval(lam.mid())));
    return rad;
}

// residual bound: finite rows through A, linear-data radii at orders <= 1,
// the eigenvalue-center deviation through |A|, and the Fourier / Taylor
// truncation tails divided by the diagonal of A
inline interval y_bound(const manifold_approx& mf, const tf_operator& A) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    const interval alpha = mf.problem.alpha;
    const fourier_taylor_seq cc = quad_conv(mf);
    const fourier_taylor_seq f = chart_residual(mf, cc);
    const fourier_taylor_seq Af = blocks_apply(A.finite, f, false);
    interval Y(0.0);
    for (int i = 0; i < Af.count(); ++i) Y = Y + norm_nu(Af.block(i));
    Y = Y + mf.linear.r_a;
    for (const interval& r : mf.linear.r_xis) Y = Y + r;

    const std::vector<interval> rad = lambda_radii(mf);
    fourier_taylor_seq delta(p.dim(), p.box(), K, p.nu());
    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) < 2) continue;
        interval base = interval(static_cast<double>(m[0])) * rad[0];
        if (rad.size() > 1) base = base + interval(static_cast<double>(m[1])) * rad[1];
        for (int k = 0; k <= K; ++k) delta.block(i)[k] = base * mag(p.block(i)[k]);
    }
    const fourier_taylor_seq Ad = blocks_apply(A.finite, delta, true);
    for (int i = 0; i < Ad.count(); ++i) Y = Y + norm_nu(Ad.block(i));

    const std::vector<interval> nup = nu_powers(p.nu(), cc.trunc());
    const interval two(2.0);
    for (int i = 0; i < cc.count(); ++i) {
        const mindex m = cc.unflat(i);
        if (mindex_sum(m) < 2) continue;
        const cosine_seq& w = cc.block(i);
        if (mindex_leq(m, p.box())) {
            for (int k = K + 1; k <= w.order(); ++k)
                Y = Y + two * alpha * mag(w[k]) * nup[static_cast<std::size_t>(k)] * A.tail_diag(m, k);
        } else {
            Y = Y + alpha * mag(w[0]) * A.tail_diag(m, 0);
            for (int k = 1; k <= w.order(); ++k)
                Y = Y + two * alpha * mag(w[k]) * nup[static_cast<std::size_t>(k)] * A.tail_diag(m, k);
        }
    }
    return Y;
}

struct z_parts {
    interval z1, z2, sigma1, sigma2;
};

// Lipschitz bounds: the finite rows collect the eigenvalue deviation, the
// tail-window products and the inhomogeneity tail into Delta tables pushed
// through |A|; the rows outside the finite block close with the reciprocal
// spectral gaps in k and in m
inline z_parts z_bound(const manifold_approx& mf, const tf_operator& A, const interval& eps) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    const interval alpha = mf.problem.alpha;
    const interval two(2.0);
    const interval cnorm = norm_nu(mf.problem.c);
    const interval ctail = mf.problem.c.tail_norm();
    const interval pnorm = tf_norm(p);
    const cosine_seq cf = finite_part(mf.problem.c);

    std::vector<iv_vector> hsum;
    hsum.reserve(static_cast<std::size_t>(p.count()));
    for (int i = 0; i < p.count(); ++i) {
        auto [h1, h2] = tail_product_bound(cf, p.block(i), K);
        for (int k = 0; k <= K; ++k)
            h1[static_cast<std::size_t>(k)] = h1[static_cast<std::size_t>(k)] + h2[static_cast<std::size_t>(k)];
        hsum.push_back(std::move(h1));
    }

    const std::vector<interval> nup = nu_powers(p.nu(), K);
    std::vector<interval> inv_nup;
    for (const interval& np : nup) inv_nup.push_back(interval(1.0) / np);
    const std::vector<interval> rad = lambda_radii(mf);

    fourier_taylor_seq d1(p.dim(), p.box(), K, p.nu());
    fourier_taylor_seq d2(p.dim(), p.box(), K, p.nu());
    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) < 2) continue;
        interval base = interval(static_cast<double>(m[0])) * rad[0];
        if (rad.size() > 1) base = base + interval(static_cast<double>(m[1])) * rad[1];
        const interval cinf = two * alpha * interval(static_cast<double>(mindex_sum(m))) * pnorm * ctail;
        for (int k = 0; k <= K; ++k) {
            interval win(0.0);
            for (int j = 0; j <= i; ++j) {
                const mindex l = p.unflat(j);
                if (!mindex_leq(l, m)) continue;
                win = win + hsum[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            }
            d1.block(i)[k] = base * inv_nup[static_cast<std::size_t>(k)] + two * alpha * win + cinf;
            d2.block(i)[k] = two * alpha * cnorm * inv_nup[static_cast<std::size_t>(k)];
        }
    }

    z_parts zp;
    zp.sigma1 = interval(0.0);
    zp.sigma2 = interval(0.0);
    const fourier_taylor_seq s1 = blocks_apply(A.finite, d1, true);
    const fourier_taylor_seq s2 = blocks_apply(A.finite, d2, true);
    for (int i = 0; i < p.count(); ++i) {
        zp.sigma1 = zp.sigma1 + norm_nu(s1.block(i));
        zp.sigma2 = zp.sigma2 + norm_nu(s2.block(i));
    }

    const interval kgap = interval(static_cast<double>(K) * K) - alpha;
    if (!(kgap.lo() > 0.0))
        throw interval_error("z_bound: Fourier tail gap K^2 - alpha is not positive");
    interval mgap = mf.linear.lambdas[0] * interval(static_cast<double>(p.box()[0]));
    if (p.dim() == 2) {
        const interval other = mf.linear.lambdas[1] * interval(static_cast<double>(p.box()[1]));
        mgap = interval(std::min(mgap.lo(), other.lo()), std::min(mgap.hi(), other.hi()));
    }
    mgap = mgap - alpha;
    if (!(mgap.lo() > 0.0))
        throw interval_error("z_bound: Taylor tail gap lambda.M - alpha is not positive");
    const interval bracket = interval(1.0) / kgap + interval(1.0) / mgap;

    zp.z1 = eps + zp.sigma1 + two * alpha * cnorm * pnorm * bracket;
    zp.z2 = zp.sigma2 + two * alpha * cnorm * bracket;
    return zp;
}

} // namespace detail

// weighted-column operator norm of Id - A Adag on the finite block; rows of
// order <= 1 cancel exactly and the diagonal tails of the two operators are
// reciprocal by construction, so this is the whole defect
inline interval approximate_inverse_defect(const manifold_approx& mf, const tf_blocks& A) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    const int n = p.count();
    const interval alpha = mf.problem.alpha;
    const interval two(2.0);
    const cosine_seq cf = finite_part(mf.problem.c);
    std::vector<double> lam;
    for (const interval& l : mf.linear.lambdas) lam.push_back(l.mid());

    std::vector<iv_matrix> off;
    off.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        iv_matrix T = detail::iv_conv_op(conv(cf, finite_part(p.block(i))), K);
        for (int r = 0; r < T.rows; ++r)
            for (int cidx = 0; cidx < T.cols; ++cidx) T.at(r, cidx) = two * alpha * T.at(r, cidx);
        off.push_back(std::move(T));
    }
    std::vector<iv_matrix> diag(static_cast<std::size_t>(n), iv_matrix(0, 0));
    for (int i = 0; i < n; ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) <= 1) continue;
        iv_matrix D = off[0];
        const interval shift(detail::lambda_dot(lam, m));
        for (int k = 0; k <= K; ++k)
            D.at(k, k) = D.at(k, k) + shift + interval(static_cast<double>(k) * k) - alpha;
        diag[static_cast<std::size_t>(i)] = std::move(D);
    }
    std::vector<iv_matrix> aprom(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                                 iv_matrix(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const mindex m = p.unflat(i), l = p.unflat(j);
            if (!mindex_leq(l, m) || !A.filled(m, l)) continue;
            aprom[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                promote(A.at(m, l));
        }

    const std::vector<interval> w = norm_weights(p.nu(), K);
    interval eps(0.0);
    for (int jl = 0; jl < n; ++jl) {
        const mindex l = p.unflat(jl);
        iv_vector colsum(static_cast<std::size_t>(K) + 1, interval(0.0));
        for (int i = jl; i < n; ++i) {
            const mindex m = p.unflat(i);
            if (!mindex_leq(l, m) || mindex_sum(m) <= 1) continue;
            iv_matrix E = (i == jl) ? iv_matrix::identity(K + 1) : iv_matrix(K + 1, K + 1);
            for (int j = jl; j <= i; ++j) {
                const mindex q = p.unflat(j);
                if (!mindex_leq(l, q) || !mindex_leq(q, m)) continue;
                const iv_matrix& Amj =
                    aprom[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
                if (Amj.rows == 0) continue;
                if (mindex_sum(q) <= 1) {
                    // derivative rows of order <= 1 are exactly -I on the diagonal
                    if (q == l)
                        for (int r = 0; r <= K; ++r)
                            for (int cidx = 0; cidx <= K; ++cidx)
                                E.at(r, cidx) = E.at(r, cidx) + Amj.at(r, cidx);
                    continue;
                }
                const iv_matrix& D = (q == l) ? diag[static_cast<std::size_t>(j)]
                                              : off[static_cast<std::size_t>(p.flat(mindex_sub(q, l)))];
                E = E - Amj * D;
            }
            for (int cidx = 0; cidx <= K; ++cidx) {
                interval s(0.0);
                for (int r = 0; r <= K; ++r) s = s + w[static_cast<std::size_t>(r)] * mag(E.at(r, cidx));
                colsum[static_cast<std::size_t>(cidx)] = colsum[static_cast<std::size_t>(cidx)] + s;
            }
        }
        for (int cidx = 0; cidx <= K; ++cidx)
            eps = max(eps, colsum[static_cast<std::size_t>(cidx)] / w[static_cast<std::size_t>(cidx)]);
    }
    return eps;
}

inline interval y_bound_1d(const manifold_approx& mf, const tf_operator& A) {
    if (mf.p.dim() != 1) throw interval_error("y_bound_1d: one-parameter chart expected");
    return detail::y_bound(mf, A);
}

inline interval y_bound_2d(const manifold_approx& mf, const tf_operator& A) {
    if (mf.p.dim() != 2) throw interval_error("y_bound_2d: two-parameter chart expected");
    return detail::y_bound(mf, A);
}

inline std::pair<interval, interval> z_bound_1d(const manifold_approx& mf, const tf_operator& A,
                                                const interval& eps) {
    if (mf.p.dim() != 1) throw interval_error("z_bound_1d: one-parameter chart expected");
    const detail::z_parts zp = detail::z_bound(mf, A, eps);
    return {zp.z1, zp.z2};
}

inline std::pair<interval, interval> z_bound_2d(const manifold_approx& mf, const tf_operator& A,
                                                const interval& eps) {
    if (mf.p.dim() != 2) throw interval_error("z_bound_2d: two-parameter chart expected");
    const detail::z_parts zp = detail::z_bound(mf, A, eps);
    return {zp.z1, zp.z2};
}

struct manifold_certificate {
    manifold_approx approx;
    interval r_P{0.0};
    interval Y{0.0};
    interval Z1{0.0};
    interval Z2{0.0};
    interval epsilon{0.0};
    interval sigma1{0.0};
    interval sigma2{0.0};
    int d = 1;
    int k_support = 0;
    radii_report radii;
    bool success = false;
    std::string dominant; // largest of Y / sigma1 / epsilon when validation fails
};

inline manifold_certificate validate_manifold(const manifold_approx& mf) {
    const int d = mf.p.dim();
    if (d == 2) {
        // the two-parameter bounds are stated at the origin with the
        // constant unit inhomogeneity
        const cosine_seq cf = finite_part(mf.problem.c);
        bool unit = !(mf.problem.c.tail_norm().hi() > 0.0) && cf[0].lo() == 1.0 && cf[0].hi() == 1.0;
        for (int k = 1; unit && k <= cf.order(); ++k)
            if (cf[k].lo() != 0.0 || cf[k].hi() != 0.0) unit = false;
        if (!unit)
            throw interval_error("validate_manifold: two-parameter bounds need the constant unit inhomogeneity");
        if (norm_nu(mf.linear.a_bar).hi() != 0.0 || mf.linear.r_a.hi() != 0.0)
            throw interval_error("validate_manifold: two-parameter bounds need exact origin data");
    }
    tf_operator A{invert_blocks(df_blocks(mf)), mf.linear.lambdas, mf.problem.alpha, true};

    manifold_certificate cert;
    cert.approx = mf;
    cert.d = d;
    cert.k_support = finite_part(mf.problem.c).order() + 2 * mf.p.trunc();
    cert.Y = detail::y_bound(mf, A);
    cert.epsilon = approximate_inverse_defect(mf, A.finite);
    const detail::z_parts zp = detail::z_bound(mf, A, cert.epsilon);
    cert.Z1 = zp.z1;
    cert.Z2 = zp.z2;
    cert.sigma1 = zp.sigma1;
    cert.sigma2 = zp.sigma2;
    cert.radii = find_radius(cert.Y, cert.Z1, cert.Z2);
    cert.success = cert.radii.success;
    cert.r_P = interval(cert.radii.r);
    if (!cert.success) {
        cert.dominant = "Y";
        double worst = cert.Y.hi();
        if (cert.sigma1.hi() > worst) {
            cert.dominant = "Sigma1";
            worst = cert.sigma1.hi();
        }
        if (cert.epsilon.hi() > worst) cert.dominant = "epsilon";
    }
    return cert;
}

} // namespace parmval

#endif
