#ifndef PARMVAL_MANIFOLD_HPP
#define PARMVAL_MANIFOLD_HPP

// Taylor expansion of unstable-manifold charts. The invariance equation
// g(P(theta)) = DP(theta) Lambda theta, read per Taylor order m in Fourier
// space, couples the unknown coefficient p_m to the lower orders only:
//   [(lambda.m) I - Dg(p_0)] p_m = alpha (c * (p <> p)_m),   |m| >= 2,
// where <> is the order-m self-convolution with the p_m-bearing terms
// removed. Orders 0 and e_j are pinned to the equilibrium and the scaled
// eigenvectors. The same block lower-triangular structure drives the solver,
// the Newton polish, and the explicit approximate inverse used by the
// validation bounds.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenpairs.hpp"
#include "fft_conv.hpp"
#include "fisher.hpp"
#include "fourier_taylor.hpp"
#include "interval.hpp"
#include "linalg.hpp"
#include "sequence.hpp"

namespace parmval {

// equilibrium, unstable eigenvalues and scaled eigenvectors feeding a chart;
// centers are floats wrapped in degenerate intervals, radii collect both the
// certificate errors and the rounding defect of the scaling
struct linear_data {
    cosine_seq a_bar;
    interval r_a;
    std::vector<interval> lambdas;
    std::vector<cosine_seq> xis;
    std::vector<interval> r_xis;
    std::vector<interval> scalings;
};

// no integer combination m.lambda with 2 <= |m| <= max(bound, m_bound) may
// meet an eigenvalue again; beyond |m| > max(lambda)/min(lambda) the
// combination outgrows every eigenvalue, so the scan is finite
inline bool check_nonresonance(const std::vector<interval>& lambdas, int m_bound = 0) {
    const int d = static_cast<int>(lambdas.size());
    if (d < 1 || d > 2) throw interval_error("check_nonresonance: one or two eigenvalues expected");
    double lo = lambdas[0].lo(), hi = lambdas[0].hi();
    for (const interval& lam : lambdas) {
        if (!(lam.lo() > 0.0))
            throw interval_error("check_nonresonance: eigenvalues must be strictly positive");
        lo = std::min(lo, lam.lo());
        hi = std::max(hi, lam.hi());
    }
    int bound = static_cast<int>(std::ceil(hi / lo)) + 1;
    bound = std::max({bound, m_bound, 2});
    auto overlaps = [](const interval& a, const interval& b) {
        return !(a.lo() > b.hi() || b.lo() > a.hi());
    };
    for (int m0 = 0; m0 <= bound; ++m0)
        for (int m1 = 0; m1 <= (d == 2 ? bound - m0 : 0); ++m1) {
            if (m0 + m1 < 2) continue;
            interval dot = interval(static_cast<double>(m0)) * lambdas[0];
            if (d == 2) dot = dot + interval(static_cast<double>(m1)) * lambdas[1];
            for (const interval& lam : lambdas)
                if (overlaps(dot, lam)) return false;
        }
    return true;
}

namespace detail {

// scale an eigenvector enclosure by s, keeping a float center and folding the
// rounding spill plus the scaled certificate radius into one error radius
inline std::pair<cosine_seq, interval> scaled_center(const cosine_seq& xi, const interval& s,
                                                     const interval& r_cert) {
    cosine_seq out(xi.nu(), xi.order());
    const std::vector<interval> w = norm_weights(xi.nu(), xi.order());
    interval spill(0.0);
    for (int k = 0; k <= xi.order(); ++k) {
        const interval prod = s * xi[k];
        const double c = prod.mid();
        out[k] = interval(c);
        spill = spill + w[static_cast<std::size_t>(k)] * mag(prod - interval(c));
    }
    return {out, mag(s) * r_cert + spill};
}

} // namespace detail

// one-dimensional data from validated equilibrium and eigenpair certificates
inline linear_data saddle_linear_data(const equilibrium_certificate& eq,
                                      const eigenpair_certificate& ec, const interval& s) {
    if (!eq.success)
        throw interval_error("saddle_linear_data: equilibrium certificate is not validated");
    if (!ec.success)
        throw interval_error("saddle_linear_data: eigenpair certificate is not validated");
    if (!(ec.lambda_bar.lo() > 0.0))
        throw interval_error("saddle_linear_data: eigenvalue enclosure is not strictly positive");
    linear_data L;
    L.a_bar = eq.a_bar;
    L.r_a = eq.r;
    L.lambdas = {ec.lambda_bar};
    auto [xs, rx] = detail::scaled_center(ec.xi_bar, s, ec.r);
    L.xis = {xs};
    L.r_xis = {rx};
    L.scalings = {s};
    return L;
}

// two-dimensional data at the zero equilibrium: the linearization is diagonal
// with eigenvalues alpha - k^2, so modes 0 and 1 are exact eigenvectors
inline linear_data origin_linear_data(const fisher_problem& prob, const interval& s1,
                                      const interval& s2) {
    const interval lam2 = prob.alpha - interval(1.0);
    if (!(lam2.lo() > 0.0))
        throw interval_error("origin_linear_data: two unstable modes need alpha > 1");
    linear_data L;
    L.a_bar = cosine_seq(prob.nu, prob.K);
    L.r_a = interval(0.0);
    L.lambdas = {prob.alpha, lam2};
    L.scalings = {s1, s2};
    for (int j = 0; j < 2; ++j) {
        auto [xs, rx] = detail::scaled_center(cosine_seq::basis(prob.nu, prob.K, j),
                                              L.scalings[static_cast<std::size_t>(j)], interval(0.0));
        L.xis.push_back(xs);
        L.r_xis.push_back(rx);
    }
    if (!check_nonresonance(L.lambdas))
        throw interval_error("origin_linear_data: resonant eigenvalue pair");
    return L;
}

struct manifold_approx {
    fourier_taylor_seq p;
    linear_data linear;
    fisher_problem problem;
};

// block lower-triangular float matrix over the Taylor box; empty slot = zero
struct tf_blocks {
    int d = 1;
    mindex M{0, 0};
    int K = 0;
    std::vector<Eigen::MatrixXd> blk;

    tf_blocks() = default;
    tf_blocks(int d_, mindex M_, int K_) : d(d_), M(M_), K(K_) {
        if (d == 1) M[1] = 0;
        blk.assign(static_cast<std::size_t>(count()) * static_cast<std::size_t>(count()),
                   Eigen::MatrixXd());
    }
    int count() const { return (M[0] + 1) * (M[1] + 1); }
    int flat(const mindex& m) const { return m[0] * (M[1] + 1) + m[1]; }
    mindex unflat(int i) const { return {i / (M[1] + 1), i % (M[1] + 1)}; }
    Eigen::MatrixXd& at(const mindex& m, const mindex& l) {
        return blk[static_cast<std::size_t>(flat(m)) * static_cast<std::size_t>(count()) +
                   static_cast<std::size_t>(flat(l))];
    }
    const Eigen::MatrixXd& at(const mindex& m, const mindex& l) const {
        return blk[static_cast<std::size_t>(flat(m)) * static_cast<std::size_t>(count()) +
                   static_cast<std::size_t>(flat(l))];
    }
    bool filled(const mindex& m, const mindex& l) const { return at(m, l).size() > 0; }
};

namespace detail {

inline std::vector<double> pad_to(std::vector<double> v, int K) {
    v.resize(static_cast<std::size_t>(K) + 1, 0.0);
    return v;
}

// float centers of all stored Taylor coefficients, flat order
inline std::vector<std::vector<double>> float_coeffs(const fourier_taylor_seq& p) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(p.count()));
    for (int i = 0; i < p.count(); ++i) out.push_back(seq_mid(p.block(i)));
    return out;
}

inline double lambda_dot(const std::vector<double>& lam, const mindex& m) {
    double s = lam[0] * m[0];
    if (lam.size() > 1) s += lam[1] * m[1];
    return s;
}

} // namespace detail

// float derivative of the truncated chart map at the stored coefficients:
// rows of order <= 1 are exactly -I, higher diagonal blocks are the shifted
// linearization, and the (m,l) block below depends on m-l only
inline tf_blocks df_blocks(const manifold_approx& mf) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    tf_blocks B(p.dim(), p.box(), K);
    const double alpha = mf.problem.alpha.mid();
    std::vector<double> lam;
    for (const interval& l : mf.linear.lambdas) lam.push_back(l.mid());
    const std::vector<double> c = detail::seq_mid(finite_part(mf.problem.c));
    std::vector<std::vector<double>> cw;
    const std::vector<std::vector<double>> pf = detail::float_coeffs(p);
    for (int i = 0; i < p.count(); ++i) cw.push_back(fft_cos_conv(c, pf[static_cast<std::size_t>(i)]));

    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) <= 1) {
            B.at(m, m) = -Eigen::MatrixXd::Identity(K + 1, K + 1);
            continue;
        }
        Eigen::MatrixXd D = 2.0 * alpha * detail::conv_op(cw[0], K);
        const double shift = detail::lambda_dot(lam, m);
        for (int k = 0; k <= K; ++k) D(k, k) += shift + static_cast<double>(k) * k - alpha;
        B.at(m, m) = D;
        for (int j = 0; j < i; ++j) {
            const mindex l = p.unflat(j);
            if (!mindex_leq(l, m) || (l == m)) continue;
            const mindex diff = mindex_sub(m, l);
            B.at(m, l) = 2.0 * alpha * detail::conv_op(cw[static_cast<std::size_t>(p.flat(diff))], K);
        }
    }
    return B;
}

// forward substitution through the order blocks in flat order
inline Eigen::VectorXd block_backsolve(const tf_blocks& B, const Eigen::VectorXd& rhs) {
    const int n = B.count() * (B.K + 1);
    if (rhs.size() != n) throw interval_error("block_backsolve: size mismatch");
    Eigen::VectorXd h(n);
    for (int i = 0; i < B.count(); ++i) {
        const mindex m = B.unflat(i);
        Eigen::VectorXd y = rhs.segment(i * (B.K + 1), B.K + 1);
        for (int j = 0; j < i; ++j) {
            const mindex l = B.unflat(j);
            if (!B.filled(m, l)) continue;
            y -= B.at(m, l) * h.segment(j * (B.K + 1), B.K + 1);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B.at(m, m));
        if (!lu.isInvertible()) throw interval_error("block_backsolve: singular diagonal block");
        h.segment(i * (B.K + 1), B.K + 1) = lu.solve(y);
    }
    return h;
}

// explicit block inverse; rows of order <= 1 are forced to exactly -I so the
// residual rows pinning the linear data pass through the inverse unchanged
inline tf_blocks invert_blocks(const tf_blocks& B) {
    tf_blocks A(B.d, B.M, B.K);
    const int n = B.count();
    std::vector<Eigen::MatrixXd> dinv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const mindex m = B.unflat(i);
        if (mindex_sum(m) <= 1) {
            dinv[static_cast<std::size_t>(i)] = -Eigen::MatrixXd::Identity(B.K + 1, B.K + 1);
            continue;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B.at(m, m));
        if (!lu.isInvertible()) throw interval_error("invert_blocks: singular diagonal block");
        dinv[static_cast<std::size_t>(i)] = lu.inverse();
    }
    for (int jl = 0; jl < n; ++jl) {
        const mindex l = B.unflat(jl);
        for (int i = jl; i < n; ++i) {
            const mindex m = B.unflat(i);
            if (!mindex_leq(l, m)) continue;
            if (i == jl) {
                A.at(m, l) = dinv[static_cast<std::size_t>(i)];
                continue;
            }
            Eigen::MatrixXd S;
            for (int j = jl; j < i; ++j) {
                const mindex q = B.unflat(j);
                if (!mindex_leq(l, q) || !mindex_leq(q, m)) continue;
                if (!B.filled(m, q) || !A.filled(q, l)) continue;
                if (S.size() == 0)
                    S = B.at(m, q) * A.at(q, l);
                else
                    S += B.at(m, q) * A.at(q, l);
            }
            if (S.size() > 0) A.at(m, l) = -(dinv[static_cast<std::size_t>(i)] * S);
        }
    }
    return A;
}

// finite blocks plus a diagonal tail rule: identity on orders <= 1, and
// (lambda.m + k^2 - alpha)^(+-1) outside the finite box otherwise
struct tf_operator {
    tf_blocks finite;
    std::vector<interval> lambdas;
    interval alpha;
    bool reciprocal_tail = false;

    interval tail_diag(const mindex& m, int k) const {
        if (mindex_leq(m, finite.M) && k <= finite.K)
            throw interval_error("tf_operator: index lies in the finite block");
        if (mindex_sum(m) <= 1) return interval(1.0);
        interval D = interval(static_cast<double>(k) * k) - alpha;
        D = D + interval(static_cast<double>(m[0])) * lambdas[0];
        if (lambdas.size() > 1) D = D + interval(static_cast<double>(m[1])) * lambdas[1];
        if (!reciprocal_tail) return D;
        if (!(D.lo() > 0.0))
            throw interval_error("tf_operator: tail diagonal is not strictly positive");
        return interval(1.0) / D;
    }
};

// approximate inverse of the chart derivative and its approximate inverse
// counterpart; first element inverts, second multiplies back
inline std::pair<tf_operator, tf_operator> inverse_pair(const manifold_approx& mf) {
    tf_blocks df = df_blocks(mf);
    tf_operator A{invert_blocks(df), mf.linear.lambdas, mf.problem.alpha, true};
    tf_operator Ad{std::move(df), mf.linear.lambdas, mf.problem.alpha, false};
    return {std::move(A), std::move(Ad)};
}

namespace detail {

// float residual of the truncated chart map, flat layout (m,k)
inline Eigen::VectorXd chart_residual_float(const manifold_approx& mf) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    const double alpha = mf.problem.alpha.mid();
    std::vector<double> lam;
    for (const interval& l : mf.linear.lambdas) lam.push_back(l.mid());
    const std::vector<double> c = detail::seq_mid(finite_part(mf.problem.c));
    const std::vector<std::vector<double>> pf = float_coeffs(p);
    const std::vector<double> abar = pad_to(seq_mid(mf.linear.a_bar), K);
    Eigen::VectorXd r(p.count() * (K + 1));
    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        const int base = i * (K + 1);
        if (mindex_sum(m) == 0) {
            for (int k = 0; k <= K; ++k) r(base + k) = abar[static_cast<std::size_t>(k)] - pf[0][static_cast<std::size_t>(k)];
            continue;
        }
        if (mindex_sum(m) == 1) {
            const int j = (m[0] == 1) ? 0 : 1;
            const std::vector<double> xi =
                pad_to(seq_mid(mf.linear.xis[static_cast<std::size_t>(j)]), K);
            for (int k = 0; k <= K; ++k)
                r(base + k) = xi[static_cast<std::size_t>(k)] - pf[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            continue;
        }
        std::vector<double> quad(2 * static_cast<std::size_t>(K) + 1, 0.0);
        for (int j = 0; j < p.count(); ++j) {
            const mindex l = p.unflat(j);
            if (!mindex_leq(l, m)) continue;
            const mindex nrem = mindex_sub(m, l);
            const std::vector<double> term =
                fft_cos_conv(pf[static_cast<std::size_t>(j)], pf[static_cast<std::size_t>(p.flat(nrem))]);
            for (std::size_t s = 0; s < term.size() && s < quad.size(); ++s) quad[s] += term[s];
        }
        const std::vector<double> cc = fft_cos_conv(c, quad);
        const double shift = lambda_dot(lam, m);
        for (int k = 0; k <= K; ++k) {
            double v = (shift + static_cast<double>(k) * k - alpha) * pf[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (k < static_cast<int>(cc.size())) v += alpha * cc[static_cast<std::size_t>(k)];
            r(base + k) = v;
        }
    }
    return r;
}

} // namespace detail

// order-by-order solve of the homological equations, followed by optional
// Newton polish sweeps over the whole block system
inline manifold_approx solve_homological(const linear_data& L, const fisher_problem& prob,
                                         const mindex& M, int polish_steps = 0) {
    const int d = static_cast<int>(L.lambdas.size());
    if (static_cast<int>(L.xis.size()) != d)
        throw interval_error("solve_homological: eigenvector count does not match dimension");
    for (int j = 0; j < d; ++j)
        if (M[j] < 1) throw interval_error("solve_homological: box must contain the first order");
    if (!check_nonresonance(L.lambdas))
        throw interval_error("solve_homological: resonant eigenvalue combination");
    const int K = prob.K;
    fourier_taylor_seq p(d, M, K, prob.nu);
    const std::vector<double> abar = detail::pad_to(detail::seq_mid(L.a_bar), K);
    for (int k = 0; k <= K; ++k) p.block(0)[k] = interval(abar[static_cast<std::size_t>(k)]);
    for (int j = 0; j < d; ++j) {
        const mindex ej = (j == 0) ? mindex{1, 0} : mindex{0, 1};
        const std::vector<double> xi = detail::pad_to(detail::seq_mid(L.xis[static_cast<std::size_t>(j)]), K);
        for (int k = 0; k <= K; ++k) p.at(ej)[k] = interval(xi[static_cast<std::size_t>(k)]);
    }

    const double alpha = prob.alpha.mid();
    std::vector<double> lam;
    for (const interval& l : L.lambdas) lam.push_back(l.mid());
    const std::vector<double> c = detail::seq_mid(finite_part(prob.c));
    std::vector<std::vector<double>> pf(static_cast<std::size_t>(p.count()));
    pf[0] = abar;
    for (int j = 0; j < d; ++j) {
        const mindex ej = (j == 0) ? mindex{1, 0} : mindex{0, 1};
        pf[static_cast<std::size_t>(p.flat(ej))] = detail::pad_to(detail::seq_mid(L.xis[static_cast<std::size_t>(j)]), K);
    }
    const std::vector<double> w0 = fft_cos_conv(c, abar);
    const Eigen::MatrixXd G0 = 2.0 * alpha * detail::conv_op(w0, K);

    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) <= 1) continue;
        Eigen::MatrixXd D = G0;
        const double shift = detail::lambda_dot(lam, m);
        for (int k = 0; k <= K; ++k) D(k, k) += shift + static_cast<double>(k) * k - alpha;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
        const double rc = lu.rcond();
        if (!lu.isInvertible() || !(rc > 1e-14)) {
            double dist = shift - lam[0];
            int jmin = 0;
            for (int j = 1; j < d; ++j)
                if (std::abs(shift - lam[static_cast<std::size_t>(j)]) < std::abs(dist)) {
                    dist = shift - lam[static_cast<std::size_t>(j)];
                    jmin = j;
                }
            std::ostringstream os;
            os << "solve_homological: near-resonant order (" << m[0];
            if (d == 2) os << "," << m[1];
            os << "): m.lambda is within " << std::abs(dist) << " of eigenvalue " << jmin + 1;
            throw interval_error(os.str());
        }
        std::vector<double> quad(2 * static_cast<std::size_t>(K) + 1, 0.0);
        for (int j = 0; j < i; ++j) {
            const mindex l = p.unflat(j);
            if (!mindex_leq(l, m) || (l == m) || mindex_sum(l) == 0) continue;
            const mindex nrem = mindex_sub(m, l);
            if (nrem == m) continue;
            const std::vector<double> term =
                fft_cos_conv(pf[static_cast<std::size_t>(j)], pf[static_cast<std::size_t>(p.flat(nrem))]);
            for (std::size_t s = 0; s < term.size() && s < quad.size(); ++s) quad[s] += term[s];
        }
        // restore the two boundary pairs (0,m),(m,0) minus their excluded
        // p_m terms: both vanish, so only interior pairs contribute above
        const std::vector<double> cc = fft_cos_conv(c, quad);
        Eigen::VectorXd rhs(K + 1);
        for (int k = 0; k <= K; ++k)
            rhs(k) = (k < static_cast<int>(cc.size())) ? -alpha * cc[static_cast<std::size_t>(k)] : 0.0;
        const Eigen::VectorXd pm = lu.solve(rhs);
        std::vector<double>& slot = pf[static_cast<std::size_t>(i)];
        slot.assign(static_cast<std::size_t>(K) + 1, 0.0);
        for (int k = 0; k <= K; ++k) {
            slot[static_cast<std::size_t>(k)] = pm(k);
            p.block(i)[k] = interval(pm(k));
        }
    }

    manifold_approx mf{std::move(p), L, prob};
    for (int step = 0; step < polish_steps; ++step) {
        const Eigen::VectorXd res = detail::chart_residual_float(mf);
        const Eigen::VectorXd h = block_backsolve(df_blocks(mf), -res);
        for (int i = 0; i < mf.p.count(); ++i)
            for (int k = 0; k <= K; ++k)
                mf.p.block(i)[k] = interval(mf.p.block(i)[k].lo() + h(i * (K + 1) + k));
    }
    return mf;
}

// interval enclosure of c * (p ** p): box doubles, Fourier support is the
// full product support of c with the squared chart
inline fourier_taylor_seq quad_conv(const manifold_approx& mf) {
    const fourier_taylor_seq sq = tf_conv(mf.p, mf.p);
    const cosine_seq cf = finite_part(mf.problem.c);
    fourier_taylor_seq out(sq.dim(), sq.box(), cf.order() + sq.trunc(), sq.nu());
    for (int i = 0; i < sq.count(); ++i) out.block(i) = conv(cf, sq.block(i));
    return out;
}

// interval residual of the truncated chart map at the stored coefficients,
// evaluated with the float eigenvalue centers
inline fourier_taylor_seq chart_residual(const manifold_approx& mf, const fourier_taylor_seq& cc) {
    const fourier_taylor_seq& p = mf.p;
    const int K = p.trunc();
    fourier_taylor_seq out(p.dim(), p.box(), K, p.nu());
    std::vector<double> lam;
    for (const interval& l : mf.linear.lambdas) lam.push_back(l.mid());
    for (int i = 0; i < p.count(); ++i) {
        const mindex m = p.unflat(i);
        if (mindex_sum(m) == 0) {
            for (int k = 0; k <= std::min(K, mf.linear.a_bar.order()); ++k)
                out.block(i)[k] = mf.linear.a_bar[k] - p.block(i)[k];
            continue;
        }
        if (mindex_sum(m) == 1) {
            const int j = (m[0] == 1) ? 0 : 1;
            const cosine_seq& xi = mf.linear.xis[static_cast<std::size_t>(j)];
            for (int k = 0; k <= K; ++k) {
                const interval xk = (k <= xi.order()) ? xi[k] : interval(0.0);
                out.block(i)[k] = xk - p.block(i)[k];
            }
            continue;
        }
        const interval shift = interval(detail::lambda_dot(lam, m));
        const cosine_seq& ccm = cc.block(cc.flat(m));
        for (int k = 0; k <= K; ++k) {
            interval v = (shift + interval(static_cast<double>(k) * k) - mf.problem.alpha) * p.block(i)[k];
            if (k <= ccm.order()) v = v + mf.problem.alpha * ccm[k];
            out.block(i)[k] = v;
        }
    }
    return out;
}

inline fourier_taylor_seq chart_residual(const manifold_approx& mf) {
    return chart_residual(mf, quad_conv(mf));
}

// per-order nu-norms of the float residual, flat order
inline std::vector<double> homological_residuals(const manifold_approx& mf) {
    const Eigen::VectorXd r = detail::chart_residual_float(mf);
    const int K = mf.p.trunc();
    const double nu = mf.p.nu().mid();
    std::vector<double> out;
    for (int i = 0; i < mf.p.count(); ++i) {
        double s = std::abs(r(i * (K + 1)));
        double w = 1.0;
        for (int k = 1; k <= K; ++k) {
            w *= nu;
            s += 2.0 * std::abs(r(i * (K + 1) + k)) * w;
        }
        out.push_back(s);
    }
    return out;
}

// sup over the supplied parameters of |g(P(theta)) - DP(theta) Lambda theta|
// in the nu-norm; a float diagnostic of how well the chart conjugates the flow
inline double conjugacy_residual(const manifold_approx& mf,
                                 const std::vector<std::array<double, 2>>& grid) {
    const fourier_taylor_seq& p = mf.p;
    fourier_taylor_seq q(p.dim(), p.box(), p.trunc(), p.nu());
    std::vector<double> lam;
    for (const interval& l : mf.linear.lambdas) lam.push_back(l.mid());
    for (int i = 0; i < p.count(); ++i) {
        const interval shift(detail::lambda_dot(lam, p.unflat(i)));
        q.block(i) = shift * p.block(i);
    }
    double worst = 0.0;
    for (const std::array<double, 2>& th : grid) {
        std::vector<interval> theta{interval(th[0])};
        if (p.dim() == 2) theta.push_back(interval(th[1]));
        const cosine_seq Pt = tf_eval(p, theta);
        const cosine_seq gp = g_eval(mf.problem, Pt);
        const cosine_seq dq = tf_eval(q, theta);
        worst = std::max(worst, norm_nu(gp - dq).hi());
    }
    return worst;
}

// scalings that pull the top-order coefficient norms down to the target;
// p_m(s theta) = s^m p_m(theta), so the correction is a root of the ratio
inline std::vector<interval> auto_scalings(const manifold_approx& mf, double target = 1e-14) {
    std::vector<interval> out;
    for (int j = 0; j < mf.p.dim(); ++j) {
        const mindex top = (j == 0) ? mindex{mf.p.box()[0], 0} : mindex{0, mf.p.box()[1]};
        const double nm = norm_nu(mf.p.block(mf.p.flat(top))).mid();
        const double s = (nm > target) ? std::pow(target / nm, 1.0 / mf.p.box()[j]) : 1.0;
        out.push_back(interval(s));
    }
    return out;
}

inline interval norm_target_scaling(const cosine_seq& xi, const interval& target) {
    const interval n = finite_norm_nu(xi);
    if (!(n.lo() > 0.0)) throw interval_error("norm_target_scaling: vector has no mass");
    return target / n;
}

} // namespace parmval

#endif
