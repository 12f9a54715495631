#ifndef PARMVAL_EIGENPAIRS_HPP
#define PARMVAL_EIGENPAIRS_HPP

// Eigenvalue/eigenvector certificates for the linearization Dg at a validated
// equilibrium, plus a rigorous count of its unstable eigenvalues.
//
// A numerical pair (lambda, xi) is corrected through the bordered map
//   H(lambda, xi) = (xi_k* - s, Dg(a)xi - lambda xi)
// on R x l1_nu, where k* is the dominant mode of xi (phase condition). The
// contraction bounds split into a lambda-row and a xi-row radii polynomial;
// both must be negative at a common radius.
//
// The unstable count runs a spectral homotopy from the equilibrium
// preconditioner A to Dg^-1. Its hypotheses (diagonalizability, eigenvalues
// off the imaginary axis, basis condition number) are verified from Gershgorin
// discs of R A Q, where Q is the float eigenvector basis, R its float inverse,
// and the floating-point defects I - RQ enter through Neumann bounds.

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "parmval/fisher.hpp"

namespace parmval {

struct approx_eigenpair {
    std::complex<double> value;
    Eigen::VectorXcd vec;
};

// non-rigorous dense eigendecomposition of the finite block, sorted by
// descending real part; vectors scaled so the dominant entry is 1
inline std::vector<approx_eigenpair> approx_eigs(const block_operator& Dg_K) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(midpoint(Dg_K.block));
    if (es.info() != Eigen::Success) throw interval_error("approx_eigs: iteration failed");
    const int n = Dg_K.block.rows;
    std::vector<approx_eigenpair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        approx_eigenpair p{es.eigenvalues()(i), es.eigenvectors().col(i)};
        int dom = 0;
        for (int k = 1; k < n; ++k)
            if (std::abs(p.vec(k)) > std::abs(p.vec(dom))) dom = k;
        if (std::abs(p.vec(dom)) > 0.0) p.vec /= p.vec(dom);
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const approx_eigenpair& a, const approx_eigenpair& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return out;
}

struct eigen_bounds {
    interval Y0_1{0.0}, Y0_2{0.0};
    interval Z0_1{0.0}, Z0_2{0.0};
    interval Z1_1{0.0}, Z1_2{0.0};
    interval Z2_1{0.0}, Z2_2{0.0};
};

struct eigenpair_certificate {
    interval lambda_bar{0.0};  // eigenvalue enclosure (numerical value +- r on success)
    cosine_seq xi_bar;         // numerical eigenvector; the true one lies within r in |.|_nu
    interval r{0.0};
    interval s{0.0};           // phase value xi_bar[phase_mode]
    int phase_mode = 0;
    eigen_bounds bounds;       // constants used in the radii polynomials
    eigen_bounds printed;      // companion set: zero lambda-row curvature, whole-operator
                               // norm for Z2_2, row-indexed hat factors in Z1_2
    interval p1{0.0}, p2{0.0};                  // polynomial values at r
    interval p1_printed{0.0}, p2_printed{0.0};  // companion form without r on the linear term
    radii_report radii;
    bool success = false;
};

namespace detail {

// sup over high modes n of |w_{k+n}| / (2 nu^n) and |w_{n-k}| / (2 nu^n):
// the reach of a fixed convolution kernel w from the tail into row k
inline void hat_bounds(const cosine_seq& w2, int K, const iv_vector& nup,
                       iv_vector& ahat, iv_vector& bhat) {
    ahat.assign(static_cast<std::size_t>(K) + 1, interval(0.0));
    bhat.assign(static_cast<std::size_t>(K) + 1, interval(0.0));
    for (int k = 0; k <= K; ++k) {
        for (int n = K + 1; n <= std::min(2 * K - k, w2.order() - k); ++n)
            ahat[static_cast<std::size_t>(k)] = max(
                ahat[static_cast<std::size_t>(k)],
                mag(w2[k + n]) / (interval(2.0) * nup[static_cast<std::size_t>(n)]));
        for (int n = K + 1; n <= std::min(2 * K + k, w2.order() + k); ++n)
            bhat[static_cast<std::size_t>(k)] = max(
                bhat[static_cast<std::size_t>(k)],
                mag(w2[n - k]) / (interval(2.0) * nup[static_cast<std::size_t>(n)]));
    }
}

} // namespace detail

inline eigenpair_certificate validate_eigenpair(const fisher_problem& prob,
                                                const equilibrium_certificate& eq,
                                                double lambda0,
                                                const std::vector<double>& xi0) {
    if (!eq.success) throw interval_error("validate_eigenpair: equilibrium certificate not validated");
    if (!(eq.a_bar.nu() == prob.nu)) throw interval_error("validate_eigenpair: weight mismatch");
    const int K = prob.K;
    if (static_cast<int>(xi0.size()) > K + 1)
        throw std::invalid_argument("validate_eigenpair: eigenvector longer than the block");
    if (!std::isfinite(lambda0)) throw std::invalid_argument("validate_eigenpair: bad eigenvalue");

    eigenpair_certificate cert;
    cosine_seq xi(prob.nu, K);
    for (int k = 0; k < static_cast<int>(xi0.size()); ++k) xi[k] = interval(xi0[static_cast<std::size_t>(k)]);
    int kstar = 0;
    for (int k = 1; k <= K; ++k)
        if (xi[k].mag() > xi[kstar].mag()) kstar = k;
    if (xi[kstar].mag() == 0.0) throw std::invalid_argument("validate_eigenpair: zero eigenvector");
    cert.phase_mode = kstar;
    cert.s = xi[kstar];
    cert.xi_bar = xi;
    cert.lambda_bar = interval(lambda0);

    const interval one(1.0), two(2.0);
    const interval& alpha = prob.alpha;
    const interval two_alpha = two * alpha;
    const interval lam(lambda0);
    const cosine_seq c_fin = finite_part(prob.c);
    const interval c_tail = prob.c.tail_norm();
    const interval c_norm = norm_nu(prob.c);
    const interval cK_norm = finite_norm_nu(prob.c);
    const interval a_norm = norm_nu(eq.a_bar);
    const interval r_eq = eq.r;
    const interval atilde = a_norm + r_eq;
    // every remainder of the fixed data is routed through one factor:
    // |c^K| |a - a_bar| + |c^infty| |a|, with the equilibrium radius for |a - a_bar|
    const interval chat = cK_norm * r_eq + c_tail * atilde;
    const interval xi_norm = norm_nu(xi);
    const interval tail_gap = interval(static_cast<double>((K + 1) * (K + 1))) - alpha;

    iv_vector w = norm_weights(prob.nu, K);
    iv_vector nup = nu_powers(prob.nu, 3 * K + 1);

    cosine_seq w2 = conv(c_fin, eq.a_bar);
    cosine_seq cub = conv(w2, xi);
    iv_vector h(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        h[static_cast<std::size_t>(k)] =
            (alpha - interval(static_cast<double>(k) * k) - lam) * xi[k] - two_alpha * cub[k];

    // bordered derivative: phase row, then Dg(a_bar) - lambda with the -xi column
    block_operator DgK = dg_matrix(prob, eq.a_bar);
    iv_matrix DH(K + 2, K + 2);
    DH.at(0, 1 + kstar) = one;
    for (int k = 0; k <= K; ++k) {
        DH.at(1 + k, 0) = -xi[k];
        for (int j = 0; j <= K; ++j) DH.at(1 + k, 1 + j) = DgK.block.at(k, j);
        DH.at(1 + k, 1 + k) -= lam;
    }
    iv_matrix BK = approx_inverse(DH);

    const interval B11 = BK.at(0, 0);
    iv_vector B12(static_cast<std::size_t>(K) + 1), B21(static_cast<std::size_t>(K) + 1);
    iv_matrix B22(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        B12[static_cast<std::size_t>(k)] = BK.at(0, 1 + k);
        B21[static_cast<std::size_t>(k)] = BK.at(1 + k, 0);
        for (int j = 0; j <= K; ++j) B22.at(k, j) = BK.at(1 + k, 1 + j);
    }

    interval B12_dual(0.0), B12_max(0.0), B21_nu(0.0);
    for (int k = 0; k <= K; ++k) {
        B12_dual = max(B12_dual, mag(B12[static_cast<std::size_t>(k)]) / w[static_cast<std::size_t>(k)]);
        B12_max = max(B12_max, mag(B12[static_cast<std::size_t>(k)]));
        B21_nu += w[static_cast<std::size_t>(k)] * mag(B21[static_cast<std::size_t>(k)]);
    }
    const interval B22_w = weighted_op_norm(B22, w);
    const interval B22_op = max(B22_w, one / tail_gap);

    iv_vector ahat, bhat;
    detail::hat_bounds(w2, K, nup, ahat, bhat);

    eigen_bounds ub; // used
    eigen_bounds pb; // printed companions

    // residual of the phase row is exactly zero: s is defined as xi[kstar]
    const interval phase_res(0.0);
    interval B12h(0.0);
    for (int k = 0; k <= K; ++k)
        B12h += mag(B12[static_cast<std::size_t>(k)]) * mag(h[static_cast<std::size_t>(k)]);
    ub.Y0_1 = mag(B11) * phase_res + B12h + two_alpha * B12_dual * xi_norm * chat;

    iv_vector B22h = B22 * h;
    interval B22h_nu(0.0);
    for (int k = 0; k <= K; ++k) B22h_nu += w[static_cast<std::size_t>(k)] * mag(B22h[static_cast<std::size_t>(k)]);
    interval high(0.0);
    for (int k = K + 1; k <= cub.order(); ++k)
        high += two * two_alpha * mag(cub[k]) * nup[static_cast<std::size_t>(k)] /
                (interval(static_cast<double>(k) * k) - alpha);
    ub.Y0_2 = B21_nu * phase_res + B22h_nu + two_alpha * B22_w * xi_norm * chat + high +
              two_alpha * xi_norm * chat / tail_gap;

    iv_matrix M = iv_matrix::identity(K + 2) - BK * DH;
    interval row_dual(0.0), col_nu(0.0);
    iv_matrix M22(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        row_dual = max(row_dual, mag(M.at(0, 1 + k)) / w[static_cast<std::size_t>(k)]);
        col_nu += w[static_cast<std::size_t>(k)] * mag(M.at(1 + k, 0));
        for (int j = 0; j <= K; ++j) M22.at(k, j) = M.at(1 + k, 1 + j);
    }
    ub.Z0_1 = mag(M.at(0, 0)) + row_dual;
    ub.Z0_2 = col_nu + weighted_op_norm(M22, w);

    interval B12hat(0.0);
    for (int k = 0; k <= K; ++k)
        B12hat += mag(B12[static_cast<std::size_t>(k)]) *
                  (ahat[static_cast<std::size_t>(k)] + bhat[static_cast<std::size_t>(k)]);
    ub.Z1_1 = two_alpha * B12hat + two_alpha * B12_max * chat;

    interval rows_used(0.0), rows_printed(0.0);
    for (int k = 0; k <= K; ++k) {
        interval rmax(0.0), rdot_col(0.0), rdot_row(0.0);
        for (int j = 0; j <= K; ++j) {
            const interval bm = mag(B22.at(k, j));
            rmax = max(rmax, bm);
            rdot_col += bm * (ahat[static_cast<std::size_t>(j)] + bhat[static_cast<std::size_t>(j)]);
            rdot_row += bm * (ahat[static_cast<std::size_t>(k)] + bhat[static_cast<std::size_t>(k)]);
        }
        rows_used += w[static_cast<std::size_t>(k)] * two_alpha * (rmax * chat + rdot_col);
        if (k == 0)
            rows_printed += two_alpha * (rmax * chat + rdot_col);
        else
            rows_printed += two_alpha * (rmax * chat + two * rdot_row) * nup[static_cast<std::size_t>(k)];
    }
    ub.Z1_2 = rows_used + (two_alpha * c_norm * atilde + mag(lam)) / tail_gap;

    ub.Z2_1 = two * B12_dual;
    ub.Z2_2 = two * B22_op;

    pb = ub;
    pb.Z1_1 = interval(0.0);
    pb.Z1_2 = rows_printed + two_alpha * (c_norm * atilde + mag(lam)) / tail_gap;
    pb.Z2_1 = interval(0.0);
    pb.Z2_2 = max(mag(B11) + B12_dual, B21_nu + B22_op);

    cert.bounds = ub;
    cert.printed = pb;

    cert.radii = find_radius_pair(ub.Y0_1, ub.Z0_1 + ub.Z1_1, ub.Z2_1,
                                  ub.Y0_2, ub.Z0_2 + ub.Z1_2, ub.Z2_2);
    cert.success = cert.radii.success;
    if (cert.success) {
        const interval riv(cert.radii.r);
        cert.r = riv;
        cert.lambda_bar = lam + interval(-cert.radii.r, cert.radii.r);
        cert.p1 = radii_poly(ub.Y0_1, ub.Z0_1 + ub.Z1_1, ub.Z2_1, riv);
        cert.p2 = radii_poly(ub.Y0_2, ub.Z0_2 + ub.Z1_2, ub.Z2_2, riv);
        cert.p1_printed = pb.Z2_1 * riv * riv - (one - pb.Z1_1 - pb.Z0_1) + pb.Y0_1;
        cert.p2_printed = pb.Z2_2 * riv * riv - (one - pb.Z1_2 - pb.Z0_2) + pb.Y0_2;
    }
    return cert;
}

struct morse_certificate {
    int m = 0;                       // unstable eigenvalue count of Dg at the equilibrium
    interval mu0{0.0};               // spectral cone constant of the preconditioner
    interval epsilon{0.0};           // Z0 + Z1 + Z2 r from the equilibrium certificate
    interval qnorm_product{0.0};     // ||Q|| ||Q^-1|| for a true diagonalizing basis
    interval product{0.0};           // qnorm_product * mu0 * epsilon; < 1 certifies
    std::vector<interval> spectrum;  // real-part enclosures of the block eigenvalues
    bool success = false;
};

namespace detail {

inline interval civ_mod(const interval& re, const interval& im) {
    return sqrt(pow_int(re, 2) + pow_int(im, 2));
}

inline interval weighted_norm_c(const iv_matrix& re, const iv_matrix& im, const iv_vector& w) {
    interval best(0.0);
    for (int j = 0; j < re.cols; ++j) {
        interval s(0.0);
        for (int i = 0; i < re.rows; ++i) s += w[static_cast<std::size_t>(i)] * civ_mod(re.at(i, j), im.at(i, j));
        best = max(best, s / w[static_cast<std::size_t>(j)]);
    }
    return best;
}

inline interval inf_norm_c(const iv_matrix& re, const iv_matrix& im) {
    interval best(0.0);
    for (int i = 0; i < re.rows; ++i) {
        interval s(0.0);
        for (int j = 0; j < re.cols; ++j) s += civ_mod(re.at(i, j), im.at(i, j));
        best = max(best, s);
    }
    return best;
}

} // namespace detail

inline morse_certificate verify_morse_index(const fisher_problem& prob,
                                            const equilibrium_certificate& eq,
                                            const std::vector<eigenpair_certificate>& eig_certs = {}) {
    if (!eq.success) throw interval_error("verify_morse_index: equilibrium certificate not validated");
    if (!(eq.a_bar.nu() == prob.nu)) throw interval_error("verify_morse_index: weight mismatch");
    const int n = eq.A_K.block.rows;
    const interval one(1.0);
    iv_vector w = norm_weights(prob.nu, n - 1);

    Eigen::EigenSolver<Eigen::MatrixXd> es(midpoint(eq.A_K.block));
    if (es.info() != Eigen::Success) throw interval_error("verify_morse_index: eigensolver failed");
    Eigen::MatrixXcd Qc = es.eigenvectors();
    // balance columns in the weighted geometry before conditioning enters the check
    for (int j = 0; j < n; ++j) {
        double cn = 0.0;
        for (int i = 0; i < n; ++i) cn += w[static_cast<std::size_t>(i)].mid() * std::abs(Qc(i, j));
        if (cn > 0.0) Qc.col(j) *= w[static_cast<std::size_t>(j)].mid() / cn;
    }
    Eigen::MatrixXcd Rc = Qc.inverse();
    if (!Rc.allFinite()) throw interval_error("verify_morse_index: eigenvector basis numerically singular");

    const iv_matrix Qre = promote(Qc.real()), Qim = promote(Qc.imag());
    const iv_matrix Rre = promote(Rc.real()), Rim = promote(Rc.imag());
    const iv_matrix& A = eq.A_K.block;

    const iv_matrix AQre = A * Qre, AQim = A * Qim;
    const iv_matrix Ere = iv_matrix::identity(n) - (Rre * Qre - Rim * Qim);
    const iv_matrix Eim = Rre * Qim + Rim * Qre; // sign irrelevant for the moduli
    const iv_matrix Gre = Rre * AQre - Rim * AQim;
    const iv_matrix Gim = Rre * AQim + Rim * AQre;

    // Q^-1 A Q = G + D with ||D||_inf <= dlt (Neumann series in I - RQ)
    const interval Einf = detail::inf_norm_c(Ere, Eim);
    if (!(Einf.hi() < 1.0))
        throw interval_error("verify_morse_index: eigenvector basis too ill-conditioned");
    const interval dlt = Einf * detail::inf_norm_c(Gre, Gim) / (one - Einf);

    std::vector<interval> rad(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        interval s(0.0);
        for (int l = 0; l < n; ++l)
            if (l != i) s += detail::civ_mod(Gre.at(i, l), Gim.at(i, l));
        rad[static_cast<std::size_t>(i)] = s + dlt;
    }

    // pairwise disc separation certifies distinct eigenvalues, hence a true
    // diagonalizing basis Q(I + S) with the entrywise bounds below on S
    iv_matrix S(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            const interval dre = Gre.at(i, i) - Gre.at(j, j);
            const interval dim = Gim.at(i, i) - Gim.at(j, j);
            const interval mre(dre.mig()), mim(dim.mig());
            const interval dist = sqrt(mre * mre + mim * mim);
            if (!(dist.lo() > (rad[static_cast<std::size_t>(i)] + rad[static_cast<std::size_t>(j)]).hi()))
                throw interval_error("verify_morse_index: eigenvalue discs overlap");
            const interval gap = interval(dist.lo()) - rad[static_cast<std::size_t>(j)] - dlt;
            if (!(gap.lo() > 0.0))
                throw interval_error("verify_morse_index: eigenvalue discs overlap");
            S.at(i, j) = rad[static_cast<std::size_t>(i)] / gap;
            if (!(S.at(i, j).hi() < 1.0))
                throw interval_error("verify_morse_index: eigenvector correction not controlled");
        }
    const interval Snorm = weighted_op_norm(S, w);
    if (!(Snorm.hi() < 1.0))
        throw interval_error("verify_morse_index: eigenvector correction not controlled");

    const interval Qw = detail::weighted_norm_c(Qre, Qim, w);
    const interval Rw = detail::weighted_norm_c(Rre, Rim, w);
    const interval Ew = detail::weighted_norm_c(Ere, Eim, w);
    if (!(Ew.hi() < 1.0))
        throw interval_error("verify_morse_index: eigenvector basis too ill-conditioned");
    const interval Qinv_w = Rw / (one - Ew);

    morse_certificate cert;
    cert.qnorm_product =
        max(Qw * (one + Snorm), one) * max(Qinv_w / (one - Snorm), one);

    // disjoint real-centered discs contain one eigenvalue each, and conjugation
    // fixes such a disc, so its eigenvalue is real and contributes cone factor 1
    cert.mu0 = one;
    cert.spectrum.resize(static_cast<std::size_t>(n));
    cert.m = 0;
    for (int i = 0; i < n; ++i) {
        const interval cre = Gre.at(i, i), cim = Gim.at(i, i);
        const interval respan = cre + interval(-1.0, 1.0) * rad[static_cast<std::size_t>(i)];
        cert.spectrum[static_cast<std::size_t>(i)] = respan;
        if (respan.lo() > 0.0)
            ++cert.m;
        else if (!(respan.hi() < 0.0))
            throw interval_error("verify_morse_index: eigenvalue enclosure touches the imaginary axis");
        if (!(cim.lo() == 0.0 && cim.hi() == 0.0)) {
            const interval imb = mag(cim) + rad[static_cast<std::size_t>(i)];
            const interval reb(respan.mig());
            cert.mu0 = max(cert.mu0, sqrt(one + (imb / reb) * (imb / reb)));
        }
    }

    cert.epsilon = eq.Z0 + eq.Z1 + eq.Z2 * eq.r;
    cert.product = cert.qnorm_product * cert.mu0 * cert.epsilon;
    cert.success = cert.product.hi() < 1.0;

    int validated = 0;
    for (const auto& ec : eig_certs)
        if (ec.success && ec.lambda_bar.lo() > 0.0) ++validated;
    if (validated > cert.m)
        throw interval_error("verify_morse_index: more validated unstable pairs than the certified count");
    return cert;
}

} // namespace parmval

#endif
