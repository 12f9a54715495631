#ifndef PARMVAL_FOURIER_TAYLOR_HPP
#define PARMVAL_FOURIER_TAYLOR_HPP

// Tensor coefficients p_{m,k}: Taylor order m (multi-index, d = 1 or 2) by
// cosine mode k, normed by sum_m |p_m|_nu. Dense storage over the box m <= M.

#include <array>
#include <vector>

#include "sequence.hpp"

namespace parmval {

using mindex = std::array<int, 2>; // second component unused when d == 1

inline int mindex_sum(const mindex& m) { return m[0] + m[1]; }

inline mindex mindex_add(const mindex& a, const mindex& b) { return {a[0] + b[0], a[1] + b[1]}; }

inline mindex mindex_sub(const mindex& a, const mindex& b) { return {a[0] - b[0], a[1] - b[1]}; }

inline bool mindex_leq(const mindex& a, const mindex& b) { return a[0] <= b[0] && a[1] <= b[1]; }

class fourier_taylor_seq {
    int d_ = 1;
    mindex M_{0, 0};
    int K_ = 0;
    interval nu_{2.0};
    std::vector<cosine_seq> p_;
    interval tail_{0.0};

public:
    fourier_taylor_seq() = default;

    fourier_taylor_seq(int d, mindex M, int K, interval nu) : d_(d), M_(M), K_(K), nu_(nu) {
        if (d != 1 && d != 2) throw interval_error("fourier_taylor_seq: d must be 1 or 2");
        if (d == 1) M_[1] = 0;
        if (M_[0] < 0 || M_[1] < 0) throw interval_error("fourier_taylor_seq: bad box");
        p_.assign(static_cast<std::size_t>(count()), cosine_seq(nu, K));
    }

    int dim() const { return d_; }
    const mindex& box() const { return M_; }
    int trunc() const { return K_; }
    const interval& nu() const { return nu_; }
    int count() const { return (M_[0] + 1) * (M_[1] + 1); }

    int flat(const mindex& m) const { return m[0] * (M_[1] + 1) + m[1]; }
    mindex unflat(int i) const { return {i / (M_[1] + 1), i % (M_[1] + 1)}; }

    cosine_seq& at(const mindex& m) {
        if (!mindex_leq(m, M_) || m[0] < 0 || m[1] < 0)
            throw interval_error("fourier_taylor_seq: index outside box");
        return p_[static_cast<std::size_t>(flat(m))];
    }
    const cosine_seq& at(const mindex& m) const {
        if (!mindex_leq(m, M_) || m[0] < 0 || m[1] < 0)
            throw interval_error("fourier_taylor_seq: index outside box");
        return p_[static_cast<std::size_t>(flat(m))];
    }
    cosine_seq& at(int m) { return at(mindex{m, 0}); }
    const cosine_seq& at(int m) const { return at(mindex{m, 0}); }

    // block by flat storage slot; the flat order is a linear extension of <=
    cosine_seq& block(int i) {
        if (i < 0 || i >= count()) throw interval_error("fourier_taylor_seq: flat index out of range");
        return p_[static_cast<std::size_t>(i)];
    }
    const cosine_seq& block(int i) const {
        if (i < 0 || i >= count()) throw interval_error("fourier_taylor_seq: flat index out of range");
        return p_[static_cast<std::size_t>(i)];
    }

    const interval& tail_norm() const { return tail_; }
    void set_tail_norm(const interval& t) {
        if (t.hi() < 0.0) throw interval_error("fourier_taylor_seq: negative tail bound");
        tail_ = t;
    }
};

inline void check_compatible(const fourier_taylor_seq& p, const fourier_taylor_seq& q) {
    if (p.dim() != q.dim() || p.trunc() != q.trunc() || !(p.nu() == q.nu()))
        throw interval_error("fourier_taylor tensors are incompatible");
}

// finite part of ||p||: sum over the box of |p_m|_nu (component tails included)
inline interval tf_finite_norm(const fourier_taylor_seq& p) {
    interval s(0.0);
    for (int i = 0; i < p.count(); ++i) s += norm_nu(p.at(p.unflat(i)));
    return s;
}

inline interval tf_norm(const fourier_taylor_seq& p) { return tf_finite_norm(p) + p.tail_norm(); }

// (p*q)_m = sum_{l <= m} conv(p_l, q_{m-l}); the box grows to M_p + M_q so no
// finite order is cut; order tails fold in by submultiplicativity
inline fourier_taylor_seq tf_conv(const fourier_taylor_seq& p, const fourier_taylor_seq& q) {
    check_compatible(p, q);
    mindex Mr = mindex_add(p.box(), q.box());
    fourier_taylor_seq r(p.dim(), Mr, 2 * p.trunc(), p.nu());
    for (int i = 0; i < r.count(); ++i) {
        mindex m = r.unflat(i);
        cosine_seq s(p.nu(), 2 * p.trunc());
        for (int l0 = 0; l0 <= std::min(m[0], p.box()[0]); ++l0)
            for (int l1 = 0; l1 <= std::min(m[1], p.box()[1]); ++l1) {
                mindex l{l0, l1};
                mindex ml = mindex_sub(m, l);
                if (!mindex_leq(ml, q.box())) continue;
                s = s + conv(p.at(l), q.at(ml));
            }
        r.at(m) = s;
    }
    r.set_tail_norm(tf_finite_norm(p) * q.tail_norm() + p.tail_norm() * tf_finite_norm(q) +
                    p.tail_norm() * q.tail_norm());
    return r;
}

// iterated Horner evaluation of sum_m p_m theta^m; |theta_j| <= 1 required
inline cosine_seq tf_eval(const fourier_taylor_seq& p, const std::vector<interval>& theta) {
    if (static_cast<int>(theta.size()) != p.dim())
        throw interval_error("tf_eval: theta dimension mismatch");
    for (const interval& t : theta)
        if (t.mag() > 1.0) throw interval_error("tf_eval: theta outside the unit ball");

    auto horner_row = [&](int m0) { // inner Horner over theta_2, d == 2 only
        cosine_seq s = p.at(mindex{m0, p.box()[1]});
        for (int m1 = p.box()[1] - 1; m1 >= 0; --m1) s = theta[1] * s + p.at(mindex{m0, m1});
        return s;
    };

    cosine_seq s = (p.dim() == 2) ? horner_row(p.box()[0]) : p.at(mindex{p.box()[0], 0});
    for (int m0 = p.box()[0] - 1; m0 >= 0; --m0) {
        cosine_seq row = (p.dim() == 2) ? horner_row(m0) : p.at(mindex{m0, 0});
        s = theta[0] * s + row;
    }
    s.add_tail_norm(p.tail_norm()); // |theta^m| <= 1 beyond the box
    return s;
}

// coefficient m scaled by s_1^{m_1} s_2^{m_2}
inline fourier_taylor_seq tf_rescale(const fourier_taylor_seq& p, const std::vector<interval>& s) {
    if (static_cast<int>(s.size()) != p.dim()) throw interval_error("tf_rescale: scaling dimension mismatch");
    for (const interval& sj : s)
        if (sj.contains_zero()) throw interval_error("tf_rescale: zero scaling");
    if (p.tail_norm().hi() > 0.0)
        for (const interval& sj : s)
            if (sj.mag() > 1.0)
                throw interval_error("tf_rescale: cannot bound the order tail for |s| > 1");

    std::array<iv_vector, 2> pw;
    pw[0] = iv_vector(static_cast<std::size_t>(p.box()[0]) + 1, interval(1.0));
    pw[1] = iv_vector(static_cast<std::size_t>(p.box()[1]) + 1, interval(1.0));
    for (int j = 0; j < p.dim(); ++j)
        for (int m = 1; m <= p.box()[j]; ++m) pw[j][m] = pw[j][m - 1] * s[j];

    fourier_taylor_seq r = p;
    for (int i = 0; i < r.count(); ++i) {
        mindex m = r.unflat(i);
        r.at(m) = (pw[0][m[0]] * pw[1][m[1]]) * r.at(m);
    }
    return r;
}

} // namespace parmval

#endif
