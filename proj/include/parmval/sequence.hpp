#ifndef PARMVAL_SEQUENCE_HPP
#define PARMVAL_SEQUENCE_HPP

// Weighted space of cosine coefficient sequences with norm
// |a| = |a_0| + 2 sum_{k>=1} |a_k| nu^k, its reflected discrete convolution,
// and diagonal-tailed block operators on it.

#include <utility>
#include <vector>

#include "interval.hpp"
#include "linalg.hpp"

namespace parmval {

class cosine_seq {
    interval nu_{2.0};
    std::vector<interval> a_;
    interval tail_{0.0};

public:
    cosine_seq() = default;

    cosine_seq(interval nu, int K) : nu_(nu), a_(static_cast<std::size_t>(K) + 1) {
        if (!(nu.lo() > 1.0)) throw interval_error("cosine_seq: weight must exceed 1");
        if (K < 0) throw interval_error("cosine_seq: negative truncation");
    }

    static cosine_seq basis(interval nu, int K, int k) {
        cosine_seq e(nu, K);
        e[k] = interval(1.0);
        return e;
    }

    const interval& nu() const { return nu_; }
    int order() const { return static_cast<int>(a_.size()) - 1; }

    interval& operator[](int k) { return a_.at(static_cast<std::size_t>(k)); }
    const interval& operator[](int k) const { return a_.at(static_cast<std::size_t>(k)); }

    const interval& tail_norm() const { return tail_; }
    void set_tail_norm(const interval& t) {
        if (t.hi() < 0.0) throw interval_error("cosine_seq: negative tail bound");
        tail_ = t;
    }
    void add_tail_norm(const interval& t) { set_tail_norm(tail_ + t); }

    std::vector<interval>& coeffs() { return a_; }
    const std::vector<interval>& coeffs() const { return a_; }
};

// [nu^0, ..., nu^K], computed once per loop nest
inline iv_vector nu_powers(const interval& nu, int K) {
    iv_vector p(static_cast<std::size_t>(K) + 1);
    p[0] = interval(1.0);
    for (int k = 1; k <= K; ++k) p[k] = p[k - 1] * nu;
    return p;
}

// norm weights w_0 = 1, w_k = 2 nu^k
inline iv_vector norm_weights(const interval& nu, int K) {
    iv_vector w = nu_powers(nu, K);
    for (int k = 1; k <= K; ++k) w[k] = interval(2.0) * w[k];
    return w;
}

inline interval finite_norm_nu(const cosine_seq& a) {
    const int K = a.order();
    iv_vector nup = nu_powers(a.nu(), K);
    interval s = mag(a[0]);
    for (int k = 1; k <= K; ++k) s += interval(2.0) * mag(a[k]) * nup[k];
    return s;
}

inline interval norm_nu(const cosine_seq& a) { return finite_norm_nu(a) + a.tail_norm(); }

inline void check_same_weight(const cosine_seq& a, const cosine_seq& b) {
    if (!(a.nu() == b.nu())) throw interval_error("mismatched sequence weights");
}

inline cosine_seq operator+(const cosine_seq& a, const cosine_seq& b) {
    check_same_weight(a, b);
    const int K = std::max(a.order(), b.order());
    cosine_seq c(a.nu(), K);
    for (int k = 0; k <= K; ++k) {
        interval s(0.0);
        if (k <= a.order()) s += a[k];
        if (k <= b.order()) s += b[k];
        c[k] = s;
    }
    c.set_tail_norm(a.tail_norm() + b.tail_norm());
    return c;
}

inline cosine_seq operator-(const cosine_seq& a, const cosine_seq& b) {
    check_same_weight(a, b);
    const int K = std::max(a.order(), b.order());
    cosine_seq c(a.nu(), K);
    for (int k = 0; k <= K; ++k) {
        interval s(0.0);
        if (k <= a.order()) s += a[k];
        if (k <= b.order()) s -= b[k];
        c[k] = s;
    }
    c.set_tail_norm(a.tail_norm() + b.tail_norm());
    return c;
}

inline cosine_seq operator*(const interval& s, const cosine_seq& a) {
    cosine_seq c = a;
    for (int k = 0; k <= c.order(); ++k) c[k] = s * c[k];
    c.set_tail_norm(mag(s) * a.tail_norm());
    return c;
}

// reflected-index convolution (a*b)_k = sum_{k1+k2=k, ki in Z} a_|k1| b_|k2|;
// finite parts convolved exactly out to order Ka+Kb, tail cross terms folded
// into the tail bound by submultiplicativity
inline cosine_seq conv(const cosine_seq& a, const cosine_seq& b) {
    check_same_weight(a, b);
    const int Ka = a.order(), Kb = b.order();
    cosine_seq c(a.nu(), Ka + Kb);
    for (int k = 0; k <= Ka + Kb; ++k) {
        interval s(0.0);
        for (int k1 = -Ka; k1 <= Ka; ++k1) {
            const int k2 = k - k1;
            if (k2 < -Kb || k2 > Kb) continue;
            s += a[std::abs(k1)] * b[std::abs(k2)];
        }
        c[k] = s;
    }
    const interval na = finite_norm_nu(a), nb = finite_norm_nu(b);
    c.set_tail_norm(na * b.tail_norm() + a.tail_norm() * nb + a.tail_norm() * b.tail_norm());
    return c;
}

// drop modes above K_new, folding their weighted mass into the tail bound
inline cosine_seq finite_part(const cosine_seq& a) {
    cosine_seq c = a;
    c.set_tail_norm(interval(0.0));
    return c;
}

inline cosine_seq truncate(const cosine_seq& a, int K_new) {
    if (K_new >= a.order()) return a;
    cosine_seq c(a.nu(), K_new);
    for (int k = 0; k <= K_new; ++k) c[k] = a[k];
    iv_vector nup = nu_powers(a.nu(), a.order());
    interval cut(0.0);
    for (int k = K_new + 1; k <= a.order(); ++k) cut += interval(2.0) * mag(a[k]) * nup[k];
    c.set_tail_norm(a.tail_norm() + cut);
    return c;
}

// c_k = r^k with the exact geometric tail 2 (r nu)^{K+1} / (1 - r nu)
inline cosine_seq poisson_coeffs(const interval& r, int K, const interval& nu) {
    if (r.lo() < 0.0) throw interval_error("poisson_coeffs: negative parameter");
    interval rnu = r * nu;
    if (!(rnu.hi() < 1.0)) throw interval_error("poisson_coeffs: r*nu must stay below 1");
    cosine_seq c(nu, K);
    interval p(1.0);
    for (int k = 0; k <= K; ++k) {
        c[k] = p;
        p = p * r;
    }
    c.set_tail_norm(interval(2.0) * pow_int(rnu, static_cast<unsigned>(K + 1)) /
                    (interval(1.0) - rnu));
    return c;
}

// diagonal action on modes k > K of a block operator
struct tail_rule {
    enum class kind { zero, identity, inv_k2_minus_alpha, k2_minus_alpha };
    kind k = kind::zero;
    interval alpha{0.0};

    static tail_rule zero() { return {}; }
    static tail_rule identity() { return {kind::identity, interval(0.0)}; }
    static tail_rule inv_diag(const interval& a) { return {kind::inv_k2_minus_alpha, a}; }
    static tail_rule diag(const interval& a) { return {kind::k2_minus_alpha, a}; }

    interval value_at(int mode) const {
        interval k2(static_cast<double>(mode) * mode);
        switch (k) {
            case kind::zero: return interval(0.0);
            case kind::identity: return interval(1.0);
            case kind::inv_k2_minus_alpha: return interval(1.0) / (alpha - k2);
            case kind::k2_minus_alpha: return alpha - k2;
        }
        throw interval_error("tail_rule: bad kind");
    }

    // sup over modes k > K of |value_at(k)|
    interval sup_abs(int K) const {
        switch (k) {
            case kind::zero: return interval(0.0);
            case kind::identity: return interval(1.0);
            case kind::inv_k2_minus_alpha: {
                interval k2(static_cast<double>(K + 1) * (K + 1));
                interval den = k2 - alpha;
                if (!(den.lo() > 0.0))
                    throw interval_error("tail_rule: sup needs (K+1)^2 > alpha");
                return interval(1.0) / den; // |1/(alpha-k^2)| decreasing in k
            }
            case kind::k2_minus_alpha:
                throw interval_error("tail_rule: unbounded diagonal has no sup");
        }
        throw interval_error("tail_rule: bad kind");
    }
};

// interval matrix on modes 0..K joined with a diagonal tail action
struct block_operator {
    iv_matrix block;
    tail_rule tail;
    interval nu{2.0};

    int trunc() const { return block.rows - 1; }
};

// action of a block operator on a sequence: finite block on modes <= K,
// diagonal tail rule beyond, input tail bound mapped through the tail sup
inline cosine_seq apply(const block_operator& T, const cosine_seq& a) {
    if (!(T.nu == a.nu())) throw interval_error("apply: weight mismatch");
    const int K = T.trunc();
    cosine_seq out(a.nu(), std::max(K, a.order()));
    for (int i = 0; i <= K; ++i) {
        interval s(0.0);
        for (int j = 0; j <= std::min(K, a.order()); ++j) s = s + T.block.at(i, j) * a[j];
        out[i] = s;
    }
    for (int k = K + 1; k <= a.order(); ++k) out[k] = T.tail.value_at(k) * a[k];
    if (!(a.tail_norm() == interval(0.0)))
        out.set_tail_norm(a.tail_norm() * T.tail.sup_abs(std::max(K, a.order())));
    return out;
}

inline interval op_norm(const block_operator& T) {
    const int K = T.trunc();
    interval fin = weighted_op_norm(T.block, norm_weights(T.nu, K));
    interval tl = T.tail.sup_abs(K);
    return interval(std::max(fin.lo(), tl.lo()), std::max(fin.hi(), tl.hi()));
}

} // namespace parmval

#endif
