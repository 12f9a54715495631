#ifndef MANIFOLD_ORACLES_HPP
#define MANIFOLD_ORACLES_HPP

// Brute-force references for the manifold solver tests: direct reflected
// convolutions, the order-restricted quadratic product, dense derivative
// assembly by index sums, and randomized adversarial tail vectors. All of it
// is independent of the library's convolution and block machinery.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testutil {

// (a * b)_k = sum_{k1+k2=k, ki in Z} a_{|k1|} b_{|k2|}, direct double loop
inline std::vector<double> conv_ref(const std::vector<double>& a, const std::vector<double>& b) {
    const int Ka = static_cast<int>(a.size()) - 1;
    const int Kb = static_cast<int>(b.size()) - 1;
    std::vector<double> out(static_cast<std::size_t>(Ka + Kb) + 1, 0.0);
    for (int k = 0; k <= Ka + Kb; ++k)
        for (int k1 = -Ka; k1 <= Ka; ++k1) {
            const int k2 = k - k1;
            if (k2 < -Kb || k2 > Kb) continue;
            out[static_cast<std::size_t>(k)] +=
                a[static_cast<std::size_t>(std::abs(k1))] * b[static_cast<std::size_t>(std::abs(k2))];
        }
    return out;
}

// order-m coefficient of c * (p ** p) with every p_m-bearing term dropped:
// the sum over l + n = m keeps only pairs with l != m and n != m
inline std::vector<double> diamond_ref(const std::vector<std::vector<double>>& p, int m,
                                       const std::vector<double>& c) {
    std::vector<double> acc;
    for (int l = 0; l <= m; ++l) {
        const int n = m - l;
        if (l == m || n == m) continue;
        std::vector<double> term = conv_ref(p[static_cast<std::size_t>(l)], p[static_cast<std::size_t>(n)]);
        if (acc.size() < term.size()) acc.resize(term.size(), 0.0);
        for (std::size_t i = 0; i < term.size(); ++i) acc[i] += term[i];
    }
    if (acc.empty()) acc.assign(1, 0.0);
    return conv_ref(c, acc);
}

// dense Jacobian of g_k(a) = (alpha - k^2) a_k - alpha (c*a*a)_k by direct
// index sums over the reflected cubic convolution
inline Eigen::MatrixXd dg_dense_ref(double alpha, const std::vector<double>& c,
                                    const std::vector<double>& a, int K) {
    const int Kc = static_cast<int>(c.size()) - 1;
    const int Ka = static_cast<int>(a.size()) - 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        J(k, k) += alpha - static_cast<double>(k) * k;
        for (int k1 = -Kc; k1 <= Kc; ++k1)
            for (int k2 = -Ka; k2 <= Ka; ++k2) {
                const int j = std::abs(k - k1 - k2);
                if (j > K) continue;
                J(k, j) -= 2.0 * alpha * c[static_cast<std::size_t>(std::abs(k1))] *
                           a[static_cast<std::size_t>(std::abs(k2))];
            }
    }
    return J;
}

// |(c * p * v)_k| for a random tail vector v supported on modes K+1..K+pad
// with unit nu-norm; returns the largest witness over the given trial count
inline double tail_witness(const std::vector<double>& c, const std::vector<double>& pl, int K,
                           int k, double nu, int pad, int trials, std::mt19937& rng) {
    std::vector<double> t = conv_ref(c, pl);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(K + pad) + 1, 0.0);
        double norm = 0.0;
        for (int j = K + 1; j <= K + pad; ++j) {
            v[static_cast<std::size_t>(j)] = unit(rng);
            norm += 2.0 * std::abs(v[static_cast<std::size_t>(j)]) * std::pow(nu, j);
        }
        if (norm == 0.0) continue;
        for (double& x : v) x /= norm;
        const int Kt = static_cast<int>(t.size()) - 1;
        const int Kv = static_cast<int>(v.size()) - 1;
        double s = 0.0;
        for (int k1 = -Kt; k1 <= Kt; ++k1) {
            const int k2 = k - k1;
            if (k2 < -Kv || k2 > Kv) continue;
            s += t[static_cast<std::size_t>(std::abs(k1))] * v[static_cast<std::size_t>(std::abs(k2))];
        }
        best = std::max(best, std::abs(s));
    }
    return best;
}

} // namespace testutil

#endif
