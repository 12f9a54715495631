#ifndef PARMVAL_FFT_CONV_HPP
#define PARMVAL_FFT_CONV_HPP

// Non-rigorous cosine-coefficient convolution for the floating-point Newton
// phases. Coefficient vectors follow the same reflected convention as
// cosine_seq: u(t) = a_0 + 2 sum_{k>=1} a_k cos(k t), so the product of two
// such functions has coefficients (a * b)_k = sum_{k1+k2=k} a_{|k1|} b_{|k2|}.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace parmval {

inline std::vector<double> direct_cos_conv(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("cos_conv: empty input");
    const int Ka = static_cast<int>(a.size()) - 1;
    const int Kb = static_cast<int>(b.size()) - 1;
    std::vector<double> c(static_cast<std::size_t>(Ka + Kb) + 1, 0.0);
    for (int k = 0; k <= Ka + Kb; ++k) {
        double s = 0.0;
        for (int k1 = -Ka; k1 <= Ka; ++k1) {
            const int k2 = k - k1;
            if (std::abs(k2) > Kb) continue;
            s += a[static_cast<std::size_t>(std::abs(k1))] *
                 b[static_cast<std::size_t>(std::abs(k2))];
        }
        c[static_cast<std::size_t>(k)] = s;
    }
    return c;
}

// DCT-I sampling on the grid t_j = pi j / n with n = Ka + Kb: the product is a
// cosine polynomial of degree n, so pointwise multiplication is alias-free.
inline std::vector<double> fft_cos_conv(const std::vector<double>& a,
                                        const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("cos_conv: empty input");
    const int Ka = static_cast<int>(a.size()) - 1;
    const int Kb = static_cast<int>(b.size()) - 1;
    const int n = Ka + Kb;
    if (n < 4) return direct_cos_conv(a, b);

    const int N = n + 1;
    std::vector<double> in(static_cast<std::size_t>(N), 0.0);
    std::vector<double> out(static_cast<std::size_t>(N), 0.0);
    fftw_plan plan = fftw_plan_r2r_1d(N, in.data(), out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("cos_conv: fftw plan failed");

    // REDFT00 maps x to y_j = x_0 + (-1)^j x_n + 2 sum_{k=1}^{n-1} x_k cos(pi jk/n),
    // so loading coefficients (with the last entry doubled) yields samples u(t_j).
    auto to_samples = [&](const std::vector<double>& coeff) {
        std::fill(in.begin(), in.end(), 0.0);
        for (std::size_t k = 0; k < coeff.size(); ++k) in[k] = coeff[k];
        in[static_cast<std::size_t>(n)] *= 2.0;
        fftw_execute(plan);
        return out;
    };

    std::vector<double> ua = to_samples(a);
    std::vector<double> ub = to_samples(b);
    for (int j = 0; j <= n; ++j)
        in[static_cast<std::size_t>(j)] = ua[static_cast<std::size_t>(j)] *
                                          ub[static_cast<std::size_t>(j)];
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    // REDFT00 applied twice scales by 2n; undo it (the doubled-endpoint loading
    // convention puts an extra factor 2 on the last coefficient).
    std::vector<double> c(static_cast<std::size_t>(N));
    const double inv = 1.0 / (2.0 * n);
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k)] * inv;
    c[static_cast<std::size_t>(n)] = out[static_cast<std::size_t>(n)] * (0.5 * inv);
    return c;
}

} // namespace parmval

#endif
