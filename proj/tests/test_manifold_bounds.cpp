#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <parmval/manifold_bounds.hpp>

#include "manifold_oracles.hpp"

using parmval::cosine_seq;
using parmval::fisher_problem;
using parmval::interval;
using parmval::linear_data;
using parmval::manifold_approx;
using parmval::manifold_certificate;
using parmval::mindex;

namespace {

fisher_problem poisson_problem(int K) {
    const interval nu = interval::enclose_decimal("1.1");
    const interval r5 = interval(1.0) / interval(5.0);
    return fisher_problem(interval::enclose_decimal("2.1"), parmval::poisson_coeffs(r5, K, nu),
                          K, nu);
}

// chart of the linearized problem with zero inhomogeneity: every order >= 2 vanishes
manifold_approx toy_chart(int K, const interval& lambda, int M) {
    const interval nu(1.5);
    const fisher_problem prob(interval(2.25), cosine_seq(nu, K), K, nu);
    linear_data L;
    L.a_bar = cosine_seq(nu, K);
    L.r_a = interval(0.0);
    L.lambdas = {lambda};
    auto [xs, rx] =
        parmval::detail::scaled_center(cosine_seq::basis(nu, K, 0), interval(0.5), interval(0.0));
    L.xis = {xs};
    L.r_xis = {rx};
    L.scalings = {interval(0.5)};
    return parmval::solve_homological(L, prob, mindex{M, 0});
}

manifold_approx certified_saddle_chart(int M, bool auto_scale) {
    const fisher_problem prob = poisson_problem(20);
    cosine_seq seed(prob.nu, 1);
    seed[0] = interval(0.3);
    seed[1] = interval(0.35);
    const parmval::equilibrium_certificate eq =
        parmval::validate_equilibrium(prob, parmval::newton_equilibrium(prob, seed));
    REQUIRE(eq.success);
    const auto pairs = parmval::approx_eigs(parmval::dg_matrix(prob, eq.a_bar));
    std::vector<double> xi0;
    for (int k = 0; k < pairs[0].vec.size(); ++k) xi0.push_back(pairs[0].vec(k).real());
    const parmval::eigenpair_certificate ec =
        parmval::validate_eigenpair(prob, eq, pairs[0].value.real(), xi0);
    REQUIRE(ec.success);

    interval s(1.0);
    if (auto_scale) {
        const manifold_approx m0 = parmval::solve_homological(
            parmval::saddle_linear_data(eq, ec, s), prob, mindex{M, 0});
        s = parmval::auto_scalings(m0)[0];
    }
    return parmval::solve_homological(parmval::saddle_linear_data(eq, ec, s), prob, mindex{M, 0});
}

manifold_approx origin_chart(const fisher_problem& prob, const char* s1, const char* s2,
                             mindex M) {
    const linear_data L = parmval::origin_linear_data(prob, interval::enclose_decimal(s1),
                                                      interval::enclose_decimal(s2));
    return parmval::solve_homological(L, prob, M);
}

} // namespace

TEST_CASE("exact linear chart validates at the floor radius") {
    const manifold_approx mf = toy_chart(2, interval(2.25), 3);
    const manifold_certificate cert = parmval::validate_manifold(mf);

    REQUIRE(cert.success);
    CHECK(cert.Y == interval(0.0));
    CHECK(cert.Z2 == interval(0.0));
    CHECK(cert.sigma1 == interval(0.0));
    CHECK(cert.epsilon.hi() <= 1e-15);
    CHECK(cert.Z1.hi() <= 1e-15);
    CHECK(cert.r_P == interval(1e-300));
    CHECK(cert.radii.r_max > 1.0);
    CHECK(cert.d == 1);

    // the two tail rules are reciprocal outside the finite block and trivial below order two
    const auto pr = parmval::inverse_pair(mf);
    for (const mindex m : {mindex{4, 0}, mindex{7, 0}}) {
        for (int k = 0; k <= 2; ++k) {
            const interval prod = pr.first.tail_diag(m, k) * pr.second.tail_diag(m, k);
            CHECK(prod.contains(1.0));
        }
    }
    CHECK(pr.first.tail_diag(mindex{0, 0}, 5) == interval(1.0));
    CHECK(pr.second.tail_diag(mindex{1, 0}, 3) == interval(1.0));
    const interval gap = pr.first.tail_diag(mindex{4, 0}, 0);
    CHECK((gap * interval(6.75)).contains(1.0)); // 1 / (4 lambda - alpha)
    CHECK_THROWS_AS(pr.first.tail_diag(mindex{2, 0}, 1), parmval::interval_error);

    // a spectrum too weak to dominate alpha has no positive tail gap
    parmval::tf_operator weak{parmval::df_blocks(mf), {interval(0.5)}, interval(2.25), true};
    CHECK_THROWS_AS(weak.tail_diag(mindex{4, 0}, 0), parmval::interval_error);
}

TEST_CASE("radius search brackets the contraction threshold") {
    const parmval::radii_report ok =
        parmval::find_radius(interval(0.1), interval(0.5), interval(0.0));
    REQUIRE(ok.success);
    CHECK(ok.r > 0.2);
    CHECK(ok.r <= 0.8);
    CHECK(ok.value.hi() < 0.0);
    CHECK(ok.r_max > 1e6);

    const parmval::radii_report bad =
        parmval::find_radius(interval(1.0), interval(1.0), interval(0.0));
    CHECK_FALSE(bad.success);
    CHECK(bad.r == 0.0);
}

TEST_CASE("tail window bounds dominate adversarial products") {
    const fisher_problem prob = poisson_problem(8);
    cosine_seq seed(prob.nu, 1);
    seed[0] = interval(0.3);
    seed[1] = interval(0.35);
    const cosine_seq abar = parmval::newton_equilibrium(prob, seed);
    const auto pairs = parmval::approx_eigs(parmval::dg_matrix(prob, abar));
    cosine_seq xi(prob.nu, 8);
    for (int k = 0; k <= 8; ++k) xi[k] = interval(pairs[0].vec(k).real());
    linear_data L;
    L.a_bar = abar;
    L.r_a = interval(0.0);
    L.lambdas = {interval(pairs[0].value.real())};
    auto [xs, rx] = parmval::detail::scaled_center(xi, interval(0.25), interval(0.0));
    L.xis = {xs};
    L.r_xis = {rx};
    L.scalings = {interval(0.25)};
    const manifold_approx mf = parmval::solve_homological(L, prob, mindex{4, 0});

    const cosine_seq c_fin = parmval::finite_part(prob.c);
    const std::vector<double> cmid = parmval::detail::seq_mid(c_fin);
    std::mt19937 rng(123);
    for (const int l : {0, 1, 3}) {
        const cosine_seq& pl = mf.p.block(l);
        const auto [h1, h2] = parmval::tail_product_bound(c_fin, pl, 8);
        const std::vector<double> plmid = parmval::detail::seq_mid(pl);
        for (const int k : {0, 3, 8}) {
            const double witness = testutil::tail_witness(cmid, plmid, 8, k, 1.1, 40, 1000, rng);
            const double bound =
                (h1[static_cast<std::size_t>(k)] + h2[static_cast<std::size_t>(k)]).hi();
            CHECK(witness <= bound + 1e-18);
            CHECK(bound >= 0.0);
        }
    }

    // unit inhomogeneity against a pure zero-mode has empty tail windows
    const interval nu15(1.5);
    const auto [z1, z2] = parmval::tail_product_bound(cosine_seq::basis(nu15, 0, 0),
                                                      cosine_seq::basis(nu15, 8, 0), 8);
    for (int k = 0; k <= 8; ++k) {
        CHECK(z1[static_cast<std::size_t>(k)] == interval(0.0));
        CHECK(z2[static_cast<std::size_t>(k)] == interval(0.0));
    }
    const auto [y1, y2] = parmval::tail_product_bound(c_fin, cosine_seq(prob.nu, 8), 8);
    for (int k = 0; k <= 8; ++k) CHECK((y1[static_cast<std::size_t>(k)] + y2[static_cast<std::size_t>(k)]) == interval(0.0));
}

TEST_CASE("small saddle certificate closes with every component in range") {
    const manifold_approx mf = certified_saddle_chart(16, true);
    const manifold_certificate cert = parmval::validate_manifold(mf);

    REQUIRE(cert.success);
    REQUIRE(cert.radii.success);
    CHECK(cert.d == 1);
    CHECK(cert.k_support == 60);
    CHECK(cert.r_P.hi() > 0.0);
    CHECK(cert.r_P.hi() <= 4e-12);
    CHECK(cert.Y.hi() <= 2e-12);
    CHECK(cert.epsilon.hi() <= 1e-12);
    CHECK(cert.Z1.hi() < 1.0);
    for (const interval& v : {cert.Y, cert.Z1, cert.Z2, cert.epsilon, cert.sigma1, cert.sigma2})
        CHECK(v.lo() >= 0.0);

    // the quadratic coefficient always carries the full Fourier-tail mass
    const interval alpha = mf.problem.alpha;
    const interval floor_q =
        interval(2.0) * alpha * parmval::norm_nu(mf.problem.c) / (interval(441.0) - alpha);
    CHECK(cert.Z2.hi() >= floor_q.lo());

    // pointwise invariance defect is controlled by the functional bounds
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 2>> grid;
    for (int i = 0; i < 100; ++i) grid.push_back({u(rng), 0.0});
    CHECK(parmval::conjugacy_residual(mf, grid) <= (1.0 + cert.Z1.hi()) * cert.Y.hi());
}

TEST_CASE("failure reports the dominating bound") {
    const manifold_approx mf = certified_saddle_chart(8, false);
    const manifold_certificate cert = parmval::validate_manifold(mf);

    CHECK_FALSE(cert.success);
    CHECK_FALSE(cert.radii.success);
    CHECK(cert.r_P == interval(0.0));
    CHECK(cert.dominant == "Y");
    CHECK(cert.Y.hi() > 1.0);
}

TEST_CASE("residual bound grows with the chart scaling") {
    const fisher_problem prob = poisson_problem(20);
    cosine_seq seed(prob.nu, 1);
    seed[0] = interval(0.3);
    seed[1] = interval(0.35);
    const parmval::equilibrium_certificate eq =
        parmval::validate_equilibrium(prob, parmval::newton_equilibrium(prob, seed));
    const auto pairs = parmval::approx_eigs(parmval::dg_matrix(prob, eq.a_bar));
    std::vector<double> xi0;
    for (int k = 0; k < pairs[0].vec.size(); ++k) xi0.push_back(pairs[0].vec(k).real());
    const parmval::eigenpair_certificate ec =
        parmval::validate_eigenpair(prob, eq, pairs[0].value.real(), xi0);

    auto y_at = [&](double s) {
        const manifold_approx mf = parmval::solve_homological(
            parmval::saddle_linear_data(eq, ec, interval(s)), prob, mindex{8, 0});
        return parmval::y_bound_1d(mf, parmval::inverse_pair(mf).first);
    };
    const interval y_small = y_at(0.125);
    const interval y_big = y_at(0.25);
    CHECK(y_small.lo() >= 0.0);
    CHECK(y_small.hi() < y_big.hi());

    // dimension guards on the split entry points
    const manifold_approx mf1 = parmval::solve_homological(
        parmval::saddle_linear_data(eq, ec, interval(0.25)), prob, mindex{8, 0});
    CHECK_THROWS_AS(parmval::y_bound_2d(mf1, parmval::inverse_pair(mf1).first),
                    parmval::interval_error);

    const interval nu2 = interval::enclose_decimal("1.01");
    const fisher_problem prob2(interval::enclose_decimal("2.1"), cosine_seq::basis(nu2, 0, 0), 6,
                               nu2);
    const manifold_approx mf2 = origin_chart(prob2, "0.1", "0.1", mindex{3, 3});
    CHECK_THROWS_AS(parmval::y_bound_1d(mf2, parmval::inverse_pair(mf2).first),
                    parmval::interval_error);
}

TEST_CASE("two-parameter origin chart validates") {
    const interval nu = interval::enclose_decimal("1.01");
    const interval alpha = interval::enclose_decimal("2.1");
    const fisher_problem prob(alpha, cosine_seq::basis(nu, 0, 0), 12, nu);
    const manifold_approx mf = origin_chart(prob, "0.01", "0.05", mindex{3, 8});
    const manifold_certificate cert = parmval::validate_manifold(mf);

    REQUIRE(cert.success);
    CHECK(cert.d == 2);
    CHECK(cert.k_support == 24);
    CHECK(cert.r_P.hi() <= 1e-3);
    CHECK(cert.Y.hi() <= 2e-4);
    CHECK(cert.Z1.hi() < 1.0);

    // quadratic-origin bounds require the constant unit inhomogeneity
    const fisher_problem pprob = poisson_problem(12);
    const manifold_approx bad_c = origin_chart(pprob, "0.01", "0.05", mindex{2, 2});
    CHECK_THROWS_WITH(parmval::validate_manifold(bad_c),
                      Catch::Matchers::ContainsSubstring("constant unit"));

    // and exact origin data
    manifold_approx bad_a = origin_chart(prob, "0.01", "0.05", mindex{2, 2});
    bad_a.linear.a_bar[0] = interval(0.1);
    CHECK_THROWS_WITH(parmval::validate_manifold(bad_a),
                      Catch::Matchers::ContainsSubstring("exact origin"));
}

TEST_CASE("tail gaps must clear alpha") {
    // K = 1: Fourier tail gap K^2 - alpha is negative
    const manifold_approx low_k = toy_chart(1, interval(2.25), 3);
    CHECK_THROWS_WITH(parmval::validate_manifold(low_k),
                      Catch::Matchers::ContainsSubstring("Fourier tail gap"));

    // lambda M below alpha: Taylor tail gap is negative
    const manifold_approx low_m = toy_chart(2, interval(1.0), 2);
    CHECK_THROWS_WITH(parmval::validate_manifold(low_m),
                      Catch::Matchers::ContainsSubstring("Taylor tail gap"));
}
