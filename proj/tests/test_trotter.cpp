// Tests for the finite-N path sum: Gray-code walk vs direct enumeration,
// the exact N = 1 kernel, convergence toward the series kernel, and the
// Z₂^k combinatorial identities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "aqrm/fock.hpp"
#include "aqrm/model.hpp"
#include "aqrm/series.hpp"
#include "aqrm/trotter.hpp"

using namespace aqrm;

namespace {
const ModelParams kBench{0.5, 1.0, 0.3};

Mat2 direct_path_sum(double x, double y, double t, int N, const ModelParams& p) {
    const double u = std::exp(-t / N);
    Mat2 acc = Mat2::zero();
    BitString s(N);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << N); ++bits) {
        for (int i = 0; i < N; ++i) s[i] = static_cast<int>((bits >> i) & 1u);
        acc += G_N(u, s, p) * I_N(x, y, u, s, p);
    }
    return acc;
}
}  // namespace

TEST_CASE("N = 1 path sum is the exact one-step kernel") {
    for (double t : {0.4, 1.0}) {
        const Mat2 a = trotter_kernel(0.3, -0.2, t, 1, kBench);
        const Mat2 b = one_step_kernel(0.3, -0.2, t, kBench);
        CHECK(max_abs_diff(a, b) / b.max_abs() < 1e-12);
    }
}

TEST_CASE("Gray-code walk equals direct enumeration") {
    for (int N : {2, 3, 5, 6}) {
        const Mat2 fast = trotter_kernel(0.3, -0.2, 0.9, N, kBench);
        const Mat2 slow = direct_path_sum(0.3, -0.2, 0.9, N, kBench);
        CHECK(max_abs_diff(fast, slow) / slow.max_abs() < 1e-12);
    }
}

TEST_CASE("path sum equals the truncated-basis product kernel") {
    for (int N : {2, 4}) {
        const Mat2 a = trotter_kernel(0.2, -0.1, 1.0, N, kBench);
        const Mat2 b = product_kernel(0.2, -0.1, 1.0, N, kBench, 250);
        CHECK(max_abs_diff(a, b) / b.max_abs() < 1e-9);
    }
}

TEST_CASE("first-order convergence toward the series kernel") {
    const Mat2 ref = heat_kernel(0.2, -0.1, 1.0, kBench).value;
    const double e8 = max_abs_diff(trotter_kernel(0.2, -0.1, 1.0, 8, kBench), ref);
    const double e16 = max_abs_diff(trotter_kernel(0.2, -0.1, 1.0, 16, kBench), ref);
    const double r = e8 / e16;
    CHECK(r >= 1.5);
    CHECK(r <= 3.0);
}

TEST_CASE("I_N building blocks") {
    const double u = std::exp(-0.25);
    const int N = 5;
    for (int j = 1; j <= N; ++j) CHECK(lambda_j(u, j, N) > 0.0);
    for (int i = 1; i <= N - 1; ++i)
        for (int j = 1; j <= N - 1; ++j)
            CHECK(omega_ij(u, i, j, N) == doctest::Approx(omega_ij(u, j, i, N)).epsilon(1e-15));
    BitString s{0, 1, 1, 0, 1};
    CHECK(eta_i(s, 1) == 0);   // (+1) + (−1)
    CHECK(eta_i(s, 2) == -2);  // (−1) + (−1)
    CHECK(eta_i(s, 4) == 0);
    CHECK_THROWS_AS(eta_i(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(eta_i(s, 5), std::invalid_argument);
    // global bit flip together with (x,y) → (−x,−y) leaves I_N unchanged
    BitString sf(s);
    for (int& b : sf) b = 1 - b;
    const double a = I_N(0.4, -0.3, u, s, kBench);
    const double b = I_N(-0.4, 0.3, u, sf, kBench);
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("domain guards") {
    CHECK_THROWS_AS(trotter_kernel(0, 0, 1.0, 0, kBench), std::invalid_argument);
    CHECK_THROWS_AS(trotter_kernel(0, 0, 1.0, kTrotterMaxN + 1, kBench),
                    std::invalid_argument);
    CHECK_THROWS_AS(trotter_kernel(0, 0, 0.0, 4, kBench), std::domain_error);
    CHECK_THROWS_AS(trotter_kernel(0, 0, 1.0, 4, ModelParams{0.5, 0.0, 0.0}),
                    std::domain_error);
    CHECK_THROWS_AS(G_N(1.5, BitString{0, 1}, kBench), std::domain_error);
}

TEST_CASE("alpha: closed form equals the recursion, plus pinned examples") {
    CHECK(alpha_closed(BitString{0}) == 1);
    CHECK(alpha_closed(BitString{1}) == 0);
    CHECK(phi(BitString{1, 0, 1, 1}) == 2);  // +4 − 3 + 1
    CHECK(phi(BitString{0, 0, 0}) == 0);
    for (int k = 1; k <= 10; ++k) {
        BitString s(k);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
            for (int i = 0; i < k; ++i) s[i] = static_cast<int>((bits >> i) & 1u);
            REQUIRE(alpha_closed(s) == alpha_rec(s));
        }
    }
}

TEST_CASE("Fourier coefficients: transfer product equals brute force") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k <= 6; ++k) {
        for (int rep = 0; rep < 4; ++rep) {
            const ModelParams p{0.0, 0.2 + 1.8 * u01(rng), -1.5 + 3.0 * u01(rng)};
            const double tau = 0.05 + 0.9 * u01(rng);
            const int v = static_cast<int>(rng() & 1u), w = static_cast<int>(rng() & 1u);
            BitString rho(k);
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
                for (int i = 0; i < k; ++i) rho[i] = static_cast<int>((bits >> i) & 1u);
                const double a = fourier_ghat(v, w, rho, tau, p);
                const double b = detail::ghat_brute(v, w, rho, tau, p);
                REQUIRE(std::abs(a - b) < 1e-11);
            }
        }
    }
}

TEST_CASE("weighted Fourier sum identity") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 6);
        std::vector<double> A(k);
        for (double& a : A) a = -0.9 + 1.8 * u01(rng);
        const ModelParams p{0.0, 0.2 + 1.8 * u01(rng), -1.5 + 3.0 * u01(rng)};
        const double tau = 0.05 + 0.9 * u01(rng);
        const int v = static_cast<int>(rng() & 1u), w = static_cast<int>(rng() & 1u);
        const auto [lhs, rhs] = weighted_fourier_sum(v, w, A, tau, p);
        REQUIRE(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-12);
    }
    CHECK_THROWS_AS(weighted_fourier_sum(0, 0, std::vector<double>{}, 0.5, kBench),
                    std::invalid_argument);
}
