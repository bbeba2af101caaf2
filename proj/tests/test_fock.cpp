// Tests for the truncated-basis oracle: Hamiltonian assembly, spectra
// against frozen references, kernels, partition sums, counting, and the
// product-formula kernel.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "aqrm/fock.hpp"
#include "aqrm/model.hpp"
#include "aqrm/simplex.hpp"

using namespace aqrm;

namespace {
const ModelParams kBench{0.5, 1.0, 0.3};
}

TEST_CASE("config and Hamiltonian shape") {
    FockConfig fc;
    fc.cutoff = 300;
    fc.target_count = 150;
    CHECK(fc.effective_cutoff() == 450);
    fc.target_count = 0;
    CHECK(fc.effective_cutoff() == 300);
    FockConfig bad;
    bad.cutoff = 2;
    CHECK_THROWS_AS(bad.effective_cutoff(), std::invalid_argument);

    const auto H = build_hamiltonian(kBench, 12);
    REQUIRE(H.rows() == 24);
    REQUIRE(H.cols() == 24);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // diagonal: m ± Δ; first off-diagonal couplings ε and g√(m+1)
    CHECK(H(0, 0) == doctest::Approx(kBench.delta));
    CHECK(H(1, 1) == doctest::Approx(-kBench.delta));
    CHECK(H(4, 4) == doctest::Approx(2.0 + kBench.delta));
    CHECK(H(0, 1) == doctest::Approx(kBench.eps));
    CHECK(H(0, 3) == doctest::Approx(kBench.g));
    CHECK(H(2, 5) == doctest::Approx(kBench.g * std::sqrt(2.0)));
}

TEST_CASE("hermite functions: seeds and orthonormality") {
    const auto psi = hermite_psi(3, 0.37);
    const double w0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * 0.37 * 0.37);
    CHECK(psi[0] == doctest::Approx(w0).epsilon(1e-14));
    CHECK(psi[1] == doctest::Approx(std::sqrt(2.0) * 0.37 * w0).epsilon(1e-14));
    // ∫ ψ_m ψ_n = δ_{mn} on a wide Gauss grid
    std::vector<double> x, w;
    gauss_legendre_01(128, x, w);
    double gram[6][6] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = -8.0 + 16.0 * x[i];
        const auto p = hermite_psi(6, xi);
        for (int m = 0; m < 6; ++m)
            for (int n = 0; n < 6; ++n) gram[m][n] += 16.0 * w[i] * p[m] * p[n];
    }
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n)
            CHECK(std::abs(gram[m][n] - (m == n ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("frozen ground-state energies") {
    struct Row {
        ModelParams p;
        double lam1;
    };
    const Row rows[] = {
        {ModelParams{0.5, 1.0, 0.3}, -1.1465320990},
        {ModelParams{0.3, 0.4, 0.2}, -0.5047747107},
        {ModelParams{1.0, 0.7, 0.5}, -1.6192511931},
        {ModelParams{0.5, 1.0, 0.0}, -1.0883485155},
        {ModelParams{0.5, 1.0, 0.7}, -1.3625104514},
    };
    for (const auto& r : rows) {
        const FockOracle oracle(r.p);
        CHECK(oracle.lowest() == doctest::Approx(r.lam1).epsilon(1e-8));
        // variational window: −g² − μ ≤ λ₁ ≤ −g² − |ε|
        CHECK(oracle.lowest() >= -r.p.g * r.p.g - mu(r.p) - 1e-8);
        CHECK(oracle.lowest() <= -r.p.g * r.p.g - std::abs(r.p.eps) + 1e-9);
    }
}

TEST_CASE("spectra: cutoff doubling and eps-degeneracy") {
    FockConfig small;
    small.cutoff = 150;
    const Spectrum a = eigen_spectrum(kBench, small);
    const Spectrum b = eigen_spectrum(kBench);
    for (int j = 0; j < 50; ++j)
        CHECK(std::abs(a.eigenvalues[j] - b.eigenvalues[j]) < 1e-8);
    const Spectrum c = eigen_spectrum(ModelParams{0.5, 1.0, -0.3});
    for (int j = 0; j < 50; ++j)
        CHECK(std::abs(b.eigenvalues[j] - c.eigenvalues[j]) < 1e-10);
    CHECK(b.trusted_count == 100);
}

TEST_CASE("decoupled kernel: g = eps = 0") {
    const ModelParams p{0.0, 0.6, 0.0};
    const FockOracle oracle(p);
    const double x = 0.3, y = -0.4, t = 0.7;
    const Mat2 k = oracle.kernel(x, y, t);
    const double base = mehler_base(x, y, 0.0, t);
    const Mat2 exact{base * std::exp(-t * p.delta), 0.0, 0.0, base * std::exp(t * p.delta)};
    CHECK(max_abs_diff(k, exact) / exact.max_abs() < 1e-10);
}

TEST_CASE("frozen benchmark kernel matrix") {
    const FockOracle oracle(kBench);
    bool truncated = true;
    const Mat2 k = oracle.kernel(0.3, -0.2, 0.7, &truncated);
    const Mat2 frozen{0.2824688795, -0.1551434848, -0.1224092350, 1.1120602310};
    CHECK(max_abs_diff(k, frozen) < 1e-8);
    CHECK_FALSE(truncated);
    // a tiny t cannot be resolved by a finite basis — must be flagged
    (void)oracle.kernel(0.0, 0.0, 1e-3, &truncated);
    CHECK(truncated);
}

TEST_CASE("oracle partition function") {
    const FockOracle oracle(kBench);
    double tail = -1.0;
    const double z = oracle.partition(1.0, &tail);
    CHECK(z == doctest::Approx(6.148468812).epsilon(1e-5));
    CHECK(tail >= 0.0);
    CHECK(tail < 1e-10);
    CHECK_THROWS_AS(oracle.partition(0.0), std::domain_error);
}

TEST_CASE("eigenvalue counting") {
    const FockOracle free_oracle(ModelParams{0.0, 0.4, 0.0});
    CHECK(free_oracle.counting(10.5) == 22);
    CHECK(free_oracle.counting(0.5) == 2);  // 0 ± 0.4
    CHECK(free_oracle.counting(-1.0) == 0);
    FockConfig tiny;
    tiny.cutoff = 30;
    const FockOracle small(kBench, tiny);
    CHECK_THROWS_AS(small.counting(50.0), std::domain_error);
}

TEST_CASE("product kernel at N = 1 is the one-step kernel") {
    const Mat2 a = product_kernel(0.3, -0.2, 0.7, 1, kBench, 250);
    const Mat2 b = one_step_kernel(0.3, -0.2, 0.7, kBench);
    CHECK(max_abs_diff(a, b) / b.max_abs() < 1e-9);
}

TEST_CASE("spectrum exports") {
    FockConfig fc;
    fc.cutoff = 8;
    const Spectrum s = eigen_spectrum(kBench, fc);
    const std::string csv = spectrum_to_csv(s);
    CHECK(csv.rfind("index,eigenvalue\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == s.eigenvalues.size() + 1);
    const std::string js = spectrum_to_json(s);
    CHECK(js.find("\"eigenvalues\":[") != std::string::npos);
    CHECK(js.find("\"trusted_count\":2") != std::string::npos);
}
