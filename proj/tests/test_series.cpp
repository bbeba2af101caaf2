// Tests for the explicit series: heat kernel, diagonal trace, partition
// function, Ω, tail majorants, parity symmetries, and determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdlib>

#include "aqrm/model.hpp"
#include "aqrm/series.hpp"

using namespace aqrm;

namespace {
const ModelParams kBench{0.5, 1.0, 0.3};
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(SeriesConfig(-1, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(SeriesConfig(8, -1.0), std::invalid_argument);
    const SeriesConfig cfg(8, 1e-9);
    CHECK(cfg.lambda_max == 8);
    CHECK(cfg.tail_tol == 1e-9);
}

TEST_CASE("delta = 0: series collapses to the exact one-step kernel") {
    const ModelParams p{0.7, 0.0, 0.4};
    for (double t : {0.4, 1.1}) {
        const KernelResult k = heat_kernel(0.35, -0.15, t, p);
        const Mat2 exact = one_step_kernel(0.35, -0.15, t, p);
        CHECK(max_abs_diff(k.value, exact) / exact.max_abs() < 1e-12);
        CHECK(k.lambda_used == 0);
        CHECK(k.converged);
        CHECK(k.tail_bound == 0.0);
    }
    // and the partition function to its closed form
    for (double beta : {0.5, 2.0}) {
        const double z = partition_function(beta, p);
        const double exact = 2.0 * std::exp(p.g * p.g * beta) * std::cosh(p.eps * beta) /
                             (-std::expm1(-beta));
        CHECK(z == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("g = 0: series rebuilds the decoupled kernel") {
    const ModelParams p{0.0, 1.0, 0.3};
    const double t = 0.9, x = 0.4, y = -0.2;
    const Mat2 exact = mehler_base(x, y, 0.0, t) * exp_spin(p, t);
    const KernelResult k = heat_kernel(x, y, t, p);
    CHECK(max_abs_diff(k.value, exact) / exact.max_abs() < 1e-5);
    CHECK(max_abs_diff(k.value, exact) <= 10.0 * (k.quad_error + k.tail_bound) + 1e-12);
}

TEST_CASE("partition function against frozen values") {
    CHECK(partition_function(0.5, kBench) == doctest::Approx(6.504091438).epsilon(5e-6));
    CHECK(partition_function(1.0, kBench) == doctest::Approx(6.148468812).epsilon(5e-6));
    CHECK(partition_function(2.0, kBench) == doctest::Approx(12.60172310).epsilon(5e-6));
    ZInfo info;
    (void)partition_function(1.0, kBench, SeriesConfig{}, &info);
    CHECK(info.converged);
    CHECK(info.pairs_used >= 2);
    CHECK(info.quad_error + info.tail_bound < 1e-4);
}

TEST_CASE("trace of the kernel equals the scalar trace series") {
    for (double x : {0.0, 0.55, -0.3}) {
        const double a = trace_diag(x, 1.0, kBench);
        const double b = heat_kernel(x, x, 1.0, kBench).value.trace();
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("kernel term majorant dominates the computed terms") {
    const double t = 0.8, x = 0.3, y = -0.2;
    for (int lam = 1; lam <= 6; ++lam) {
        double qe = 0.0;
        const Mat2 term = kernel_term(lam, x, y, t, kBench, auto_rule(lam), &qe);
        CHECK(term.max_abs() <= tail_bound_kernel(lam, x, y, t, kBench) + qe + 1e-15);
    }
}

TEST_CASE("partition term majorant dominates the series increments") {
    const double beta = 1.0;
    const double pref = 2.0 * std::exp(kBench.g * kBench.g * beta) / (-std::expm1(-beta));
    double prev = 0.0;
    for (int ell = 0; ell <= 4; ++ell) {
        SeriesConfig cfg;
        cfg.lambda_max = ell;
        cfg.tail_tol = 0.0;  // never stop early: accumulate exactly ell pairs
        const double z = partition_function(beta, kBench, cfg);
        if (ell >= 1) {
            const double term = std::abs(z - prev) / pref;
            CHECK(term <= tail_bound(2 * ell, beta, kBench) * (1.0 + 1e-6) + 1e-15);
        }
        prev = z;
    }
}

TEST_CASE("eps-parity: Z even, trace mirror-even") {
    const ModelParams pm{kBench.g, kBench.delta, -kBench.eps};
    for (double beta : {0.6, 1.7}) {
        const double zp = partition_function(beta, kBench);
        const double zm = partition_function(beta, pm);
        CHECK(std::abs(zp - zm) / zp < 1e-13);
    }
    for (double x : {0.0, 0.8}) {
        const double a = trace_diag(x, 0.9, kBench);
        const double b = trace_diag(-x, 0.9, pm);
        CHECK(std::abs(a - b) / std::abs(a) < 1e-13);
    }
}

TEST_CASE("omega numerator: normalization, real-axis match, conjugation") {
    using C = std::complex<double>;
    // Ω(t) → 2 as t → 0
    const C near0 = omega_numerator(C{1e-3, 0.0}, kBench);
    CHECK(std::abs(near0 - 2.0) < 0.02);
    CHECK(std::abs(omega_numerator(C{0.0, 0.0}, kBench) - 2.0) == 0.0);
    // real t: Ω(t) = (1 − e^{−t}) Z(t).  The real path may stop on the
    // rigorous term majorant one pair before the complex path (which has no
    // sup bound available), so the two values must agree within the error
    // budgets both sides report.
    for (double t : {0.3, 0.5, 1.0}) {
        ZInfo zi, oi;
        const C om = omega_numerator(C{t, 0.0}, kBench, SeriesConfig{}, &oi);
        const double zref = partition_function(t, kBench, SeriesConfig{}, &zi) *
                            (-std::expm1(-t));
        const double budget = (zi.quad_error + zi.tail_bound) * (-std::expm1(-t)) +
                              oi.quad_error + oi.tail_bound + 1e-13 * zref;
        CHECK(om.imag() == doctest::Approx(0.0));
        CHECK(std::abs(om.real() - zref) <= budget);
    }
    // at t where both paths run to full depth the agreement is exact
    const C om2 = omega_numerator(C{2.0, 0.0}, kBench);
    const double zref2 = partition_function(2.0, kBench) * (-std::expm1(-2.0));
    CHECK(om2.real() == doctest::Approx(zref2).epsilon(1e-13));
    // Schwarz reflection
    const C w{0.3, 0.4};
    const C a = omega_numerator(w, kBench);
    const C b = omega_numerator(std::conj(w), kBench);
    CHECK(std::abs(a - std::conj(b)) / std::abs(a) < 1e-12);
    // holomorphy domain: left of the axis only inside the disk
    CHECK_NOTHROW(omega_numerator(C{-0.4, 0.1}, kBench));
    CHECK_THROWS_AS(omega_numerator(C{-4.0, 0.0}, kBench), std::domain_error);
    CHECK_THROWS_AS(omega_numerator(C{-0.1, 3.2}, kBench), std::domain_error);
}

TEST_CASE("honest non-convergence reporting") {
    SeriesConfig cfg;
    cfg.lambda_max = 3;
    cfg.tail_tol = 1e-30;
    const KernelResult k = heat_kernel(0.2, 0.1, 1.0, kBench, cfg);
    CHECK_FALSE(k.converged);
    CHECK(k.tail_bound > 0.0);
    ZInfo info;
    SeriesConfig zcfg;
    zcfg.lambda_max = 1;
    zcfg.tail_tol = 1e-30;
    (void)partition_function(1.0, kBench, zcfg, &info);
    CHECK_FALSE(info.converged);
}

TEST_CASE("trace integral matches the partition function") {
    const ModelParams p{0.3, 0.4, 0.2};
    const double zi = integrated_trace(1.0, p);
    const double zz = partition_function(1.0, p);
    CHECK(zi == doctest::Approx(zz).epsilon(1e-6));
    std::vector<double> xs, ws;
    trace_grid(1.0, p, SeriesConfig{}, xs, ws);
    CHECK(xs.size() == ws.size());
    CHECK(xs.size() == 96);
    CHECK(xs.front() < -4.0);
    CHECK(xs.back() > 4.0);
}

TEST_CASE("worker count does not change any bit of the result") {
    SeriesConfig c1, c3;
    c1.threads = 1;
    c3.threads = 3;
    const KernelResult k1 = heat_kernel(0.25, -0.4, 1.0, kBench, c1);
    const KernelResult k3 = heat_kernel(0.25, -0.4, 1.0, kBench, c3);
    CHECK(k1.value.m11 == k3.value.m11);
    CHECK(k1.value.m12 == k3.value.m12);
    CHECK(k1.value.m21 == k3.value.m21);
    CHECK(k1.value.m22 == k3.value.m22);
    CHECK(k1.quad_error == k3.quad_error);
    // the env override takes the same deterministic path
    setenv("AQRM_THREADS", "2", 1);
    const KernelResult k2 = heat_kernel(0.25, -0.4, 1.0, kBench, c1);
    unsetenv("AQRM_THREADS");
    CHECK(k1.value.m11 == k2.value.m11);
    CHECK(k1.value.m22 == k2.value.m22);
}

TEST_CASE("single-point ingredient wrappers are consistent") {
    const SimplexPoint pt({0.2, 0.5, 0.9});
    const double t = 1.1;
    // η = −2t Σ (−1)^γ μ_γ with the alternating sign convention
    const double e = eta(pt, t);
    CHECK(e == doctest::Approx(-2.0 * t * (0.2 - 0.5 + 0.9)).epsilon(1e-13));
    // ψ⁻ ≥ 0 and bounded by its majorant 8g² tanh(t/2)
    const double ps = psi_minus(pt, t, kBench);
    CHECK(ps >= 0.0);
    CHECK(ps <= 8.0 * kBench.g * kBench.g * std::tanh(0.5 * t) + 1e-12);
    // ξ ≤ its sup bound
    const double xv = xi(pt, t, kBench);
    CHECK(xv <= 4.0 * kBench.g * kBench.g * std::tanh(0.5 * t) * std::cosh(t) + 1e-12);
    // θ is odd under (x,y) → (−x,−y)
    const double th1 = theta(0.4, -0.7, pt, t, kBench);
    const double th2 = theta(-0.4, 0.7, pt, t, kBench);
    CHECK(th1 == doctest::Approx(-th2).epsilon(1e-12));
}
