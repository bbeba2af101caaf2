/*
 * series.hpp — explicit heat-kernel series for the asymmetric quantum Rabi
 * model, with the diagonal trace, the partition function, and the numerator
 * function Ω used for analytic continuation.
 *
 * With u = e^{−t} and the ordered simplex Σ_λ = {0 ≤ μ₁ ≤ … ≤ μ_λ ≤ 1}
 * (μ₀ ≡ 0 by convention inside every integrand):
 *
 *   K(x,y,t) = K̃₀(x,y,t) Σ_{λ≥0} (tΔ)^λ ∫_{Σ_λ}
 *                e^{ −2g² coth(t/2)^{(−1)^λ} + [λ even] 4g² cosh(t(1−μ_λ))/sinh t + ξ_λ }
 *                · B_λ( θ_λ + ε(η_λ + t) ) dμ ,
 *
 *   B_λ(a) = [ (−1)^λ cosh a   (−1)^{λ+1} sinh a ]
 *            [ −sinh a          cosh a            ] ,
 *
 * where, with s_γ = (−1)^γ,
 *
 *   θ_λ = (√2 g/sinh t)(x(e^t+e^{−t}) − 2y)·[λ odd]
 *         − √2 g (x−y) coth(t/2)
 *         + (√2 g/sinh t)(−1)^λ Σ_{γ=0}^{λ} s_γ ( x·2cosh(t(1−μ_γ)) − y·2cosh(tμ_γ) ) ,
 *   η_λ = −2t(−1)^λ Σ_{γ=1}^{λ} s_γ μ_γ ,
 *   ξ_λ = −(g²/sinh t) [ (2 sinh(t(1−μ_λ)/2))² (−1)^λ Σ_{γ=0}^{λ} s_γ·2cosh(tμ_γ)
 *         + Σ_{0≤α<β≤λ−1, β−α odd} (F_{β+1}−F_β)(G_α−G_{α+1}) ] ,
 *         F_γ = 2cosh(t(1−μ_γ)) ,  G_γ = 2cosh(tμ_γ) ,
 *   ψ⁻_λ = (g²/sinh t) [ Σ_{γ=0}^{λ} s_γ·2sinh(t(½−μ_γ)) ]² ≥ 0 .
 *
 * Traces close over the even terms only (odd B_λ are traceless):
 *
 *   tr K(x,x,t) = K̃₀(x,x,t) Σ_{λ even} (tΔ)^λ ∫ 2cosh(θ_λ+ε(η_λ+t)) e^{…} dμ ,
 *
 *   Z(β) = 2e^{g²β}/(1−e^{−β}) · [ cosh(εβ) + Σ_{ℓ≥1} (βΔ)^{2ℓ} ∫_{Σ_{2ℓ}}
 *            cosh(ε(β+η_{2ℓ})) e^{ −2g²coth(β/2) + 4g²cosh(β(1−μ_{2ℓ}))/sinh β
 *                                   + ξ_{2ℓ} + ψ⁻_{2ℓ} } dμ ] ,
 *
 * the ψ⁻ term being the Gaussian completion produced by the x-integral.
 * Ω(t) = (1−e^{−t}) Z(t) extends holomorphically to {Re t > 0} ∪ {|t| < π}
 * with Ω(0) = 2; the complex-capable evaluator below feeds the contour
 * representation of the spectral zeta function.
 *
 * Truncation control: tail_bound(λ,t) majorizes the λ-th term by
 * (tΔ)^λ/λ! · exp(sup E + sup|arg|), using the alternating-monotone bounds
 * |Σ s_γ a_γ| ≤ max(|a_0|,|a_λ|) for monotone a, |η| ≤ 2t, ξ ≤ 4g² tanh(t/2) cosh t
 * (the ξ double sum is ≤ 0 termwise), ψ⁻ ≤ 2g² tanh(t/2).
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "model.hpp"
#include "reduce.hpp"
#include "simplex.hpp"

namespace aqrm {

// ── configuration and results ───────────────────────────────────────────────

/// Truncation and quadrature policy for the series evaluators.
///
/// `lambda_max` caps the simplex dimension for the kernel series and the
/// *pair index* ℓ (dimension 2ℓ) for the trace/partition/Ω series, matching
/// each series' natural step.  `tail_tol` is the absolute stopping threshold
/// on the bracketed series (the K̃₀ / 2e^{g²β}/(1−e^{−β}) prefactors are
/// applied afterwards).  The quadrature rule follows the per-dimension auto
/// policy unless `rule_override` pins an explicit rule.
struct SeriesConfig {
    int lambda_max = 12;
    double tail_tol = 1e-8;
    bool rule_override = false;
    QuadratureRule rule{};
    std::uint64_t seed = 20260819ULL;
    int trace_points = 96;          ///< spatial Gauss order for x-integrals
    double trace_halfwidth = 6.0;   ///< half-width in units of the Gaussian σ
    int threads = 0;                ///< 0 = AQRM_THREADS / hardware default

    SeriesConfig() = default;
    SeriesConfig(int lmax, double tol) : lambda_max(lmax), tail_tol(tol) {
        if (lmax < 0) throw std::invalid_argument("SeriesConfig: lambda_max must be >= 0");
        if (!(tol > 0.0)) throw std::invalid_argument("SeriesConfig: tail_tol must be > 0");
    }
};

/// Kernel evaluation result: value with diagnostics.  `converged` is false
/// when the term majorant never dropped below tail_tol within lambda_max;
/// the partial sum is still returned.
struct KernelResult {
    Mat2 value{};
    int lambda_used = 0;     ///< highest simplex dimension included
    double quad_error = 0.0; ///< accumulated quadrature error estimate
    double tail_bound = 0.0; ///< majorant of the dropped tail
    bool converged = false;
};

/// Diagnostics for the scalar series (trace / partition / Ω).
struct ZInfo {
    int pairs_used = 0;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
};

namespace detail {

inline QuadratureRule effective_rule(const SeriesConfig& cfg, int lambda) {
    if (cfg.rule_override) return cfg.rule;
    QuadratureRule r = auto_rule(lambda);
    r.seed = cfg.seed;
    return r;
}

/// 1 − e^{−t}, stable for small real t; direct for complex t (contour points
/// never approach 0).
inline double one_minus_exp_neg(double t) { return -std::expm1(-t); }
inline std::complex<double> one_minus_exp_neg(std::complex<double> t) {
    return 1.0 - std::exp(-t);
}

/// Per-node series ingredients, fused so each coordinate costs one exp.
/// μ₀ = 0 is implicit; mu points at μ₁..μ_λ.
template <class S>
struct Ingredients {
    S theta{}, eta{}, xi{}, psi{};
};

template <class S>
inline Ingredients<S> ingredients(const double* mu, int lam, S t, double g, double x,
                                  double y, bool want_theta, bool want_psi) {
    const S et = std::exp(t);
    const S iet = 1.0 / et;
    const S eh = std::exp(0.5 * t);
    const S ieh = 1.0 / eh;
    const S sinht = 0.5 * (et - iet);
    const double sgn = (lam % 2 == 0) ? 1.0 : -1.0;

    // running state over γ = 0..λ (μ₀ = 0): one exp per coordinate
    S theta_sum{}, SG{}, SH{}, eta_sum{};
    S xi_pairs{};            // Σ_{β−α odd} (F_{β+1}−F_β)(G_α−G_{α+1})
    S bucket0{}, bucket1{};  // parity prefix sums of G_α − G_{α+1}
    S F_prev{}, G_prev{}, F_last{};
    double sg = 1.0;  // s_γ
    for (int gamma = 0; gamma <= lam; ++gamma) {
        const S E = (gamma == 0) ? S{1.0} : std::exp(t * mu[gamma - 1]);
        const S G = E + 1.0 / E;        // 2cosh(tμ_γ)
        const S F = et / E + E * iet;   // 2cosh(t(1−μ_γ))
        if (want_theta) theta_sum += sg * (x * F - y * G);
        SG += sg * G;
        if (want_psi) SH += sg * (eh / E - E * ieh);  // 2sinh(t(½−μ_γ))
        if (gamma >= 1) {
            eta_sum += sg * mu[gamma - 1];
            // β = γ−1 ranges 0..λ−1: dF_β = F_{β+1}−F_β pairs with the
            // opposite-parity prefix of dG_α = G_α − G_{α+1}
            const S dF = F - F_prev;
            const S dG = G_prev - G;
            const int beta = gamma - 1;
            xi_pairs += dF * ((beta % 2 == 0) ? bucket1 : bucket0);
            ((beta % 2 == 0) ? bucket0 : bucket1) += dG;
        }
        F_prev = F;
        G_prev = G;
        F_last = F;
        sg = -sg;
    }

    Ingredients<S> out;
    const S c = (g * g) / sinht;  // = 2g²u/(1−u²)
    out.eta = -2.0 * t * sgn * eta_sum;
    out.xi = -c * ((F_last - 2.0) * sgn * SG + xi_pairs);
    if (want_psi) out.psi = c * SH * SH;
    if (want_theta) {
        const S pref = std::sqrt(2.0) * g / sinht;
        const S u = iet;
        S th = pref * sgn * theta_sum;
        if (lam % 2 == 1) th += pref * (x * (et + iet) - 2.0 * y);
        th -= std::sqrt(2.0) * g * (x - y) * (1.0 + u) / one_minus_exp_neg(t);
        out.theta = th;
    }
    return out;
}

}  // namespace detail

// ── single-point series ingredients (contract form) ─────────────────────────

template <class S>
inline S theta(double x, double y, const SimplexPoint& p, S t, const ModelParams& mp) {
    return detail::ingredients<S>(p.mu.data(), p.lambda(), t, mp.g, x, y, true, false).theta;
}

template <class S>
inline S xi(const SimplexPoint& p, S t, const ModelParams& mp) {
    return detail::ingredients<S>(p.mu.data(), p.lambda(), t, mp.g, 0.0, 0.0, false, false).xi;
}

template <class S>
inline S eta(const SimplexPoint& p, S t) {
    return detail::ingredients<S>(p.mu.data(), p.lambda(), t, 0.0, 0.0, 0.0, false, false).eta;
}

template <class S>
inline S psi_minus(const SimplexPoint& p, S t, const ModelParams& mp) {
    return detail::ingredients<S>(p.mu.data(), p.lambda(), t, mp.g, 0.0, 0.0, false, true).psi;
}

// ── term majorants ──────────────────────────────────────────────────────────

namespace detail {

/// exp bound on the scalar exponent: E ≤ ±2g²tanh(t/2) + [even] 4g²coth t
/// + ξ_sup (+ ψ_sup when requested), all derived from alternating-monotone
/// sum bounds; valid for real t > 0.
inline double exponent_sup(int lambda, double t, const ModelParams& p, bool with_psi) {
    const double g2 = p.g * p.g;
    const double T2 = std::tanh(0.5 * t);
    const double xi_sup = 4.0 * g2 * T2 * std::cosh(t);
    double e = xi_sup;
    if (lambda % 2 == 0) {
        // −2g²coth(t/2) + 4g²coth(t) = +2g²tanh(t/2)
        e += 2.0 * g2 * T2;
    } else {
        e += -2.0 * g2 * T2;
    }
    // ψ = (g²/sinh t)·SH² with SH an alternating sum of the decreasing
    // 2sinh(t(½−μ_γ)) over ordered μ's: |SH| ≤ f(μ₀) − f(μ_λ) ≤ 4sinh(t/2),
    // hence ψ ≤ 16 g² sinh²(t/2)/sinh t = 8 g² tanh(t/2)
    if (with_psi) e += 8.0 * g2 * T2;
    return e;
}

inline double theta_sup(int lambda, double x, double y, double t, const ModelParams& p) {
    const double ax = std::abs(x), ay = std::abs(y);
    const double T2 = std::tanh(0.5 * t);
    const double second = std::sqrt(2.0) * p.g * std::abs(x - y) / T2;
    const double pref = std::sqrt(2.0) * p.g / std::sinh(t);
    return second + pref * (lambda + 2.0) * 2.0 * std::cosh(t) * (ax + ay);
}

}  // namespace detail

/// Majorant of the λ-th bracketed series term at x = y = 0 (θ ≡ 0 there);
/// includes the ψ⁻ and ε-argument allowances, so it also majorizes the
/// partition-series integrand term of the same dimension.
inline double tail_bound(int lambda, double t, const ModelParams& p) {
    if (lambda < 0) throw std::invalid_argument("tail_bound: lambda must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("tail_bound: t must be > 0");
    if (lambda >= 1 && p.delta == 0.0) return 0.0;
    const double log_amp = (lambda == 0)
                               ? 0.0
                               : lambda * std::log(t * p.delta) - std::lgamma(lambda + 1.0);
    const double arg_sup = 3.0 * std::abs(p.eps) * t;  // |ε(η+t)| ≤ 3|ε|t
    return std::exp(log_amp + detail::exponent_sup(lambda, t, p, true) + arg_sup);
}

/// Majorant of the λ-th bracketed kernel term at general (x, y): the x=y=0
/// bound times the exp of the θ envelope.
inline double tail_bound_kernel(int lambda, double x, double y, double t,
                                const ModelParams& p) {
    return tail_bound(lambda, t, p) * std::exp(detail::theta_sup(lambda, x, y, t, p));
}

// ── kernel series ───────────────────────────────────────────────────────────

namespace detail {

struct CS {
    double c = 0.0, s = 0.0;
    CS operator+(const CS& o) const { return {c + o.c, s + o.s}; }
};

/// Node sum of (w e^E cosh(arg), w e^E sinh(arg)) over a node subrange.
inline CS kernel_node_sum(const QuadNodes& nd, std::size_t lo, std::size_t hi, double x,
                          double y, double t, const ModelParams& p, int threads) {
    const int lam = nd.lambda;
    const double g2 = p.g * p.g;
    const double T2 = std::tanh(0.5 * t);
    const double cothpm = (lam % 2 == 0) ? 1.0 / T2 : T2;
    const double sinht = std::sinh(t);
    const bool even = (lam % 2 == 0);
    return indexed_sum<CS>(
        hi - lo,
        [&, lo](std::size_t k) {
            const std::size_t i = lo + k;
            const double* mu = nd.point(i);
            const auto ing = ingredients<double>(mu, lam, t, p.g, x, y, true, false);
            double E = -2.0 * g2 * cothpm + ing.xi;
            if (even) {
                const double mul = (lam > 0) ? mu[lam - 1] : 0.0;
                E += 4.0 * g2 * std::cosh(t * (1.0 - mul)) / sinht;
            }
            const double arg = ing.theta + p.eps * (ing.eta + t);
            const double we = nd.w[i] * std::exp(E);
            return CS{we * std::cosh(arg), we * std::sinh(arg)};
        },
        threads);
}

struct TermCS {
    double c = 0.0, s = 0.0, err = 0.0;
};

/// (cosh, sinh) integrals of the λ-th term with an error estimate:
/// order-pair difference for tensor rules, half-sample difference for
/// quasi-random rules.
inline TermCS kernel_term_cs(int lambda, double x, double y, double t,
                             const ModelParams& p, const QuadratureRule& rule,
                             int threads) {
    if (lambda == 0) {
        const QuadNodes& nd = simplex_nodes(0, rule);
        const CS v = kernel_node_sum(nd, 0, 1, x, y, t, p, threads);
        return {v.c, v.s, 0.0};
    }
    if (rule.kind == QuadratureRule::Kind::tensor_gauss) {
        const QuadNodes& hi = simplex_nodes(lambda, rule);
        QuadratureRule lo_rule = rule;
        lo_rule.order = rule.order - 1;
        const QuadNodes& lo = simplex_nodes(lambda, lo_rule);
        const CS vh = kernel_node_sum(hi, 0, hi.n, x, y, t, p, threads);
        const CS vl = kernel_node_sum(lo, 0, lo.n, x, y, t, p, threads);
        return {vh.c, vh.s, std::abs(vh.c - vl.c) + std::abs(vh.s - vl.s)};
    }
    const QuadNodes& nd = simplex_nodes(lambda, rule);
    const std::size_t half = nd.n / 2;
    const CS a = kernel_node_sum(nd, 0, half, x, y, t, p, threads);
    const CS b = kernel_node_sum(nd, half, nd.n, x, y, t, p, threads);
    return {a.c + b.c, a.s + b.s,
            0.5 * (std::abs(a.c - b.c) + std::abs(a.s - b.s))};
}

inline double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

template <class S>
inline S pow_int_s(S base, int e) {
    S r{1.0};
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace detail

/// The λ-th term of the bracketed kernel series (the K̃₀ prefactor is *not*
/// included): (tΔ)^λ ∫ e^{E_λ} B_λ(θ_λ + ε(η_λ + t)) dμ.
inline Mat2 kernel_term(int lambda, double x, double y, double t, const ModelParams& p,
                        const QuadratureRule& rule, double* quad_error = nullptr,
                        int threads = 0) {
    if (lambda < 0) throw std::invalid_argument("kernel_term: lambda must be >= 0");
    if (!(t > 0.0)) throw std::domain_error("kernel_term: t must be > 0");
    if (lambda >= 1 && p.delta == 0.0) {
        if (quad_error) *quad_error = 0.0;
        return Mat2::zero();
    }
    const auto cs = detail::kernel_term_cs(lambda, x, y, t, p, rule, threads);
    const double amp = detail::pow_int(t * p.delta, lambda);
    const double sgn = (lambda % 2 == 0) ? 1.0 : -1.0;
    if (quad_error) *quad_error = amp * cs.err;
    return Mat2{sgn * cs.c, -sgn * cs.s, -cs.s, cs.c} * amp;
}

/// Full kernel K(x,y,t) = K̃₀ Σ_λ (term), truncated at lambda_max or at the
/// first λ whose majorant falls below tail_tol with a safely decreasing
/// ratio.  Non-convergence is flagged, never silently absorbed.
inline KernelResult heat_kernel(double x, double y, double t, const ModelParams& p,
                                const SeriesConfig& cfg = {}) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
    KernelResult out;
    Mat2 acc = Mat2::zero();
    double qerr = 0.0;
    double tail = 0.0;
    bool stopped = false;
    double prev_mag = 0.0;
    int lam = 0;
    for (; lam <= cfg.lambda_max; ++lam) {
        double e = 0.0;
        const Mat2 term =
            kernel_term(lam, x, y, t, p, detail::effective_rule(cfg, lam), &e, cfg.threads);
        acc += term;
        qerr += e;
        // rigorous majorant stop (loose but safe at moderate t)
        const double b1 = tail_bound_kernel(lam + 1, x, y, t, p);
        const double b2 = tail_bound_kernel(lam + 2, x, y, t, p);
        const double ratio = (b1 > 0.0) ? b2 / b1 : 0.0;
        if (b1 < cfg.tail_tol && ratio < 0.75) {
            tail = b1 / (1.0 - ratio);
            stopped = true;
            break;
        }
        tail = std::isfinite(b1) ? b1 : term.max_abs();
        // measured fallback for t large enough that the majorant is useless
        const double mag = term.max_abs();
        const double amp_ratio = t * p.delta / (lam + 1.0);
        if (lam > 4 && mag < cfg.tail_tol && mag < prev_mag && amp_ratio < 0.5) {
            tail = mag * amp_ratio / (1.0 - amp_ratio);
            stopped = true;
            break;
        }
        prev_mag = mag;
    }
    const double base = mehler_base(x, y, p.g, t);
    out.value = base * acc;
    out.lambda_used = std::min(lam, cfg.lambda_max);
    out.quad_error = base * qerr;
    out.tail_bound = base * tail;
    out.converged = stopped;
    return out;
}

// ── scalar series: trace, partition function, Ω ─────────────────────────────

namespace detail {

template <class S>
struct ScalarAcc {
    S v{};
    ScalarAcc operator+(const ScalarAcc& o) const { return {v + o.v}; }
};

/// One even term (dimension λ = 2ℓ) of the scalar series.  is_trace selects
/// the diagonal-trace integrand (θ at (x,x), no ψ⁻); otherwise the partition
/// integrand (ψ⁻ present, no θ).  Returns the integral with its error
/// estimate; the (tΔ)^{2ℓ} amplitude is applied by the caller.
template <class S>
inline std::pair<S, double> scalar_term(int lambda, S t, const ModelParams& p,
                                        const QuadratureRule& rule, bool is_trace,
                                        double x, int threads) {
    const double g2 = p.g * p.g;
    const S T2inv = 1.0 / std::tanh(0.5 * t);
    const S sinht = std::sinh(t);
    auto node_val = [&](const double* mu, std::size_t i, const QuadNodes& nd) -> S {
        const auto ing = ingredients<S>(mu, lambda, t, p.g, x, x, is_trace, !is_trace);
        const double mul = (lambda > 0) ? mu[lambda - 1] : 0.0;
        S E = -2.0 * g2 * T2inv + 4.0 * g2 * std::cosh(t * (1.0 - mul)) / sinht + ing.xi;
        if (!is_trace) E += ing.psi;
        const S arg = (is_trace ? ing.theta : S{}) + p.eps * (ing.eta + t);
        return nd.w[i] * std::exp(E) * std::cosh(arg);
    };
    auto range_sum = [&](const QuadNodes& nd, std::size_t lo, std::size_t hi) -> S {
        return indexed_sum<ScalarAcc<S>>(
                   hi - lo,
                   [&, lo](std::size_t k) {
                       const std::size_t i = lo + k;
                       return ScalarAcc<S>{node_val(nd.point(i), i, nd)};
                   },
                   threads)
            .v;
    };
    if (rule.kind == QuadratureRule::Kind::tensor_gauss) {
        const QuadNodes& hi = simplex_nodes(lambda, rule);
        QuadratureRule lo_rule = rule;
        lo_rule.order = rule.order - 1;
        const QuadNodes& lo = simplex_nodes(lambda, lo_rule);
        const S vh = range_sum(hi, 0, hi.n);
        const S vl = range_sum(lo, 0, lo.n);
        return {vh, std::abs(vh - vl)};
    }
    const QuadNodes& nd = simplex_nodes(lambda, rule);
    const std::size_t half = nd.n / 2;
    const S a = range_sum(nd, 0, half);
    const S b = range_sum(nd, half, nd.n);
    return {a + b, 0.5 * std::abs(a - b)};
}

/// Bracketed scalar series Σ_{ℓ≥0} (tΔ)^{2ℓ}(…): ℓ = 0 term is cosh(ε·t)
/// for the partition/Ω flavor or the λ = 0 trace integrand for the trace
/// flavor.  Stops on the term majorant for real t; for complex t (where no
/// sup bound applies) on the measured term magnitudes with a ratio guard.
template <class S>
inline S scalar_bracket(S t, const ModelParams& p, const SeriesConfig& cfg, bool is_trace,
                        double x, ZInfo* info) {
    constexpr bool kReal = std::is_same_v<S, double>;
    S acc;
    double qerr = 0.0;
    if (is_trace) {
        auto [v0, e0] = scalar_term<S>(0, t, p, detail::effective_rule(cfg, 0), true, x,
                                       cfg.threads);
        acc = 2.0 * v0;
        qerr = 2.0 * e0;
    } else {
        acc = std::cosh(p.eps * t);
    }
    bool stopped = (p.delta == 0.0);
    double tail = 0.0;
    int ell = 0;
    S prev_term{};
    if (!stopped) {
        const S td = t * p.delta;
        for (ell = 1; ell <= cfg.lambda_max; ++ell) {
            const int lam = 2 * ell;
            auto [v, e] = scalar_term<S>(lam, t, p, detail::effective_rule(cfg, lam),
                                         is_trace, x, cfg.threads);
            const S amp = pow_int_s(td, lam);
            const S term = amp * v * (is_trace ? 2.0 : 1.0);
            acc += term;
            qerr += std::abs(amp) * e * (is_trace ? 2.0 : 1.0);
            // Rigorous majorant stop (real t only; the sup bound grows like
            // e^{cosh t} and is useful only for moderate t — it overflows
            // harmlessly to inf at large t and this branch never fires).
            if constexpr (kReal) {
                double b1 = tail_bound(lam + 2, t, p);
                if (is_trace) b1 *= 2.0 * std::exp(theta_sup(lam + 2, x, x, t, p));
                const double b2 = tail_bound(lam + 4, t, p);
                const double ratio = (b1 > 0.0) ? b2 / b1 : 0.0;
                if (b1 < cfg.tail_tol && ratio < 0.75) {
                    tail = b1 / (1.0 - ratio);
                    stopped = true;
                    break;
                }
                tail = std::isfinite(b1) ? b1 : std::abs(term);
            } else {
                tail = std::abs(term);
            }
            // Measured-magnitude stop: once the amplitude ratio
            // |tΔ|²/((λ+1)(λ+2)) has dropped below ½ the terms decay
            // super-exponentially, so the last term bounds the tail shape.
            const double ratio_next = std::norm(td) / ((lam + 1.0) * (lam + 2.0));
            if (ell > 2 && std::abs(term) < cfg.tail_tol * std::max(1.0, std::abs(acc)) &&
                std::abs(prev_term) > std::abs(term) && ratio_next < 0.5) {
                tail = std::abs(term) * ratio_next / (1.0 - ratio_next);
                stopped = true;
                break;
            }
            prev_term = term;
        }
    }
    if (info) {
        info->pairs_used = std::min(ell, cfg.lambda_max);
        info->quad_error = qerr;
        info->tail_bound = tail;
        info->converged = stopped;
    }
    return acc;
}

}  // namespace detail

/// Diagonal trace tr K(x,x,t): even kernel terms only.  `cfg.lambda_max`
/// counts pairs (dimension 2ℓ), aligned with the partition series.
inline double trace_diag(double x, double t, const ModelParams& p,
                         const SeriesConfig& cfg = {}, ZInfo* info = nullptr) {
    if (!(t > 0.0)) throw std::domain_error("trace_diag: t must be > 0");
    const double bracket = detail::scalar_bracket<double>(t, p, cfg, true, x, info);
    const double base = mehler_base(x, x, p.g, t);
    if (info) {
        info->quad_error *= base;
        info->tail_bound *= base;
    }
    return base * bracket;
}

/// Partition function Z(β) = Tr e^{−βH}.
inline double partition_function(double beta, const ModelParams& p,
                                 const SeriesConfig& cfg = {}, ZInfo* info = nullptr) {
    if (!(beta > 0.0)) throw std::domain_error("partition_function: beta must be > 0");
    const double bracket = detail::scalar_bracket<double>(beta, p, cfg, false, 0.0, info);
    const double pref =
        2.0 * std::exp(p.g * p.g * beta) / detail::one_minus_exp_neg(beta);
    if (info) {
        info->quad_error *= pref;
        info->tail_bound *= pref;
    }
    return pref * bracket;
}

/// Ω(t) = (1 − e^{−t}) Z(t), holomorphic on D = {Re t > 0} ∪ {|t| < π} with
/// Ω(0) = 2.  Points outside D are rejected; t = 0 returns the limit value.
inline std::complex<double> omega_numerator(std::complex<double> t, const ModelParams& p,
                                            const SeriesConfig& cfg = {},
                                            ZInfo* info = nullptr) {
    constexpr double kDomainRadius = 3.0;  // safely inside |t| < π
    if (!(t.real() > 0.0 || std::abs(t) < kDomainRadius))
        throw std::domain_error("omega_numerator: t outside the holomorphy domain");
    if (std::abs(t) < 1e-14) return {2.0, 0.0};
    const std::complex<double> bracket =
        detail::scalar_bracket<std::complex<double>>(t, p, cfg, false, 0.0, info);
    const std::complex<double> pref = 2.0 * std::exp(p.g * p.g * t);
    if (info) {
        info->quad_error *= std::abs(pref);
        info->tail_bound *= std::abs(pref);
    }
    return pref * bracket;
}

// ── spatial quadrature helpers (trace / semigroup cross-checks) ─────────────

/// Gauss–Legendre rule on [−L, L] sized from the K̃₀(x,x) Gaussian envelope
/// e^{−x² tanh(t/2)}: σ = 1/√(2 tanh(t/2)), L = halfwidth·σ + drift margin.
inline void trace_grid(double t, const ModelParams& p, const SeriesConfig& cfg,
                       std::vector<double>& x, std::vector<double>& w) {
    const double sigma = 1.0 / std::sqrt(2.0 * std::tanh(0.5 * t));
    const double L = cfg.trace_halfwidth * sigma + 4.0 * p.g;
    std::vector<double> x0, w0;
    gauss_legendre_01(cfg.trace_points, x0, w0);
    x.resize(x0.size());
    w.resize(w0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x[i] = -L + 2.0 * L * x0[i];
        w[i] = 2.0 * L * w0[i];
    }
}

/// ∫ tr K(x,x,t) dx by the trace grid — equals Z(t) up to quadrature and
/// truncation error; kept separate so the identity is a genuine cross-check.
inline double integrated_trace(double t, const ModelParams& p,
                               const SeriesConfig& cfg = {}) {
    std::vector<double> x, w;
    trace_grid(t, p, cfg, x, w);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * trace_diag(x[i], t, p, cfg);
    return acc;
}

}  // namespace aqrm
