/*
 * model.hpp — asymmetric quantum Rabi model: parameters and the exact
 * one-step splitting kernel.
 *
 * Hamiltonian on L²(ℝ) ⊗ ℂ², photon frequency normalized to ω = 1:
 *
 *     H = a†a + Δσ_z + g(a + a†)σ_x + εσ_x .
 *
 * Completing the square with b = a + gσ_x factors it as
 *
 *     H = b†b − g² + M ,       M = Δσ_z + εσ_x ,   eigenvalues ±μ ,
 *     μ = √(ε² + Δ²)           (spin mixing energy).
 *
 * The kernel of one splitting step  e^{−t(b†b − g²)} e^{−tM}  is known in
 * closed form (u = e^{−t} throughout):
 *
 *     K₁(x,y,t) = K̃₀(x,y,t) · e^{−2g²(1−u)/(1+u)}
 *                 · exp(−√2 g (x+y) ((1−u)/(1+u)) σ_x) · u^{M} ,
 *
 * with the displaced Mehler base (the g = 0 harmonic-oscillator kernel is
 * recovered by dropping the e^{g²t} prefactor):
 *
 *     K̃₀(x,y,t) = e^{g²t} / √(π(1−u²))
 *                 · exp( −(1+u²)(x²+y²)/(2(1−u²)) + 2uxy/(1−u²) ) .
 *
 * The spin-mixing weights, evaluated at τ = u^{2μ}, are the building blocks
 * of both the finite-N path sum and the Z₂^k Fourier identities:
 *
 *     h₀₀(τ) = (μ(1+τ) + ε(1−τ))/μ ,   h₁₁(τ) = (μ(1+τ) − ε(1−τ))/μ ,
 *     h₀₁(τ) = h₁₀(τ) = Δ(1−τ)/μ .
 *
 * Spin basis convention: component 0 = σ_z eigenvalue +1 (energy +Δ),
 * component 1 = σ_z eigenvalue −1 (energy −Δ).
 */
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace aqrm {

// ── parameters ──────────────────────────────────────────────────────────────

/// Model parameters (g, Δ, ε); ω is fixed to 1 and recorded for documentation.
struct ModelParams {
    double g     = 0.0;  ///< photon–spin coupling, g ≥ 0
    double delta = 0.0;  ///< level splitting Δ ≥ 0
    double eps   = 0.0;  ///< symmetry-breaking bias ε (any sign)
    double omega = 1.0;  ///< photon frequency; the library assumes ω = 1

    ModelParams() = default;
    ModelParams(double g_, double delta_, double eps_)
        : g(g_), delta(delta_), eps(eps_) {
        if (!(std::isfinite(g) && std::isfinite(delta) && std::isfinite(eps)))
            throw std::invalid_argument("ModelParams: parameters must be finite");
        if (g < 0.0) throw std::invalid_argument("ModelParams: g must be >= 0");
        if (delta < 0.0) throw std::invalid_argument("ModelParams: delta must be >= 0");
    }
};

/// Spin mixing energy μ = √(ε² + Δ²) ≥ 0.
inline double mu(const ModelParams& p) noexcept { return std::hypot(p.eps, p.delta); }

/// True when ε is negligible relative to the Δ scale; the symmetric (ε = 0)
/// branches are then exact and avoid 0/0 forms in degenerate limits.
inline bool eps_is_zero(const ModelParams& p) noexcept {
    return std::abs(p.eps) < 1e-12 * std::max(1.0, p.delta);
}

// ── small dense types ───────────────────────────────────────────────────────

/// Real 2×2 matrix acting on the spin factor ℂ², row-major entries m{rc}.
struct Mat2 {
    double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;

    constexpr Mat2() = default;
    constexpr Mat2(double a11, double a12, double a21, double a22)
        : m11(a11), m12(a12), m21(a21), m22(a22) {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {}; }

    constexpr Mat2 operator+(const Mat2& o) const {
        return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
    }
    constexpr Mat2 operator*(double c) const { return {c * m11, c * m12, c * m21, c * m22}; }
    Mat2& operator+=(const Mat2& o) {
        m11 += o.m11; m12 += o.m12; m21 += o.m21; m22 += o.m22;
        return *this;
    }
    /// Matrix product (this ∘ o).
    constexpr Mat2 operator*(const Mat2& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    constexpr Mat2 transpose() const { return {m11, m21, m12, m22}; }
    constexpr double trace() const { return m11 + m22; }
    double max_abs() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }
};

inline Mat2 operator*(double c, const Mat2& m) { return m * c; }

/// Largest entrywise absolute difference.
inline double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

/// Evolution time with its exponential alias u = e^{−t}; u is always derived
/// from t, never stored separately, so the pair cannot drift apart.
struct HeatTime {
    double t;
    explicit HeatTime(double t_) : t(t_) {
        if (!(std::isfinite(t) && t > 0.0))
            throw std::domain_error("HeatTime: t must be finite and > 0");
    }
    double u() const noexcept { return std::exp(-t); }
};

// ── spin-mixing weights ─────────────────────────────────────────────────────

/// h_{vw}(τ) for v, w ∈ {0,1}.  Degenerate spin part (μ = 0) is rejected:
/// every entry would be 0/0.  Works for real and complex τ alike.
template <class Scalar>
inline Scalar h_func(int v, int w, Scalar tau, const ModelParams& p) {
    if ((v != 0 && v != 1) || (w != 0 && w != 1))
        throw std::invalid_argument("h_func: spin indices must be 0 or 1");
    const double m = mu(p);
    if (m == 0.0)
        throw std::domain_error("h_func: degenerate spin part (delta = eps = 0)");
    const Scalar one{1.0};
    if (v == w) {
        const double sign = (v == 0) ? +1.0 : -1.0;
        return (m * (one + tau) + (sign * p.eps) * (one - tau)) / m;
    }
    return p.delta * (one - tau) / m;
}

// ── spin propagator e^{−tM} ─────────────────────────────────────────────────

/// Exact 2×2 spin propagator e^{−tM}, M = Δσ_z + εσ_x:
///     e^{−tM} = cosh(tμ)·I − (sinh(tμ)/μ)·M ,
/// with the exact diagonal branch when ε ≈ 0 and the identity when μ = 0
/// (the fully degenerate M = 0 is a legal spin part here).
inline Mat2 exp_spin(const ModelParams& p, double t) {
    if (!std::isfinite(t)) throw std::domain_error("exp_spin: t must be finite");
    const double m = mu(p);
    if (m == 0.0) return Mat2::identity();
    if (eps_is_zero(p)) {
        // M = Δσ_z exactly: diag(e^{−tΔ}, e^{tΔ}).
        return {std::exp(-t * p.delta), 0.0, 0.0, std::exp(t * p.delta)};
    }
    const double ch = std::cosh(t * m);
    const double shm = std::sinh(t * m) / m;
    return {ch - shm * p.delta, -shm * p.eps, -shm * p.eps, ch + shm * p.delta};
}

// ── Mehler base and the one-step kernel ─────────────────────────────────────

/// Displaced Mehler base K̃₀(x,y,t) (scalar factor common to every kernel
/// representation here).  Requires t > 0.
inline double mehler_base(double x, double y, double g, double t) {
    if (!(std::isfinite(t) && t > 0.0))
        throw std::domain_error("mehler_base: t must be finite and > 0");
    if (g < 0.0) throw std::invalid_argument("mehler_base: g must be >= 0");
    const double u = std::exp(-t);
    const double one_m_u2 = -std::expm1(-2.0 * t);  // 1 − u², stable as t → 0⁺
    const double quad = -(1.0 + u * u) * (x * x + y * y) / (2.0 * one_m_u2)
                        + 2.0 * u * x * y / one_m_u2;
    return std::exp(g * g * t + quad) / std::sqrt(M_PI * one_m_u2);
}

/// Exact kernel of one splitting step e^{−t(b†b−g²)} e^{−tM}.
inline Mat2 one_step_kernel(double x, double y, double t, const ModelParams& p) {
    const HeatTime ht(t);
    const double u = ht.u();
    const double r = -std::expm1(-t) / (1.0 + u);  // (1−u)/(1+u) = tanh(t/2)
    const double base = mehler_base(x, y, p.g, t) * std::exp(-2.0 * p.g * p.g * r);
    // exp(−a σ_x) = cosh(a) I − sinh(a) σ_x with a = √2 g (x+y) (1−u)/(1+u)
    const double a = std::sqrt(2.0) * p.g * (x + y) * r;
    const Mat2 esx{std::cosh(a), -std::sinh(a), -std::sinh(a), std::cosh(a)};
    return base * (esx * exp_spin(p, t));
}

}  // namespace aqrm
