/*
 * zeta.hpp — spectral zeta function of the asymmetric quantum Rabi model,
 *
 *   ζ(s; τ) = Σ_j (λ_j + τ)^{−s} ,
 *
 * through three independent routes that cross-validate each other:
 *
 *  · dirichlet — direct sum over the trusted truncated spectrum plus the
 *    Weyl tail 2(λ_K+τ)^{1−s}/(s−1) (two states per unit energy).
 *
 *  · mellin — ζ = (1/Γ(s)) ∫₀^∞ t^{s−1} Z(t) e^{−τt} dt, split at t₀ with
 *    the t→0 singularity handled by subtracting the exact 2/t behaviour of
 *    Z e^{−τt} and integrating it in closed form: 2 t₀^{s−1}/(s−1).
 *    Valid for Re s > 0, s ≠ 1, λ₁ + τ > 0.
 *
 *  · hankel — the contour continuation
 *      ζ = −Γ(1−s)/(2πi) ∮ (−w)^{s−1} Ω(w) e^{−τw} / (1−e^{−w}) dw
 *    over a loop hugging the positive real axis: incoming ray on top
 *    (arg(−w) = −π), counterclockwise circle |w| = δ, outgoing ray below
 *    (arg(−w) = +π).  The two rays combine to 2i sin(π(s−1)) ∫_δ^R … with
 *    real-axis values, the circle is integrated with w = δe^{iφ}, φ: 0→2π.
 *    Defined for all s off the ζ pole; at integer s ≥ 2 the Γ(1−s) poles
 *    make the representation degenerate and the evaluator falls back to
 *    the Mellin form.
 *
 * The residue of ζ at s = 1 equals the Weyl density 2, probed by Richardson
 * extrapolation of (s−1)ζ(s) at s = 1 + 2^{−k}.
 *
 * Z(t) values (real and complex) are cached by the bit pattern of t, so
 * repeated queries at the same τ — and the five Mellin evaluations of a
 * residue probe — reuse every partition-function evaluation.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fock.hpp"
#include "model.hpp"
#include "series.hpp"
#include "simplex.hpp"

namespace aqrm {

// ── complex gamma (Lanczos, g = 7, 9 coefficients) ─────────────────────────

inline std::complex<double> gamma_complex(std::complex<double> z) {
    static const double c[9] = {0.99999999999980993,  676.5203681218851,
                                -1259.1392167224028,  771.32342877765313,
                                -176.61502916214059,  12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6,
                                1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection Γ(z)Γ(1−z) = π/sin(πz)
        return M_PI / (std::sin(M_PI * z) * gamma_complex(1.0 - z));
    }
    z -= 1.0;
    std::complex<double> x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// ── configuration / query types ─────────────────────────────────────────────

struct ZetaConfig {
    int cutoff = 600;        ///< truncation for the Dirichlet route / Weyl counts
    int probe_cutoff = 210;  ///< cheap diagonalization for λ₁ and domain checks
    double t0 = 1.0;         ///< Mellin split point
    double t_min = 1e-8;     ///< lower edge of the subtracted small-t integral
    double t_max = 60.0;     ///< hard cap on the Mellin upper limit
    double panel_ratio_small = 2.5;
    double panel_ratio_large = 1.6;
    int panel_order = 16;    ///< Gauss–Legendre points per panel
    double hankel_delta = 0.5;
    double hankel_R = 40.0;  ///< ray length floor (extended to reach e^{−37})
    int hankel_circle_order = 96;
    SeriesConfig series;     ///< partition-series policy for Z evaluations

    ZetaConfig() {
        series.lambda_max = 60;
        series.tail_tol = 1e-12;
    }
};

enum class ZetaMethod { dirichlet, mellin, hankel };

struct ZetaQuery {
    std::complex<double> s{2.0, 0.0};
    double tau = 1.0;
    ModelParams params{0.5, 1.0, 0.0};
    ZetaMethod method = ZetaMethod::mellin;
    ZetaConfig cfg{};
};

/// Value with an honest (heuristic) error estimate for reporting.
struct ZetaValue {
    std::complex<double> value{};
    double error = 0.0;
};

struct ResidueProbe {
    std::vector<double> raw;    ///< (s_k−1) ζ(s_k) at s_k = 1 + 2^{−k}, k = 2..6
    std::vector<double> rich1;  ///< first Richardson pass 2v_{k+1} − v_k
    std::vector<double> rich2;  ///< second pass
    double value = 0.0;         ///< final extrapolant
};

struct WeylRow {
    double T = 0.0;
    int count = 0;
    double ratio = 0.0;  ///< N(T) / (2T)
};

// ── evaluator ───────────────────────────────────────────────────────────────

class ZetaEvaluator {
  public:
    explicit ZetaEvaluator(const ModelParams& p, ZetaConfig cfg = {})
        : params_(p), cfg_(cfg) {}

    const ModelParams& params() const { return params_; }
    const ZetaConfig& config() const { return cfg_; }

    /// Ground-state energy from the cheap probe diagonalization.
    double lambda1() {
        ensure_probe();
        return probe_->lowest();
    }

    /// Full truncated spectrum (built on first use).
    const Spectrum& spectrum() {
        ensure_full();
        return full_->spectrum();
    }

    /// Cached partition function at real t > 0.  `err`, when given, receives
    /// the series' own absolute error report (simplex quadrature + tail).
    double Z(double t, double* err = nullptr) {
        std::uint64_t key;
        std::memcpy(&key, &t, sizeof key);
        auto it = zcache_.find(key);
        if (it == zcache_.end()) {
            ZInfo zi;
            const double v = partition_function(t, params_, cfg_.series, &zi);
            it = zcache_.emplace(key, std::pair<double, double>{v, zi.quad_error + zi.tail_bound})
                     .first;
        }
        if (err) *err = it->second.second;
        return it->second.first;
    }

    /// Cached Ω(w)/(1−e^{−w}) = Z(w) at complex w (holomorphic continuation).
    std::complex<double> Zc(std::complex<double> w, double* err = nullptr) {
        std::pair<std::uint64_t, std::uint64_t> key;
        const double re = w.real(), im = w.imag();
        std::memcpy(&key.first, &re, sizeof re);
        std::memcpy(&key.second, &im, sizeof im);
        auto it = zccache_.find(key);
        if (it == zccache_.end()) {
            ZInfo zi;
            const std::complex<double> om = omega_numerator(w, params_, cfg_.series, &zi);
            const std::complex<double> den = 1.0 - std::exp(-w);
            it = zccache_
                     .emplace(key, std::pair<std::complex<double>, double>{
                                       om / den, (zi.quad_error + zi.tail_bound) / std::abs(den)})
                     .first;
        }
        if (err) *err = it->second.second;
        return it->second.first;
    }

    ZetaValue dirichlet(std::complex<double> s, double tau) {
        check_pole(s);
        if (!(s.real() > 1.0))
            throw std::domain_error("zeta_dirichlet: requires Re s > 1");
        check_tau(tau);
        const Spectrum& sp = spectrum();
        const int K = sp.trusted_count;
        std::complex<double> main = 0.0;
        for (int j = K - 1; j >= 0; --j)
            main += std::pow(std::complex<double>(sp.eigenvalues[j] + tau, 0.0), -s);
        const double lamK = sp.eigenvalues[K - 1];
        const std::complex<double> tail =
            2.0 * std::pow(std::complex<double>(lamK + tau, 0.0), 1.0 - s) / (s - 1.0);
        // Euler–Maclaurin-type correction scale of the Weyl tail model
        const double err = std::abs(std::pow(lamK + tau, -s.real()));
        return {main + tail, err};
    }

    ZetaValue mellin(std::complex<double> s, double tau) {
        check_pole(s);
        if (!(s.real() > 0.0))
            throw std::domain_error("zeta_mellin: requires Re s > 0");
        const double rate = require_rate(tau);
        const double T = std::min(cfg_.t_max, std::max(20.0, 37.0 / rate));
        const double t0 = cfg_.t0;
        std::complex<double> val = 2.0 * std::pow(t0, s - 1.0) / (s - 1.0);
        double zerr = 0.0;  // partition-series error, propagated through the panels
        // (t_min, t0]: subtracted integrand, bounded as t → 0
        for_panels(cfg_.t_min, t0, cfg_.panel_ratio_small, [&](double t, double w) {
            double ze;
            const double damp = std::exp(-t * tau);
            const double G = Z(t, &ze) * damp - 2.0 / t;
            val += w * std::pow(t, s - 1.0) * G;
            zerr += w * std::abs(std::pow(t, s - 1.0)) * ze * damp;
        });
        // [t0, T]: plain integrand
        for_panels(t0, T, cfg_.panel_ratio_large, [&](double t, double w) {
            double ze;
            const double damp = std::exp(-t * tau);
            val += w * std::pow(t, s - 1.0) * Z(t, &ze) * damp;
            zerr += w * std::abs(std::pow(t, s - 1.0)) * ze * damp;
        });
        // analytic sliver (0, t_min]: the subtracted integrand G is C¹ at 0, so
        // ∫₀^{t_min} t^{s−1} G dt = G(t_min) t_min^s / s + O(t_min^{Re s + 1});
        // only Re s < 1 can feel it, but it costs nothing to keep always
        const double Gmin = Z(cfg_.t_min) * std::exp(-cfg_.t_min * tau) - 2.0 / cfg_.t_min;
        val += std::pow(cfg_.t_min, s) / s * Gmin;
        const std::complex<double> gs = gamma_complex(s);
        // truncation + propagated series error + roundoff slack
        const double trunc =
            2.0 * std::exp(-rate * T) * std::pow(T, std::max(s.real() - 1.0, 0.0));
        const double err = (trunc + zerr + 1e-10 * std::abs(val)) / std::abs(gs);
        return {val / gs, err};
    }

    ZetaValue hankel(std::complex<double> s, double tau) {
        check_pole(s);
        // integer s ≥ 2: Γ(1−s) degenerates — the Mellin form is the honest route
        if (std::abs(s.imag()) < 1e-12 && std::abs(s.real() - std::round(s.real())) < 1e-12 &&
            s.real() >= 2.0)
            return mellin(s, tau);
        const double rate = require_rate(tau);
        const double delta = cfg_.hankel_delta;
        if (!(delta > 0.0 && delta < 3.0))
            throw std::invalid_argument("zeta_hankel: need 0 < delta < 3");
        const double R = std::max(cfg_.hankel_R, std::min(80.0, 37.0 / rate));
        // combined rays: 2i sin(π(s−1)) ∫_δ^R x^{s−1} Z(x) e^{−τx} dx
        std::complex<double> ray = 0.0;
        double ray_err = 0.0;
        for_panels(delta, R, cfg_.panel_ratio_large, [&](double x, double w) {
            double ze;
            const double damp = std::exp(-tau * x);
            ray += w * std::pow(x, s - 1.0) * Z(x, &ze) * damp;
            ray_err += w * std::abs(std::pow(x, s - 1.0)) * ze * damp;
        });
        // circle w = δ e^{iφ}, φ: 0 → 2π, (−w)^{s−1} = δ^{s−1} e^{i(s−1)(φ−π)}
        std::vector<double> xs, ws;
        gauss_legendre_01(cfg_.hankel_circle_order, xs, ws);
        std::complex<double> circ = 0.0;
        double circ_err = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double phi = 2.0 * M_PI * xs[i];
            const double wq = 2.0 * M_PI * ws[i];
            const std::complex<double> w{delta * std::cos(phi), delta * std::sin(phi)};
            double ze;
            const std::complex<double> F = Zc(w, &ze) * std::exp(-tau * w);
            const std::complex<double> node =
                wq * std::pow(delta, s - 1.0) *
                std::exp(std::complex<double>(0.0, 1.0) * (s - 1.0) * (phi - M_PI)) *
                (std::complex<double>(0.0, 1.0) * w);
            circ += node * F;
            circ_err += std::abs(node) * ze * std::abs(std::exp(-tau * w));
        }
        const std::complex<double> pref =
            -gamma_complex(1.0 - s) / (std::complex<double>(0.0, 2.0 * M_PI));
        const std::complex<double> val =
            pref * (2.0 * std::complex<double>(0.0, 1.0) * std::sin(M_PI * (s - 1.0)) * ray +
                    circ);
        const double trunc = std::abs(2.0 * std::sin(M_PI * (s - 1.0)) * pref) *
                             std::exp(-rate * R) *
                             std::pow(R, std::max(s.real() - 1.0, 0.0));
        const double prop = std::abs(pref) * (std::abs(2.0 * std::sin(M_PI * (s - 1.0))) * ray_err +
                                              circ_err);
        return {val, trunc + prop + 1e-9 * std::abs(val)};
    }

    ZetaValue evaluate(const ZetaQuery& q) {
        switch (q.method) {
            case ZetaMethod::dirichlet: return dirichlet(q.s, q.tau);
            case ZetaMethod::mellin: return mellin(q.s, q.tau);
            case ZetaMethod::hankel: return hankel(q.s, q.tau);
        }
        throw std::logic_error("ZetaEvaluator::evaluate: unknown method");
    }

    /// Richardson probe of the residue at s = 1 (expected value: the Weyl
    /// density 2, independent of g, Δ, ε, τ).
    ResidueProbe residue_probe(double tau) {
        ResidueProbe out;
        for (int k = 2; k <= 6; ++k) {
            const double sk = 1.0 + std::ldexp(1.0, -k);
            const std::complex<double> z = mellin({sk, 0.0}, tau).value;
            out.raw.push_back((sk - 1.0) * z.real());
        }
        for (std::size_t i = 0; i + 1 < out.raw.size(); ++i)
            out.rich1.push_back(2.0 * out.raw[i + 1] - out.raw[i]);
        for (std::size_t i = 0; i + 1 < out.rich1.size(); ++i)
            out.rich2.push_back(2.0 * out.rich1[i + 1] - out.rich1[i]);
        out.value = out.rich2.back();
        return out;
    }

    /// Weyl-law table N(T)/(2T) over the trusted spectrum.
    std::vector<WeylRow> weyl_report(const std::vector<double>& Ts) {
        ensure_full();
        std::vector<WeylRow> rows;
        rows.reserve(Ts.size());
        for (double T : Ts) {
            WeylRow r;
            r.T = T;
            r.count = full_->counting(T);
            r.ratio = r.count / (2.0 * T);
            rows.push_back(r);
        }
        return rows;
    }

  private:
    void ensure_probe() {
        if (!probe_) {
            FockConfig fc;
            fc.cutoff = cfg_.probe_cutoff;
            probe_ = std::make_unique<FockOracle>(params_, fc);
        }
    }
    void ensure_full() {
        if (!full_) {
            FockConfig fc;
            fc.cutoff = cfg_.cutoff;
            full_ = std::make_unique<FockOracle>(params_, fc);
        }
    }
    static void check_pole(std::complex<double> s) {
        if (std::abs(s - std::complex<double>(1.0, 0.0)) < 1e-10)
            throw std::domain_error("zeta: s = 1 is the pole of the zeta function");
    }
    /// λ₁ + τ, which must be positive for the integral representations.
    double require_rate(double tau) {
        ensure_probe();
        const double rate = probe_->lowest() + tau;
        if (!(rate > 1e-9))
            throw std::domain_error("zeta: requires lambda_1 + tau > 0");
        return rate;
    }
    /// Reject τ within 1e−6 of −λ_j (trusted window of the probe spectrum).
    void check_tau(double tau) {
        ensure_probe();
        const Spectrum& sp = probe_->spectrum();
        for (int j = 0; j < sp.trusted_count; ++j)
            if (std::abs(sp.eigenvalues[j] + tau) <= 1e-6)
                throw std::domain_error("zeta: tau collides with -lambda_j");
    }
    /// Geometric panels [lo, hi] with Gauss–Legendre nodes per panel.
    template <class F>
    void for_panels(double lo, double hi, double ratio, F&& f) {
        std::vector<double> xs, ws;
        gauss_legendre_01(cfg_.panel_order, xs, ws);
        double a = lo;
        while (a < hi) {
            const double b = std::min(hi, a * ratio);
            for (std::size_t i = 0; i < xs.size(); ++i)
                f(a + (b - a) * xs[i], (b - a) * ws[i]);
            a = b;
        }
    }

    ModelParams params_;
    ZetaConfig cfg_;
    std::unique_ptr<FockOracle> probe_;
    std::unique_ptr<FockOracle> full_;
    std::map<std::uint64_t, std::pair<double, double>> zcache_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::complex<double>, double>>
        zccache_;
};

// ── free-function forms ─────────────────────────────────────────────────────

inline ZetaValue zeta_dirichlet(const ZetaQuery& q) {
    ZetaEvaluator e(q.params, q.cfg);
    return e.dirichlet(q.s, q.tau);
}

inline ZetaValue zeta_mellin(const ZetaQuery& q) {
    ZetaEvaluator e(q.params, q.cfg);
    return e.mellin(q.s, q.tau);
}

inline ZetaValue zeta_hankel(const ZetaQuery& q) {
    ZetaEvaluator e(q.params, q.cfg);
    return e.hankel(q.s, q.tau);
}

inline ZetaValue zeta_evaluate(const ZetaQuery& q) {
    ZetaEvaluator e(q.params, q.cfg);
    return e.evaluate(q);
}

}  // namespace aqrm
