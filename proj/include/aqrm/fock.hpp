/*
 * fock.hpp — truncated Fock-basis diagonalization oracle.
 *
 * The Hamiltonian H = a†a + Δσ_z + g(a+a†)σ_x + εσ_x is represented on the
 * first `cutoff` boson modes ⊗ C², basis index 2m+s with s = 0 the spin-up
 * (+Δ) component.  Nonzero entries:
 *
 *   ⟨m,s|H|m,s⟩     = m + (−1)^s Δ
 *   ⟨m,0|H|m,1⟩     = ε
 *   ⟨m,s|H|m+1,1−s⟩ = g√(m+1)
 *
 * Truncation raises eigenvalues (variational), converging from above as the
 * cutoff grows; by convention the lowest cutoff/3 eigenvalues are treated
 * as trusted.  Every eigenvalue obeys λ ≥ −g² − μ, μ = √(ε²+Δ²).
 *
 * The oracle reconstructs position-space objects through the Hermite
 * functions ψ_m (orthonormal eigenfunctions of a†a):
 *
 *   K_oracle(x,y,t)[a][b] = Σ_k e^{−tλ_k} f_k^a(x) f_k^b(y) ,
 *   f_k^a(x) = Σ_m V_{2m+a,k} ψ_m(x) ,
 *
 * and the finite-N product kernel (e^{−(t/N)(b†b−g²)} e^{−(t/N)M})^N used
 * to pin the path-sum identity at small N exactly.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace aqrm {

/// Oracle sizing: `target_count` (when positive) requests at least that many
/// trusted eigenvalues, enlarging the cutoff to 3·target_count if needed.
struct FockConfig {
    int cutoff = 300;
    int target_count = 0;

    int effective_cutoff() const {
        int c = cutoff;
        if (target_count > 0) c = std::max(c, 3 * target_count);
        if (c < 4) throw std::invalid_argument("FockConfig: cutoff must be >= 4");
        return c;
    }
};

/// Sorted truncated spectrum with its provenance.
struct Spectrum {
    std::vector<double> eigenvalues;  ///< ascending, all 2·cutoff of them
    int cutoff = 0;
    int trusted_count = 0;  ///< leading eigenvalues considered converged
    ModelParams params{0.0, 0.0, 0.0};
};

/// Dense symmetric Hamiltonian on the truncated basis (dimension 2·cutoff).
inline Eigen::MatrixXd build_hamiltonian(const ModelParams& p, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("build_hamiltonian: cutoff must be >= 1");
    const int dim = 2 * cutoff;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < cutoff; ++m) {
        H(2 * m, 2 * m) = m + p.delta;
        H(2 * m + 1, 2 * m + 1) = m - p.delta;
        H(2 * m, 2 * m + 1) = p.eps;
        H(2 * m + 1, 2 * m) = p.eps;
        if (m + 1 < cutoff) {
            const double c = p.g * std::sqrt(m + 1.0);
            for (int s = 0; s < 2; ++s) {
                H(2 * m + s, 2 * (m + 1) + (1 - s)) = c;
                H(2 * (m + 1) + (1 - s), 2 * m + s) = c;
            }
        }
    }
    return H;
}

/// Orthonormal Hermite functions ψ_0..ψ_{n−1} at x:
/// ψ_0 = π^{−1/4} e^{−x²/2}, ψ_1 = √2 x ψ_0,
/// ψ_{m+1} = √(2/(m+1)) x ψ_m − √(m/(m+1)) ψ_{m−1}.
inline std::vector<double> hermite_psi(int n, double x) {
    if (n < 1) throw std::invalid_argument("hermite_psi: n must be >= 1");
    std::vector<double> psi(n);
    psi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (n > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
    for (int m = 1; m + 1 < n; ++m)
        psi[m + 1] =
            std::sqrt(2.0 / (m + 1.0)) * x * psi[m] - std::sqrt(m / (m + 1.0)) * psi[m - 1];
    return psi;
}

/// Full diagonalization oracle; owns the decomposition so repeated kernel /
/// partition / counting queries are cheap.
class FockOracle {
  public:
    FockOracle(const ModelParams& p, const FockConfig& cfg = {}) : params_(p) {
        const int cutoff = cfg.effective_cutoff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(p, cutoff));
        if (es.info() != Eigen::Success)
            throw std::runtime_error("FockOracle: eigensolver failed");
        lam_ = es.eigenvalues();
        vec_ = es.eigenvectors();
        spec_.eigenvalues.assign(lam_.data(), lam_.data() + lam_.size());
        spec_.cutoff = cutoff;
        spec_.trusted_count = cutoff / 3;
        spec_.params = p;
        const double floor = -p.g * p.g - mu(p);
        if (spec_.eigenvalues.front() < floor - 1e-8)
            throw std::runtime_error("FockOracle: eigenvalue below the exact lower bound");
    }

    const Spectrum& spectrum() const { return spec_; }
    const ModelParams& params() const { return params_; }
    int cutoff() const { return spec_.cutoff; }
    double lowest() const { return spec_.eigenvalues.front(); }

    /// Position-space heat kernel from the truncated eigenbasis.  Sets
    /// `truncated` when the top of the computed spectrum still carries
    /// weight at this t (e^{−t(λ_max−λ_1)} > 10⁻¹²), i.e. when t is too
    /// small for this cutoff.
    Mat2 kernel(double x, double y, double t, bool* truncated = nullptr) const {
        if (!(t > 0.0)) throw std::domain_error("FockOracle::kernel: t must be > 0");
        const int dim = static_cast<int>(lam_.size());
        const int cut = spec_.cutoff;
        const auto px = hermite_psi(cut, x);
        const auto py = hermite_psi(cut, y);
        Eigen::Vector2d fx, fy;
        Mat2 out = Mat2::zero();
        for (int k = 0; k < dim; ++k) {
            fx.setZero();
            fy.setZero();
            for (int m = 0; m < cut; ++m) {
                fx(0) += vec_(2 * m, k) * px[m];
                fx(1) += vec_(2 * m + 1, k) * px[m];
                fy(0) += vec_(2 * m, k) * py[m];
                fy(1) += vec_(2 * m + 1, k) * py[m];
            }
            const double w = std::exp(-t * lam_(k));
            out.m11 += w * fx(0) * fy(0);
            out.m12 += w * fx(0) * fy(1);
            out.m21 += w * fx(1) * fy(0);
            out.m22 += w * fx(1) * fy(1);
        }
        if (truncated)
            *truncated = std::exp(-t * (lam_(dim - 1) - lam_(0))) > 1e-12;
        return out;
    }

    /// Tr e^{−βH} over the computed spectrum; `tail_estimate` receives the
    /// dropped-states allowance 2 e^{−βλ_max} / (1 − e^{−β/2}).
    double partition(double beta, double* tail_estimate = nullptr) const {
        if (!(beta > 0.0))
            throw std::domain_error("FockOracle::partition: beta must be > 0");
        // ascending eigenvalues: sum smallest weights first for stability
        double acc = 0.0;
        for (int k = static_cast<int>(lam_.size()) - 1; k >= 0; --k)
            acc += std::exp(-beta * lam_(k));
        if (tail_estimate)
            *tail_estimate =
                2.0 * std::exp(-beta * lam_(lam_.size() - 1)) / (-std::expm1(-0.5 * beta));
        return acc;
    }

    /// Eigenvalue counting function N(T) = #{trusted λ_k ≤ T}.  Throws if T
    /// reaches beyond the trusted window, where the count would be fake.
    int counting(double T) const {
        const int trusted = spec_.trusted_count;
        if (spec_.eigenvalues[trusted - 1] < T)
            throw std::domain_error("FockOracle::counting: T beyond the trusted window");
        int n = 0;
        while (n < trusted && spec_.eigenvalues[n] <= T) ++n;
        return n;
    }

  private:
    ModelParams params_;
    Eigen::VectorXd lam_;
    Eigen::MatrixXd vec_;
    Spectrum spec_;
};

/// Convenience: spectrum without keeping the oracle alive.
inline Spectrum eigen_spectrum(const ModelParams& p, const FockConfig& cfg = {}) {
    return FockOracle(p, cfg).spectrum();
}

/// Finite-N operator product kernel (e^{−(t/N)(b†b−g²)} e^{−(t/N)M})^N in
/// position representation — the exact object the path sum reproduces.
inline Mat2 product_kernel(double x, double y, double t, int N, const ModelParams& p,
                           int cutoff) {
    if (N < 1) throw std::invalid_argument("product_kernel: N must be >= 1");
    if (!(t > 0.0)) throw std::domain_error("product_kernel: t must be > 0");
    const int dim = 2 * cutoff;
    // b†b − g² = a†a + g(a+a†)σ_x: the Δ = ε = 0 Hamiltonian
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        build_hamiltonian(ModelParams(p.g, 0.0, 0.0), cutoff));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("product_kernel: eigensolver failed");
    const double tau = t / N;
    Eigen::MatrixXd Eb = es.eigenvectors() *
                         (-tau * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                         es.eigenvectors().transpose();
    const Mat2 em = exp_spin(p, tau);
    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m < cutoff; ++m)
        for (int mm = 0; mm < cutoff; ++mm) {
            step(2 * m, 2 * mm) = Eb(2 * m, 2 * mm) * em.m11 + Eb(2 * m, 2 * mm + 1) * em.m21;
            step(2 * m, 2 * mm + 1) =
                Eb(2 * m, 2 * mm) * em.m12 + Eb(2 * m, 2 * mm + 1) * em.m22;
            step(2 * m + 1, 2 * mm) =
                Eb(2 * m + 1, 2 * mm) * em.m11 + Eb(2 * m + 1, 2 * mm + 1) * em.m21;
            step(2 * m + 1, 2 * mm + 1) =
                Eb(2 * m + 1, 2 * mm) * em.m12 + Eb(2 * m + 1, 2 * mm + 1) * em.m22;
        }
    Eigen::MatrixXd P = step;
    for (int i = 1; i < N; ++i) P = P * step;
    const auto px = hermite_psi(cutoff, x);
    const auto py = hermite_psi(cutoff, y);
    Mat2 out = Mat2::zero();
    for (int m = 0; m < cutoff; ++m)
        for (int mm = 0; mm < cutoff; ++mm) {
            const double w = px[m] * py[mm];
            out.m11 += w * P(2 * m, 2 * mm);
            out.m12 += w * P(2 * m, 2 * mm + 1);
            out.m21 += w * P(2 * m + 1, 2 * mm);
            out.m22 += w * P(2 * m + 1, 2 * mm + 1);
        }
    return out;
}

// ── exports ─────────────────────────────────────────────────────────────────

namespace detail {
inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

/// CSV rows: index,eigenvalue,trusted
inline std::string spectrum_to_csv(const Spectrum& s) {
    std::string out = "index,eigenvalue\n";
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += detail::fmt_g17(s.eigenvalues[k]);
        out += '\n';
    }
    return out;
}

/// Compact JSON document with parameters, provenance, and the sorted values.
inline std::string spectrum_to_json(const Spectrum& s) {
    std::string out = "{\"params\":{\"g\":" + detail::fmt_g17(s.params.g) +
                      ",\"delta\":" + detail::fmt_g17(s.params.delta) +
                      ",\"eps\":" + detail::fmt_g17(s.params.eps) +
                      "},\"cutoff\":" + std::to_string(s.cutoff) +
                      ",\"trusted_count\":" + std::to_string(s.trusted_count) +
                      ",\"eigenvalues\":[";
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        if (k) out += ',';
        out += detail::fmt_g17(s.eigenvalues[k]);
    }
    out += "]}";
    return out;
}

}  // namespace aqrm
