/*
 * trotter.hpp — finite-N Trotter–Kato product for e^{−tH} as an explicit
 * sum over spin paths s ∈ Z₂^N, plus the Z₂^k combinatorial and Fourier
 * identities that organize that sum.
 *
 * With u = e^{−t/N}, the N-step product of e^{−(t/N)(b†b−g²)} e^{−(t/N)M}
 * has position kernel
 *
 *   K^{(N)}(x,y,t) = Σ_{s∈Z₂^N} G_N(u,s) · I_N(x,y,u,s) ,
 *
 *   G_N(u,s) = [ ∏_{i=1}^{N−1} h_{s_i s_{i+1}}(u^{2μ}) ]
 *              / ( u^{(N−1)μ} 2^N ) · M_{s_1 s_N} · u^{M} ,
 *
 * where M_{vw} are the four rank-one sign matrices of the projector algebra
 * ½(I + (−1)^{1−v}σ_x)·…·½(I + (−1)^{1−w}σ_x), u^M = e^{−(t/N)M}, and
 *
 *   I_N = K̃₀(x,y,t) · exp( lin(s) + quad(s) − 2Ng²(1−u)/(1+u) ) ,
 *   lin  = √2 g (1−u)/(1−u^{2N}) Σ_{j=1}^{N} (−1)^{s_j} ( x Λ^{(j)} + y Λ^{(N−j+1)} ) ,
 *   Λ^{(j)} = u^{j−1}(1 − u^{2(N−j)+1}) ,
 *   quad = g²(1−u)²/(2(1+u)²(1−u^{2N})) · η^T Ω η ,
 *   η_i  = (−1)^{s_i} + (−1)^{s_{i+1}} (i = 1..N−1) ,
 *   Ω^{(i,j)} = u^{j−i}(1−u^{2i})(1−u^{2(N−j)}) (i ≤ j; symmetric) .
 *
 * The path sum is evaluated in Gray-code order with O(N) incremental
 * updates (linear form, quadratic form via the running vector w = Ωη, and
 * the h-product via transition-class counts), accumulating one scalar per
 * (s_1, s_N) class so the matrix work happens once at the end.
 *
 * The Z₂^k side: for a spin chain with fixed endpoints v,w and weight
 * g(s) = h_{v s_1} h_{s_1 s_2} … h_{s_k w}, the Fourier transform
 * ĝ(ρ) = Σ_s g(s)(−1)^{s·ρ} collapses to a 2×2 transfer product, and the
 * A-weighted sum Σ_ρ ĝ(ρ) Π_{ρ_i=1} A_i has a closed form indexed by the
 * combinatorial exponent α(ρ) = k − ⌊|ρ|/2⌋ − φ(ρ), φ(ρ) the alternating
 * sum of the 1-positions taken largest first.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "model.hpp"

namespace aqrm {

/// Spin path / multi-index over Z₂: entries must be 0 or 1.
using BitString = std::vector<int>;

inline constexpr int kTrotterMaxN = 20;

namespace detail {

inline void check_bits(const BitString& s, const char* who) {
    for (int b : s)
        if (b != 0 && b != 1) throw std::invalid_argument(std::string(who) + ": entries must be 0/1");
}

inline const Mat2& sign_matrix(int v, int w) {
    static const Mat2 m00{1.0, -1.0, -1.0, 1.0};
    static const Mat2 m01{-1.0, -1.0, 1.0, 1.0};
    static const Mat2 m10{-1.0, 1.0, -1.0, 1.0};
    static const Mat2 m11{1.0, 1.0, 1.0, 1.0};
    if (v == 0) return (w == 0) ? m00 : m01;
    return (w == 0) ? m10 : m11;
}

}  // namespace detail

// ── Z₂^k combinatorics ──────────────────────────────────────────────────────

/// Alternating sum of the 1-positions (1-based), largest first: + − + − …
inline int phi(const BitString& rho) {
    detail::check_bits(rho, "phi");
    int acc = 0;
    int m = 0;
    for (int i = static_cast<int>(rho.size()) - 1; i >= 0; --i) {
        if (rho[i]) {
            acc += ((m % 2 == 0) ? 1 : -1) * (i + 1);
            ++m;
        }
    }
    return acc;
}

/// Closed form α(s) = k − ⌊|s|/2⌋ − φ(s).
inline int alpha_closed(const BitString& s) {
    detail::check_bits(s, "alpha_closed");
    if (s.empty()) throw std::invalid_argument("alpha_closed: empty bit string");
    const int k = static_cast<int>(s.size());
    int w = 0;
    for (int b : s) w += b;
    return k - w / 2 - phi(s);
}

/// Recursive form: α((0)) = 1, α((1)) = 0; appending 0 adds 1, appending 1
/// to a length-k prefix of weight m maps α ↦ k − m − α.
inline int alpha_rec(const BitString& s) {
    detail::check_bits(s, "alpha_rec");
    if (s.empty()) throw std::invalid_argument("alpha_rec: empty bit string");
    int a = (s[0] == 0) ? 1 : 0;
    int prefix_weight = s[0];
    for (std::size_t i = 1; i < s.size(); ++i) {
        const int k = static_cast<int>(i);  // length of the prefix
        a = (s[i] == 0) ? a + 1 : k - prefix_weight - a;
        prefix_weight += s[i];
    }
    return a;
}

// ── path-sum building blocks ────────────────────────────────────────────────

/// η_i(s) = (−1)^{s_i} + (−1)^{s_{i+1}} for i = 1..N−1 (1-based).
inline int eta_i(const BitString& s, int i) {
    detail::check_bits(s, "eta_i");
    const int N = static_cast<int>(s.size());
    if (i < 1 || i >= N) throw std::invalid_argument("eta_i: need 1 <= i <= N-1");
    const int a = s[i - 1] ? -1 : 1;
    const int b = s[i] ? -1 : 1;
    return a + b;
}

/// Λ^{(j)}(u) = u^{j−1}(1 − u^{2(N−j)+1}) for j = 1..N.
inline double lambda_j(double u, int j, int N) {
    if (N < 1 || j < 1 || j > N) throw std::invalid_argument("lambda_j: need 1 <= j <= N");
    return std::pow(u, j - 1) * (1.0 - std::pow(u, 2 * (N - j) + 1));
}

/// Ω^{(i,j)}(u) = u^{j−i}(1−u^{2i})(1−u^{2(N−j)}) for 1 ≤ i ≤ j ≤ N−1;
/// extended symmetrically.
inline double omega_ij(double u, int i, int j, int N) {
    if (i > j) std::swap(i, j);
    if (N < 2 || i < 1 || j > N - 1)
        throw std::invalid_argument("omega_ij: need 1 <= i <= j <= N-1");
    return std::pow(u, j - i) * (1.0 - std::pow(u, 2 * i)) *
           (1.0 - std::pow(u, 2 * (N - j)));
}

/// Bosonic factor I_N(x,y;u,s) of the path weight (includes K̃₀ at t = −N ln u).
inline double I_N(double x, double y, double u, const BitString& s, const ModelParams& p) {
    detail::check_bits(s, "I_N");
    const int N = static_cast<int>(s.size());
    if (N < 1) throw std::invalid_argument("I_N: path must have length >= 1");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("I_N: need 0 < u < 1");
    const double t = -static_cast<double>(N) * std::log(u);
    const double g = p.g;
    const double denom = 1.0 - std::pow(u, 2 * N);

    double lin = 0.0;
    for (int j = 1; j <= N; ++j) {
        const double sj = s[j - 1] ? -1.0 : 1.0;
        lin += sj * (x * lambda_j(u, j, N) + y * lambda_j(u, N - j + 1, N));
    }
    lin *= std::sqrt(2.0) * g * (1.0 - u) / denom;

    double quad = 0.0;
    if (N >= 2) {
        for (int i = 1; i < N; ++i) {
            const double ei = eta_i(s, i);
            quad += ei * ei * omega_ij(u, i, i, N);
            for (int j = i + 1; j < N; ++j)
                quad += 2.0 * ei * eta_i(s, j) * omega_ij(u, i, j, N);
        }
        quad *= g * g * (1.0 - u) * (1.0 - u) / (2.0 * (1.0 + u) * (1.0 + u) * denom);
    }
    const double cst = -2.0 * N * g * g * (1.0 - u) / (1.0 + u);
    return mehler_base(x, y, g, t) * std::exp(lin + quad + cst);
}

/// Spin factor G_N(u,s) = [∏ h_{s_i s_{i+1}}(u^{2μ})] / (u^{(N−1)μ} 2^N)
/// · M_{s_1 s_N} · e^{−(t/N)M}.
inline Mat2 G_N(double u, const BitString& s, const ModelParams& p) {
    detail::check_bits(s, "G_N");
    const int N = static_cast<int>(s.size());
    if (N < 1) throw std::invalid_argument("G_N: path must have length >= 1");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("G_N: need 0 < u < 1");
    const double m = mu(p);
    if (m == 0.0) throw std::domain_error("G_N: requires mu > 0");
    const double tau = std::pow(u, 2.0 * m);
    double hprod = 1.0;
    for (int i = 0; i + 1 < N; ++i) hprod *= h_func(s[i], s[i + 1], tau, p);
    const double pref = hprod / (std::pow(u, (N - 1) * m) * std::ldexp(1.0, N));
    return (detail::sign_matrix(s.front(), s.back()) * exp_spin(p, -std::log(u))) * pref;
}

/// Full N-step product kernel K^{(N)}(x,y,t) = Σ_{s∈Z₂^N} G_N I_N, evaluated
/// in Gray-code order with O(N) incremental path updates.
inline Mat2 trotter_kernel(double x, double y, double t, int N, const ModelParams& p) {
    if (N < 1 || N > kTrotterMaxN)
        throw std::invalid_argument("trotter_kernel: need 1 <= N <= 20");
    if (!(t > 0.0)) throw std::domain_error("trotter_kernel: t must be > 0");
    const double m = mu(p);
    if (m == 0.0) throw std::domain_error("trotter_kernel: requires mu > 0");

    const double u = std::exp(-t / N);
    const double tau = std::pow(u, 2.0 * m);
    const double g = p.g;
    const double denom = 1.0 - std::pow(u, 2 * N);
    const double lin_coef = std::sqrt(2.0) * g * (1.0 - u) / denom;
    const double quad_coef =
        g * g * (1.0 - u) * (1.0 - u) / (2.0 * (1.0 + u) * (1.0 + u) * denom);

    // precomputed tables
    std::vector<double> cvec(N);  // c_j = x Λ^{(j)} + y Λ^{(N−j+1)}, 0-based j−1
    for (int j = 1; j <= N; ++j)
        cvec[j - 1] = x * lambda_j(u, j, N) + y * lambda_j(u, N - j + 1, N);
    const int nE = N - 1;  // η dimension
    std::vector<double> omega;
    if (nE > 0) {
        omega.assign(static_cast<std::size_t>(nE) * nE, 0.0);
        for (int i = 1; i <= nE; ++i)
            for (int j = 1; j <= nE; ++j)
                omega[(i - 1) * static_cast<std::size_t>(nE) + (j - 1)] =
                    omega_ij(u, std::min(i, j), std::max(i, j), N);
    }
    const double h00 = h_func(0, 0, tau, p), h11 = h_func(1, 1, tau, p),
                 h01 = h_func(0, 1, tau, p);
    std::vector<double> p00(N), p11(N), p01(N);
    p00[0] = p11[0] = p01[0] = 1.0;
    for (int k = 1; k < N; ++k) {
        p00[k] = p00[k - 1] * h00;
        p11[k] = p11[k - 1] * h11;
        p01[k] = p01[k - 1] * h01;
    }

    // Gray-code walk state: start at s = 0 (all spins up)
    std::vector<double> sigma(N, 1.0);           // (−1)^{s_i}
    std::vector<double> eta(std::max(nE, 0), 2.0);
    std::vector<double> wvec(std::max(nE, 0), 0.0);  // w = Ω η
    for (int a = 0; a < nE; ++a) {
        double acc = 0.0;
        for (int b = 0; b < nE; ++b)
            acc += omega[a * static_cast<std::size_t>(nE) + b] * eta[b];
        wvec[a] = acc;
    }
    double lin_sum = 0.0;
    for (int j = 0; j < N; ++j) lin_sum += cvec[j];
    double quad_sum = 0.0;
    for (int a = 0; a < nE; ++a) quad_sum += eta[a] * wvec[a];
    int n00 = nE, n11 = 0, n01 = 0;

    auto trans_class = [](int a, int b) { return (a == b) ? (a == 0 ? 0 : 1) : 2; };
    int* counts[3] = {&n00, &n11, &n01};

    double acc_vw[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    const std::uint64_t total = std::uint64_t{1} << N;
    std::uint64_t sbits = 0;  // bit i−1 holds s_i
    for (std::uint64_t mcode = 0;; ++mcode) {
        const double weight =
            p00[n00] * p11[n11] * p01[n01] * std::exp(lin_coef * lin_sum + quad_coef * quad_sum);
        const int v = static_cast<int>(sbits & 1u);
        const int w = static_cast<int>((sbits >> (N - 1)) & 1u);
        acc_vw[v][w] += weight;

        const std::uint64_t next = mcode + 1;
        if (next == total) break;
        // flip position k (1-based) = ctz(next)+1
        const int k = __builtin_ctzll(next) + 1;
        const int kb = k - 1;
        const double old_sig = sigma[kb];
        const double dlt = -2.0 * old_sig;
        // linear form
        lin_sum += dlt * cvec[kb];
        // quadratic form: η entries k−1 and k (1-based) shift by dlt
        if (nE > 0) {
            int idx[2];
            int nidx = 0;
            if (k >= 2) idx[nidx++] = k - 2;  // η_{k−1}, 0-based
            if (k <= nE) idx[nidx++] = k - 1; // η_k, 0-based
            double cross = 0.0;
            for (int a = 0; a < nidx; ++a) cross += wvec[idx[a]];
            double self = 0.0;
            for (int a = 0; a < nidx; ++a)
                for (int b = 0; b < nidx; ++b)
                    self += omega[idx[a] * static_cast<std::size_t>(nE) + idx[b]];
            quad_sum += 2.0 * dlt * cross + dlt * dlt * self;
            for (int a = 0; a < nidx; ++a) {
                const std::size_t col = static_cast<std::size_t>(idx[a]);
                for (int r = 0; r < nE; ++r)
                    wvec[r] += dlt * omega[r * static_cast<std::size_t>(nE) + col];
                eta[idx[a]] += dlt;
            }
        }
        // transition classes around position k
        const int sk_old = static_cast<int>((sbits >> kb) & 1u);
        const int sk_new = 1 - sk_old;
        if (k >= 2) {
            const int left = static_cast<int>((sbits >> (kb - 1)) & 1u);
            --*counts[trans_class(left, sk_old)];
            ++*counts[trans_class(left, sk_new)];
        }
        if (k <= N - 1) {
            const int right = static_cast<int>((sbits >> (kb + 1)) & 1u);
            --*counts[trans_class(sk_old, right)];
            ++*counts[trans_class(sk_new, right)];
        }
        sigma[kb] = -old_sig;
        sbits ^= (std::uint64_t{1} << kb);
    }

    Mat2 msum = Mat2::zero();
    for (int v = 0; v < 2; ++v)
        for (int w = 0; w < 2; ++w) msum += detail::sign_matrix(v, w) * acc_vw[v][w];

    const double cst = -2.0 * N * g * g * (1.0 - u) / (1.0 + u);
    const double pref = mehler_base(x, y, g, t) * std::exp(cst) /
                        (std::pow(u, (N - 1) * m) * std::ldexp(1.0, N));
    return (msum * exp_spin(p, t / N)) * pref;
}

// ── Fourier side ────────────────────────────────────────────────────────────

namespace detail {

/// Endpoint-weighted chain g(s) = h_{v s_1} h_{s_1 s_2} … h_{s_k w}.
inline double chain_weight(int v, int w, const BitString& s, double tau,
                           const ModelParams& p) {
    if (s.empty()) return h_func(v, w, tau, p);
    double val = h_func(v, s.front(), tau, p) * h_func(s.back(), w, tau, p);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) val *= h_func(s[i], s[i + 1], tau, p);
    return val;
}

/// Brute-force ĝ(ρ) = Σ_{s∈Z₂^k} g(s)(−1)^{s·ρ} (test reference).
inline double ghat_brute(int v, int w, const BitString& rho, double tau,
                         const ModelParams& p) {
    const int k = static_cast<int>(rho.size());
    if (k > 24) throw std::invalid_argument("ghat_brute: k too large");
    double acc = 0.0;
    BitString s(k, 0);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        int dot = 0;
        for (int i = 0; i < k; ++i) {
            s[i] = static_cast<int>((bits >> i) & 1u);
            dot += rho[i] * s[i];
        }
        acc += ((dot % 2) ? -1.0 : 1.0) * chain_weight(v, w, s, tau, p);
    }
    return acc;
}

}  // namespace detail

/// Transfer-matrix form of ĝ(ρ): row [h_{0v}, h_{1v}] through k−1 sign
/// matrices B(ρ_i) = [[h00, h01], [(−1)^{ρ_i} h10, (−1)^{ρ_i} h11]] into the
/// column [h_{0w}, (−1)^{ρ_k} h_{1w}].
inline double fourier_ghat(int v, int w, const BitString& rho, double tau,
                           const ModelParams& p) {
    detail::check_bits(rho, "fourier_ghat");
    if ((v != 0 && v != 1) || (w != 0 && w != 1))
        throw std::invalid_argument("fourier_ghat: endpoints must be 0/1");
    const int k = static_cast<int>(rho.size());
    if (k == 0) return h_func(v, w, tau, p);
    const double h00 = h_func(0, 0, tau, p), h11 = h_func(1, 1, tau, p),
                 h01 = h_func(0, 1, tau, p);
    double r0 = h_func(0, v, tau, p), r1 = h_func(1, v, tau, p);
    for (int i = 0; i + 1 < k; ++i) {
        const double sg = rho[i] ? -1.0 : 1.0;
        const double n0 = r0 * h00 + r1 * sg * h01;  // h10 = h01
        const double n1 = r0 * h01 + r1 * sg * h11;
        r0 = n0;
        r1 = n1;
    }
    const double sg = rho[k - 1] ? -1.0 : 1.0;
    return r0 * h_func(0, w, tau, p) + r1 * sg * h_func(1, w, tau, p);
}

/// Both sides of the A-weighted Fourier identity
///   Σ_ρ ĝ(ρ) Π_{ρ_i=1} A_i
///     = Σ_{ℓ=0}^{k} h_{v,(ℓ+w) mod 2} h01^ℓ h_{1−w,1−w}^{k−ℓ}
///       Σ_{|ρ|=ℓ} (h_{ww}/h_{1−w,1−w})^{α(ρ)}
///       Π_{i=0}^{ℓ} Π_{n=j_i+1}^{j_{i+1}} (1 + (−1)^{w+ℓ+i} A_n)
/// with j_0 = 0 < j_1 < … < j_ℓ the 1-positions of ρ and j_{ℓ+1} = k.
/// Returns {lhs, rhs}; both are O(2^k), intended for moderate k.
inline std::pair<double, double> weighted_fourier_sum(int v, int w,
                                                      const std::vector<double>& A,
                                                      double tau, const ModelParams& p) {
    if ((v != 0 && v != 1) || (w != 0 && w != 1))
        throw std::invalid_argument("weighted_fourier_sum: endpoints must be 0/1");
    const int k = static_cast<int>(A.size());
    if (k < 1 || k > 24) throw std::invalid_argument("weighted_fourier_sum: need 1 <= k <= 24");

    double lhs = 0.0;
    BitString rho(k, 0);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        double amp = 1.0;
        for (int i = 0; i < k; ++i) {
            rho[i] = static_cast<int>((bits >> i) & 1u);
            if (rho[i]) amp *= A[i];
        }
        lhs += amp * fourier_ghat(v, w, rho, tau, p);
    }

    const double hww = h_func(w, w, tau, p);
    const double hbar = h_func(1 - w, 1 - w, tau, p);
    const double h01 = h_func(0, 1, tau, p);
    double rhs = 0.0;
    std::vector<int> js;
    for (int ell = 0; ell <= k; ++ell) {
        const double pref = h_func(v, (ell + w) % 2, tau, p) * std::pow(h01, ell) *
                            std::pow(hbar, k - ell);
        double inner = 0.0;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
            int weight = 0;
            for (int i = 0; i < k; ++i) {
                rho[i] = static_cast<int>((bits >> i) & 1u);
                weight += rho[i];
            }
            if (weight != ell) continue;
            js.clear();
            js.push_back(0);
            for (int i = 0; i < k; ++i)
                if (rho[i]) js.push_back(i + 1);
            js.push_back(k);
            double prod = std::pow(hww / hbar, alpha_closed(rho));
            for (int i = 0; i <= ell; ++i) {
                const double sg = ((w + ell + i) % 2) ? -1.0 : 1.0;
                for (int n = js[i] + 1; n <= js[i + 1]; ++n) prod *= 1.0 + sg * A[n - 1];
            }
            inner += prod;
        }
        rhs += pref * inner;
    }
    return {lhs, rhs};
}

}  // namespace aqrm
