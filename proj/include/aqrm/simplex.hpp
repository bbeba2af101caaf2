/*
 * simplex.hpp — quadrature over the ordered simplex
 *
 *     Σ_λ = { 0 ≤ μ₁ ≤ μ₂ ≤ … ≤ μ_λ ≤ 1 } ,      vol(Σ_λ) = 1/λ! .
 *
 * Two rules are provided.
 *
 * Tensor Gauss–Legendre (low λ): the cube map
 *     μ_λ = v_λ ,  μ_γ = v_γ μ_{γ+1}   (v ∈ [0,1]^λ)
 * flattens Σ_λ onto the cube with Jacobian ∏_{j=2}^{λ} v_j^{j−1}; a q-point
 * Gauss rule per axis then integrates exactly through polynomial degree
 * 2q−1−(j−1) per axis.  The error estimate is |I_q − I_{q−1}|.
 *
 * Quasi-random (high λ): a Kronecker lattice with the generalized-golden-
 * ratio direction vector α_i = φ_λ^{−i} (φ_λ the root of x^{λ+1} = x + 1)
 * plus a seeded Cranley–Patterson shift; sorting each sample ascending maps
 * uniform cube points onto Σ_λ with
 *     ∫_{Σ_λ} f dμ = (1/λ!) · E[ f(sort U) ] ,
 * so each point carries weight 1/(n·λ!).  The error estimate is half the
 * difference between the two half-sample means.
 *
 * All node sets are cached per (λ, rule); evaluation order over nodes is
 * fixed, so results are deterministic for any worker count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace aqrm {

// ── domain types ────────────────────────────────────────────────────────────

/// One point of the ordered simplex; λ = mu.size() (λ = 0 ⇒ empty point).
struct SimplexPoint {
    std::vector<double> mu;

    SimplexPoint() = default;
    explicit SimplexPoint(std::vector<double> m) : mu(std::move(m)) {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (!(mu[i] >= 0.0 && mu[i] <= 1.0))
                throw std::invalid_argument("SimplexPoint: coordinates must lie in [0,1]");
            if (i > 0 && mu[i] < mu[i - 1])
                throw std::invalid_argument("SimplexPoint: coordinates must be ascending");
        }
    }
    int lambda() const noexcept { return static_cast<int>(mu.size()); }
};

/// Quadrature rule selector.  `order` is the per-axis Gauss order of the
/// tensor rule; `samples` the quasi-random sample count (0 = auto budget,
/// scaled down as the dimension grows); `seed` feeds the Cranley–Patterson
/// shift of the quasi-random rule.
struct QuadratureRule {
    enum class Kind { tensor_gauss, quasi_random };
    Kind kind = Kind::tensor_gauss;
    int order = 12;
    std::uint64_t seed = 20260819ULL;
    std::size_t samples = 0;

    static QuadratureRule tensor(int q) { return {Kind::tensor_gauss, q, 0, 0}; }
    static QuadratureRule quasi(std::size_t n, std::uint64_t seed = 20260819ULL) {
        return {Kind::quasi_random, 0, seed, n};
    }
};

/// Flat node table: n points in λ dimensions (row-major) with weights that
/// already include the simplex volume factor.
struct QuadNodes {
    int lambda = 0;
    std::size_t n = 0;
    std::vector<double> mu;  ///< n·λ coordinates, point-major
    std::vector<double> w;   ///< n weights
    const double* point(std::size_t i) const { return mu.data() + i * lambda; }
};

// ── Gauss–Legendre nodes on [0,1] ───────────────────────────────────────────

/// q-point Gauss–Legendre rule mapped to [0,1] (Newton on P_q, cosine start).
inline void gauss_legendre_01(int q, std::vector<double>& x, std::vector<double>& w) {
    if (q < 1) throw std::invalid_argument("gauss_legendre_01: order must be >= 1");
    x.assign(q, 0.0);
    w.assign(q, 0.0);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < q; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = q * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        x[i] = 0.5 * (1.0 - z);          // mirror: descending z ⇒ ascending x
        x[q - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wi;
        w[q - 1 - i] = 0.5 * wi;
    }
}

// ── node constructors ───────────────────────────────────────────────────────

namespace detail {

inline QuadNodes make_tensor_nodes(int lambda, int q) {
    QuadNodes out;
    out.lambda = lambda;
    if (lambda == 0) {
        out.n = 1;
        out.w.assign(1, 1.0);
        return out;
    }
    std::vector<double> x1, w1;
    gauss_legendre_01(q, x1, w1);
    std::size_t n = 1;
    for (int k = 0; k < lambda; ++k) n *= static_cast<std::size_t>(q);
    out.n = n;
    out.mu.resize(n * lambda);
    out.w.resize(n);
    std::vector<int> idx(lambda, 0);
    std::vector<double> v(lambda);
    for (std::size_t p = 0; p < n; ++p) {
        double weight = 1.0;
        for (int k = 0; k < lambda; ++k) {
            v[k] = x1[idx[k]];
            weight *= w1[idx[k]];
            for (int e = 0; e < k; ++e) weight *= v[k];  // Jacobian v_{k+1}^k
        }
        // μ_γ = ∏_{j=γ}^{λ} v_j : cumulative product from the right
        double run = 1.0;
        for (int k = lambda - 1; k >= 0; --k) {
            run *= v[k];
            out.mu[p * lambda + k] = run;
        }
        out.w[p] = weight;
        for (int k = lambda - 1; k >= 0; --k) {  // odometer
            if (++idx[k] < q) break;
            idx[k] = 0;
        }
    }
    return out;
}

/// splitmix64: tiny, well-mixed generator for the quasi-random shift.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline QuadNodes make_quasi_nodes(int lambda, std::size_t n, std::uint64_t seed) {
    QuadNodes out;
    out.lambda = lambda;
    out.n = n;
    out.mu.resize(n * static_cast<std::size_t>(lambda));
    // 1/(n·λ!) via lgamma; λ stays well below the double overflow threshold.
    const double logw = -std::lgamma(static_cast<double>(lambda) + 1.0)
                        - std::log(static_cast<double>(n));
    out.w.assign(n, std::exp(logw));
    // generalized golden ratio φ_λ: fixed point of x ← (1+x)^{1/(λ+1)}
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (lambda + 1));
    std::vector<double> alpha(lambda), shift(lambda);
    double a = 1.0;
    std::uint64_t st = seed;
    for (int i = 0; i < lambda; ++i) {
        a /= phi;
        alpha[i] = a - std::floor(a);
        shift[i] = static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53;
    }
    std::vector<double> pt(lambda);
    for (std::size_t k = 0; k < n; ++k) {
        for (int i = 0; i < lambda; ++i) {
            const double val = (k + 1.0) * alpha[i] + shift[i];
            pt[i] = val - std::floor(val);
        }
        std::sort(pt.begin(), pt.end());
        std::copy(pt.begin(), pt.end(), out.mu.begin() + k * lambda);
    }
    return out;
}

}  // namespace detail

// ── cached access ───────────────────────────────────────────────────────────

/// Auto sample budget for the quasi-random rule: shrinks with dimension so
/// that high-λ tail terms (tiny by the λ! volume factor) stay cheap.
inline std::size_t auto_quasi_samples(int lambda) {
    if (lambda <= 12) return std::size_t{1} << 14;
    if (lambda <= 24) return std::size_t{1} << 13;
    if (lambda <= 36) return std::size_t{1} << 12;
    if (lambda <= 48) return std::size_t{1} << 11;
    return std::size_t{1} << 10;
}

/// Default rule policy per dimension: tensor Gauss (q = 12 through λ = 3,
/// q = 8 for λ = 4,5), quasi-random with the auto budget beyond.
inline QuadratureRule auto_rule(int lambda) {
    if (lambda <= 3) return QuadratureRule::tensor(12);
    if (lambda <= 5) return QuadratureRule::tensor(8);
    return QuadratureRule::quasi(0);
}

/// Cached nodes for (λ, rule).  References remain valid for the process
/// lifetime (node-stable map); construction is serialized by a mutex.
inline const QuadNodes& simplex_nodes(int lambda, const QuadratureRule& rule) {
    if (lambda < 0) throw std::invalid_argument("simplex_nodes: lambda must be >= 0");
    if (rule.kind == QuadratureRule::Kind::tensor_gauss && rule.order < 2)
        throw std::invalid_argument("simplex_nodes: tensor order must be >= 2");
    using Key = std::tuple<int, int, int, std::uint64_t, std::size_t>;
    static std::map<Key, QuadNodes> cache;
    static std::mutex mtx;
    std::size_t n = rule.samples;
    if (rule.kind == QuadratureRule::Kind::quasi_random && n == 0)
        n = auto_quasi_samples(lambda);
    const Key key{lambda, static_cast<int>(rule.kind), rule.order, rule.seed, n};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) {
        QuadNodes built = (rule.kind == QuadratureRule::Kind::tensor_gauss || lambda == 0)
                              ? detail::make_tensor_nodes(lambda, rule.order)
                              : detail::make_quasi_nodes(lambda, n, rule.seed);
        it = cache.emplace(key, std::move(built)).first;
    }
    return it->second;
}

/// The sorted quasi-random sequence itself (n points on Σ_λ), exposed for
/// direct inspection and statistical tests.
inline std::vector<SimplexPoint> quasi_sequence(int lambda, std::size_t n, std::uint64_t seq_id) {
    if (lambda < 0) throw std::invalid_argument("quasi_sequence: lambda must be >= 0");
    const QuadNodes nodes = detail::make_quasi_nodes(lambda, n, seq_id);
    std::vector<SimplexPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(std::vector<double>(nodes.point(i), nodes.point(i) + lambda));
    return pts;
}

// ── integration ─────────────────────────────────────────────────────────────

/// Integral of f over Σ_λ with a heuristic error estimate (never discarded:
/// callers propagate it).  f is called with (μ-pointer, λ).
template <class F>
inline std::pair<double, double> simplex_integrate_raw(F&& f, int lambda,
                                                       const QuadratureRule& rule) {
    if (lambda < 0) throw std::invalid_argument("simplex_integrate: lambda must be >= 0");
    if (lambda == 0) return {f(static_cast<const double*>(nullptr), 0), 0.0};
    if (rule.kind == QuadratureRule::Kind::tensor_gauss) {
        if (rule.order < 2)
            throw std::invalid_argument("simplex_integrate: tensor order must be >= 2");
        auto eval = [&](int q) {
            const QuadNodes& nd = simplex_nodes(lambda, QuadratureRule::tensor(q));
            double acc = 0.0;
            for (std::size_t i = 0; i < nd.n; ++i) acc += nd.w[i] * f(nd.point(i), lambda);
            return acc;
        };
        const double hi = eval(rule.order), lo = eval(rule.order - 1);
        return {hi, std::abs(hi - lo)};
    }
    const QuadNodes& nd = simplex_nodes(lambda, rule);
    double acc1 = 0.0, acc2 = 0.0;
    const std::size_t half = nd.n / 2;
    for (std::size_t i = 0; i < half; ++i) acc1 += nd.w[i] * f(nd.point(i), lambda);
    for (std::size_t i = half; i < nd.n; ++i) acc2 += nd.w[i] * f(nd.point(i), lambda);
    const double value = acc1 + acc2;
    return {value, std::abs(acc1 - acc2)};
}

/// SimplexPoint-flavored overload of the same integral.
template <class F>
inline std::pair<double, double> simplex_integrate(F&& f, int lambda,
                                                   const QuadratureRule& rule) {
    return simplex_integrate_raw(
        [&](const double* m, int lam) {
            SimplexPoint p;
            if (lam > 0) p.mu.assign(m, m + lam);
            return f(p);
        },
        lambda, rule);
}

}  // namespace aqrm
