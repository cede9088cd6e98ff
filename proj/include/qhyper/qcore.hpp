#pragma once

/*
 * Foundational q-calculus primitives: q-shifted factorials (finite and
 * infinite), q-binomial coefficients, the theta product and q-numbers,
 * with certified truncation bounds for the infinite products.
 *
 * Conventions, binding for the whole library:
 *   - the base satisfies $0 < q < 1$ (enforced by Base);
 *   - every complex power $q^a$, $z^\mu$ uses the principal logarithm.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhyper {

using cplx = std::complex<double>;

/* Error taxonomy. All inherit runtime_error so callers may catch coarsely. */
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* The base of all q-series here. Construction rejects q outside (0,1). */
struct Base {
    double q;
    explicit Base(double q_) : q(q_) {
        if (!(q > 0.0) || !(q < 1.0))
            throw DomainError("base must satisfy 0 < q < 1, got " + std::to_string(q_));
    }
};

/*
 * A numerically evaluated quantity together with a certified bound on the
 * truncation error: the true value lies within tail_bound of value.
 */
struct TruncatedValue {
    cplx value{1.0, 0.0};
    double tail_bound = 0.0;
    std::size_t terms_used = 0;
};

struct ToleranceConfig {
    double abs_tol = 1e-14;
    std::size_t max_terms = 10000;
};

/* Principal-branch power with a real positive base. */
inline cplx qpow(double q, cplx a) {
    return std::exp(a * std::log(q));
}

inline cplx cpow(cplx z, cplx mu) {
    if (mu == cplx(0.0)) return cplx(1.0);
    return std::exp(mu * std::log(z));
}

namespace detail {

/* Exact integer power; avoids the exp/log branch of std::pow on the
 * negative real axis. */
inline cplx ipow(cplx base, long e) {
    if (e < 0) return cplx(1.0) / ipow(base, -e);
    cplx acc = 1.0, b = base;
    for (long m = e; m > 0; m >>= 1) {
        if (m & 1) acc *= b;
        b *= b;
    }
    return acc;
}

} // namespace detail

/*
 * Symmetrized residual $|L-R| / (1 + |L| + |R|)$: absolute near zero,
 * relative at large magnitudes. Used by every identity check.
 */
inline double scaled_residual(cplx lhs, cplx rhs) {
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

/*
 * Does x lie on the lattice $q^{\mathbb Z}$? Matches when
 * $|\log q|\,|m - \mathrm{round}(m)| <$ mod_window for $m = \log|x|/\log q$
 * and $|\arg x| <$ phase_window. Returns the integer exponent.
 */
inline std::optional<long> lattice_index(cplx x, double q, double mod_window = 1e-10,
                                         double phase_window = 1e-10) {
    if (x == cplx(0.0)) return std::nullopt;
    const double m = std::log(std::abs(x)) / std::log(q);
    const double r = std::round(m);
    if (std::abs(std::log(q)) * std::abs(m - r) >= mod_window) return std::nullopt;
    if (std::abs(std::arg(x)) >= phase_window) return std::nullopt;
    return static_cast<long>(r);
}

/*
 * $(a;q)_n$ for integer n. Nonnegative n is the plain product
 * $\prod_{k=0}^{n-1}(1-aq^k)$; negative subscripts use
 * $(a;q)_{-n} = 1/(aq^{-n};q)_n$, which has poles when a factor vanishes.
 */
inline cplx qpoch_finite(cplx a, Base q, long n) {
    if (n >= 0) {
        cplx p = 1.0;
        double qk = 1.0;
        for (long k = 0; k < n; ++k) {
            p *= (cplx(1.0) - a * qk);
            qk *= q.q;
        }
        return p;
    }
    const long m = -n;
    const cplx b = a * std::pow(q.q, static_cast<double>(n));
    cplx p = 1.0;
    double qk = 1.0;
    for (long k = 0; k < m; ++k) {
        const cplx f = cplx(1.0) - b * qk;
        if (f == cplx(0.0))
            throw PoleError("qpoch_finite: factor 1 - a*q^" + std::to_string(n + k) +
                            " vanishes in negative-subscript denominator");
        p *= f;
        qk *= q.q;
    }
    return cplx(1.0) / p;
}

/*
 * $(a;q)_\infty$ with a certified tail bound. Truncates at the first N with
 * $|a| q^N < $ abs_tol$\,(1-q)$; the discarded factors satisfy
 * $|\log \prod_{k \ge N} (1-aq^k)| \le s$ with
 * $s = |a| q^N / ((1-q)(1-|a|q^N))$, so the relative error is at most
 * $e^s - 1$. Accumulates in log-domain whenever a factor comes within 1e-3
 * of zero, which avoids cancellation near the zeros of the product.
 */
inline TruncatedValue qpoch_infinite(cplx a, Base q, ToleranceConfig tol = {}) {
    if (a == cplx(0.0)) return {cplx(1.0), 0.0, 0};
    const double qq = q.q;
    const double aa = std::abs(a);
    const double target = tol.abs_tol * (1.0 - qq);
    std::size_t N = 0;
    if (aa >= target) {
        N = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(target / aa) / std::log(qq))));
        while (aa * std::pow(qq, static_cast<double>(N)) >= target) ++N;
    }
    if (N > tol.max_terms)
        throw NonConvergenceError("qpoch_infinite: " + std::to_string(N) +
                                  " factors needed, max_terms = " + std::to_string(tol.max_terms));
    std::vector<cplx> factors;
    factors.reserve(N);
    bool near_zero = false;
    double qk = 1.0;
    for (std::size_t k = 0; k < N; ++k) {
        const cplx f = cplx(1.0) - a * qk;
        if (f == cplx(0.0)) return {cplx(0.0), 0.0, k + 1};
        if (std::abs(f) < 1e-3) near_zero = true;
        factors.push_back(f);
        qk *= qq;
    }
    cplx value;
    if (near_zero) {
        cplx ls = 0.0;
        for (const cplx& f : factors) ls += std::log(f);
        value = std::exp(ls);
    } else {
        value = 1.0;
        for (const cplx& f : factors) value *= f;
    }
    const double aqN = aa * std::pow(qq, static_cast<double>(N));
    const double s = aqN / ((1.0 - qq) * (1.0 - aqN));
    return {value, std::abs(value) * std::expm1(s), N};
}

/* $(a_1,\ldots,a_m;q)_n = \prod_i (a_i;q)_n$, finite subscript. */
inline cplx qpoch_multi(const std::vector<cplx>& as, Base q, long n) {
    cplx p = 1.0;
    for (const cplx& a : as) p *= qpoch_finite(a, q, n);
    return p;
}

/*
 * $(a_1,\ldots,a_m;q)_\infty$. Tail bounds combine multiplicatively:
 * the product of per-factor intervals $|v_i| \pm t_i$ gives the bound
 * $\prod (|v_i| + t_i) - \prod |v_i|$.
 */
inline TruncatedValue qpoch_multi(const std::vector<cplx>& as, Base q, ToleranceConfig tol) {
    cplx value = 1.0;
    double mag = 1.0, mag_up = 1.0;
    std::size_t terms = 0;
    for (const cplx& a : as) {
        const TruncatedValue tv = qpoch_infinite(a, q, tol);
        value *= tv.value;
        mag *= std::abs(tv.value);
        mag_up *= std::abs(tv.value) + tv.tail_bound;
        terms += tv.terms_used;
    }
    return {value, mag_up - mag, terms};
}

/*
 * $\prod_{k \ge 0, k \ne skip} (1 - x q^k)$: the infinite product with one
 * factor removed. Building block for residues of $1/(x;q)_\infty$-type
 * weights, where the vanishing factor is divided out analytically.
 */
inline TruncatedValue qpoch_infinite_skip(cplx x, Base q, std::size_t skip,
                                          ToleranceConfig tol = {}) {
    /* (x;q)_inf / (1 - x q^skip), with the factor removed exactly. */
    const double qq = q.q;
    if (x == cplx(0.0)) return {cplx(1.0), 0.0, 0};
    const double aa = std::abs(x);
    const double target = tol.abs_tol * (1.0 - qq);
    std::size_t N = 0;
    if (aa >= target) {
        N = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(target / aa) / std::log(qq))));
        while (aa * std::pow(qq, static_cast<double>(N)) >= target) ++N;
    }
    if (N <= skip) N = skip + 1;
    if (N > tol.max_terms) throw NonConvergenceError("qpoch_infinite_skip: max_terms exceeded");
    cplx ls = 0.0;
    double qk = 1.0;
    bool zero = false;
    for (std::size_t k = 0; k < N; ++k) {
        if (k != skip) {
            const cplx f = cplx(1.0) - x * qk;
            if (f == cplx(0.0)) zero = true;
            else ls += std::log(f);
        }
        qk *= qq;
    }
    if (zero) return {cplx(0.0), 0.0, N};
    const cplx value = std::exp(ls);
    const double aqN = aa * std::pow(qq, static_cast<double>(N));
    const double s = aqN / ((1.0 - qq) * (1.0 - aqN));
    return {value, std::abs(value) * std::expm1(s), N};
}

/*
 * q-binomial coefficient, integer case:
 * $\binom{n}{k}_q = (q;q)_n / ((q;q)_k (q;q)_{n-k})$.
 */
inline cplx qbinom(long n, long k, Base q) {
    if (k < 0 || k > n)
        throw DomainError("qbinom: require 0 <= k <= n");
    return qpoch_finite(q.q, q, n) / (qpoch_finite(q.q, q, k) * qpoch_finite(q.q, q, n - k));
}

/*
 * Generalized q-binomial
 * $\binom{\alpha}{\beta}_q = \frac{(q^{\beta+1}, q^{\alpha-\beta+1};q)_\infty}
 *                                 {(q, q^{\alpha+1};q)_\infty}$.
 * Integer arguments with $0 \le \beta \le \alpha$ route to the finite formula
 * (the quotient is 0/0 there). A denominator zero is a genuine pole.
 */
inline cplx qbinom(cplx alpha, cplx beta, Base q, ToleranceConfig tol = {}) {
    const auto near_int = [](cplx x) -> std::optional<long> {
        if (std::abs(x.imag()) > 1e-14) return std::nullopt;
        const double r = std::round(x.real());
        if (std::abs(x.real() - r) > 1e-12) return std::nullopt;
        return static_cast<long>(r);
    };
    const auto na = near_int(alpha), nb = near_int(beta);
    if (na && nb && *nb >= 0 && *nb <= *na) return qbinom(*na, *nb, q);
    const cplx qa1 = qpow(q.q, alpha + 1.0);
    if (auto e = lattice_index(qa1, q.q); e && *e <= 0)
        throw PoleError("qbinom: (q^{alpha+1};q)_inf vanishes");
    const TruncatedValue num =
        qpoch_multi({qpow(q.q, beta + 1.0), qpow(q.q, alpha - beta + 1.0)}, q, tol);
    const TruncatedValue den = qpoch_multi({cplx(q.q), qa1}, q, tol);
    if (den.value == cplx(0.0)) throw PoleError("qbinom: denominator product vanishes");
    return num.value / den.value;
}

/* $\theta(z) = (z;q)_\infty (q/z;q)_\infty$. */
inline TruncatedValue theta(cplx z, Base q, ToleranceConfig tol = {}) {
    if (z == cplx(0.0)) throw DomainError("theta: z must be nonzero");
    return qpoch_multi({z, q.q / z}, q, tol);
}

/* q-number $[a]_q = (1 - q^a)/(1 - q)$, principal branch of $q^a$. */
inline cplx qnumber(cplx a, Base q) {
    return (cplx(1.0) - qpow(q.q, a)) / (1.0 - q.q);
}

/*
 * Deterministic uniform variates, identical across platforms for a fixed
 * seed (std::uniform_real_distribution is not portable, the raw engine is).
 */
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() {
        return static_cast<double>(eng() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace qhyper
