#pragma once

/*
 * Little q-Jacobi polynomials
 *   $p_n(x;\alpha,\beta;q) = {}_2\varphi_1(q^{-n}, \alpha\beta q^{n+1}; \alpha q; q, qx)$
 * on the weighted sequence space $\ell^2(\mathbb N; \alpha,\beta; q)$ with
 *   $w_k = (\alpha q)^k (\beta q;q)_k / (q;q)_k$,
 * the degree-preserving second-order operator, the shift (lowering/raising)
 * pair and its adjointness, orthogonality norms, the monic three-term
 * recurrence, and the Al-Salam--Chihara determinacy classifier for the
 * equation-derived recurrence in base $q^{-1}$.
 */

#include <qhyper/qdiffeq.hpp>

#include <utility>
#include <vector>

namespace qhyper {

/* 0 < alpha < 1/q and beta < 1/q keep every weight strictly positive.
 * ortho_regime (alpha < 1) additionally keeps all (1 - alpha beta q^j)
 * factors of the norm and recurrence denominators positive. */
struct LQJParams {
    double alpha, beta;
    Base q;
    bool ortho_regime;

    LQJParams(double alpha_, double beta_, Base q_) : alpha(alpha_), beta(beta_), q(q_) {
        if (!(alpha > 0.0) || !(alpha < 1.0 / q.q))
            throw DomainError("LQJParams: need 0 < alpha < 1/q");
        if (!(beta < 1.0 / q.q)) throw DomainError("LQJParams: need beta < 1/q");
        ortho_regime = alpha < 1.0;
    }
};

/* Dense polynomial in ascending degree order; trailing coefficient nonzero
 * unless the zero polynomial. */
struct PolySeq {
    std::vector<cplx> coeff;

    PolySeq() = default;
    explicit PolySeq(std::vector<cplx> c) : coeff(std::move(c)) {
        while (!coeff.empty() && coeff.back() == cplx(0.0)) coeff.pop_back();
    }

    long degree() const { return static_cast<long>(coeff.size()) - 1; }

    cplx operator()(cplx x) const {
        cplx v = 0.0;
        for (size_t i = coeff.size(); i-- > 0;) v = v * x + coeff[i];
        return v;
    }
};

namespace detail {

inline cplx lqj_series(long n, cplx x, const LQJParams& p, ToleranceConfig tol) {
    const double q = p.q.q;
    auto spec = make_series({ParamSpec::terminating(n), ParamSpec(p.alpha * p.beta * std::pow(q, n + 1))},
                            {ParamSpec(p.alpha * q)}, q, q * x);
    return eval_rphis(spec, tol).value;
}

/* Double-double arithmetic (~32 significant digits) via the usual
 * error-free transforms; just enough for the compensated terminating sum
 * below.  Representation hi + lo with |lo| <= ulp(hi)/2. */
struct DD {
    double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b, t = s - a;
    return {s, (a - (s - t)) + (b - t)};
}
inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}
/* renormalise assuming |hi| dominates lo */
inline DD dd_norm(double hi, double lo) {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}
inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return dd_norm(s.hi, s.lo);
}
inline DD dd_sub(DD a, DD b) { return dd_add(a, {-b.hi, -b.lo}); }
inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_norm(p.hi, p.lo);
}
inline DD dd_div(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    const DD r = dd_add(a, dd_mul({-q1, 0.0}, b));
    return dd_norm(q1, (r.hi + r.lo) / b.hi);
}
inline DD dd_pow(DD a, long m) {
    DD r{1.0, 0.0};
    for (long i = 0; i < m; ++i) r = dd_mul(r, a);
    return r;
}

/* Terminating sum at x = q^k in double-double. */
inline double lqj_lattice_sum(long n, long k, const LQJParams& p) {
    const DD one{1.0, 0.0}, qd{p.q.q, 0.0};
    const DD z = dd_pow(qd, k + 1);
    DD qjmn = dd_div(one, dd_pow(qd, n));                        /* q^{j-n} */
    DD abqj = dd_mul(two_prod(p.alpha, p.beta), dd_pow(qd, n + 1)); /* alpha beta q^{n+1+j} */
    DD aqj = two_prod(p.alpha, p.q.q);                           /* alpha q^{j+1} */
    DD qj = qd;                                                  /* q^{j+1} */
    DD term = one, sum = one;
    for (long j = 0; j < n; ++j) {
        const DD num = dd_mul(dd_sub(one, qjmn), dd_sub(one, abqj));
        const DD den = dd_mul(dd_sub(one, aqj), dd_sub(one, qj));
        term = dd_mul(dd_mul(term, dd_div(num, den)), z);
        sum = dd_add(sum, term);
        qjmn = dd_mul(qjmn, qd);
        abqj = dd_mul(abqj, qd);
        aqj = dd_mul(aqj, qd);
        qj = dd_mul(qj, qd);
    }
    return sum.hi + sum.lo;
}

} // namespace detail

/*
 * On support points $q^k$ with $k < n$ the defining series cancels
 * catastrophically: the terms peak near $q^{-(n-k)^2/2}$ while the value is
 * exponentially small (at $x=1$ it is $(-1)^n \alpha^n q^{n(n+1)/2}
 * (\beta q;q)_n/(\alpha q;q)_n$, far below the roundoff of the largest
 * term).  Those points go to the double-double summation: its absolute
 * error is roughly the hump times 1e-32, which for the degrees in actual
 * use keeps the lattice values accurate to ~1e-17, indistinguishable from
 * exact inside any weighted sum.  Recursions in n or k do not help here;
 * $p_n$ is the recessive solution toward its own support.
 */
inline cplx lqj_poly(long n, cplx x, const LQJParams& p, ToleranceConfig tol = {}) {
    if (n < 0) throw DomainError("lqj_poly: need n >= 0");
    const double q = p.q.q;
    if (n >= 1 && x.imag() == 0.0 && x.real() > 0.0) {
        if (auto kidx = lattice_index(x, q); kidx && *kidx >= 0 && *kidx < n + 4)
            return cplx(detail::lqj_lattice_sum(n, *kidx, p));
    }
    return detail::lqj_series(n, x, p, tol);
}

/* Coefficients of $p_n$ by the term recurrence of the defining series;
 * real parameters give real coefficients. */
inline PolySeq lqj_poly_coeffs(long n, const LQJParams& p) {
    if (n < 0) throw DomainError("lqj_poly_coeffs: need n >= 0");
    const double q = p.q.q;
    const double abq = p.alpha * p.beta * std::pow(q, n + 1);
    std::vector<cplx> c(static_cast<size_t>(n) + 1);
    double ck = 1.0;
    c[0] = ck;
    for (long k = 0; k < n; ++k) {
        ck *= q * (1.0 - std::pow(q, k - n)) * (1.0 - abq * std::pow(q, k)) /
              ((1.0 - p.alpha * std::pow(q, k + 1)) * (1.0 - std::pow(q, k + 1)));
        c[static_cast<size_t>(k) + 1] = ck;
    }
    return PolySeq(std::move(c));
}

/* lc$(p_n) = (-1)^n q^{-n(n-1)/2} (\alpha\beta q^{n+1};q)_n / (\alpha q;q)_n$ */
inline double lqj_leading_coeff(long n, const LQJParams& p) {
    const double q = p.q.q;
    const double num = qpoch_finite(p.alpha * p.beta * std::pow(q, n + 1), p.q, n).real();
    const double den = qpoch_finite(p.alpha * q, p.q, n).real();
    return (n % 2 == 0 ? 1.0 : -1.0) * std::pow(q, -0.5 * static_cast<double>(n) * (n - 1)) * num / den;
}

inline double weight(long k, const LQJParams& p) {
    if (k < 0) throw DomainError("weight: need k >= 0");
    const double q = p.q.q;
    double w = 1.0;
    for (long j = 1; j <= k; ++j)
        w *= p.alpha * q * (1.0 - p.beta * std::pow(q, j)) / (1.0 - std::pow(q, j));
    return w;
}

/*
 * $\langle f, g\rangle = \sum_{k\ge 0} f(q^k)\overline{g(q^k)} w_k$.  The
 * weight ratio is decreasing and eventually below 1, so the tail obeys a
 * geometric bound once an amplitude for |f conj(g)| is known.  The running
 * maximum over the samples alone is not one (a polynomial pair can be tiny
 * near x = 1 and of order one near 0), so the amplitude is seeded with a
 * probe deep in the lattice as a stand-in for the x -> 0 limit, and the
 * bound must hold on three consecutive steps.  Heuristic, but reliable for
 * integrands whose modulus is comparable to its sampled values.
 */
inline TruncatedValue inner_product(const CFunc& f, const CFunc& g, const LQJParams& p,
                                    ToleranceConfig tol = {}) {
    const double q = p.q.q;
    const double deep = std::pow(q, 64);
    cplx sum = 0.0;
    double w = 1.0, xk = 1.0;
    double amp = std::abs(f(cplx(deep)) * std::conj(g(cplx(deep))));
    int streak = 0;
    for (size_t k = 0; k < tol.max_terms; ++k) {
        const cplx fg = f(cplx(xk)) * std::conj(g(cplx(xk)));
        amp = std::max(amp, std::abs(fg));
        sum += fg * w;
        const double qk1 = std::pow(q, static_cast<double>(k) + 1.0);
        const double rho = p.alpha * q * (1.0 + std::abs(p.beta) * qk1) / (1.0 - qk1);
        const double tail = rho < 1.0 ? amp * w * rho / (1.0 - rho) : INFINITY;
        if (tail < tol.abs_tol * (1.0 + std::abs(sum))) {
            if (++streak == 3) return TruncatedValue{sum, tail, k + 1};
        } else {
            streak = 0;
        }
        w *= p.alpha * q * (1.0 - p.beta * qk1) / (1.0 - qk1);
        xk *= q;
    }
    throw NonConvergenceError("inner_product: tail bound not reached within max_terms");
}

/*
 * $h_n = (\alpha q)^n \frac{(q,\beta q;q)_n}{(\alpha q,\alpha\beta q;q)_n}
 *        \frac{1-\alpha\beta q}{1-\alpha\beta q^{2n+1}}
 *        \frac{(\alpha\beta q^2;q)_\infty}{(\alpha q;q)_\infty}$
 */
inline double norm_h(long n, const LQJParams& p, ToleranceConfig tol = {}) {
    if (n < 0) throw DomainError("norm_h: need n >= 0");
    if (!p.ortho_regime) throw DomainError("norm_h: orthogonality regime needs alpha < 1");
    const double q = p.q.q;
    const double ab = p.alpha * p.beta;
    const double finite = qpoch_finite(q, p.q, n).real() * qpoch_finite(p.beta * q, p.q, n).real() /
                          (qpoch_finite(p.alpha * q, p.q, n).real() * qpoch_finite(ab * q, p.q, n).real());
    const double inf = qpoch_infinite(ab * q * q, p.q, tol).value.real() /
                       qpoch_infinite(p.alpha * q, p.q, tol).value.real();
    return std::pow(p.alpha * q, n) * finite * (1.0 - ab * q) / (1.0 - ab * std::pow(q, 2 * n + 1)) * inf;
}

/* Degree-preserving relabeled operator
 * $(Lf)(x) = \alpha(1-\beta qx)\frac{f(qx)-f(x)}{x} + (1-x)\frac{f(x/q)-f(x)}{x}$
 * with $L p_n = (1-\alpha\beta q^{n+1})(1-q^{-n})\, p_n$. */
inline cplx apply_L(const LQJParams& p, const CFunc& f, cplx x) {
    if (x == cplx(0.0)) throw DomainError("apply_L: x must be nonzero");
    const double q = p.q.q;
    const cplx fx = f(x);
    return p.alpha * (1.0 - p.beta * q * x) * (f(q * x) - fx) / x + (1.0 - x) * (f(x / q) - fx) / x;
}

/*
 * Lowering action: $\tilde D_q p_n(\cdot;\alpha,\beta;q)$ equals
 *   $-q\,\frac{(1-q^{-n})(1-\alpha\beta q^{n+1})}{1-\alpha q}\,
 *    p_{n-1}(\cdot;\alpha q,\beta q;q)$;
 * the chain rule on the series argument $qx$ contributes the factor $-q$
 * relative to an argument-x series.  Both sides are computed and checked
 * against each other before returning.
 */
inline cplx shift_lower(long n, cplx x, const LQJParams& p, ToleranceConfig tol = {}) {
    if (n < 0) throw DomainError("shift_lower: need n >= 0");
    if (x == cplx(0.0)) throw DomainError("shift_lower: x must be nonzero");
    if (n == 0) return 0.0;
    const double q = p.q.q;
    const cplx direct = (lqj_poly(n, q * x, p, tol) - lqj_poly(n, x, p, tol)) / x;
    const LQJParams up(p.alpha * q, p.beta * q, p.q);
    const double coef = -q * (1.0 - std::pow(q, -n)) * (1.0 - p.alpha * p.beta * std::pow(q, n + 1)) /
                        (1.0 - p.alpha * q);
    if (scaled_residual(direct, coef * lqj_poly(n - 1, x, up, tol)) > 1e-8)
        throw NonConvergenceError("shift_lower: lowering identity violated");
    return direct;
}

/* Raising action on polynomials:
 * $(S^{\alpha,\beta} r)(x) = \frac{1}{\alpha q}\frac{1-x}{1-\beta q} r(x/q)
 *                            - \frac{1-\beta qx}{1-\beta q} r(x)$ */
inline cplx shift_raise(const PolySeq& r, cplx x, const LQJParams& p) {
    const double q = p.q.q;
    if (std::abs(1.0 - p.beta * q) < 1e-14) throw DomainError("shift_raise: beta q = 1");
    return (1.0 - x) / (p.alpha * q * (1.0 - p.beta * q)) * r(x / q) -
           (1.0 - p.beta * q * x) / (1.0 - p.beta * q) * r(x);
}

/*
 * Monic three-term recurrence
 *   $x \tilde p_n = \tilde p_{n+1} + b_n \tilde p_n + c_n \tilde p_{n-1}$.
 */
inline std::pair<double, double> monic_recurrence(long n, const LQJParams& p) {
    if (n < 1) throw DomainError("monic_recurrence: need n >= 1");
    const double q = p.q.q;
    const double ab = p.alpha * p.beta;
    const double qn = std::pow(q, n);
    const double d0 = 1.0 - ab * qn * qn, d2 = 1.0 - ab * qn * qn * q * q;
    const double dm = 1.0 - ab * qn * qn / q, dp = 1.0 - ab * qn * qn * q;
    if (std::min({std::abs(d0), std::abs(d2), std::abs(dm), std::abs(dp)}) < 1e-14)
        throw DegeneracyError("monic_recurrence: vanishing denominator");
    const double b = qn *
                     ((1.0 + p.alpha) - p.alpha * (1.0 + p.beta) * (1.0 + q) * qn +
                      ab * q * (1.0 + p.alpha) * qn * qn) /
                     (d0 * d2);
    const double c = p.alpha * qn * qn / q * (1.0 - qn) * (1.0 - p.alpha * qn) *
                     (1.0 - p.beta * qn) * (1.0 - ab * qn) / (dm * d0 * d0 * dp);
    return {b, c};
}

enum class Determinacy { Determinate, Indeterminate };

/*
 * Classifier for the monic family
 *   $x v_n = v_{n+1} + A q^{-n} v_n + (1-q^{-n})(C - Bq^{-n}) v_{n-1}$:
 * indeterminate iff $A^2 > 4B$ and $q \ge |\beta^2 B|$ where
 * $1 - At + Bt^2 = (1-t/\alpha)(1-t/\beta)$ with $|\alpha| \ge |\beta|$.
 * The boundary $q = |\beta^2 B|$ counts as indeterminate.
 */
inline Determinacy asc_determinacy(double A, double B, double C, Base q) {
    if (!(B >= 0.0) || !(B > C))
        throw DomainError("asc_determinacy: Favard conditions need B >= 0 and B > C");
    if (A * A <= 4.0 * B) return Determinacy::Determinate;
    /* B = 0 sends the large root to infinity and beta^2 B to 0 */
    if (B == 0.0) return Determinacy::Indeterminate;
    /* cancellation-free larger root of B t^2 - A t + 1; |beta^2 B| = 1/(B t1^2) */
    const double disc = std::sqrt(A * A - 4.0 * B);
    const double t1 = (A + std::copysign(disc, A)) / (2.0 * B);
    return q.q * B * t1 * t1 >= 1.0 ? Determinacy::Indeterminate : Determinacy::Determinate;
}

struct ASCTriple {
    double A, B, C;
};

/* Matching the equation-derived recurrence
 *   $2\mu p_k = p_{k+1} + q^{-k}(\frac{c}{q\sqrt{ab}} + \frac{1}{\sqrt{ab}}) p_k
 *               + (1-q^{-k})(1 - \frac{c}{ab} q^{-k}) p_{k-1}$
 * to the classifier form gives $B = c/ab$ (the coefficient of $q^{-2k}$ in
 * the $p_{k-1}$ slot), not $c/(abq)$. */
inline ASCTriple asc_triple_from_bhde(double ab, double c, Base q) {
    if (!(ab > 0.0) || !(c > 0.0)) throw DomainError("asc_triple_from_bhde: need ab > 0, c > 0");
    const double s = std::sqrt(ab);
    return ASCTriple{c / (q.q * s) + 1.0 / s, c / ab, 1.0};
}

} // namespace qhyper
