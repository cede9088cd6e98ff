#pragma once

/*
 * Askey-Wilson polynomials and the Askey-Wilson function transform.
 *
 * The polynomials
 *   $p_n(x) = {}_4\varphi_3\!\left[\begin{matrix} q^{-n}, q^{n-1}abcd, ax, a/x \\
 *       ab, ac, ad \end{matrix}; q, q\right]$
 * are symmetric under $x \mapsto 1/x$ and diagonalize the second order
 * difference operator
 *   $(Lf)(x) = \alpha(x)(f(qx) - f(x)) + \alpha(1/x)(f(x/q) - f(x))$,
 *   $\alpha(x) = \frac{(1-ax)(1-bx)(1-cx)(1-dx)}{(1-x^2)(1-qx^2)}$,
 * with eigenvalue $\mu(\gamma_n)$ on $p_n$, where
 *   $\mu(\gamma) = -1 - \tilde a^2 + \tilde a(\gamma + 1/\gamma)$,
 *   $\gamma_n = \tilde a q^n$, $\tilde a = \sqrt{abcd/q}$,
 * and the dual parameters are $(\tilde a, ab/\tilde a, ac/\tilde a,
 * ad/\tilde a)$; dualizing twice gives back $(a,b,c,d)$.  For real
 * parameters in $(0,1)$ the $p_n$ are orthogonal on the unit circle
 * against the weight
 *   $\Delta(x) = \frac{(x^2, 1/x^2;q)_\infty}
 *       {(ax, a/x, bx, b/x, cx, c/x, dx, d/x;q)_\infty}$.
 *
 * The Askey-Wilson function $\phi_\gamma(x)$ interpolates $p_n$ off the
 * lattice $\gamma = \gamma_n$: a very-well-poised $_8W_7$ in one
 * representation, a sum of two balanced $_4\varphi_3$ in the other,
 * meromorphic in both variables, invariant under $x \mapsto 1/x$ and
 * $\gamma \mapsto 1/\gamma$ separately, and self-dual under exchanging
 * $(\gamma, x)$ together with the parameters and their duals.
 *
 * For parameters in the set V ($t < 0$, $0 < b, c \le a < d/q$,
 * $bd, cd \ge q$, $ab, ac < 1$), extended by the dual shift parameter
 * $\tilde t = 1/(qadt)$, the transform
 *   $(\mathcal{F} f)(\gamma) = \int f(x)\,\overline{\phi_\gamma(x)}\,d\nu(x)$
 * maps isometrically onto the same construction in the dual parameters.
 * The measure $\nu$ has density $K\,W(x)/(4\pi)$ on the circle,
 *   $W(x) = \frac{(qx/d, q/(dx), x^2, 1/x^2;q)_\infty}
 *       {(ax, a/x, bx, b/x, cx, c/x;q)_\infty\,\theta(dtx)\,\theta(dt/x)}$,
 * plus atoms on the two geometric half-lattices $aq^k > 1$ and
 * $dtq^k < -1$.  Each atom mass is $K$ times the residue of $W(y)/y$
 * there; the mirror point $1/y$ contributes the same mass once more, and
 * the stored masses carry that fold already.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <qhyper/series.hpp>

namespace qhyper {

/*
 * Parameter set. Three regimes share the struct: the polynomial
 * orthogonality regime (all parameters real in (0,1), no t line), the
 * function transform regime (membership in V enforced, t < 0), and a
 * generic complex regime where only nonvanishing is checked. t = 0 means
 * no transform line is attached.
 */
struct AWParams {
    cplx a{}, b{}, c{}, d{};
    double t = 0.0;
    Base base;

    AWParams(double a_, double b_, double c_, double d_, Base base_)
        : a(a_), b(b_), c(c_), d(d_), base(base_) {
        const auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
        if (!in01(a_) || !in01(b_) || !in01(c_) || !in01(d_))
            throw DomainError("AWParams: polynomial regime requires a, b, c, d in (0,1)");
    }

    AWParams(double a_, double b_, double c_, double d_, double t_, Base base_)
        : a(a_), b(b_), c(c_), d(d_), t(t_), base(base_) {
        if (!(t_ < 0.0))
            throw DomainError("AWParams: transform regime requires t < 0");
        if (!(0.0 < b_) || !(0.0 < c_) || !(b_ <= a_) || !(c_ <= a_) || !(a_ < d_ / base_.q))
            throw DomainError("AWParams: V requires 0 < b, c <= a < d/q");
        if (!(b_ * d_ >= base_.q) || !(c_ * d_ >= base_.q))
            throw DomainError("AWParams: V requires bd >= q and cd >= q");
        if (!(a_ * b_ < 1.0) || !(a_ * c_ < 1.0))
            throw DomainError("AWParams: V requires ab < 1 and ac < 1");
    }

    AWParams(cplx a_, cplx b_, cplx c_, cplx d_, Base base_, double t_ = 0.0)
        : a(a_), b(b_), c(c_), d(d_), t(t_), base(base_) {
        if (a_ == cplx(0.0) || b_ == cplx(0.0) || c_ == cplx(0.0) || d_ == cplx(0.0))
            throw DomainError("AWParams: parameters must be nonzero");
    }

    bool real_valued() const {
        const double s = std::abs(a.imag()) + std::abs(b.imag()) + std::abs(c.imag()) +
                         std::abs(d.imag());
        return s < 1e-13;
    }
    bool in_polynomial_regime() const {
        if (!real_valued()) return false;
        const auto in01 = [](const cplx& v) { return v.real() > 0.0 && v.real() < 1.0; };
        return in01(a) && in01(b) && in01(c) && in01(d);
    }
    bool in_V() const {
        if (!real_valued() || !(t < 0.0)) return false;
        const double ar = a.real(), br = b.real(), cr = c.real(), dr = d.real();
        return 0.0 < br && 0.0 < cr && br <= ar && cr <= ar && ar < dr / base.q &&
               br * dr >= base.q && cr * dr >= base.q && ar * br < 1.0 && ar * cr < 1.0;
    }
};

namespace detail {

inline cplx atilde(const AWParams& p) {
    return std::sqrt(p.a * p.b * p.c * p.d / p.base.q);
}

/*
 * Double-double kernels for the terminating series in aw_poly. Its terms
 * alternate and peak near q^{-n^2/4} before cancelling down to O(1), so a
 * plain double sum loses the eigenvalue relation already at n = 6; carrying
 * the term recurrence at twice the precision keeps the noise at the scale
 * of the peak term times 1e-32.
 */
struct dd {
    double hi = 0.0, lo = 0.0;
};
inline dd dd_norm(double hi, double lo) {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}
inline dd dd_add(dd a, dd b) {
    const double s = a.hi + b.hi, bb = s - a.hi;
    return dd_norm(s, ((a.hi - (s - bb)) + (b.hi - bb)) + a.lo + b.lo);
}
inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }
inline dd dd_mul(dd a, dd b) {
    const double p = a.hi * b.hi;
    return dd_norm(p, std::fma(a.hi, b.hi, -p) + a.hi * b.lo + a.lo * b.hi);
}
inline dd dd_div(dd a, dd b) {
    const double q1 = a.hi / b.hi;
    const dd r = dd_add(a, dd_neg(dd_mul({q1, 0.0}, b)));
    return dd_norm(q1, r.hi / b.hi);
}
struct cdd {
    dd re, im;
};
inline cdd cdd_mul(cdd a, cdd b) {
    return {dd_add(dd_mul(a.re, b.re), dd_neg(dd_mul(a.im, b.im))),
            dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}
inline cdd cdd_div(cdd a, cdd b) {
    const dd n2 = dd_add(dd_mul(b.re, b.re), dd_mul(b.im, b.im));
    return {dd_div(dd_add(dd_mul(a.re, b.re), dd_mul(a.im, b.im)), n2),
            dd_div(dd_add(dd_mul(a.im, b.re), dd_neg(dd_mul(a.re, b.im))), n2)};
}
/* 1 - u q^k with q^k passed as a double-double */
inline cdd cdd_one_minus(cplx u, dd qk) {
    return {dd_add({1.0, 0.0}, dd_neg(dd_mul({u.real(), 0.0}, qk))),
            dd_neg(dd_mul({u.imag(), 0.0}, qk))};
}

/* Throw when (z;q)_infty vanishes, i.e. z sits on the q^{-N} lattice. */
inline void require_no_pole(cplx z, Base q, const char* where) {
    if (auto e = lattice_index(z, q.q); e && *e <= 0)
        throw PoleError(std::string(where) + ": argument within the lattice window of q^{-N}");
}

} // namespace detail

/*
 * Dual parameters (atilde, ab/atilde, ac/atilde, ad/atilde) with the
 * principal square root atilde = sqrt(abcd/q) (positive in the real
 * regimes), plus the dual shift line ttilde = 1/(qadt) when t is set.
 * Involutive, and V maps onto V.
 */
inline AWParams dual_params(const AWParams& p) {
    const cplx at = detail::atilde(p);
    if (at == cplx(0.0)) throw DomainError("dual_params: abcd/q has no usable square root");
    double td = 0.0;
    if (p.t != 0.0) {
        const cplx ad = p.a * p.d;
        if (std::abs(ad.imag()) > 1e-12 * std::abs(ad))
            throw DomainError("dual_params: the dual t line needs real ad");
        td = 1.0 / (p.base.q * ad.real() * p.t);
    }
    return AWParams(at, p.a * p.b / at, p.a * p.c / at, p.a * p.d / at, p.base, td);
}

/*
 * Functions the operator and the transform act on satisfy f(x) = f(1/x);
 * wrapping enforces the symmetry by averaging the two evaluations.
 */
struct SymFunction {
    std::function<cplx(cplx)> f;
    explicit SymFunction(std::function<cplx(cplx)> f_) : f(std::move(f_)) {}
    cplx operator()(cplx x) const { return 0.5 * (f(x) + f(1.0 / x)); }
};

/* The terminating balanced 4phi3 above, at argument q, summed exactly over
   k = 0..n with the double-double kernels. */
inline cplx aw_poly(long n, cplx x, const AWParams& p, ToleranceConfig tol = {}) {
    if (n < 0) throw DomainError("aw_poly: degree must be >= 0");
    if (x == cplx(0.0)) throw DomainError("aw_poly: x = 0");
    (void)tol; /* the sum is finite and carries its own precision */
    const double q = p.base.q;
    for (const cplx& den : {p.a * p.b, p.a * p.c, p.a * p.d})
        if (auto e = lattice_index(den, q); e && *e <= 0)
            throw DomainError("aw_poly: ab, ac, ad may not lie on q^{-N}");
    const cplx B = std::pow(q, static_cast<double>(n - 1)) * p.a * p.b * p.c * p.d;
    const cplx ax = p.a * x, aix = p.a / x, ab = p.a * p.b, ac = p.a * p.c, ad = p.a * p.d;
    using detail::cdd;
    using detail::dd;
    detail::dd qk{1.0, 0.0};
    detail::dd qkn{1.0, 0.0}; /* q^{k-n} */
    for (long j = 0; j < n; ++j) qkn = detail::dd_div(qkn, {q, 0.0});
    cdd sum{{1.0, 0.0}, {0.0, 0.0}};
    cdd term = sum;
    for (long k = 0; k < n; ++k) {
        cdd num{detail::dd_add({1.0, 0.0}, detail::dd_neg(qkn)), {0.0, 0.0}};
        for (const cplx& u : {B, ax, aix}) num = detail::cdd_mul(num, detail::cdd_one_minus(u, qk));
        const dd qk1 = detail::dd_mul(qk, {q, 0.0});
        cdd den{detail::dd_add({1.0, 0.0}, detail::dd_neg(qk1)), {0.0, 0.0}};
        for (const cplx& u : {ab, ac, ad}) den = detail::cdd_mul(den, detail::cdd_one_minus(u, qk));
        term = detail::cdd_div(detail::cdd_mul(term, num), den);
        term = {detail::dd_mul(term.re, {q, 0.0}), detail::dd_mul(term.im, {q, 0.0})};
        sum = {detail::dd_add(sum.re, term.re), detail::dd_add(sum.im, term.im)};
        qk = qk1;
        qkn = detail::dd_mul(qkn, {q, 0.0});
    }
    return {sum.re.hi + sum.re.lo, sum.im.hi + sum.im.lo};
}

/* Eigenvalue function mu(gamma); mu(atilde q^n) is the p_n eigenvalue. */
inline cplx aw_mu(cplx gamma, const AWParams& p) {
    if (gamma == cplx(0.0)) throw DomainError("aw_mu: gamma = 0");
    const cplx at = detail::atilde(p);
    return -1.0 - at * at + at * (gamma + 1.0 / gamma);
}

inline cplx aw_operator(const SymFunction& f, cplx x, const AWParams& p) {
    const double q = p.base.q;
    const double rq = std::sqrt(q);
    for (double pole : {1.0, -1.0, rq, -rq, 1.0 / rq, -1.0 / rq})
        if (std::abs(x - cplx(pole)) < 1e-10)
            throw DomainError("aw_operator: x within 1e-10 of a pole of alpha");
    const auto alpha = [&](cplx y) {
        return (1.0 - p.a * y) * (1.0 - p.b * y) * (1.0 - p.c * y) * (1.0 - p.d * y) /
               ((1.0 - y * y) * (1.0 - q * y * y));
    };
    return alpha(x) * (f(q * x) - f(x)) + alpha(1.0 / x) * (f(x / q) - f(x));
}

namespace detail {

/* The polynomial orthogonality weight Delta; real and >= 0 on the circle. */
inline cplx aw_delta(cplx x, const AWParams& p, ToleranceConfig tol = {}) {
    const cplx num = qpoch_multi({x * x, 1.0 / (x * x)}, p.base, tol).value;
    const cplx den = qpoch_multi({p.a * x, p.a / x, p.b * x, p.b / x, p.c * x, p.c / x,
                                  p.d * x, p.d / x},
                                 p.base, tol).value;
    return num / den;
}

/*
 * Residue of Delta(x)/x in the dual parameters at x0 = a q^n, where the
 * factor of (a/x;q)_infty at index n vanishes: its x-derivative there is
 * 1/x0 times the product with that factor removed, which cancels the 1/x
 * of the integrand.
 */
inline cplx res_dual_delta(long n, const AWParams& pd, ToleranceConfig tol = {}) {
    const cplx x0 = pd.a * std::pow(pd.base.q, static_cast<double>(n));
    const cplx num = qpoch_multi({x0 * x0, 1.0 / (x0 * x0)}, pd.base, tol).value;
    const cplx skip = qpoch_infinite_skip(std::pow(pd.base.q, static_cast<double>(-n)),
                                          pd.base, static_cast<std::size_t>(n), tol).value;
    const cplx rest = qpoch_multi({pd.a * x0, pd.b * x0, pd.b / x0, pd.c * x0, pd.c / x0,
                                   pd.d * x0, pd.d / x0},
                                  pd.base, tol).value;
    return num / (skip * rest);
}

} // namespace detail

/*
 * Squared norm h_n of p_n in the normalization h_0 = 1: the quotient of
 * residues of the dual weight, h_n = Res_{gamma_0} / Res_{gamma_n} of
 * Delta-dual(x)/x.
 */
inline cplx aw_norm(long n, const AWParams& p, ToleranceConfig tol = {}) {
    if (n < 0) throw DomainError("aw_norm: degree must be >= 0");
    const AWParams pd = dual_params(p);
    return detail::res_dual_delta(0, pd, tol) / detail::res_dual_delta(n, pd, tol);
}

/*
 * Gram matrix (1/(2 pi i C0)) oint p_n p_m Delta(x) dx/x over the unit
 * circle, C0 the Askey-Wilson integral of Delta alone, so the (0,0) entry
 * is 1. The integrand extends to a smooth periodic function of theta (the
 * numerator (x^2, 1/x^2;q)_infty has double zeros at x = +-1), so the
 * periodic trapezoid rule converges spectrally; panels are doubled,
 * reusing computed nodes, until the dyadic difference is below 1e-9 of the
 * diagonal scale.
 */
inline std::vector<std::vector<cplx>> aw_gram(long nmax, const AWParams& p,
                                              ToleranceConfig tol = {}) {
    if (nmax < 0) throw DomainError("aw_gram: nmax must be >= 0");
    if (!p.in_polynomial_regime())
        throw DomainError("aw_gram: requires the polynomial regime (a, b, c, d in (0,1))");
    const std::size_t m = static_cast<std::size_t>(nmax) + 1;
    const cplx C0 = 2.0 * qpoch_infinite(p.a * p.b * p.c * p.d, p.base, tol).value /
                    qpoch_multi({cplx(p.base.q), p.a * p.b, p.a * p.c, p.a * p.d,
                                 p.b * p.c, p.b * p.d, p.c * p.d},
                                p.base, tol).value;

    struct Node {
        cplx delta{};
        std::vector<cplx> pv;
    };
    const auto eval_node = [&](double theta) {
        Node nd;
        const cplx x = std::polar(1.0, theta);
        if (std::abs(x * x - cplx(1.0)) < 1e-13) return nd; /* double zero of Delta */
        nd.delta = detail::aw_delta(x, p, tol);
        nd.pv.resize(m);
        for (std::size_t n = 0; n < m; ++n)
            nd.pv[n] = aw_poly(static_cast<long>(n), x, p, tol);
        return nd;
    };
    const auto assemble = [&](const std::vector<Node>& nodes) {
        std::vector<std::vector<cplx>> g(m, std::vector<cplx>(m, cplx(0.0)));
        for (const Node& nd : nodes) {
            if (nd.pv.empty()) continue;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j <= i; ++j) g[i][j] += nd.pv[i] * nd.pv[j] * nd.delta;
        }
        const cplx scale = C0 * static_cast<double>(nodes.size());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                g[i][j] /= scale;
                g[j][i] = g[i][j];
            }
        return g;
    };

    std::size_t n = 64;
    std::vector<Node> nodes(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes[i] = eval_node(2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n));
    std::vector<std::vector<cplx>> gram = assemble(nodes);
    for (int level = 0; level < 10; ++level) {
        std::vector<Node> fine(2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i)
            fine[i] = (i % 2 == 0)
                          ? std::move(nodes[i / 2])
                          : eval_node(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(2 * n));
        const std::vector<std::vector<cplx>> refined = assemble(fine);
        double diff = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            diag = std::max(diag, std::abs(refined[i][i]));
            for (std::size_t j = 0; j < m; ++j)
                diff = std::max(diff, std::abs(refined[i][j] - gram[i][j]));
        }
        gram = refined;
        nodes = std::move(fine);
        n *= 2;
        if (diff < 1e-9 * diag + 1e-16) return gram;
    }
    throw NonConvergenceError("aw_gram: quadrature did not converge");
}

enum class AWRep { W8, Pair43 };

/*
 * The Askey-Wilson function.
 *
 * W8 representation (needs |q/(dtilde gamma)| < 1):
 *   $\phi_\gamma(x) = \frac{(qax\gamma/\tilde d, qa\gamma/(\tilde d x);q)_\infty}
 *       {(\tilde a\tilde b\tilde c\gamma, q\gamma/\tilde d, q\tilde a/\tilde d,
 *         qx/d, q/(dx);q)_\infty}\;
 *     {}_8W_7\!\bigl(\tilde a\tilde b\tilde c\gamma/q; ax, a/x, \tilde a\gamma,
 *       \tilde b\gamma, \tilde c\gamma; q, q/(\tilde d\gamma)\bigr)$.
 *
 * Pair43 representation (meromorphic continuation; poles only for
 * $x^{\pm 1} \in q^{1+\mathbb{N}}/d$ or $\gamma^{\pm 1} \in
 * q^{1+\mathbb{N}}/\tilde d$):
 *   $\phi_\gamma(x) = \frac{1}{(bc, qa/d, q/(ad);q)_\infty}\,
 *     {}_4\varphi_3\!\left[\begin{matrix} ax, a/x, \tilde a\gamma, \tilde a/\gamma \\
 *       ab, ac, ad \end{matrix}; q, q\right]
 *   + \frac{(ax, a/x, \tilde a\gamma, \tilde a/\gamma, qb/d, qc/d;q)_\infty}
 *       {(qx/d, q/(dx), q\gamma/\tilde d, q/(\tilde d\gamma), ab, ac, bc,
 *         qa/d, ad/q;q)_\infty}\,
 *     {}_4\varphi_3\!\left[\begin{matrix} qx/d, q/(dx), q\gamma/\tilde d,
 *         q/(\tilde d\gamma) \\ qb/d, qc/d, q^2/(ad) \end{matrix}; q, q\right]$.
 *
 * At $\gamma = \gamma_n$ the second term carries the factor
 * $(\tilde a/\gamma;q)_\infty = (q^{-n};q)_\infty = 0$ and the first
 * terminates, reducing to $p_n(x)/((bc, qa/d, q/(ad);q)_\infty)$.
 */
inline TruncatedValue aw_function(cplx gamma, cplx x, const AWParams& p, AWRep rep,
                                  ToleranceConfig tol = {}) {
    if (gamma == cplx(0.0) || x == cplx(0.0))
        throw DomainError("aw_function: gamma and x must be nonzero");
    const Base qb = p.base;
    const double q = qb.q;
    const cplx at = detail::atilde(p);
    const cplx bt = p.a * p.b / at, ct = p.a * p.c / at, dt = p.a * p.d / at;

    if (rep == AWRep::W8) {
        const cplx z = q / (dt * gamma);
        if (!(std::abs(z) < 1.0))
            throw RegionError("aw_function: W8 representation requires |q/(dtilde gamma)| < 1");
        for (const cplx& den : {at * bt * ct * gamma, q * gamma / dt, q * at / dt,
                                q * x / p.d, q / (p.d * x)})
            detail::require_no_pole(den, qb, "aw_function");
        const cplx pre =
            qpoch_multi({q * p.a * x * gamma / dt, q * p.a * gamma / (dt * x)}, qb, tol).value /
            qpoch_multi({at * bt * ct * gamma, q * gamma / dt, q * at / dt, q * x / p.d,
                         q / (p.d * x)},
                        qb, tol).value;
        const TruncatedValue w = eval_vwp(
            at * bt * ct * gamma / q,
            {ParamSpec(p.a * x), ParamSpec(p.a / x), ParamSpec(at * gamma),
             ParamSpec(bt * gamma), ParamSpec(ct * gamma)},
            qb, z, tol);
        return {pre * w.value, std::abs(pre) * w.tail_bound, w.terms_used};
    }

    for (const cplx& den : {q * x / p.d, q / (p.d * x), q * gamma / dt, q / (dt * gamma),
                            p.a * p.b, p.a * p.c, p.b * p.c, q * p.a / p.d, p.a * p.d / q,
                            q / (p.a * p.d)})
        detail::require_no_pole(den, qb, "aw_function");
    const cplx pre1 =
        1.0 / qpoch_multi({p.b * p.c, q * p.a / p.d, q / (p.a * p.d)}, qb, tol).value;
    const TruncatedValue s1 = eval_rphis(
        make_series({ParamSpec(p.a * x), ParamSpec(p.a / x), ParamSpec(at * gamma),
                     ParamSpec(at / gamma)},
                    {ParamSpec(p.a * p.b), ParamSpec(p.a * p.c), ParamSpec(p.a * p.d)}, q,
                    cplx(q)),
        tol);
    const cplx pre2 =
        qpoch_multi({p.a * x, p.a / x, at * gamma, at / gamma, q * p.b / p.d, q * p.c / p.d},
                    qb, tol).value /
        qpoch_multi({q * x / p.d, q / (p.d * x), q * gamma / dt, q / (dt * gamma), p.a * p.b,
                     p.a * p.c, p.b * p.c, q * p.a / p.d, p.a * p.d / q},
                    qb, tol).value;
    const TruncatedValue s2 = eval_rphis(
        make_series({ParamSpec(q * x / p.d), ParamSpec(q / (p.d * x)),
                     ParamSpec(q * gamma / dt), ParamSpec(q / (dt * gamma))},
                    {ParamSpec(q * p.b / p.d), ParamSpec(q * p.c / p.d),
                     ParamSpec(q * q / (p.a * p.d))},
                    q, cplx(q)),
        tol);
    return {pre1 * s1.value + pre2 * s2.value,
            std::abs(pre1) * s1.tail_bound + std::abs(pre2) * s2.tail_bound,
            s1.terms_used + s2.terms_used};
}

/*
 * The c-function of the expansion phi = c(gamma) Phi_gamma +
 * c(1/gamma) Phi_{1/gamma} taken in the parameters passed here (the
 * expansion of phi in the primal parameters uses the dual ones):
 *   $c(\gamma) = \frac{(a/\gamma, b/\gamma, c/\gamma;q)_\infty\,
 *       \theta(\gamma/(dt))}
 *     {(ab, ac, bc, qa/d;q)_\infty\,\theta(qadt)\,
 *       (q\gamma/d, 1/\gamma^2;q)_\infty}$,
 * with $\theta(z) = (z, q/z;q)_\infty$. Vanishes at gamma on the support
 * lattices (a q^k and d t q^k), which is what makes the recessive branch
 * drop out there.
 */
inline cplx aw_cfun(cplx gamma, const AWParams& p, ToleranceConfig tol = {}) {
    if (gamma == cplx(0.0)) throw DomainError("aw_cfun: gamma = 0");
    if (p.t == 0.0) throw DomainError("aw_cfun: parameters carry no t line");
    const Base qb = p.base;
    const double q = qb.q;
    const cplx dtl = p.d * p.t;
    detail::require_no_pole(q * gamma / p.d, qb, "aw_cfun");
    detail::require_no_pole(1.0 / (gamma * gamma), qb, "aw_cfun");
    if (lattice_index(q * p.a * p.d * p.t, q))
        throw DegeneracyError("aw_cfun: theta(qadt) vanishes; perturb t");
    const cplx num = qpoch_multi({p.a / gamma, p.b / gamma, p.c / gamma}, qb, tol).value *
                     theta(gamma / dtl, qb, tol).value;
    const cplx den =
        qpoch_multi({p.a * p.b, p.a * p.c, p.b * p.c, q * p.a / p.d}, qb, tol).value *
        theta(q * p.a * p.d * p.t, qb, tol).value *
        qpoch_multi({q * gamma / p.d, 1.0 / (gamma * gamma)}, qb, tol).value;
    return num / den;
}

/*
 * The asymptotically free solution on the t line, normalized so that
 * $\Phi^{\mathrm{free}}_\gamma(dtq^k) = (\tilde a\gamma)^{-k}$:
 *   $\Phi_\gamma(x) = \frac{(qa\gamma/(\tilde a x), qb\gamma/(\tilde a x),
 *       qc\gamma/(\tilde a x), q\tilde a\gamma/(dx), d/x;q)_\infty}
 *     {(q/(ax), q/(bx), q/(cx), q/(dx), q^2\gamma^2/(dx);q)_\infty}\,
 *     {}_8W_7\!\bigl(q\gamma^2/(dx); q\gamma/\tilde a, q\gamma/\tilde d,
 *       \tilde b\gamma, \tilde c\gamma, q/(dx); q, d/x\bigr)\,
 *     \Phi^{\mathrm{free}}_\gamma(x)$,
 * requiring x = dtq^k and |d/x| < 1.
 */
inline TruncatedValue aw_Phi(cplx gamma, cplx x, const AWParams& p, ToleranceConfig tol = {}) {
    if (gamma == cplx(0.0) || x == cplx(0.0))
        throw DomainError("aw_Phi: gamma and x must be nonzero");
    if (p.t == 0.0) throw DomainError("aw_Phi: parameters carry no t line");
    const Base qb = p.base;
    const double q = qb.q;
    const cplx dtl = p.d * p.t;
    const auto k = lattice_index(x / dtl, q);
    if (!k) throw DomainError("aw_Phi: x must lie on the lattice d t q^k");
    if (!(std::abs(p.d / x) < 1.0)) throw RegionError("aw_Phi: requires |d/x| < 1");
    const cplx at = detail::atilde(p);
    const cplx bt = p.a * p.b / at, ct = p.a * p.c / at, dt = p.a * p.d / at;
    for (const cplx& den : {q / (p.a * x), q / (p.b * x), q / (p.c * x), q / (p.d * x),
                            q * q * gamma * gamma / (p.d * x)})
        detail::require_no_pole(den, qb, "aw_Phi");
    const cplx pre =
        qpoch_multi({q * p.a * gamma / (at * x), q * p.b * gamma / (at * x),
                     q * p.c * gamma / (at * x), q * at * gamma / (p.d * x), p.d / x},
                    qb, tol).value /
        qpoch_multi({q / (p.a * x), q / (p.b * x), q / (p.c * x), q / (p.d * x),
                     q * q * gamma * gamma / (p.d * x)},
                    qb, tol).value;
    const TruncatedValue w = eval_vwp(
        q * gamma * gamma / (p.d * x),
        {ParamSpec(q * gamma / at), ParamSpec(q * gamma / dt), ParamSpec(bt * gamma),
         ParamSpec(ct * gamma), ParamSpec(q / (p.d * x))},
        qb, p.d / x, tol);
    const cplx free = detail::ipow(at * gamma, -*k);
    return {pre * w.value * free, std::abs(pre * free) * w.tail_bound, w.terms_used};
}

/* One atom of the transform measure: x = a q^k or x = d t q^k, |x| > 1. */
struct AWAtom {
    double x = 0.0;
    double mass = 0.0;
    long k = 0;
};

/*
 * The transform measure. For symmetric f,
 *   int f dnu = K int_0^{2 pi} f(e^{i theta}) w(theta) dtheta
 *               + sum_j mass_j f(x_j),
 * where w(theta) = W(e^{i theta})/(4 pi) and the atom masses include K and
 * the fold onto the mirror points 1/x_j.
 */
struct AWMeasure {
    double K = 0.0;
    std::function<double(double)> continuous_weight;
    std::vector<AWAtom> atoms_plus;
    std::vector<AWAtom> atoms_minus;
};

namespace detail {

/* The circle density W; W(x) = theta(dx) theta(d/x) Delta(x) / (theta(dtx) theta(dt/x)). */
inline cplx aw_weight(cplx x, const AWParams& p, ToleranceConfig tol = {}) {
    const Base qb = p.base;
    const double q = qb.q;
    const cplx dtl = p.d * p.t;
    const cplx num =
        qpoch_multi({q * x / p.d, q / (p.d * x), x * x, 1.0 / (x * x)}, qb, tol).value;
    const cplx den =
        qpoch_multi({p.a * x, p.a / x, p.b * x, p.b / x, p.c * x, p.c / x}, qb, tol).value *
        theta(dtl * x, qb, tol).value * theta(dtl / x, qb, tol).value;
    return num / den;
}

/*
 * (x;q)_infty for real x as log magnitude plus sign, optionally with one
 * index struck out. Deep atoms make individual products overflow doubles
 * (the arguments grow like q^{-|k|}) even though the residue quotients
 * decay, so the quotients are assembled in log space.
 */
struct LogSigned {
    double lg = 0.0;
    double sign = 1.0;
};

inline LogSigned log_qpoch_real(double x, Base qb, long skip = -1,
                                ToleranceConfig tol = {}) {
    LogSigned r;
    double xq = x;
    long j = 0;
    while (std::abs(xq) > 0.5 || j <= skip) {
        if (j != skip) {
            const double f = 1.0 - xq;
            if (f == 0.0)
                throw DegeneracyError("log_qpoch_real: vanishing factor off the struck index");
            r.lg += std::log(std::abs(f));
            if (f < 0.0) r.sign = -r.sign;
        }
        xq *= qb.q;
        ++j;
    }
    r.lg += std::log(qpoch_infinite(cplx(xq), qb, tol).value.real());
    return r;
}

/*
 * Residues of W(y)/y at the atoms. The vanishing factor is divided out
 * exactly: at y0 = a q^k it sits at index k of (a/y;q)_infty with
 * y-derivative 1/y0 there; at y0 = d t q^k it sits in theta(dt/y) =
 * (dt/y;q)_infty (qy/dt;q)_infty, at index k of the first product when
 * k >= 0 (derivative 1/y0) and at index -1-k of the second when k <= -1
 * (derivative -1/y0). The 1/y0 cancels the 1/y of the integrand.
 */
inline double aw_residue_plus(long k, const AWParams& p, ToleranceConfig tol = {}) {
    const Base qb = p.base;
    const double q = qb.q;
    const double a = p.a.real(), b = p.b.real(), c = p.c.real(), d = p.d.real();
    const double y0 = a * std::pow(q, static_cast<double>(k));
    const double dtl = d * p.t;
    LogSigned r;
    const auto mul = [&](LogSigned v, double s) {
        r.lg += s * v.lg;
        r.sign *= v.sign;
    };
    for (double arg : {q * y0 / d, q / (d * y0), y0 * y0, 1.0 / (y0 * y0)})
        mul(log_qpoch_real(arg, qb, -1, tol), 1.0);
    for (double arg : {a * y0, b * y0, b / y0, c * y0, c / y0})
        mul(log_qpoch_real(arg, qb, -1, tol), -1.0);
    mul(log_qpoch_real(std::pow(q, static_cast<double>(-k)), qb, k, tol), -1.0);
    for (double z : {dtl * y0, dtl / y0}) {
        mul(log_qpoch_real(z, qb, -1, tol), -1.0);
        mul(log_qpoch_real(q / z, qb, -1, tol), -1.0);
    }
    return r.sign * std::exp(r.lg);
}

inline double aw_residue_minus(long k, const AWParams& p, ToleranceConfig tol = {}) {
    const Base qb = p.base;
    const double q = qb.q;
    const double a = p.a.real(), b = p.b.real(), c = p.c.real(), d = p.d.real();
    const double dtl = d * p.t;
    const double y0 = dtl * std::pow(q, static_cast<double>(k));
    LogSigned r;
    const auto mul = [&](LogSigned v, double s) {
        r.lg += s * v.lg;
        r.sign *= v.sign;
    };
    for (double arg : {q * y0 / d, q / (d * y0), y0 * y0, 1.0 / (y0 * y0)})
        mul(log_qpoch_real(arg, qb, -1, tol), 1.0);
    for (double arg : {a * y0, a / y0, b * y0, b / y0, c * y0, c / y0})
        mul(log_qpoch_real(arg, qb, -1, tol), -1.0);
    for (double z : {dtl * y0, q / (dtl * y0)})
        mul(log_qpoch_real(z, qb, -1, tol), -1.0);
    /* theta(dt/y) vanishes at dt/y0 = q^{-k}, struck per the split above */
    if (k >= 0) {
        mul(log_qpoch_real(std::pow(q, static_cast<double>(-k)), qb, k, tol), -1.0);
        mul(log_qpoch_real(std::pow(q, static_cast<double>(1 + k)), qb, -1, tol), -1.0);
    } else {
        mul(log_qpoch_real(std::pow(q, static_cast<double>(-k)), qb, -1, tol), -1.0);
        mul(log_qpoch_real(std::pow(q, static_cast<double>(1 + k)), qb, -1 - k, tol), -1.0);
        r.sign = -r.sign;
    }
    return r.sign * std::exp(r.lg);
}

} // namespace detail

/*
 * Assemble the measure. The normalizer is
 *   $K = (ab, ac, bc, qa/d, q;q)_\infty\,
 *     \sqrt{\theta(qt)\,\theta(adt)\,\theta(bdt)\,\theta(cdt)/(qabcd\,t^2)}$.
 * Atoms at aq^k walk k = 0, 1, ... while aq^k > 1 (finitely many); atoms at
 * dtq^k walk k downward from the first index with dtq^k < -1 and stop once
 * the mass falls below 1e-16 of the largest seen (the masses decay like
 * atilde^{2k}). Simple-pole degeneracies (colliding pole lattices) and
 * atoms pinched onto the unit circle are rejected. On construction the
 * quotient identity W = theta(dx) theta(d/x) Delta / (theta(dtx) theta(dt/x))
 * is spot-checked, and the first atom of each family is checked against an
 * independently coded residue at the mirror point 1/y0 (the fold).
 */
inline AWMeasure aw_measure(const AWParams& p, ToleranceConfig tol = {}) {
    if (!p.in_V()) throw DomainError("aw_measure: parameters must lie in V");
    const Base qb = p.base;
    const double q = qb.q;
    const double a = p.a.real(), b = p.b.real(), c = p.c.real(), d = p.d.real();
    const double dtl = d * p.t;

    const std::pair<cplx, const char*> collisions[] = {
        {cplx(a * a), "a^2"},
        {cplx(b / a), "b/a"},
        {cplx(c / a), "c/a"},
        {cplx(dtl * dtl), "(dt)^2"},
    };
    for (const auto& [v, name] : collisions)
        if (lattice_index(v, q, 1e-8, 1e-8))
            throw DegeneracyError(std::string("aw_measure: non-simple pole (") + name +
                                  " on the q lattice); perturb the parameters");

    AWMeasure m;
    {
        const double th = theta(cplx(q * p.t), qb, tol).value.real() *
                          theta(cplx(a * d * p.t), qb, tol).value.real() *
                          theta(cplx(b * d * p.t), qb, tol).value.real() *
                          theta(cplx(c * d * p.t), qb, tol).value.real();
        const double pref =
            qpoch_multi({cplx(a * b), cplx(a * c), cplx(b * c), cplx(q * a / d), cplx(q)},
                        qb, tol).value.real();
        const double rad = th / (q * a * b * c * d * p.t * p.t);
        if (!(rad > 0.0))
            throw DegeneracyError("aw_measure: normalizer radicand not positive");
        m.K = pref * std::sqrt(rad);
    }

    const AWParams pc = p;
    const ToleranceConfig tc = tol;
    m.continuous_weight = [pc, tc](double th) {
        const cplx x = std::polar(1.0, th);
        if (std::abs(x * x - cplx(1.0)) < 1e-13) return 0.0;
        return detail::aw_weight(x, pc, tc).real() / (4.0 * std::numbers::pi);
    };

    for (double th : {0.9, 2.3}) {
        const cplx x = std::polar(1.0, th);
        const cplx quot = theta(p.d * x, qb, tol).value * theta(p.d / x, qb, tol).value /
                          (theta(dtl * x, qb, tol).value * theta(dtl / x, qb, tol).value);
        if (scaled_residual(detail::aw_weight(x, p, tol), quot * detail::aw_delta(x, p, tol)) >
            1e-8)
            throw NonConvergenceError("aw_measure: weight/Delta quotient self-check failed");
    }

    for (long k = 0; a * std::pow(q, static_cast<double>(k)) > 1.0; ++k) {
        const double y0 = a * std::pow(q, static_cast<double>(k));
        if (y0 < 1.0 + 1e-8)
            throw DegeneracyError("aw_measure: atom pinched onto the unit circle at a q^" +
                                  std::to_string(k) + "; perturb the parameters");
        const double mass = m.K * detail::aw_residue_plus(k, p, tol);
        if (!std::isfinite(mass) || !(mass > 0.0))
            throw DegeneracyError("aw_measure: nonpositive atom mass at a q^" +
                                  std::to_string(k) + "; perturb the parameters");
        m.atoms_plus.push_back({y0, mass, k});
    }

    if (!m.atoms_plus.empty()) {
        /* fold check at the mirror point y1 = 1/a: the residue of W(y)/y
           there is -(num/den) below, and the fold identity says it cancels
           the residue at a, so num/den itself must reproduce it. */
        const double y1 = 1.0 / m.atoms_plus.front().x;
        const cplx num =
            qpoch_multi({q * y1 / p.d, q / (p.d * y1), cplx(y1 * y1), cplx(1.0 / (y1 * y1))},
                        qb, tol).value;
        const cplx den =
            qpoch_multi({p.a / y1, p.b * y1, p.b / y1, p.c * y1, p.c / y1}, qb, tol).value *
            qpoch_infinite_skip(cplx(1.0), qb, 0, tol).value *
            theta(cplx(dtl * y1), qb, tol).value * theta(cplx(dtl / y1), qb, tol).value;
        const double fold = (num / den).real();
        if (scaled_residual(cplx(fold), cplx(detail::aw_residue_plus(0, p, tol))) > 1e-8)
            throw NonConvergenceError("aw_measure: atom fold inconsistency at a q^0");
    }

    long k0 = 0;
    while (dtl * std::pow(q, static_cast<double>(k0)) < -1.0) ++k0;
    while (!(dtl * std::pow(q, static_cast<double>(k0)) < -1.0)) --k0;
    /* now the largest k with d t q^k < -1 */
    if (std::abs(dtl) * std::pow(q, static_cast<double>(k0)) < 1.0 + 1e-8)
        throw DegeneracyError("aw_measure: atom pinched onto the unit circle at d t q^" +
                              std::to_string(k0) + "; perturb the parameters");
    double largest = 0.0;
    for (long k = k0;; --k) {
        if (k < k0 - 1000)
            throw NonConvergenceError("aw_measure: atom enumeration did not truncate");
        const double mass = m.K * detail::aw_residue_minus(k, p, tol);
        if (!std::isfinite(mass) || !(mass > 0.0))
            throw DegeneracyError("aw_measure: nonpositive atom mass at d t q^" +
                                  std::to_string(k) + "; perturb the parameters");
        if (mass < 1e-16 * largest) break;
        largest = std::max(largest, mass);
        m.atoms_minus.push_back({dtl * std::pow(q, static_cast<double>(k)), mass, k});
    }

    {
        /* same fold check for the first atom of the minus family */
        const long k = m.atoms_minus.front().k;
        const double y1 = 1.0 / m.atoms_minus.front().x;
        const cplx num =
            qpoch_multi({q * y1 / p.d, q / (p.d * y1), cplx(y1 * y1), cplx(1.0 / (y1 * y1))},
                        qb, tol).value;
        cplx den =
            qpoch_multi({p.a * y1, p.a / y1, p.b * y1, p.b / y1, p.c * y1, p.c / y1}, qb,
                        tol).value *
            theta(cplx(dtl / y1), qb, tol).value;
        /* theta(dt y) = (dt y;q)_inf (q/(dt y);q)_inf vanishes at dt y1 = q^{-k} */
        if (k >= 0)
            den *= qpoch_infinite_skip(std::pow(q, static_cast<double>(-k)), qb,
                                       static_cast<std::size_t>(k), tol).value *
                   qpoch_infinite(std::pow(q, static_cast<double>(1 + k)), qb, tol).value;
        else
            den *= qpoch_infinite(std::pow(q, static_cast<double>(-k)), qb, tol).value *
                   (-1.0) *
                   qpoch_infinite_skip(std::pow(q, static_cast<double>(1 + k)), qb,
                                       static_cast<std::size_t>(-1 - k), tol).value;
        const double fold = (num / den).real();
        if (scaled_residual(cplx(fold), cplx(detail::aw_residue_minus(k, p, tol))) > 1e-8)
            throw NonConvergenceError("aw_measure: atom fold inconsistency at d t q^" +
                                      std::to_string(k));
    }
    return m;
}

namespace detail {

/*
 * Integrate a symmetric function against the measure without the extra
 * symmetrizing evaluation of SymFunction (callers pass integrands that are
 * already symmetric). Nodes where the integrand vanishes skip the weight.
 */
inline TruncatedValue integrate_measure(const std::function<cplx(cplx)>& f, const AWMeasure& m,
                                        ToleranceConfig tol = {}) {
    cplx atoms = 0.0;
    for (const std::vector<AWAtom>* fam : {&m.atoms_plus, &m.atoms_minus})
        for (const AWAtom& at : *fam) atoms += at.mass * f(cplx(at.x));

    const auto node = [&](double th) -> cplx {
        const cplx fx = f(std::polar(1.0, th));
        if (fx == cplx(0.0)) return 0.0;
        return fx * m.continuous_weight(th);
    };
    std::size_t n = 64;
    std::vector<cplx> vals(n);
    for (std::size_t i = 0; i < n; ++i)
        vals[i] = node(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    const auto trap = [](const std::vector<cplx>& v) {
        cplx s = 0.0;
        for (const cplx& x : v) s += x;
        return s * (2.0 * std::numbers::pi / static_cast<double>(v.size()));
    };
    cplx integral = trap(vals);
    for (int level = 0; level < 12; ++level) {
        std::vector<cplx> fine(2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i)
            fine[i] = (i % 2 == 0) ? vals[i / 2]
                                   : node(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(2 * n));
        const cplx refined = trap(fine);
        const double diff = std::abs(refined - integral);
        integral = refined;
        vals = std::move(fine);
        n *= 2;
        if (diff < 1e-9 * (std::abs(integral) + std::abs(atoms) / m.K) + 1e-15)
            return {m.K * integral + atoms, m.K * diff, n};
    }
    throw NonConvergenceError("integrate_measure: quadrature did not converge");
}

/*
 * Evaluate phi_gamma at a point of the support, picking a representation
 * that stays accurate there. Pair43 is fine on and near the unit circle,
 * but its two terms grow like q^{-k^2/2} before cancelling when either
 * variable sits k steps out on its t line, so far-out x switches to the
 * c-function expansion (the 8W7 of Phi converges in d/x with no
 * cancellation), and far-out gamma applies the same expansion in the
 * gamma variable through duality. On the support lattices the c-function
 * of the growing branch vanishes identically, so nothing is lost.
 */
inline cplx aw_phi_support(cplx gamma, cplx x, const AWParams& p, const AWParams& pd,
                           ToleranceConfig tol = {}) {
    if (std::abs(x) < 1.0) x = 1.0 / x;
    if (std::abs(gamma) < 1.0) gamma = 1.0 / gamma;
    const double q = p.base.q;
    if (std::abs(gamma) > std::abs(pd.d) &&
        lattice_index(gamma / (pd.d * pd.t), q).has_value())
        return aw_cfun(x, p, tol) * aw_Phi(x, gamma, pd, tol).value +
               aw_cfun(1.0 / x, p, tol) * aw_Phi(1.0 / x, gamma, pd, tol).value;
    if (std::abs(x) > std::abs(p.d) && lattice_index(x / (p.d * p.t), q).has_value())
        return aw_cfun(gamma, pd, tol) * aw_Phi(gamma, x, p, tol).value +
               aw_cfun(1.0 / gamma, pd, tol) * aw_Phi(1.0 / gamma, x, p, tol).value;
    return aw_function(gamma, x, p, AWRep::Pair43, tol).value;
}

} // namespace detail

/* int f dnu for symmetric f: circle quadrature plus the atom sums. */
inline TruncatedValue aw_integrate(const SymFunction& f, const AWMeasure& m,
                                   ToleranceConfig tol = {}) {
    return detail::integrate_measure([&f](cplx x) { return f(x); }, m, tol);
}

/*
 * The transform (F f)(gamma) = int f(x) conj(phi_gamma(x)) dnu(x) for f
 * supported on the measure (vanishing far out on the t line). phi is
 * evaluated per support point through the representation dispatch above;
 * nodes with f = 0 never touch phi, so sparse f (delta functions at atoms)
 * cost only their support.
 */
inline TruncatedValue aw_transform(const SymFunction& f, cplx gamma, const AWParams& p,
                                   ToleranceConfig tol = {}) {
    if (gamma == cplx(0.0)) throw DomainError("aw_transform: gamma = 0");
    const AWMeasure m = aw_measure(p, tol);
    const AWParams pd = dual_params(p);
    const auto integrand = [&](cplx x) -> cplx {
        const cplx fx = f(x);
        if (fx == cplx(0.0)) return 0.0;
        return fx * std::conj(detail::aw_phi_support(gamma, x, p, pd, tol));
    };
    return detail::integrate_measure(integrand, m, tol);
}

} // namespace qhyper
