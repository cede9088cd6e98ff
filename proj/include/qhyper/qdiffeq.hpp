#pragma once

/*
 * The basic hypergeometric q-difference equation
 *   $(c - abz)\,u(qz) + (-(c+q) + (a+b)z)\,u(z) + (q - z)\,u(z/q) = 0$,
 * its operator form $L = S \circ \tilde D_q$ with
 *   $(Lu)(z) = (c-abz)\frac{u(qz)-u(z)}{z} + (1 - z/q)\frac{u(z/q)-u(z)}{z/q}$,
 * the four Frobenius solutions at 0 and $\infty$, the theta-quotient
 * connection coefficients, and the Darboux-transform identity.
 */

#include <qhyper/series.hpp>

#include <functional>
#include <map>

namespace qhyper {

using CFunc = std::function<cplx(cplx)>;

/*
 * Parameter triple of the equation, with the lattice degeneracies that
 * obstruct individual Frobenius solutions precomputed:
 *   u1 needs $c \notin q^{-\mathbb N}$, u2 needs $c \notin q^{2+\mathbb N}$,
 *   u3 needs $a/b \notin q^{-1-\mathbb N}$, u4 needs $a/b \notin q^{1+\mathbb N}$.
 */
struct HypergeomParams {
    cplx a, b, c;
    Base q;
    bool c_on_qminusN = false;  /* c in q^{-N} */
    bool c_on_q2plusN = false;  /* c in q^{2+N} */
    bool ab_on_q1plusZ = false; /* a/b in q^{1+N} (degenerate for u4) */
    bool ab_on_qminus1minusN = false; /* a/b in q^{-1-N} (degenerate for u3) */

    HypergeomParams(cplx a_, cplx b_, cplx c_, Base q_) : a(a_), b(b_), c(c_), q(q_) {
        if (a == cplx(0.0) || b == cplx(0.0) || c == cplx(0.0))
            throw DomainError("HypergeomParams: a, b, c must be nonzero");
        if (auto e = lattice_index(c, q.q, 1e-10, 1e-10)) {
            if (*e <= 0) c_on_qminusN = true;
            if (*e >= 2) c_on_q2plusN = true;
        }
        if (auto e = lattice_index(a / b, q.q, 1e-10, 1e-10)) {
            if (*e >= 1) ab_on_q1plusZ = true;
            if (*e <= -1) ab_on_qminus1minusN = true;
        }
    }
};

/*
 * Values of a function on the q-line $z_0 q^k$: anchor, integer-indexed
 * values, and the supported index interval.
 */
struct GridFunction {
    cplx anchor;
    std::map<long, cplx> values;
    long k_min = 0, k_max = -1;

    GridFunction(cplx z0, long kmin, long kmax, Base q, const CFunc& f)
        : anchor(z0), k_min(kmin), k_max(kmax) {
        if (z0 == cplx(0.0)) throw DomainError("GridFunction: anchor must be nonzero");
        if (kmin > kmax) throw DomainError("GridFunction: empty support interval");
        for (long k = kmin; k <= kmax; ++k)
            values[k] = f(z0 * std::pow(q.q, static_cast<double>(k)));
    }
    explicit GridFunction(cplx z0) : anchor(z0) {
        if (z0 == cplx(0.0)) throw DomainError("GridFunction: anchor must be nonzero");
    }
    void set(long k, cplx v) {
        values[k] = v;
        if (k_min > k_max) k_min = k_max = k;
        else {
            k_min = std::min(k_min, k);
            k_max = std::max(k_max, k);
        }
    }
    cplx at(long k) const {
        auto it = values.find(k);
        if (it == values.end()) throw DomainError("GridFunction: index outside support");
        return it->second;
    }
    bool consistent() const {
        if (values.empty()) return k_min > k_max;
        if (k_min != values.begin()->first || k_max != values.rbegin()->first) return false;
        return values.size() == static_cast<std::size_t>(k_max - k_min + 1);
    }
};

/* $D_q f(x) = \frac{f(x) - f(qx)}{(1-q)x}$ */
inline cplx apply_Dq(const CFunc& f, cplx x, Base q) {
    if (x == cplx(0.0)) throw DomainError("apply_Dq: x must be nonzero");
    return (f(x) - f(q.q * x)) / ((1.0 - q.q) * x);
}

/* normalized variant $\tilde D_q f(x) = \frac{f(qx) - f(x)}{x}$ */
inline cplx apply_Dq_tilde(const CFunc& f, cplx x, Base q) {
    if (x == cplx(0.0)) throw DomainError("apply_Dq_tilde: x must be nonzero");
    return (f(q.q * x) - f(x)) / x;
}

inline cplx apply_L(const HypergeomParams& p, const CFunc& f, cplx z) {
    if (z == cplx(0.0)) throw DomainError("apply_L: z must be nonzero");
    const double q = p.q.q;
    const cplx fz = f(z);
    return (p.c - p.a * p.b * z) * (f(q * z) - fz) / z +
           (cplx(1.0) - z / q) * (f(z / q) - fz) / (z / q);
}

inline cplx apply_S(const HypergeomParams& p, const CFunc& f, cplx z) {
    if (z == cplx(0.0)) throw DomainError("apply_S: z must be nonzero");
    return (p.c - p.a * p.b * z) * f(z) - (cplx(1.0) - z / p.q.q) * f(z / p.q.q);
}

/*
 * Residual of the q-difference equation at z, scaled symmetrically:
 * groups the three-point form as $(c-abz)u(qz) + ((a+b)z - c - q)u(z)$
 * against $(z - q)u(z/q)$.
 */
inline double bhde_residual(const HypergeomParams& p, const CFunc& u, cplx z) {
    const double q = p.q.q;
    const cplx lhs =
        (p.c - p.a * p.b * z) * u(q * z) + ((p.a + p.b) * z - p.c - q) * u(z);
    const cplx rhs = (z - q) * u(z / q);
    return scaled_residual(lhs, rhs);
}

/*
 * Frobenius solutions:
 *   u1(z) = 2phi1(a,b;c;q,z)
 *   u2(z) = z^{1-log_q c} 2phi1(qa/c, qb/c; q^2/c; q, z)
 *   u3(z) = z^{-log_q a} 2phi1(a, qa/c; qa/b; q, qc/abz)
 *   u4(z) = u3 with a and b interchanged
 * with principal-branch powers. Regions enforced strictly:
 * |z| < 1 for u1/u2 and |qc/(abz)| < 1 for u3/u4.
 */
inline TruncatedValue solution_u(int i, const HypergeomParams& p, cplx z,
                                 ToleranceConfig tol = {}) {
    const double q = p.q.q;
    const cplx lq = std::log(q);
    if (i == 1 || i == 2) {
        if (std::abs(z) >= 1.0)
            throw RegionError("solution_u: u1/u2 require |z| < 1");
        if (i == 1) {
            if (p.c_on_qminusN) throw DegeneracyError("solution_u: u1 needs c outside q^{-N}");
            return eval_2phi1(p.a, p.b, p.c, q, z, tol);
        }
        if (p.c_on_q2plusN) throw DegeneracyError("solution_u: u2 needs c outside q^{2+N}");
        const cplx mu = cplx(1.0) - std::log(p.c) / lq;
        TruncatedValue tv =
            eval_2phi1(q * p.a / p.c, q * p.b / p.c, q * q / p.c, q, z, tol);
        const cplx pre = cpow(z, mu);
        return {pre * tv.value, std::abs(pre) * tv.tail_bound, tv.terms_used};
    }
    if (i == 3 || i == 4) {
        const cplx w = q * p.c / (p.a * p.b * z);
        if (std::abs(w) >= 1.0)
            throw RegionError("solution_u: u3/u4 require |qc/(abz)| < 1");
        const cplx aa = (i == 3) ? p.a : p.b;
        const cplx bb = (i == 3) ? p.b : p.a;
        if (i == 3 && p.ab_on_qminus1minusN)
            throw DegeneracyError("solution_u: u3 needs a/b outside q^{-1-N}");
        if (i == 4 && p.ab_on_q1plusZ)
            throw DegeneracyError("solution_u: u4 needs a/b outside q^{1+N}");
        TruncatedValue tv = eval_2phi1(aa, q * aa / p.c, q * aa / bb, q, w, tol);
        const cplx pre = cpow(z, -std::log(aa) / lq);
        return {pre * tv.value, std::abs(pre) * tv.tail_bound, tv.terms_used};
    }
    throw DomainError("solution_u: index must be 1..4");
}

/*
 * Connection coefficients of $u_1 = C_3 u_3 + C_4 u_4$:
 *   $C_3(z) = \frac{(b, c/a;q)_\infty (az, q/az;q)_\infty}
 *                  {(c, b/a;q)_\infty (z, q/z;q)_\infty} z^{\log_q a}$,
 * $C_4 = C_3$ with a, b interchanged. q-periodic in z by the theta shift
 * relation.
 */
inline cplx connection_coeff(int which, const HypergeomParams& p, cplx z,
                             ToleranceConfig tol = {}) {
    if (which != 3 && which != 4) throw DomainError("connection_coeff: which must be 3 or 4");
    const cplx aa = (which == 3) ? p.a : p.b;
    const cplx bb = (which == 3) ? p.b : p.a;
    const Base q = p.q;
    const TruncatedValue den = qpoch_multi({p.c, bb / aa, z, q.q / z}, q, tol);
    if (den.value == cplx(0.0))
        throw PoleError("connection_coeff: theta quotient denominator vanishes");
    const TruncatedValue num = qpoch_multi({bb, p.c / aa, aa * z, q.q / (aa * z)}, q, tol);
    return num.value / den.value * cpow(z, std::log(aa) / std::log(q.q));
}

/*
 * Darboux identity residual:
 * $\tilde D_q(S^{a,b,c} f)(z) = \frac1q (L^{aq,bq,cq} f)(z) + (1-q)(ab - 1/q) f(z)$.
 */
inline double check_darboux(const HypergeomParams& p, const CFunc& f, cplx z) {
    const double q = p.q.q;
    const CFunc Sf = [&](cplx x) { return apply_S(p, f, x); };
    const cplx lhs = apply_Dq_tilde(Sf, z, p.q);
    const HypergeomParams up(p.a * q, p.b * q, p.c * q, p.q);
    const cplx rhs = apply_L(up, f, z) / q + (1.0 - q) * (p.a * p.b - 1.0 / q) * f(z);
    return scaled_residual(lhs, rhs);
}

} // namespace qhyper
