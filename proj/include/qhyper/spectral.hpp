#pragma once

/*
 * Spectral analysis of the doubly infinite Jacobi operator attached to the
 * basic hypergeometric difference equation.  On $\ell^2(\mathbb{Z})$,
 *   $(L u)_k = a_k u_{k+1} + b_k u_k + a_{k-1} u_{k-1}$,
 *   $a_k = \tfrac12\sqrt{(1 - q^{-k}/r)(1 - c q^{-k}/(d^2 r))}$,
 *   $b_k = q^{-k}(c+q)/(2 d r)$,
 * with $r < 0$, $0 < c \le q^2$, $0 < |d| < 1$, $|c/d| < 1$.  Under these
 * constraints $L$ is unbounded but essentially self-adjoint; for $c > q^2$
 * the deficiency indices become (1,1) and no canonical measure exists, so
 * that range is rejected.
 *
 * Three eigenfunction families solve $L u = \mu(y)\, u$, $\mu(y) = (y+1/y)/2$:
 *   $f_k(\mu(y)) = {}_2\phi_1(dy, d/y; c; q, r q^k)$,
 *   $g_k(\mu(y)) = (q/c)^k\, {}_2\phi_1(q d y/c, q d/(c y); q^2/c; q, r q^k)$,
 *   $F_k(y)     = (d y)^{-k}\, {}_2\phi_1(dy, q d y/c; q y^2; q, c q^{1-k}/(d^2 r))$,
 * each multiplied by the weight $w_k = d^k \sqrt{(c q^{1-k}/(d^2 r); q)_\infty
 * / (q^{1-k}/r; q)_\infty\, d^{-2k}}$... see weight_sq for the two stable
 * product forms.  $w F(y)$ with $|y| < 1$ spans the solutions square summable
 * at $-\infty$; $w f$ is recessive at $+\infty$.  The connection coefficient
 *   $c(y) = \dfrac{(c/(dy), d/y, dry, q/(dry); q)_\infty}
 *                 {(y^{-2}, c, r, q/r; q)_\infty}$
 * gives $f_k = c(y) F_k(y) + c(1/y) F_k(1/y)$.
 *
 * The spectral measure of $L$ (for the cyclic vector $e_0$, and as the full
 * matrix measure against the $f_k$) has an absolutely continuous part on
 * $[-1,1]$, $x = \mu(e^{i\chi})$, of density $1/(2\pi |c(e^{i\chi})|^2)$ in
 * the $\chi$ variable, plus atoms at $x_p = \mu(y_p)$, $y_p = q^p/(dr)$,
 * $|y_p| > 1$, of mass $1/(y_p\, c(1/y_p)\, c'(y_p))$.
 * Orthogonality:
 *   $\frac{1}{2\pi}\int_0^\pi f_k f_l \frac{d\chi}{|c(e^{i\chi})|^2}
 *    + \sum_p m_p f_k(x_p) f_l(x_p) = \delta_{kl} / w_k^2$.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include <qhyper/series.hpp>

namespace qhyper {

/*
 * Parameter domain for the Jacobi operator. Construction enforces the
 * self-adjoint regime and positivity of every a_k radicand on a wide
 * index window, so later coefficient evaluations cannot hit sqrt of a
 * negative number.
 */
struct SpectralParams {
    double r;
    double c;
    double d;
    Base q;

    SpectralParams(double r_, double c_, double d_, Base q_) : r(r_), c(c_), d(d_), q(q_) {
        if (!(r < 0.0)) throw DomainError("SpectralParams: require r < 0");
        if (!(c > 0.0)) throw DomainError("SpectralParams: require c > 0");
        if (c > q.q * q.q)
            throw DomainError(
                "SpectralParams: c > q^2 gives deficiency indices (1,1); the operator is no "
                "longer essentially self-adjoint and no canonical spectral measure exists. "
                "Supported range is 0 < c <= q^2.");
        if (d == 0.0 || !(std::abs(d) < 1.0))
            throw DomainError("SpectralParams: require 0 < |d| < 1");
        if (!(std::abs(c / d) < 1.0)) throw DomainError("SpectralParams: require |c/d| < 1");
        for (long k = -200; k <= 200; ++k) {
            const double qmk = std::pow(q.q, static_cast<double>(-k));
            if (!((1.0 - qmk / r) * (1.0 - c * qmk / (d * d * r)) > 0.0))
                throw DomainError("SpectralParams: a_k^2 not positive at k = " +
                                  std::to_string(k));
        }
    }
};

/* Jacobi coefficients (a_k, b_k). a_k > 0 for valid parameters; a_k -> 1/2
 * as k -> -infinity, so L - mu acts eventually like the free operator. */
inline std::pair<double, double> coeffs(long k, const SpectralParams& p) {
    const double qmk = std::pow(p.q.q, static_cast<double>(-k));
    const double dd = p.d * p.d;
    const double a = 0.5 * std::sqrt((1.0 - qmk / p.r) * (1.0 - p.c * qmk / (dd * p.r)));
    const double b = qmk * (p.c + p.q.q) / (2.0 * p.d * p.r);
    return {a, b};
}

/* A finitely supported sequence on Z; absent keys are zero. */
struct DoublySeq {
    std::map<long, cplx> values;

    cplx at(long k) const {
        const auto it = values.find(k);
        return it == values.end() ? cplx(0.0) : it->second;
    }
    void set(long k, cplx v) { values[k] = v; }
};

/*
 * $w_k^2 = d^{2k} (c q^{1-k}/(d^2 r); q)_\infty / (q^{1-k}/r; q)_\infty$.
 * For k >= 1 both arguments leave the unit disc, so the equivalent form
 * $w_k^2 = c^k (r q^k, d^2 r/c, c q/(d^2 r); q)_\infty /
 *              ((d^2 r q^k / c, r, q/r); q)_\infty$
 * is used instead; every argument there is again inside the disc.
 */
inline double weight_sq(long k, const SpectralParams& p, ToleranceConfig tol = {}) {
    const double q = p.q.q;
    const double ddr = p.d * p.d * p.r;
    if (k <= 0) {
        const double q1mk = std::pow(q, static_cast<double>(1 - k));
        const double num = qpoch_infinite(cplx(p.c * q1mk / ddr), p.q, tol).value.real();
        const double den = qpoch_infinite(cplx(q1mk / p.r), p.q, tol).value.real();
        return std::pow(p.d * p.d, static_cast<double>(k)) * num / den;
    }
    const double qk = std::pow(q, static_cast<double>(k));
    const double num =
        qpoch_multi({cplx(p.r * qk), cplx(ddr / p.c), cplx(p.c * q / ddr)}, p.q, tol)
            .value.real();
    const double den =
        qpoch_multi({cplx(ddr * qk / p.c), cplx(p.r), cplx(q / p.r)}, p.q, tol).value.real();
    return std::pow(p.c, static_cast<double>(k)) * num / den;
}

/* w_k itself, with the sign convention w_k = d^k * (positive root). */
inline double weight(long k, const SpectralParams& p, ToleranceConfig tol = {}) {
    const double root = std::sqrt(weight_sq(k, p, tol));
    return (p.d < 0.0 && (k % 2 != 0)) ? -root : root;
}

enum class SolutionFamily { f, g, F };

namespace detail {

/* f_k(mu(y)): direct series when |r q^k| < 1, otherwise analytic
 * continuation in the argument. */
inline TruncatedValue spectral_f(long k, cplx y, const SpectralParams& p, ToleranceConfig tol) {
    const cplx a = p.d * y, b = p.d / y;
    const cplx z = p.r * std::pow(p.q.q, static_cast<double>(k));
    if (std::abs(z) < 1.0) return eval_2phi1(a, b, cplx(p.c), p.q.q, z, tol);
    return continue_2phi1(a, b, cplx(p.c), p.q, z, tol);
}

inline TruncatedValue spectral_g(long k, cplx y, const SpectralParams& p, ToleranceConfig tol) {
    const double q = p.q.q;
    if (const auto m = lattice_index(cplx(p.c), q); m && *m >= 2)
        throw DegeneracyError("solution: family g degenerates for c = q^m, m >= 2");
    const cplx a = q * p.d * y / p.c, b = q * p.d / (p.c * y);
    const cplx cc = q * q / p.c;
    const cplx z = p.r * std::pow(q, static_cast<double>(k));
    const cplx pre = detail::ipow(cplx(q / p.c), k);
    const TruncatedValue tv = std::abs(z) < 1.0 ? eval_2phi1(a, b, cc, q, z, tol)
                                                : continue_2phi1(a, b, cc, p.q, z, tol);
    return {pre * tv.value, std::abs(pre) * tv.tail_bound, tv.terms_used};
}

/* F_k(y): direct series when |c q^{1-k} / (d^2 r)| < 1 (large negative k),
 * otherwise continuation in the argument. For moderate k >= 1 and small |y|
 * both expansions can diverge; F dominates every other solution towards
 * +infinity there, so climbing with the weighted recurrence from the direct
 * region is stable and closes the gap. The prefactor (dy)^{-k} is an exact
 * integer power. */
inline TruncatedValue spectral_F(long k, cplx y, const SpectralParams& p, ToleranceConfig tol) {
    const double q = p.q.q;
    if (const auto m = lattice_index(y * y, q); m && *m <= 0)
        throw DegeneracyError("solution: family F degenerates for y^2 = q^{-m}, m >= 0");
    const cplx a = p.d * y, b = q * p.d * y / p.c;
    const cplx cc = q * y * y;
    const double C = p.c / (p.d * p.d * p.r);
    const cplx z = C * std::pow(q, static_cast<double>(1 - k));
    const cplx pre = detail::ipow(p.d * y, -k);
    if (std::abs(z) < 1.0) {
        const TruncatedValue tv = eval_2phi1(a, b, cc, q, z, tol);
        return {pre * tv.value, std::abs(pre) * tv.tail_bound, tv.terms_used};
    }
    if (std::abs(p.c * p.r * std::pow(q, static_cast<double>(k - 1)) / (y * y)) < 1.0) {
        try {
            const TruncatedValue tv = continue_2phi1(a, b, cc, p.q, z, tol);
            return {pre * tv.value, std::abs(pre) * tv.tail_bound, tv.terms_used};
        } catch (const DegeneracyError&) {
            /* continuation formula degenerates (e.g. c on the q-lattice);
               the recurrence below does not */
        }
    }
    long k0 = k;
    while (std::abs(C) * std::pow(q, static_cast<double>(1 - k0)) >= 1.0) {
        --k0;
        if (k - k0 > 1000)
            throw NonConvergenceError("solution: no convergent seed for the F recurrence");
    }
    const TruncatedValue seed_m = spectral_F(k0 - 1, y, p, tol);
    const TruncatedValue seed_0 = spectral_F(k0, y, p, tol);
    const cplx mu = 0.5 * (y + 1.0 / y);
    const double wm = weight(k0 - 1, p, tol), w0 = weight(k0, p, tol);
    cplx um = wm * seed_m.value, u0 = w0 * seed_0.value;
    double tm = std::abs(wm) * seed_m.tail_bound, t0 = std::abs(w0) * seed_0.tail_bound;
    std::size_t terms = seed_m.terms_used + seed_0.terms_used;
    for (long j = k0; j < k; ++j) {
        const auto [aj, bj] = coeffs(j, p);
        const double ajm = coeffs(j - 1, p).first;
        const cplx un = ((mu - bj) * u0 - ajm * um) / aj;
        const double tn = (std::abs(mu - bj) * t0 + ajm * tm) / aj;
        um = u0;
        u0 = un;
        tm = t0;
        t0 = tn;
        ++terms;
    }
    const double wk = weight(k, p, tol);
    return {u0 / wk, t0 / std::abs(wk), terms};
}

} // namespace detail

/*
 * Weighted eigenfunction u_k = w_k * (family value). All three families
 * satisfy mu(y) u_k = a_k u_{k+1} + b_k u_k + a_{k-1} u_{k-1}. Whichever of
 * the direct series or the continuation applies is chosen per index; when
 * neither converges a RegionError propagates from the series layer.
 */
inline TruncatedValue solution(SolutionFamily which, long k, cplx y, const SpectralParams& p,
                               ToleranceConfig tol = {}) {
    if (y == cplx(0.0)) throw DomainError("solution: y must be nonzero");
    TruncatedValue tv;
    switch (which) {
        case SolutionFamily::f: tv = detail::spectral_f(k, y, p, tol); break;
        case SolutionFamily::g: tv = detail::spectral_g(k, y, p, tol); break;
        default: tv = detail::spectral_F(k, y, p, tol); break;
    }
    const double w = weight(k, p, tol);
    return {w * tv.value, std::abs(w) * tv.tail_bound, tv.terms_used};
}

/*
 * Connection coefficient c(y). Its zeros are the zeros of the numerator
 * factors, chiefly the lattice y = q^Z/(dr) carrying the discrete spectrum;
 * poles sit only at y^2 in q^Z, which is rejected here.
 */
inline cplx cfun(cplx y, const SpectralParams& p, ToleranceConfig tol = {}) {
    if (y == cplx(0.0)) throw DomainError("cfun: y must be nonzero");
    if (lattice_index(y * y, p.q.q))
        throw DomainError("cfun: y^2 on the q^Z lattice is a pole of c(y)");
    const double q = p.q.q;
    const cplx dr = p.d * p.r;
    const cplx num =
        qpoch_multi({p.c / (p.d * y), p.d / y, dr * y, q / (dr * y)}, p.q, tol).value;
    const cplx den =
        qpoch_multi({cplx(1.0) / (y * y), cplx(p.c), cplx(p.r), cplx(q / p.r)}, p.q, tol).value;
    return num / den;
}

/*
 * Discrete Wronskian [u, v]_k = a_k (u_{k+1} v_k - u_k v_{k+1}); constant in
 * k when u, v solve the same eigenvalue equation.
 */
inline cplx wronskian(const std::function<cplx(long)>& u, const std::function<cplx(long)>& v,
                      long k, const SpectralParams& p) {
    return coeffs(k, p).first * (u(k + 1) * v(k) - u(k) * v(k + 1));
}

inline cplx wronskian(const DoublySeq& u, const DoublySeq& v, long k, const SpectralParams& p) {
    return coeffs(k, p).first * (u.at(k + 1) * v.at(k) - u.at(k) * v.at(k + 1));
}

/*
 * Green kernel G_z(k, l) = u^-_{min} u^+_{max} / [u^+, u^-] for Im z != 0,
 * built from the solution recessive at -infinity (w F(y), |y| < 1) and the
 * one recessive at +infinity (w f). The Wronskian is evaluated once at
 * k = 0; its vanishing would mean z is an eigenvalue, impossible off the
 * real axis, so a tiny value signals parameter degeneracy instead.
 */
inline cplx green_kernel(cplx z, long k, long l, const SpectralParams& p,
                         ToleranceConfig tol = {}) {
    if (z.imag() == 0.0)
        throw DomainError("green_kernel: resolvent defined for Im z != 0 only");
    const cplx s = std::sqrt(z * z - cplx(1.0));
    /* root of y^2 - 2zy + 1 inside the unit disc */
    cplx y = z - s;
    if (std::abs(z + s) < std::abs(y)) y = z + s;
    const cplx f0 = solution(SolutionFamily::f, 0, y, p, tol).value;
    const cplx f1 = solution(SolutionFamily::f, 1, y, p, tol).value;
    const cplx F0 = solution(SolutionFamily::F, 0, y, p, tol).value;
    const cplx F1 = solution(SolutionFamily::F, 1, y, p, tol).value;
    const cplx W = coeffs(0, p).first * (f1 * F0 - f0 * F1);
    if (std::abs(W) <= 1e-12 * (std::abs(f1 * F0) + std::abs(f0 * F1)))
        throw DegeneracyError("green_kernel: solution pair is numerically dependent");
    const long lo = std::min(k, l), hi = std::max(k, l);
    const cplx ulo = solution(SolutionFamily::F, lo, y, p, tol).value;
    const cplx uhi = solution(SolutionFamily::f, hi, y, p, tol).value;
    return ulo * uhi / W;
}

/*
 * The measure: continuous density reported in the angle variable chi,
 * x = cos(chi) = mu(e^{i chi}), plus the finite list of atoms (x_p, mass),
 * ascending in x.
 */
struct SpectralMeasure {
    std::function<double(double)> continuous_density;
    std::vector<std::pair<double, double>> atoms;
};

namespace detail {

struct AtomData {
    double x;
    double mass;
    double e0_weight;
};

/*
 * Residue data at y_p = q^p / (dr). The mass is
 *   m_p = 1 / (y_p c(1/y_p) c'(y_p)),
 * where c'(y_p) keeps only the term of the product rule hitting the
 * vanishing factor of (dry; q)_inf (p <= 0) or (q/(dry); q)_inf (p >= 1);
 * qpoch_infinite_skip divides that factor out exactly.
 *
 * e0_weight is the truncation functional |c(1/y_p) / (y_p c'(y_p))|: up to
 * the bounded factor F_0(1/y_p)^2 it is the projection
 * <E({x_p}) e_0, e_0> = m_p (w_0 f_0(x_p))^2. The masses themselves grow
 * like y_p^2 down the lattice, so truncating on the raw mass never
 * terminates; the projections decay superexponentially and do.
 */
inline AtomData atom_at(long pp, const SpectralParams& p, ToleranceConfig tol) {
    const double q = p.q.q;
    const double dr = p.d * p.r;
    const double qp = std::pow(q, static_cast<double>(pp));
    const double yp = qp / dr;
    const auto neg_hit = [&](double v) {
        const auto m = lattice_index(cplx(v), q);
        return m && *m <= 0;
    };
    /* Simple-zero requirement: y_p must not be a zero of another numerator
     * family, 1/y_p must not be a zero of any, and y_p^2 must avoid the
     * pole lattice. */
    const bool degen = lattice_index(cplx(yp * yp), q).has_value() ||
                       neg_hit(p.c / (p.d * yp)) || neg_hit(p.d / yp) ||
                       lattice_index(cplx(dr / yp), q).has_value() ||
                       neg_hit(p.c * yp / p.d) || neg_hit(p.d * yp);
    if (degen)
        throw DegeneracyError("spectral_measure: c(y) has a non-simple zero configuration at "
                              "y = q^" + std::to_string(pp) +
                              "/(dr); perturb the parameters to separate the zero families");
    TruncatedValue skipped, plain;
    double sgn;
    if (pp <= 0) {
        /* vanishing factor sits in (dry; q)_inf at index -p */
        skipped = qpoch_infinite_skip(cplx(qp), p.q, static_cast<std::size_t>(-pp), tol);
        plain = qpoch_infinite(cplx(std::pow(q, static_cast<double>(1 - pp))), p.q, tol);
        sgn = -1.0;
    } else {
        /* vanishing factor sits in (q/(dry); q)_inf at index p-1 */
        skipped = qpoch_infinite_skip(cplx(std::pow(q, static_cast<double>(1 - pp))), p.q,
                                      static_cast<std::size_t>(pp - 1), tol);
        plain = qpoch_infinite(cplx(qp), p.q, tol);
        sgn = 1.0;
    }
    const double nreg =
        qpoch_multi({cplx(p.c / (p.d * yp)), cplx(p.d / yp)}, p.q, tol).value.real();
    const double dden =
        qpoch_multi({cplx(1.0 / (yp * yp)), cplx(p.c), cplx(p.r), cplx(q / p.r)}, p.q, tol)
            .value.real();
    const double cprime =
        (sgn / yp) * (skipped.value.real() * plain.value.real() * nreg / dden);
    const double cinv = cfun(cplx(1.0 / yp), p, tol).real();
    const double mass = 1.0 / (yp * cinv * cprime);
    const double e0w = std::abs(cinv / (yp * cprime));
    return {0.5 * (yp + 1.0 / yp), mass, e0w};
}

} // namespace detail

/*
 * Assemble the measure. Atoms live on the geometric lattice y_p = q^p/(dr)
 * restricted to |y_p| > 1; enumeration starts at moderate |y_p| and walks
 * both ways, keeping atoms until the e0 projection drops below 1e-16 of the
 * largest one seen.
 */
inline SpectralMeasure spectral_measure(const SpectralParams& p, ToleranceConfig tol = {}) {
    SpectralMeasure m;
    const SpectralParams pc = p;
    const ToleranceConfig tc = tol;
    m.continuous_density = [pc, tc](double chi) {
        const cplx cv = cfun(std::polar(1.0, chi), pc, tc);
        return 1.0 / (2.0 * std::numbers::pi * std::norm(cv));
    };
    const double q = p.q.q;
    const double adr = std::abs(p.d * p.r);
    long pmax = static_cast<long>(std::floor(std::log(adr) / std::log(q)));
    while (std::pow(q, static_cast<double>(pmax)) / adr <= 1.0 + 1e-10) --pmax;
    while (std::pow(q, static_cast<double>(pmax + 1)) / adr > 1.0 + 1e-10) ++pmax;
    const long pstart = std::min(
        std::lround(std::log(adr * std::numbers::e) / std::log(q)), pmax);
    std::map<long, detail::AtomData> found;
    double largest = 0.0;
    const auto visit = [&](long pp) {
        const detail::AtomData a = detail::atom_at(pp, p, tol);
        if (!std::isfinite(a.mass) || !std::isfinite(a.e0_weight) || !(a.mass > 0.0))
            throw DegeneracyError("spectral_measure: nonpositive or non-finite atom mass at "
                                  "p = " + std::to_string(pp) + "; perturb the parameters");
        largest = std::max(largest, a.e0_weight);
        found.emplace(pp, a);
        return a.e0_weight >= 1e-16 * largest;
    };
    for (long pp = pstart; pp <= pmax; ++pp)
        if (!visit(pp)) break;
    for (long pp = pstart - 1;; --pp) {
        if (pp < pstart - 400)
            throw NonConvergenceError("spectral_measure: atom enumeration did not truncate");
        if (!visit(pp)) break;
    }
    for (const auto& kv : found)
        if (kv.second.e0_weight >= 1e-16 * largest) m.atoms.emplace_back(kv.second.x, kv.second.mass);
    std::sort(m.atoms.begin(), m.atoms.end());
    return m;
}

/*
 * Orthogonality defect
 *   | (1/2pi) int_0^pi f_k f_l |c|^{-2} dchi + sum_p m_p f_k(x_p) f_l(x_p)
 *     - delta_{kl} / w_k^2 |.
 * The integrand extends to an even 2pi-periodic analytic function (the
 * density has double zeros at chi = 0, pi), so the trapezoid rule converges
 * spectrally; panels are doubled, reusing previous nodes, until the dyadic
 * difference is below 1e-8 relative.
 */
inline double check_orthogonality(long k, long l, const SpectralParams& p,
                                  ToleranceConfig tol = {}) {
    const SpectralMeasure m = spectral_measure(p, tol);
    double atom_sum = 0.0;
    for (const auto& [x, mass] : m.atoms) {
        const double y = x + std::copysign(std::sqrt(x * x - 1.0), x);
        const double fk = detail::spectral_f(k, cplx(y), p, tol).value.real();
        const double fl =
            l == k ? fk : detail::spectral_f(l, cplx(y), p, tol).value.real();
        atom_sum += mass * fk * fl;
    }
    const auto integrand = [&](double chi) {
        const cplx y = std::polar(1.0, chi);
        const double fk = detail::spectral_f(k, y, p, tol).value.real();
        const double fl = l == k ? fk : detail::spectral_f(l, y, p, tol).value.real();
        return fk * fl * m.continuous_density(chi);
    };
    const double lo = 1e-8, hi = std::numbers::pi - 1e-8;
    std::size_t n = 64;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        vals[i] = integrand(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    const auto trap = [&](const std::vector<double>& v) {
        double s = 0.5 * (v.front() + v.back());
        for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
        return s * (hi - lo) / static_cast<double>(v.size() - 1);
    };
    double integral = trap(vals);
    bool converged = false;
    for (int level = 0; level < 12 && !converged; ++level) {
        std::vector<double> fine(2 * n + 1);
        for (std::size_t i = 0; i <= 2 * n; ++i)
            fine[i] = (i % 2 == 0)
                          ? vals[i / 2]
                          : integrand(lo + (hi - lo) * static_cast<double>(i) /
                                               static_cast<double>(2 * n));
        const double refined = trap(fine);
        converged = std::abs(refined - integral) < 1e-8 * std::abs(refined) + 1e-14;
        integral = refined;
        vals = std::move(fine);
        n *= 2;
    }
    if (!converged)
        throw NonConvergenceError("check_orthogonality: quadrature did not converge");
    const double target = k == l ? 1.0 / weight_sq(k, p, tol) : 0.0;
    return std::abs(integral + atom_sum - target);
}

} // namespace qhyper
