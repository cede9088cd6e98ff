#pragma once

/*
 * Basic hypergeometric series: evaluation of $_r\varphi_s$ and of
 * very-well-poised $_{r+1}W_r$ series, structural transformations
 * (base inversion, reversal of terminating sums), the q-integral,
 * analytic continuation of $_2\varphi_1$, and a catalog of named
 * identity checks.
 *
 * The series convention carries the factor
 * $[(-1)^n q^{n(n-1)/2}]^{1+s-r}$, so that removing an upper parameter
 * by $z \mapsto z/a_r$, $a_r \to \infty$ stays inside the family.
 */

#include <qhyper/qcore.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <vector>

namespace qhyper {

/*
 * One series parameter. TerminatingPower(n) means exactly $q^{-n}$ and is
 * carried structurally: termination is never inferred from a float
 * comparison against the $q^{-n}$ lattice.
 */
struct ParamSpec {
    enum class Kind { Generic, TerminatingPower };
    Kind kind = Kind::Generic;
    cplx value{};
    long n = 0;

    ParamSpec(cplx v) : kind(Kind::Generic), value(v) {}
    ParamSpec(double v) : kind(Kind::Generic), value(v) {}
    static ParamSpec terminating(long n_) {
        if (n_ < 0) throw DomainError("TerminatingPower requires n >= 0");
        ParamSpec p(cplx(0.0));
        p.kind = Kind::TerminatingPower;
        p.n = n_;
        return p;
    }
    bool is_terminating() const { return kind == Kind::TerminatingPower; }
    /* numeric value of the parameter in the spec's base */
    cplx resolve(double q) const {
        return is_terminating() ? cplx(std::pow(q, static_cast<double>(-n))) : value;
    }
};

enum class ConvKind { Terminating, AbsolutelyConvergent, Divergent };
struct ConvergenceClass {
    ConvKind kind;
    long degree = -1;
};

/*
 * An $_r\varphi_s(a_1,\ldots,a_r; b_1,\ldots,b_s; q, z)$ instance.
 * base in (0,1) uses the full convention with the sign/q-power factor;
 * base > 1 only arises through invert_base and denotes the bare power
 * sum of the base-inversion identity (no extra factor).
 */
struct SeriesSpec {
    std::vector<ParamSpec> numerators;
    std::vector<ParamSpec> denominators;
    double base = 0.5;
    cplx z{};

    void validate() const {
        if (!(base > 0.0) || base == 1.0)
            throw DomainError("series base must be positive and != 1");
        for (const ParamSpec& d : denominators) {
            if (d.is_terminating())
                throw DomainError("denominator parameter on the q^{-N} lattice");
            /* b = q^{-m}, m >= 0 makes (b;q)_n vanish eventually */
            if (auto e = lattice_index(d.value, base, 1e-12, 1e-12); e && *e <= 0)
                throw DomainError("denominator parameter within 1e-12 of the q^{-N} lattice");
        }
    }
};

inline SeriesSpec make_series(std::vector<ParamSpec> num, std::vector<ParamSpec> den, double q,
                              cplx z) {
    SeriesSpec s;
    s.numerators = std::move(num);
    s.denominators = std::move(den);
    s.base = q;
    s.z = z;
    s.validate();
    return s;
}

inline SeriesSpec invert_base(const SeriesSpec& spec);

/*
 * Convergence of $_r\varphi_s$: terminating if an upper parameter is
 * $q^{-n}$; otherwise absolutely convergent for all z when r <= s and for
 * |z| < 1 when r = s+1; divergent for z != 0 when r > s+1.
 */
inline ConvergenceClass classify(const SeriesSpec& spec) {
    long degree = -1;
    for (const ParamSpec& p : spec.numerators)
        if (p.is_terminating()) degree = (degree < 0) ? p.n : std::min(degree, p.n);
    if (degree >= 0) return {ConvKind::Terminating, degree};
    if (spec.base > 1.0) return classify(invert_base(spec)); /* involution back to base < 1 */
    const std::size_t r = spec.numerators.size(), s = spec.denominators.size();
    if (spec.z == cplx(0.0)) return {ConvKind::AbsolutelyConvergent, -1};
    if (r <= s) return {ConvKind::AbsolutelyConvergent, -1};
    if (r == s + 1 && std::abs(spec.z) < 1.0) return {ConvKind::AbsolutelyConvergent, -1};
    return {ConvKind::Divergent, -1};
}

/*
 * Term-recurrence evaluation. Terminating series sum exactly degree+1
 * terms with tail 0 (the factor $1 - q^{n-n_t}$ is formed from the integer
 * exponent, hence exactly zero at the cutoff). Convergent series stop when
 * $|t_n| < $ abs_tol$(1-\hat\rho)$ with $\hat\rho$ the empirical ratio over
 * the last 5 terms clamped to [base, 0.999]; the certified tail is
 * $|t_n|\hat\rho/(1-\hat\rho)$.
 */
inline TruncatedValue eval_rphis(const SeriesSpec& spec, ToleranceConfig tol = {}) {
    spec.validate();
    const ConvergenceClass cls = classify(spec);
    if (cls.kind == ConvKind::Divergent) {
        const std::size_t r = spec.numerators.size(), s = spec.denominators.size();
        throw RegionError(
            r == s + 1 ? "series with r = s+1 requires |z| < 1"
                       : "series with r > s+1 diverges for z != 0 without a terminating parameter");
    }
    const double q = spec.base;
    /* base > 1 arises only from invert_base whose sum carries no extra factor */
    const int pexp =
        (q > 1.0) ? 0
                  : 1 + static_cast<int>(spec.denominators.size()) -
                        static_cast<int>(spec.numerators.size());
    const long degree = cls.degree;

    cplx sum = 1.0, t = 1.0;
    double qn = 1.0; /* q^n */
    const double rho_lo = std::min(q, 1.0 / q);
    std::array<double, 6> hist{};
    hist[0] = 1.0;

    for (long n = 0;; ++n) {
        if (degree >= 0 && n == degree) return {sum, 0.0, static_cast<std::size_t>(degree + 1)};
        if (static_cast<std::size_t>(n) >= tol.max_terms)
            throw NonConvergenceError("eval_rphis: max_terms reached before the stopping rule");

        cplx ratio = spec.z;
        for (const ParamSpec& p : spec.numerators)
            ratio *= p.is_terminating()
                         ? (cplx(1.0) - std::pow(q, static_cast<double>(n - p.n)))
                         : (cplx(1.0) - p.value * qn);
        const cplx dq = cplx(1.0) - q * qn;
        ratio /= dq;
        for (const ParamSpec& p : spec.denominators) {
            const cplx f = cplx(1.0) - p.value * qn;
            if (f == cplx(0.0))
                throw PoleError("eval_rphis: denominator factor vanishes at term index " +
                                std::to_string(n + 1));
            ratio /= f;
        }
        if (pexp != 0) {
            cplx step = (pexp % 2 == 0) ? cplx(1.0) : cplx(-1.0);
            step *= std::pow(qn, pexp);
            ratio *= step;
        }
        t *= ratio;
        qn *= q;
        if (!std::isfinite(std::abs(t)))
            throw NonConvergenceError("eval_rphis: terms grow without bound");
        sum += t;

        const double at = std::abs(t);
        hist[static_cast<std::size_t>((n + 1) % 6)] = at;
        if (at == 0.0) return {sum, 0.0, static_cast<std::size_t>(n + 2)};
        if (n + 1 >= 6) {
            const double a5 = hist[static_cast<std::size_t>((n + 1 - 5) % 6)];
            if (a5 > 0.0) {
                double rho = std::pow(at / a5, 0.2);
                rho = std::clamp(rho, rho_lo, 0.999);
                if (at < tol.abs_tol * (1.0 - rho))
                    return {sum, at * rho / (1.0 - rho), static_cast<std::size_t>(n + 2)};
            }
        }
    }
}

inline TruncatedValue eval_2phi1(cplx a, cplx b, cplx c, double q, cplx z,
                                 ToleranceConfig tol = {}) {
    return eval_rphis(make_series({a, b}, {c}, q, z), tol);
}

/*
 * Very-well-poised series
 * $\sum_k \frac{1-a_1q^{2k}}{1-a_1}
 *         \frac{(a_1,a_4,\ldots,a_{r+1};q)_k}
 *              {(q, qa_1/a_4, \ldots, qa_1/a_{r+1};q)_k} z^k$.
 * Terminating entries of `rest` are structural, as in eval_rphis.
 */
inline TruncatedValue eval_vwp(cplx a1, const std::vector<ParamSpec>& rest, Base q, cplx z,
                               ToleranceConfig tol = {}) {
    if (a1 == cplx(1.0)) throw DomainError("eval_vwp: a1 = 1 is singular");
    const double qq = q.q;
    bool terminating = false;
    for (const ParamSpec& p : rest)
        if (p.is_terminating()) terminating = true;
    if (!terminating && std::abs(z) >= 1.0)
        throw RegionError("eval_vwp: non-terminating very-well-poised series requires |z| < 1");

    /* s_k carries everything except the (1-a1 q^{2k})/(1-a1) factor */
    cplx sum = 1.0, s = 1.0;
    double qk = 1.0; /* q^k */
    const double rho_lo = std::min(qq, 1.0 / qq);
    std::array<double, 6> hist{};
    hist[0] = 1.0;
    for (long k = 0;; ++k) {
        if (static_cast<std::size_t>(k) >= tol.max_terms)
            throw NonConvergenceError("eval_vwp: max_terms reached");
        cplx ratio = z * (cplx(1.0) - a1 * qk);
        ratio /= (cplx(1.0) - qq * qk);
        for (const ParamSpec& p : rest) {
            if (p.is_terminating())
                ratio *= (cplx(1.0) - std::pow(qq, static_cast<double>(k - p.n)));
            else {
                ratio *= (cplx(1.0) - p.value * qk);
                const cplx den = cplx(1.0) - (qq * a1 / p.value) * qk;
                if (den == cplx(0.0))
                    throw PoleError("eval_vwp: denominator factor vanishes at term index " +
                                    std::to_string(k + 1));
                ratio /= den;
            }
        }
        s *= ratio;
        qk *= qq;
        const cplx t = s * (cplx(1.0) - a1 * qk * qk) / (cplx(1.0) - a1);
        sum += t;

        const double at = std::abs(t);
        hist[static_cast<std::size_t>((k + 1) % 6)] = at;
        if (std::abs(s) == 0.0) return {sum, 0.0, static_cast<std::size_t>(k + 2)};
        if (k + 1 >= 6) {
            const double a5 = hist[static_cast<std::size_t>((k + 1 - 5) % 6)];
            if (a5 > 0.0) {
                double rho = std::clamp(std::pow(at / a5, 0.2), rho_lo, 0.999);
                if (at < tol.abs_tol * (1.0 - rho))
                    return {sum, at * rho / (1.0 - rho), static_cast<std::size_t>(k + 2)};
            }
        }
    }
}

/*
 * Base inversion: $_r\varphi_s(\vec a;\vec b;q,z)$ equals the bare sum
 * $\sum_n \frac{(a_1^{-1},\ldots;q^{-1})_n}{(q^{-1},b_1^{-1},\ldots;q^{-1})_n}
 *  \left(\frac{a_1\cdots a_r z}{b_1\cdots b_s q}\right)^n$,
 * represented here as a SeriesSpec with base 1/q. Involutive.
 */
inline SeriesSpec invert_base(const SeriesSpec& spec) {
    SeriesSpec out;
    out.base = 1.0 / spec.base;
    cplx prod_num = 1.0, prod_den = 1.0;
    for (const ParamSpec& p : spec.numerators) {
        if (p.is_terminating())
            throw DomainError("invert_base: terminating parameters are not invertible");
        if (p.value == cplx(0.0)) throw DomainError("invert_base: zero parameter");
        prod_num *= p.value;
        out.numerators.push_back(ParamSpec(cplx(1.0) / p.value));
    }
    for (const ParamSpec& p : spec.denominators) {
        if (p.is_terminating())
            throw DomainError("invert_base: terminating parameters are not invertible");
        if (p.value == cplx(0.0)) throw DomainError("invert_base: zero parameter");
        prod_den *= p.value;
        out.denominators.push_back(ParamSpec(cplx(1.0) / p.value));
    }
    out.z = prod_num * spec.z / (prod_den * spec.base);
    out.validate();
    return out;
}

/*
 * Reversal of a terminating series:
 * $_{r+1}\varphi_s(\vec a, q^{-n}; \vec b; q, z) =
 *   \frac{(\vec a;q)_n}{(\vec b;q)_n}(z/q)^n ((-1)^n q^{n(n-1)/2})^{s-r-1}
 *   \sum_{k=0}^n \frac{(q^{1-n}/b_1,\ldots,q^{1-n}/b_s, q^{-n};q)_k}
 *                     {(q, q^{1-n}/a_1,\ldots,q^{1-n}/a_r;q)_k}
 *   \left(\frac{b_1\cdots b_s}{a_1\cdots a_r}\frac{q^{n+1}}{z}\right)^k$.
 * The reversed sum is bare; zero parameters are appended so that the
 * standard sign/q-power convention of the returned spec reduces to it.
 */
struct ReversedSeries {
    SeriesSpec spec;
    cplx prefactor;
};

inline ReversedSeries reverse_terminating(const SeriesSpec& spec) {
    spec.validate();
    long n = -1;
    std::vector<cplx> as;
    for (const ParamSpec& p : spec.numerators) {
        if (p.is_terminating()) {
            if (n >= 0)
                throw DomainError("reverse_terminating: exactly one terminating numerator required");
            n = p.n;
        } else {
            if (p.value == cplx(0.0)) throw DomainError("reverse_terminating: zero parameter");
            as.push_back(p.value);
        }
    }
    if (n < 0) throw DomainError("reverse_terminating: no terminating numerator");
    if (spec.z == cplx(0.0)) throw DomainError("reverse_terminating: z must be nonzero");
    const double q = spec.base;
    Base qb(q);
    const long r = static_cast<long>(as.size());
    const long s = static_cast<long>(spec.denominators.size());

    SeriesSpec rev;
    rev.base = q;
    cplx prod_a = 1.0, prod_b = 1.0;
    const cplx q1n = std::pow(q, static_cast<double>(1 - n));
    for (const ParamSpec& p : spec.denominators) {
        rev.numerators.push_back(ParamSpec(q1n / p.value));
        prod_b *= p.value;
    }
    rev.numerators.push_back(ParamSpec::terminating(n));
    for (const cplx& a : as) {
        rev.denominators.push_back(ParamSpec(q1n / a));
        prod_a *= a;
    }
    /* pad with zero parameters: the bare reversed sum has no sign factor */
    for (long i = 0; i < r - s; ++i) rev.numerators.push_back(ParamSpec(cplx(0.0)));
    for (long i = 0; i < s - r; ++i) rev.denominators.push_back(ParamSpec(cplx(0.0)));
    rev.z = (prod_b / prod_a) * std::pow(q, static_cast<double>(n + 1)) / spec.z;
    rev.validate();

    cplx pref = 1.0;
    for (const cplx& a : as) pref *= qpoch_finite(a, qb, n);
    for (const ParamSpec& p : spec.denominators) pref /= qpoch_finite(p.value, qb, n);
    pref *= std::pow(spec.z / q, static_cast<double>(n));
    const int e = static_cast<int>(s - r - 1);
    if (e != 0) {
        cplx ph = ((n % 2 != 0) && (e % 2 != 0)) ? cplx(-1.0) : cplx(1.0);
        ph *= std::pow(q, 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) *
                              static_cast<double>(e));
        pref *= ph;
    }
    return {rev, pref};
}

/*
 * $\int_0^a f(t)\,d_q t = (1-q)a \sum_{k\ge 0} q^k f(aq^k)$ with the same
 * empirical-ratio stopping rule as the series evaluator.
 */
inline TruncatedValue qintegral(const std::function<cplx(double)>& f, double a, Base q,
                                ToleranceConfig tol = {}) {
    if (!(a > 0.0)) throw DomainError("qintegral: upper limit must be positive");
    const double qq = q.q;
    cplx sum = 0.0;
    double qk = 1.0;
    std::array<double, 6> hist{};
    for (std::size_t k = 0;; ++k) {
        if (k >= tol.max_terms)
            throw NonConvergenceError("qintegral: summand did not decay within max_terms");
        const cplx w = qk * f(a * qk);
        sum += w;
        qk *= qq;
        const double aw = std::abs(w);
        hist[k % 6] = aw;
        if (k >= 5) {
            if (aw == 0.0) return {(1.0 - qq) * a * sum, 0.0, k + 1};
            const double a5 = hist[(k - 5) % 6];
            if (a5 > 0.0) {
                double rho = std::clamp(std::pow(aw / a5, 0.2), qq, 0.999);
                if (aw < tol.abs_tol * (1.0 - rho))
                    return {(1.0 - qq) * a * sum, (1.0 - qq) * a * aw * rho / (1.0 - rho), k + 1};
            }
        }
    }
}

namespace detail {
/* first-order tail propagation through a product quotient times a series */
inline TruncatedValue combine_product(const std::vector<TruncatedValue>& nums,
                                      const std::vector<TruncatedValue>& dens,
                                      const TruncatedValue& series) {
    cplx value = series.value;
    double rel = 0.0;
    std::size_t terms = series.terms_used;
    for (const TruncatedValue& tv : nums) {
        value *= tv.value;
        rel += tv.tail_bound / std::max(std::abs(tv.value), 1e-300);
        terms += tv.terms_used;
    }
    for (const TruncatedValue& tv : dens) {
        value /= tv.value;
        rel += tv.tail_bound / std::max(std::abs(tv.value), 1e-300);
        terms += tv.terms_used;
    }
    rel += series.tail_bound / std::max(std::abs(series.value), 1e-300);
    return {value, std::abs(value) * rel, terms};
}
} // namespace detail

/*
 * Analytic continuation of $_2\varphi_1(a,b;c;q,z)$ to $|\arg(-z)| < \pi$:
 *   $\frac{(b,c/a;q)_\infty (az,q/az;q)_\infty}
 *         {(c,b/a;q)_\infty (z,q/z;q)_\infty}
 *    \,_2\varphi_1(a, aq/c; aq/b; q, cq/abz)$ + (a <-> b).
 * Requires c, a/b off the $q^{\mathbb Z}$ lattice and |cq/abz| < 1.
 */
inline TruncatedValue continue_2phi1(cplx a, cplx b, cplx c, Base q, cplx z,
                                     ToleranceConfig tol = {}) {
    if (a == cplx(0.0) || b == cplx(0.0) || z == cplx(0.0))
        throw DomainError("continue_2phi1: a, b, z must be nonzero");
    if (z.imag() == 0.0 && z.real() > 0.0)
        throw RegionError("continue_2phi1: z on the positive real axis (|arg(-z)| = pi)");
    if (lattice_index(c, q.q, 1e-10, 1e-10))
        throw DegeneracyError("continue_2phi1: c within 1e-10 of the q^Z lattice");
    if (lattice_index(a / b, q.q, 1e-10, 1e-10))
        throw DegeneracyError("continue_2phi1: a/b within 1e-10 of the q^Z lattice");
    const cplx w = c * q.q / (a * b * z);
    if (std::abs(w) >= 1.0)
        throw RegionError("continue_2phi1: |cq/(abz)| >= 1, continuation series diverges");

    const auto term = [&](cplx u, cplx v) { /* u plays a, v plays b */
        const std::vector<TruncatedValue> nums = {
            qpoch_infinite(v, q, tol), qpoch_infinite(c / u, q, tol),
            qpoch_infinite(u * z, q, tol), qpoch_infinite(q.q / (u * z), q, tol)};
        const std::vector<TruncatedValue> dens = {
            qpoch_infinite(c, q, tol), qpoch_infinite(v / u, q, tol),
            qpoch_infinite(z, q, tol), qpoch_infinite(q.q / z, q, tol)};
        const TruncatedValue ser = eval_2phi1(u, u * q.q / c, u * q.q / v, q.q, w, tol);
        return detail::combine_product(nums, dens, ser);
    };
    const TruncatedValue ta = term(a, b);
    const TruncatedValue tb = term(b, a);
    return {ta.value + tb.value, ta.tail_bound + tb.tail_bound, ta.terms_used + tb.terms_used};
}

/* Inputs for the named-identity catalog. Unused fields are ignored. */
struct IdentityInputs {
    cplx a{}, b{}, c{}, z{};
    long n = 0;
    double q = 0.5;
};

/*
 * Named-identity residual checks. Returns the scaled residual
 * $|L-R|/(1+|L|+|R|)$ with both sides evaluated by this module.
 */
inline double check_identity(const std::string& id, const IdentityInputs& in,
                             ToleranceConfig tol = {}) {
    Base q(in.q);
    const double qq = in.q;
    const auto qpinf = [&](cplx x) { return qpoch_infinite(x, q, tol).value; };

    if (id == "q-binomial") {
        /* $_1\varphi_0(a;-;q,z) = (az;q)_\infty/(z;q)_\infty$, |z|<1 */
        if (std::abs(in.z) >= 1.0) throw RegionError("q-binomial: requires |z| < 1");
        const cplx lhs = eval_rphis(make_series({in.a}, {}, qq, in.z), tol).value;
        return scaled_residual(lhs, qpinf(in.a * in.z) / qpinf(in.z));
    }
    if (id == "terminating-q-binomial") {
        /* $_1\varphi_0(q^{-n};-;q,z) = (q^{-n}z;q)_n$, all z */
        const cplx lhs =
            eval_rphis(make_series({ParamSpec::terminating(in.n)}, {}, qq, in.z), tol).value;
        const cplx rhs = qpoch_finite(std::pow(qq, static_cast<double>(-in.n)) * in.z, q, in.n);
        return scaled_residual(lhs, rhs);
    }
    if (id == "chu-vandermonde") {
        /* $_2\varphi_1(q^{-n},a;c;q,q) = \frac{(c/a;q)_n}{(c;q)_n} a^n$ */
        if (in.a == cplx(0.0)) throw RegionError("chu-vandermonde: a must be nonzero");
        const cplx lhs =
            eval_rphis(make_series({ParamSpec::terminating(in.n), in.a}, {in.c}, qq, cplx(qq)), tol)
                .value;
        const cplx rhs = qpoch_finite(in.c / in.a, q, in.n) / qpoch_finite(in.c, q, in.n) *
                         std::pow(in.a, static_cast<double>(in.n));
        return scaled_residual(lhs, rhs);
    }
    if (id == "heine-1") {
        if (std::abs(in.z) >= 1.0 || std::abs(in.b) >= 1.0)
            throw RegionError("heine-1: requires |z| < 1 and |b| < 1");
        const cplx lhs = eval_2phi1(in.a, in.b, in.c, qq, in.z, tol).value;
        const cplx rhs = qpinf(in.b) * qpinf(in.a * in.z) / (qpinf(in.c) * qpinf(in.z)) *
                         eval_2phi1(in.c / in.b, in.z, in.a * in.z, qq, in.b, tol).value;
        return scaled_residual(lhs, rhs);
    }
    if (id == "heine-2") {
        if (std::abs(in.z) >= 1.0 || std::abs(in.c / in.b) >= 1.0)
            throw RegionError("heine-2: requires |z| < 1 and |c/b| < 1");
        const cplx lhs = eval_2phi1(in.a, in.b, in.c, qq, in.z, tol).value;
        const cplx rhs =
            qpinf(in.c / in.b) * qpinf(in.b * in.z) / (qpinf(in.c) * qpinf(in.z)) *
            eval_2phi1(in.a * in.b * in.z / in.c, in.b, in.b * in.z, qq, in.c / in.b, tol).value;
        return scaled_residual(lhs, rhs);
    }
    if (id == "heine-3") {
        const cplx w = in.a * in.b * in.z / in.c;
        if (std::abs(in.z) >= 1.0 || std::abs(w) >= 1.0)
            throw RegionError("heine-3: requires |z| < 1 and |abz/c| < 1");
        const cplx lhs = eval_2phi1(in.a, in.b, in.c, qq, in.z, tol).value;
        const cplx rhs = qpinf(w) / qpinf(in.z) *
                         eval_2phi1(in.c / in.a, in.c / in.b, in.c, qq, w, tol).value;
        return scaled_residual(lhs, rhs);
    }
    if (id == "1phi1-symmetry") {
        /* the four-equality limit chain; for a = 0 the symmetric special case */
        const cplx E0 =
            qpinf(in.c) * eval_rphis(make_series({in.a}, {in.c}, qq, in.z), tol).value;
        if (in.a == cplx(0.0)) {
            const cplx E4 =
                qpinf(in.z) * eval_rphis(make_series({cplx(0.0)}, {in.z}, qq, in.c), tol).value;
            return scaled_residual(E0, E4);
        }
        if (std::abs(in.a) >= 1.0 || std::abs(in.c / in.a) >= 1.0 ||
            std::abs(in.a * in.z / in.c) >= 1.0)
            throw RegionError("1phi1-symmetry: requires |a| < 1, |c/a| < 1, |az/c| < 1");
        const cplx E1 = qpinf(in.a) * qpinf(in.z) *
                        eval_2phi1(in.c / in.a, cplx(0.0), in.z, qq, in.a, tol).value;
        const cplx E2 =
            qpinf(in.c / in.a) *
            eval_2phi1(in.a * in.z / in.c, in.a, cplx(0.0), qq, in.c / in.a, tol).value;
        const cplx E3 = qpinf(in.a * in.z / in.c) * qpinf(in.c) *
                        eval_2phi1(in.c / in.a, cplx(0.0), in.c, qq, in.a * in.z / in.c, tol).value;
        const cplx E4 =
            qpinf(in.z) *
            eval_rphis(make_series({in.a * in.z / in.c}, {in.z}, qq, in.c), tol).value;
        double res = 0.0;
        for (const cplx& e : {E1, E2, E3, E4}) res = std::max(res, scaled_residual(E0, e));
        return res;
    }
    if (id == "0phi1-limit") {
        /* $(c;q)_\infty\,_0\varphi_1(-;c;q,z) = (z/c,c;q)_\infty\,
           _2\varphi_1(0,0;c;q,z/c) = \,_1\varphi_1(z/c;0;q,c)$ */
        if (in.c == cplx(0.0)) throw RegionError("0phi1-limit: c must be nonzero");
        if (std::abs(in.z / in.c) >= 1.0) throw RegionError("0phi1-limit: requires |z/c| < 1");
        const cplx E0 = qpinf(in.c) * eval_rphis(make_series({}, {in.c}, qq, in.z), tol).value;
        const cplx E1 = qpinf(in.z / in.c) * qpinf(in.c) *
                        eval_2phi1(cplx(0.0), cplx(0.0), in.c, qq, in.z / in.c, tol).value;
        const cplx E2 =
            eval_rphis(make_series({in.z / in.c}, {cplx(0.0)}, qq, in.c), tol).value;
        return std::max(scaled_residual(E0, E1), scaled_residual(E0, E2));
    }
    throw CatalogError("unknown identity id: " + id);
}

inline const std::vector<std::string>& identity_catalog() {
    static const std::vector<std::string> ids = {
        "q-binomial",     "terminating-q-binomial", "chu-vandermonde", "heine-1",
        "heine-2",        "heine-3",                "1phi1-symmetry",  "0phi1-limit"};
    return ids;
}

/* Draw a random parameter point inside the identity's convergence region. */
inline IdentityInputs sample_identity_point(const std::string& id, Rng& rng) {
    const auto rc = [&](double lo, double hi) {
        const double r = rng.uniform(lo, hi);
        const double th = rng.uniform(0.0, 6.283185307179586);
        return cplx(r * std::cos(th), r * std::sin(th));
    };
    IdentityInputs in;
    in.q = rng.uniform(0.25, 0.8);
    if (id == "q-binomial") {
        in.a = rc(0.1, 1.6);
        in.z = rc(0.05, 0.85);
    } else if (id == "terminating-q-binomial") {
        in.n = static_cast<long>(rng.uniform(0.0, 8.99));
        in.z = rc(0.1, 2.5);
    } else if (id == "chu-vandermonde") {
        /* ascending summation of the terminating sum amplifies rounding by
           roughly q^{-n(n+1)/2}; keep n and 1/q small enough that double
           precision retains 11 digits */
        in.q = rng.uniform(0.4, 0.8);
        in.n = static_cast<long>(rng.uniform(0.0, 5.99));
        in.a = rc(0.3, 1.2);
        in.c = rc(0.2, 0.9);
    } else if (id == "heine-1") {
        in.a = rc(0.1, 1.5);
        in.b = rc(0.1, 0.85);
        in.c = rc(0.1, 0.9);
        in.z = rc(0.05, 0.85);
    } else if (id == "heine-2") {
        in.a = rc(0.1, 1.5);
        in.b = rc(0.5, 0.9);
        in.c = in.b * rc(0.1, 0.85); /* |c/b| < 1 */
        in.z = rc(0.05, 0.85);
    } else if (id == "heine-3") {
        in.a = rc(0.1, 0.9);
        in.b = rc(0.1, 0.9);
        in.c = rc(0.4, 0.95);
        in.z = rc(0.05, 0.8);
        if (std::abs(in.a * in.b * in.z / in.c) >= 0.9)
            in.z *= 0.8 / std::abs(in.a * in.b * in.z / in.c);
    } else if (id == "1phi1-symmetry") {
        in.a = rc(0.3, 0.85);
        in.c = in.a * rc(0.15, 0.8); /* |c/a| < 1 */
        in.z = (in.c / in.a) * rc(0.1, 0.85); /* |az/c| < 1 */
    } else if (id == "0phi1-limit") {
        in.c = rc(0.25, 0.95);
        in.z = in.c * rc(0.05, 0.85);
    } else {
        throw CatalogError("unknown identity id: " + id);
    }
    return in;
}

} // namespace qhyper
