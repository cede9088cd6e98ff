#include <catch2/catch_amalgamated.hpp>

#include <qhyper/series.hpp>

#include <vector>

using namespace qhyper;

/* direct term-by-term summation used as an in-test oracle */
static cplx direct_sum(const std::vector<cplx>& nums, const std::vector<cplx>& dens, double q,
                       cplx z, long N) {
    Base qb(q);
    const int pexp = 1 + static_cast<int>(dens.size()) - static_cast<int>(nums.size());
    cplx tot = 0.0;
    for (long n = 0; n < N; ++n) {
        cplx t = std::pow(z, static_cast<double>(n));
        for (const cplx& a : nums) t *= qpoch_finite(a, qb, n);
        t /= qpoch_finite(q, qb, n);
        for (const cplx& b : dens) t /= qpoch_finite(b, qb, n);
        if (pexp != 0) {
            cplx ph = (n % 2 != 0 && pexp % 2 != 0) ? -1.0 : 1.0;
            t *= ph * std::pow(q, 0.5 * double(n) * double(n - 1) * pexp);
        }
        tot += t;
    }
    return tot;
}

TEST_CASE("classification follows the convergence rules") {
    CHECK(classify(make_series({cplx(0.3), cplx(0.7)}, {cplx(0.45)}, 0.5, 0.5)).kind ==
          ConvKind::AbsolutelyConvergent);
    const auto term = classify(
        make_series({ParamSpec::terminating(3), cplx(0.7)}, {cplx(0.45)}, 0.5, 5.0));
    CHECK(term.kind == ConvKind::Terminating);
    CHECK(term.degree == 3);
    CHECK(classify(make_series({cplx(0.3), cplx(0.2), cplx(0.7)}, {cplx(0.45)}, 0.5, 0.5)).kind ==
          ConvKind::Divergent);
    CHECK(classify(make_series({cplx(0.3)}, {cplx(0.45)}, 0.5, 7.0)).kind ==
          ConvKind::AbsolutelyConvergent); /* r <= s: entire in z */
    CHECK_THROWS_AS(eval_rphis(make_series({cplx(0.3), cplx(0.2), cplx(0.7)}, {cplx(0.45)}, 0.5,
                                           0.5)),
                    RegionError);
}

TEST_CASE("SeriesSpec validation") {
    CHECK_THROWS_AS(make_series({cplx(0.3)}, {ParamSpec::terminating(2)}, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(make_series({cplx(0.3)}, {cplx(4.0)}, 0.5, 0.1), DomainError);
    CHECK_THROWS_AS(make_series({cplx(0.3)}, {cplx(1.0)}, 0.5, 0.1), DomainError);
    CHECK_NOTHROW(make_series({cplx(0.3)}, {cplx(0.0)}, 0.5, 0.1)); /* zero lower parameter ok */
    CHECK_NOTHROW(make_series({cplx(0.3)}, {cplx(0.45)}, 0.5, 0.1));
}

TEST_CASE("eval_rphis basic values") {
    /* z = 0: only the n = 0 term */
    CHECK(eval_rphis(make_series({cplx(0.3)}, {cplx(0.45)}, 0.5, 0.0)).value == cplx(1.0));
    /* q-binomial theorem instance */
    Base q(0.5);
    const cplx lhs = eval_rphis(make_series({cplx(0.25)}, {}, 0.5, 0.5)).value;
    const cplx rhs = qpoch_infinite(0.125, q).value / qpoch_infinite(0.5, q).value;
    CHECK(scaled_residual(lhs, rhs) < 1e-12);
    /* Chu-Vandermonde with n = 1: (a-c)/(1-c) */
    const cplx cv =
        eval_rphis(make_series({ParamSpec::terminating(1), cplx(0.3)}, {cplx(0.7)}, 0.5, 0.5))
            .value;
    CHECK(scaled_residual(cv, cplx((0.3 - 0.7) / (1.0 - 0.7))) < 1e-14);
}

TEST_CASE("eval_rphis matches the frozen references") {
    CHECK(std::abs(eval_2phi1(0.3, 0.7, 0.45, 0.5, 0.2).value -
                   cplx(1.188883410518156271343)) < 1e-14);
    CHECK(std::abs(eval_rphis(make_series({cplx(0.3)}, {cplx(0.45)}, 0.5, 0.6)).value -
                   cplx(0.032434105789629196228)) < 1e-14);
    CHECK(std::abs(eval_rphis(make_series({}, {cplx(0.45)}, 0.5, 0.6)).value -
                   cplx(3.772346383937503146148)) < 1e-14);
}

TEST_CASE("terminating series are polynomials interpolated by direct summation") {
    const long n = 5;
    for (int j = 0; j <= n; ++j) {
        const double x = std::cos(3.14159265358979323846 * (j + 0.5) / (n + 1));
        const cplx z = 2.0 * x; /* Chebyshev nodes scaled outside the unit disk */
        const SeriesSpec s =
            make_series({ParamSpec::terminating(n), cplx(0.7)}, {cplx(0.45)}, 0.5, z);
        const TruncatedValue tv = eval_rphis(s);
        CHECK(tv.tail_bound == 0.0);
        CHECK(tv.terms_used == static_cast<std::size_t>(n + 1));
        const cplx direct = direct_sum({std::pow(0.5, -5.0), cplx(0.7)}, {cplx(0.45)}, 0.5, z, n + 1);
        CHECK(scaled_residual(tv.value, direct) < 1e-12);
    }
}

TEST_CASE("tail bounds dominate refinement differences") {
    Rng rng(808);
    for (int i = 0; i < 25; ++i) {
        const double q = rng.uniform(0.3, 0.8);
        const cplx a(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
        const cplx b(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5));
        const cplx c(rng.uniform(0.2, 0.9), rng.uniform(0.1, 0.4));
        const cplx z(rng.uniform(-0.8, 0.8), rng.uniform(-0.4, 0.4));
        ToleranceConfig loose;
        loose.abs_tol = 1e-8;
        const TruncatedValue coarse = eval_2phi1(a, b, c, q, z, loose);
        const TruncatedValue fine = eval_2phi1(a, b, c, q, z);
        CHECK(std::abs(coarse.value - fine.value) <= coarse.tail_bound + 1e-14);
        /* doubling max_terms must not move the value beyond the tail bound */
        ToleranceConfig doubled = loose;
        doubled.max_terms *= 2;
        CHECK(std::abs(eval_2phi1(a, b, c, q, z, doubled).value - coarse.value) <=
              coarse.tail_bound + 1e-16);
    }
}

TEST_CASE("non-convergence guard") {
    ToleranceConfig tiny;
    tiny.max_terms = 20;
    CHECK_THROWS_AS(eval_2phi1(0.3, 0.7, 0.45, 0.5, cplx(0.999), tiny), NonConvergenceError);
}

TEST_CASE("very-well-poised series") {
    Base q(0.5);
    /* z = 0 leaves the k = 0 term */
    CHECK(eval_vwp(0.2, {cplx(0.3)}, q, 0.0).value == cplx(1.0));
    /* frozen reference */
    const TruncatedValue w = eval_vwp(
        0.2, {cplx(0.3), cplx(0.25), cplx(0.2), cplx(0.15), cplx(0.12)}, q, 0.3);
    CHECK(std::abs(w.value - cplx(50.39021508384255808763)) < 5e-12 * std::abs(w.value));
    /* terminating entry stops the sum after n+1 nonzero terms */
    const TruncatedValue wt =
        eval_vwp(0.2, {ParamSpec::terminating(3), cplx(0.3)}, q, 2.0);
    CHECK(wt.tail_bound == 0.0);
    CHECK(wt.terms_used <= 6);
    /* brute-force comparison for a generic short case */
    cplx brute = 0.0;
    for (long k = 0; k < 80; ++k) {
        cplx t = (cplx(1.0) - 0.2 * std::pow(0.5, 2.0 * k)) / (cplx(1.0) - 0.2) *
                 qpoch_finite(0.2, q, k) / qpoch_finite(0.5, q, k) *
                 std::pow(cplx(0.4), static_cast<double>(k));
        t *= qpoch_finite(0.3, q, k) / qpoch_finite(0.5 * 0.2 / 0.3, q, k);
        brute += t;
    }
    CHECK(scaled_residual(eval_vwp(0.2, {cplx(0.3)}, q, 0.4).value, brute) < 1e-13);
    /* pole in a denominator factor */
    CHECK_THROWS_AS(eval_vwp(0.5, {cplx(0.125)}, q, 0.4), PoleError);
}

TEST_CASE("base inversion is involutive and value-preserving") {
    const SeriesSpec s = make_series({cplx(0.3), cplx(0.4)}, {cplx(0.6)}, 0.5, 0.2);
    const SeriesSpec inv = invert_base(s);
    CHECK(inv.base == 2.0);
    const SeriesSpec back = invert_base(inv);
    CHECK(back.base == 0.5);
    CHECK(std::abs(back.z - s.z) < 1e-15);
    CHECK(std::abs(back.numerators[0].value - cplx(0.3)) < 1e-15);
    CHECK(scaled_residual(eval_rphis(inv).value, eval_rphis(s).value) < 1e-11);
    /* a second point, complex */
    const SeriesSpec s2 =
        make_series({cplx(0.25, 0.1), cplx(0.5, -0.2)}, {cplx(0.7, 0.1)}, 0.6, cplx(0.3, 0.1));
    CHECK(scaled_residual(eval_rphis(invert_base(s2)).value, eval_rphis(s2).value) < 1e-11);
    CHECK_THROWS_AS(invert_base(make_series({ParamSpec::terminating(2)}, {}, 0.5, 0.2)),
                    DomainError);
    CHECK_THROWS_AS(invert_base(make_series({cplx(0.0)}, {}, 0.5, 0.2)), DomainError);
}

TEST_CASE("reversal of terminating series") {
    /* n = 0: single term on both sides */
    {
        const SeriesSpec s =
            make_series({cplx(0.3), ParamSpec::terminating(0)}, {cplx(0.45)}, 0.5, 0.7);
        const ReversedSeries rev = reverse_terminating(s);
        CHECK(std::abs(rev.prefactor - cplx(1.0)) < 1e-15);
        CHECK(scaled_residual(eval_rphis(rev.spec).value, eval_rphis(s).value) < 1e-14);
    }
    /* 2phi1 with n = 1 */
    {
        const SeriesSpec s =
            make_series({cplx(0.3), ParamSpec::terminating(1)}, {cplx(0.45)}, 0.5, 0.7);
        const ReversedSeries rev = reverse_terminating(s);
        CHECK(scaled_residual(eval_rphis(s).value,
                              rev.prefactor * eval_rphis(rev.spec).value) < 1e-13);
    }
    /* 3phi2 with n = 4 */
    {
        const SeriesSpec s = make_series({cplx(0.3), cplx(0.8), ParamSpec::terminating(4)},
                                         {cplx(0.45), cplx(0.9)}, 0.5, cplx(0.7, 0.2));
        const ReversedSeries rev = reverse_terminating(s);
        CHECK(scaled_residual(eval_rphis(s).value,
                              rev.prefactor * eval_rphis(rev.spec).value) < 1e-12);
    }
    CHECK_THROWS_AS(reverse_terminating(make_series({cplx(0.3)}, {cplx(0.45)}, 0.5, 0.7)),
                    DomainError);
}

TEST_CASE("reversal holds on random terminating instances") {
    Rng rng(909);
    for (int i = 0; i < 50; ++i) {
        const double q = rng.uniform(0.3, 0.8);
        const long n = 1 + static_cast<long>(rng.uniform(0.0, 6.9));
        const auto rnd = [&](double lo, double hi) {
            return cplx(rng.uniform(lo, hi), rng.uniform(0.05, 0.4));
        };
        SeriesSpec s;
        if (i % 2 == 0)
            s = make_series({rnd(0.2, 0.9), ParamSpec::terminating(n)}, {rnd(0.3, 0.9)}, q,
                            rnd(0.3, 1.5));
        else
            s = make_series({rnd(0.2, 0.9), rnd(0.2, 0.9), ParamSpec::terminating(n)},
                            {rnd(0.3, 0.9), rnd(0.3, 0.9)}, q, rnd(0.3, 1.5));
        const ReversedSeries rev = reverse_terminating(s);
        CHECK(scaled_residual(eval_rphis(s).value,
                              rev.prefactor * eval_rphis(rev.spec).value) < 1e-12);
    }
}

TEST_CASE("q-integral") {
    Base q(0.5);
    const TruncatedValue one = qintegral([](double) { return cplx(1.0); }, 1.0, q);
    CHECK(std::abs(one.value - cplx(1.0)) <= one.tail_bound + 1e-13);
    const TruncatedValue lin = qintegral([](double t) { return cplx(t); }, 1.0, q);
    CHECK(std::abs(lin.value - cplx(2.0 / 3.0)) <= lin.tail_bound + 1e-13);
}

TEST_CASE("q-integral Euler representation of 2phi1") {
    const double qd = 0.5;
    Base q(qd);
    const cplx a = 0.3, b = 0.7, c = 0.45, z = 0.2;
    const double lb = std::log(0.7) / std::log(qd); /* log_q b */
    const auto integrand = [&](double t) -> cplx {
        const cplx num = qpoch_infinite(qd * t, q).value * qpoch_infinite(a * z * t, q).value;
        const cplx den = qpoch_infinite(t * c / b, q).value * qpoch_infinite(t * z, q).value;
        return std::pow(t, -1.0 + lb) * num / den;
    };
    const cplx pref = qpoch_infinite(b, q).value * qpoch_infinite(c / b, q).value *
                      qpoch_infinite(z, q).value /
                      (qpoch_infinite(qd, q).value * qpoch_infinite(c, q).value *
                       qpoch_infinite(z, q).value);
    const cplx rhs = pref / (1.0 - qd) * qintegral(integrand, 1.0, q).value;
    CHECK(scaled_residual(eval_2phi1(a, b, c, qd, z).value, rhs) < 1e-10);
}

TEST_CASE("analytic continuation of 2phi1") {
    Base q(0.5);
    /* overlap annulus qc/ab < |z| < 1 is nonempty for c = 0.1 */
    const cplx a = 0.3, b = 0.7, c = 0.1;
    for (const cplx z : {cplx(-0.5), cplx(-0.3), cplx(0.2, 0.55)}) {
        const TruncatedValue cont = continue_2phi1(a, b, c, q, z);
        const TruncatedValue ser = eval_2phi1(a, b, c, 0.5, z);
        CHECK(scaled_residual(cont.value, ser.value) < 1e-9);
    }
    /* symmetry in a <-> b */
    const cplx z = -3.0;
    CHECK(scaled_residual(continue_2phi1(a, b, c, q, z).value,
                          continue_2phi1(b, a, c, q, z).value) < 1e-14);
    /* error paths */
    CHECK_THROWS_AS(continue_2phi1(a, b, 0.25, q, z), DegeneracyError);   /* c = q^2 */
    CHECK_THROWS_AS(continue_2phi1(0.35, 0.7, c, q, z), DegeneracyError); /* a/b = q */
    CHECK_THROWS_AS(continue_2phi1(a, b, c, q, cplx(-0.05)), RegionError); /* |cq/abz| > 1 */
    CHECK_THROWS_AS(continue_2phi1(a, b, c, q, cplx(2.0)), RegionError);   /* positive real z */
}

TEST_CASE("named identities at the catalog's example points") {
    IdentityInputs in;
    in.q = 0.5;
    in.a = 0.3;
    in.z = 0.6;
    CHECK(check_identity("q-binomial", in) < 1e-12);
    in = {};
    in.q = 0.5;
    in.n = 4;
    in.z = 2.0;
    CHECK(check_identity("terminating-q-binomial", in) < 1e-12);
    in = {};
    in.q = 0.5;
    in.n = 3;
    in.a = 0.3;
    in.c = 0.7;
    CHECK(check_identity("chu-vandermonde", in) < 1e-12);
    in = {};
    in.q = 0.5;
    in.a = 0.0;
    in.c = 0.4;
    in.z = 0.7;
    CHECK(check_identity("1phi1-symmetry", in) < 1e-12);
    in = {};
    in.q = 0.5;
    in.a = 0.5;
    in.c = 0.2;
    in.z = 0.3;
    CHECK(check_identity("1phi1-symmetry", in) < 1e-11);
    in = {};
    in.q = 0.5;
    in.c = 0.45;
    in.z = 0.3;
    CHECK(check_identity("0phi1-limit", in) < 1e-12);
    in = {};
    in.q = 0.5;
    in.a = 0.3;
    in.b = 0.7;
    in.c = 0.45;
    in.z = 0.2;
    CHECK(check_identity("heine-1", in) < 1e-12);
    CHECK(check_identity("heine-2", in) < 1e-12);
    CHECK(check_identity("heine-3", in) < 1e-12);
    CHECK_THROWS_AS(check_identity("no-such-identity", in), CatalogError);
    in.z = 1.5;
    CHECK_THROWS_AS(check_identity("heine-1", in), RegionError);
}

TEST_CASE("identity suite on seeded random in-region points") {
    Rng rng(7);
    for (const std::string& id : identity_catalog()) {
        for (int i = 0; i < 20; ++i) {
            const IdentityInputs in = sample_identity_point(id, rng);
            CHECK(check_identity(id, in) < 1e-11);
        }
    }
}

TEST_CASE("Heine transformation chain closes after three applications") {
    const double q = 0.5;
    cplx a = 0.3, b = 0.7, c = 0.45, z = 0.3;
    const cplx v0 = eval_2phi1(a, b, c, q, z).value;
    Base qb(q);
    cplx pref = 1.0;
    /* the chain applies (a,b;c;z) -> (c/b, z; az; b), with the symmetry
       swap a <-> b before the second and third applications */
    for (int step = 0; step < 3; ++step) {
        if (step > 0) std::swap(a, b);
        pref *= qpoch_infinite(b, qb).value * qpoch_infinite(a * z, qb).value /
                (qpoch_infinite(c, qb).value * qpoch_infinite(z, qb).value);
        const cplx na = c / b, nb = z, nc = a * z, nz = b;
        a = na;
        b = nb;
        c = nc;
        z = nz;
        CHECK(scaled_residual(pref * eval_2phi1(a, b, c, q, z).value, v0) < 1e-11);
    }
    /* after three swapped applications the parameters realize the Euler form */
    CHECK(std::abs(c - cplx(0.45)) < 1e-15);
}
