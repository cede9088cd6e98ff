#include <catch2/catch_amalgamated.hpp>

#include <qhyper/qcore.hpp>

#include <complex>
#include <vector>

using namespace qhyper;
using Catch::Approx;

static cplx rand_cplx(Rng& rng, double rmax) {
    const double r = rng.uniform(0.05, rmax);
    const double th = rng.uniform(0.0, 6.283185307179586);
    return cplx(r * std::cos(th), r * std::sin(th));
}

TEST_CASE("Base rejects out-of-range q") {
    CHECK_THROWS_AS(Base(0.0), DomainError);
    CHECK_THROWS_AS(Base(1.0), DomainError);
    CHECK_THROWS_AS(Base(-0.5), DomainError);
    CHECK_THROWS_AS(Base(1.5), DomainError);
    CHECK_NOTHROW(Base(1e-8));
    CHECK_NOTHROW(Base(0.999999));
}

TEST_CASE("qpoch_finite basic values") {
    Base q(0.5);
    CHECK(qpoch_finite(0.3, q, 0) == cplx(1.0));
    CHECK(std::abs(qpoch_finite(0.3, q, 2) - cplx(0.595)) < 1e-15);
    /* vanishing factor inside a nonnegative-subscript product is fine */
    CHECK(qpoch_finite(1.0, q, 3) == cplx(0.0));
}

TEST_CASE("qpoch_finite negative subscripts invert the shifted product") {
    Base q(0.55);
    Rng rng(101);
    for (int i = 0; i < 10; ++i) {
        const cplx a = rand_cplx(rng, 1.5);
        const long n = 1 + static_cast<long>(rng.uniform(0.0, 7.9));
        const cplx lhs = qpoch_finite(a, q, -n);
        const cplx rhs = cplx(1.0) / qpoch_finite(a * std::pow(q.q, double(-n)), q, n);
        CHECK(scaled_residual(lhs, rhs) < 1e-13);
    }
    /* a = q makes (a;q)_{-1} singular: the factor 1 - a/q vanishes */
    CHECK_THROWS_AS(qpoch_finite(cplx(0.5), Base(0.5), -1), PoleError);
}

TEST_CASE("qpoch_infinite matches the frozen reference") {
    Base q(0.5);
    CHECK(qpoch_infinite(0.0, q).value == cplx(1.0));
    {
        const TruncatedValue tv = qpoch_infinite(0.5, q);
        CHECK(std::abs(tv.value - cplx(0.28878809508660242128)) < 1e-14);
        CHECK(tv.tail_bound < 1e-13);
    }
    {
        const TruncatedValue tv = qpoch_infinite(cplx(0.3, 0.2), q);
        CHECK(std::abs(tv.value - cplx(0.46951014642248801425, -0.25691836873461966225)) < 1e-14);
    }
    {
        const TruncatedValue tv = qpoch_infinite(0.7, Base(0.9));
        CHECK(std::abs(tv.value - cplx(0.00011579567347846063132)) < 1e-16);
    }
    /* a on the zero set: (q^{-2};q)_inf has the k = 2 factor equal to zero */
    CHECK(qpoch_infinite(4.0, q).value == cplx(0.0));
}

TEST_CASE("qpoch_infinite quotient reproduces the finite product") {
    Base q(0.6);
    Rng rng(202);
    for (int i = 0; i < 10; ++i) {
        const cplx a = rand_cplx(rng, 1.2);
        const long n = static_cast<long>(rng.uniform(0.0, 8.9));
        const cplx lhs = qpoch_infinite(a, q).value /
                         qpoch_infinite(a * std::pow(q.q, double(n)), q).value;
        CHECK(scaled_residual(lhs, qpoch_finite(a, q, n)) < 1e-13);
    }
}

TEST_CASE("qpoch_infinite certified tails hold against longer products") {
    Rng rng(303);
    for (int i = 0; i < 100; ++i) {
        const double qq = rng.uniform(0.2, 0.9);
        Base q(qq);
        const cplx a = rand_cplx(rng, 2.0);
        const TruncatedValue tv = qpoch_infinite(a, q);
        /* reference: long-double product with twice the factor count + margin */
        std::size_t N2 = 2 * tv.terms_used + 64;
        std::complex<long double> ref(1.0L, 0.0L);
        std::complex<long double> al(a.real(), a.imag());
        long double qk = 1.0L;
        for (std::size_t k = 0; k < N2; ++k) {
            ref *= (std::complex<long double>(1.0L) - al * qk);
            qk *= static_cast<long double>(qq);
        }
        const cplx refd(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
        /* tail_bound covers truncation; allow O(eps) slack for rounding */
        CHECK(std::abs(tv.value - refd) <= tv.tail_bound + 1e-14 * (1.0 + std::abs(tv.value)));
    }
}

TEST_CASE("qpoch_multi") {
    Base q(0.5);
    CHECK(qpoch_multi(std::vector<cplx>{}, q, 5) == cplx(1.0));
    const cplx a = 0.2, b = 0.4;
    CHECK(qpoch_multi({a, b}, q, 3) == qpoch_finite(a, q, 3) * qpoch_finite(b, q, 3));
    const TruncatedValue joint = qpoch_multi({a, b}, q, ToleranceConfig{});
    const cplx sep = qpoch_infinite(a, q).value * qpoch_infinite(b, q).value;
    CHECK(std::abs(joint.value - sep) <= joint.tail_bound + 1e-15);
}

TEST_CASE("qpoch_infinite_skip removes exactly one factor") {
    Base q(0.5);
    const cplx x = 0.4;
    const TruncatedValue skipped = qpoch_infinite_skip(x, q, 2);
    const cplx expected = qpoch_infinite(x, q).value / (cplx(1.0) - x * 0.25);
    CHECK(scaled_residual(skipped.value, expected) < 1e-14);
    /* at x = q^{-2} the k = 2 factor vanishes; the skipped product is finite */
    const TruncatedValue at_zero = qpoch_infinite_skip(4.0, q, 2);
    cplx direct = 1.0;
    for (int k = 0; k < 80; ++k)
        if (k != 2) direct *= (cplx(1.0) - cplx(4.0) * std::pow(0.5, k));
    CHECK(scaled_residual(at_zero.value, direct) < 1e-13);
}

TEST_CASE("qbinom integer case") {
    Base q(0.5);
    CHECK(qbinom(5L, 0L, q) == cplx(1.0));
    CHECK(std::abs(qbinom(2L, 1L, q) - cplx(1.5)) < 1e-15);
    CHECK_THROWS_AS(qbinom(3L, 4L, q), DomainError);
    CHECK_THROWS_AS(qbinom(3L, -1L, q), DomainError);
}

TEST_CASE("qbinom Pascal recurrences") {
    Base q(0.37);
    for (long n = 0; n <= 7; ++n) {
        for (long k = 0; k <= n + 1; ++k) {
            const cplx up = qbinom(n + 1, k, q);
            const cplx left = (k <= n && k >= 0) ? qbinom(n, k, q) : cplx(0.0);
            const cplx down = (k - 1 >= 0 && k - 1 <= n) ? qbinom(n, k - 1, q) : cplx(0.0);
            CHECK(scaled_residual(up, std::pow(q.q, double(k)) * left + down) < 1e-13);
            CHECK(scaled_residual(up, left + std::pow(q.q, double(n + 1 - k)) * down) < 1e-13);
        }
    }
}

TEST_CASE("qbinom generalized") {
    Base q(0.5);
    CHECK(std::abs(qbinom(cplx(1.7), cplx(0.6), q) - cplx(1.3611932147869402839)) < 1e-13);
    /* integer arguments route through the finite formula */
    CHECK(scaled_residual(qbinom(cplx(6.0), cplx(2.0), q), qbinom(6L, 2L, q)) < 1e-15);
    /* alpha a negative integer puts a zero in the denominator product */
    CHECK_THROWS_AS(qbinom(cplx(-2.0), cplx(0.5), q), PoleError);
}

TEST_CASE("theta zeros, symmetry, and the q-shift relation") {
    Base q(0.5);
    CHECK_THROWS_AS(theta(cplx(0.0), q), DomainError);
    CHECK(theta(cplx(1.0), q).value == cplx(0.0));
    CHECK(theta(cplx(0.5), q).value == cplx(0.0));
    CHECK(std::abs(theta(0.3, q).value - cplx(-0.021089471261573810008)) < 1e-14);
    Rng rng(404);
    for (int i = 0; i < 10; ++i) {
        const cplx z = rand_cplx(rng, 1.8);
        const cplx lhs = theta(q.q * z, q).value;
        CHECK(scaled_residual(lhs, -theta(z, q).value / z) < 1e-12);
        CHECK(scaled_residual(theta(z, q).value, theta(q.q / z, q).value) < 1e-12);
    }
}

TEST_CASE("theta quasi-periodicity under q^k shifts") {
    Base q(0.45);
    Rng rng(505);
    for (int i = 0; i < 6; ++i) {
        const cplx z = rand_cplx(rng, 1.5);
        const cplx tz = theta(z, q).value;
        for (int k = -4; k <= 4; ++k) {
            const cplx lhs = theta(std::pow(q.q, double(k)) * z, q).value;
            const cplx rhs = cpow(-z, double(-k)) *
                             std::pow(q.q, -0.5 * double(k) * double(k - 1)) * tz;
            CHECK(scaled_residual(lhs, rhs) < 1e-11);
        }
    }
}

TEST_CASE("qnumber") {
    Base q(0.5);
    CHECK(std::abs(qnumber(1.0, q) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(qnumber(0.0, q)) < 1e-15);
    CHECK(std::abs(qnumber(2.0, q) - cplx(1.5)) < 1e-15);
}

TEST_CASE("shifted factorial splitting identities") {
    Base q(0.5);
    Base q2(0.25);
    Rng rng(606);
    for (int i = 0; i < 20; ++i) {
        const cplx a = rand_cplx(rng, 1.5);
        const long n = static_cast<long>(rng.uniform(0.0, 10.9));
        const long m = static_cast<long>(rng.uniform(0.0, 10.9));
        CHECK(scaled_residual(qpoch_finite(a, q, n + m),
                              qpoch_finite(a, q, n) *
                                  qpoch_finite(a * std::pow(q.q, double(n)), q, m)) < 1e-13);
        CHECK(scaled_residual(qpoch_finite(a * a, q2, n),
                              qpoch_finite(a, q, n) * qpoch_finite(-a, q, n)) < 1e-13);
        CHECK(scaled_residual(qpoch_finite(a, q, 2 * n),
                              qpoch_finite(a, q2, n) * qpoch_finite(a * q.q, q2, n)) < 1e-13);
    }
}

TEST_CASE("lattice_index windows") {
    CHECK(lattice_index(cplx(0.125), 0.5).value_or(-999) == 3);
    CHECK(lattice_index(cplx(8.0), 0.5).value_or(-999) == -3);
    CHECK(lattice_index(cplx(0.125 * (1.0 + 1e-13)), 0.5).value_or(-999) == 3);
    CHECK(!lattice_index(cplx(0.3), 0.5).has_value());
    const cplx off_phase = std::polar(0.25, 1e-6);
    CHECK(!lattice_index(off_phase, 0.5).has_value());
    CHECK(lattice_index(off_phase, 0.5, 1e-10, 1e-4).value_or(-999) == 2);
}

TEST_CASE("Rng determinism") {
    Rng a(7), b(7);
    for (int i = 0; i < 32; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}
