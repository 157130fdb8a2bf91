#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pellconcat/ball.hpp"

#include <cmath>
#include <random>

using namespace pellconcat;

namespace {

bool contains_rational(const RealBall& x, const mpz_class& num, const mpz_class& den) {
    RealBall point = RealBall::from_ratio(num, den, x.precision() + 64);
    return !(x.certainly_less(point) || point.certainly_less(x));
}

bool contains_ball(const RealBall& outer, const RealBall& inner) {
    return outer.lower_double() <= inner.lower_double() &&
           inner.upper_double() <= outer.upper_double();
}

// log 2 = 2 atanh(1/3), summed in plain doubles: an oracle with no shared
// code path with the ball implementation
double log2_series_oracle() {
    double term = 1.0 / 3.0;
    double sum = 0.0;
    for (int k = 0; k < 40; ++k) {
        sum += term / (2 * k + 1);
        term /= 9.0;
    }
    return 2.0 * sum;
}

}  // namespace

TEST_CASE("log_nat basics") {
    RealBall zero = log_nat(1, 128);
    CHECK(zero.exact());
    CHECK(zero.lower_double() == 0.0);

    RealBall l2 = log_nat(2, 128);
    double oracle = log2_series_oracle();
    CHECK(l2.lower_double() <= oracle + 1e-14);
    CHECK(oracle - 1e-14 <= l2.upper_double());
    CHECK(std::abs(l2.lower_double() - 0.6931471805599453) < 1e-15);

    RealBall l8 = log_nat(8, 128);
    RealBall three_l2 = l2.mul_ui(3);
    CHECK(!(l8.certainly_less(three_l2)));
    CHECK(!(three_l2.certainly_less(l8)));

    CHECK_THROWS_AS(log_nat(0, 64), std::invalid_argument);
}

TEST_CASE("log_nat radius contract") {
    for (mpfr_prec_t p : {64, 128, 256}) {
        for (const char* xs : {"2", "3", "10", "12345", "1000000000000000000000000000000"}) {
            mpz_class x(xs);
            RealBall l = log_nat(x, p);
            double bound = std::ldexp(2.0 * l.upper_double(), static_cast<int>(-p));
            CHECK(l.radius_double() <= bound);
        }
    }
}

TEST_CASE("log_alpha against an independent evaluation") {
    RealBall la = log_alpha(64);
    // asinh(1) = log(1 + sqrt 2), via a separate mpfr code path
    mpfr_t one, ref;
    mpfr_init2(one, 256);
    mpfr_init2(ref, 256);
    mpfr_set_ui(one, 1, MPFR_RNDN);
    mpfr_asinh(ref, one, MPFR_RNDN);
    double refd = mpfr_get_d(ref, MPFR_RNDN);
    mpfr_clears(one, ref, static_cast<mpfr_ptr>(nullptr));
    CHECK(la.lower_double() <= refd);
    CHECK(refd <= la.upper_double());
    CHECK(std::abs(refd - 0.8813735870195430) < 1e-15);

    // exp(log alpha) contains 1 + sqrt 2
    RealBall back = log_alpha(96).exp();
    RealBall a = alpha_ball(160);
    CHECK(!(back.certainly_less(a)));
    CHECK(!(a.certainly_less(back)));
}

TEST_CASE("radius shrinks at least geometrically with precision") {
    double prev = log_alpha(64).radius_double();
    for (mpfr_prec_t p : {128, 256, 512}) {
        double cur = log_alpha(p).radius_double();
        CHECK(cur < prev / 2);
        prev = cur;
    }
}

TEST_CASE("monotone refinement") {
    for (mpfr_prec_t p : {64, 128, 256, 512}) {
        RealBall coarse = log_nat(3, p) / log_alpha(p);
        RealBall fine = log_nat(3, 2 * p) / log_alpha(2 * p);
        CHECK(fine.radius_double() <= coarse.radius_double());
        CHECK(contains_ball(coarse, fine));
    }
}

TEST_CASE("interval soundness on random rationals") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> num(1, 1000000);
    for (int i = 0; i < 200; ++i) {
        mpz_class p = num(rng), q = num(rng);
        RealBall coarse = (RealBall::from_ratio(p, q, 64)).abs().add_integer(1).log();
        RealBall fine = (RealBall::from_ratio(p, q, 256)).abs().add_integer(1).log();
        CHECK(contains_ball(coarse, fine));
    }
}

TEST_CASE("ball arithmetic encloses exact rational arithmetic") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<long> coef(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 999);
    for (int i = 0; i < 300; ++i) {
        mpq_class a(coef(rng), den(rng)), b(coef(rng), den(rng));
        a.canonicalize();
        b.canonicalize();
        mpq_class sum = a + b, prod = a * b, diff = a - b;
        RealBall ab = RealBall::from_ratio(a.get_num(), a.get_den(), 96);
        RealBall bb = RealBall::from_ratio(b.get_num(), b.get_den(), 96);
        CHECK(contains_rational(ab + bb, sum.get_num(), sum.get_den()));
        CHECK(contains_rational(ab - bb, diff.get_num(), diff.get_den()));
        CHECK(contains_rational(ab * bb, prod.get_num(), prod.get_den()));
        if (b != 0 && (a < 0) == (a > 0)) continue;
        if (b != 0) {
            mpq_class quot = a / b;
            if (sgn(b) != 0 && !contains_rational(RealBall::from_ratio(0, 1, 96), b.get_num(), b.get_den())) {
                // divisor certified away from zero at this precision
                RealBall q = ab / bb;
                CHECK(contains_rational(q, quot.get_num(), quot.get_den()));
            }
        }
    }
}

TEST_CASE("nearest integer distance") {
    RealBall three = RealBall::from_ui(3, 96);
    auto d3 = nearest_int_distance(three);
    CHECK(d3.resolved);
    CHECK(d3.dist.upper_double() == 0.0);

    // exactly on a half integer: unresolved
    RealBall half = RealBall::from_ratio(5, 2, 96);
    auto dh = nearest_int_distance(half);
    CHECK(!dh.resolved);
    CHECK(dh.dist.upper_double() >= 0.5);

    RealBall x = RealBall::from_ratio(73, 10, 96);
    auto dx = nearest_int_distance(x);
    CHECK(dx.resolved);
    CHECK(contains_rational(dx.dist, 3, 10));
}

TEST_CASE("nearest integer distance properties") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> num(-100000, 100000);
    std::uniform_int_distribution<long> den(1, 997);
    std::uniform_int_distribution<long> shift(-50, 50);
    for (int i = 0; i < 300; ++i) {
        mpz_class p = num(rng), q = den(rng);
        RealBall x = RealBall::from_ratio(p, q, 96);
        auto d = nearest_int_distance(x);
        CHECK(d.dist.lower_double() >= 0.0);
        CHECK(d.dist.upper_double() <= 0.5);
        // shift by an integer
        RealBall y = x.add_integer(shift(rng));
        auto dy = nearest_int_distance(y);
        CHECK(!(d.dist.certainly_less(dy.dist)));
        CHECK(!(dy.dist.certainly_less(d.dist)));
    }
}

TEST_CASE("escalation certifies signs and floors") {
    PrecisionPolicy pol;
    pol.initial_bits = 64;
    pol.max_bits = 4096;

    int sign = with_escalation(pol, "sign(log 2 - log 3)", [](mpfr_prec_t p) {
        return (log_nat(2, p) - log_nat(3, p)).certified_sign();
    });
    CHECK(sign == -1);

    mpz_class big("1000000000000000000000000000000");  // 10^30
    auto floor_at = [&](mpfr_prec_t p) {
        return (log_nat(2, p) / log_alpha(p)).mul_integer(big).certified_floor();
    };
    mpz_class f1 = with_escalation(pol, "floor(10^30 tau_2)", floor_at);
    mpz_class f2 = *floor_at(1024);  // recomputed at a much higher precision
    CHECK(f1 == f2);

    PrecisionPolicy tight;
    tight.initial_bits = 64;
    tight.max_bits = 256;
    auto never = [](mpfr_prec_t) -> std::optional<int> { return std::nullopt; };
    CHECK_THROWS_AS(with_escalation(tight, "never certifies", never), PrecisionExhausted);
}

TEST_CASE("domain errors") {
    RealBall spans_zero = RealBall::from_ui(1, 64) - RealBall::from_ui(1, 64);
    CHECK_THROWS_AS(spans_zero.recip(), BallDomainError);
    CHECK_THROWS_AS(spans_zero.log(), BallDomainError);
    CHECK((-alpha_ball(64)).certainly_negative());
    CHECK_THROWS_AS((-alpha_ball(64)).sqrt(), BallDomainError);
}

TEST_CASE("decimal parsing is exact") {
    RealBall a = RealBall::from_decimal("5.746e27", 128);
    RealBall b = RealBall::from_integer(mpz_class("5746000000000000000000000000"), 128);
    CHECK(!(a.certainly_less(b)));
    CHECK(!(b.certainly_less(a)));
    RealBall c = RealBall::from_decimal("11.77", 128);
    CHECK(contains_rational(c, 1177, 100));
}
