#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pellconcat/ball.hpp"
#include "pellconcat/sequences.hpp"

#include <random>

using namespace pellconcat;

namespace {

// independent oracle: plain recurrence, additions only
std::vector<Nat> pell_by_recurrence(unsigned long n_max) {
    std::vector<Nat> p(n_max + 1);
    p[0] = 0;
    if (n_max >= 1) p[1] = 1;
    for (unsigned long i = 2; i <= n_max; ++i) p[i] = p[i - 1] + p[i - 1] + p[i - 2];
    return p;
}

std::vector<Nat> pell_lucas_by_recurrence(unsigned long n_max) {
    std::vector<Nat> q(n_max + 1);
    q[0] = 2;
    if (n_max >= 1) q[1] = 2;
    for (unsigned long i = 2; i <= n_max; ++i) q[i] = q[i - 1] + q[i - 1] + q[i - 2];
    return q;
}

}  // namespace

TEST_CASE("pell values") {
    CHECK(pell(0) == 0);
    CHECK(pell(1) == 1);
    CHECK(pell(2) == 2);
    CHECK(pell(3) == 5);
    CHECK(pell(4) == 12);
    CHECK(pell(5) == 29);
    CHECK(pell(6) == 70);
    CHECK(pell(20) == 15994428);  // frozen from the recurrence oracle
    auto oracle = pell_by_recurrence(20);
    CHECK(pell(20) == oracle[20]);
}

TEST_CASE("pell agrees with the recurrence everywhere") {
    auto oracle = pell_by_recurrence(2000);
    for (unsigned long n = 0; n <= 2000; ++n) CHECK(pell(n) == oracle[n]);
}

TEST_CASE("pell_lucas values") {
    CHECK(pell_lucas(0) == 2);
    CHECK(pell_lucas(1) == 2);
    CHECK(pell_lucas(2) == 6);
    CHECK(pell_lucas(3) == 14);
    CHECK(pell_lucas(4) == 34);
    // 70 = P_6 = 6^2 * P_1 + Q_4
    CHECK(pell(6) == 36 * pell(1) + pell_lucas(4));
    auto oracle = pell_lucas_by_recurrence(300);
    for (unsigned long k = 0; k <= 300; ++k) CHECK(pell_lucas(k) == oracle[k]);
}

TEST_CASE("Q_k = P_{k+1} + P_{k-1}") {
    for (unsigned long k = 1; k <= 200; ++k) {
        CHECK(pell_lucas(k) == pell(k + 1) + pell(k - 1));
    }
}

TEST_CASE("binet evaluation is exact") {
    CHECK(pell_binet_exact(0) == 0);
    CHECK(pell_binet_exact(6) == 70);
    CHECK(pell_binet_exact(50) == pell(50));
    auto oracle = pell_by_recurrence(2000);
    for (unsigned long n = 0; n <= 2000; n += (n < 64 ? 1 : 37)) {
        CHECK(pell_binet_exact(n) == oracle[n]);
    }
}

TEST_CASE("quadratic integer ring") {
    ZSqrt2 a = ZSqrt2::unit_alpha();
    ZSqrt2 b = ZSqrt2::unit_beta();
    CHECK(a.norm() == -1);
    CHECK(b.norm() == -1);
    CHECK(a * b == ZSqrt2(-1, 0));       // alpha beta = -1
    CHECK(a + b == ZSqrt2(2, 0));        // alpha + beta = 2
    CHECK(a.pow(2) == ZSqrt2(3, 2));     // alpha^2 = 3 + 2 sqrt2
    CHECK(a.pow(7) * a.pow(5) == a.pow(12));
    CHECK(a.pow(9).norm() == -1);
    CHECK(a.pow(10).norm() == 1);
    CHECK(a.conj() == b);
}

TEST_CASE("digit_count examples") {
    CHECK(digit_count(2, 3) == 1);
    CHECK(digit_count(0, 5) == 1);
    CHECK(digit_count(34, 6) == 2);
    CHECK(digit_count(35, 6) == 2);
    CHECK(digit_count(36, 6) == 3);
    CHECK(digit_count(999, 10) == 3);
    CHECK(digit_count(1000, 10) == 4);
    CHECK_THROWS_AS(digit_count(5, 1), std::invalid_argument);
    CHECK_THROWS_AS(digit_count(5, 0), std::invalid_argument);
}

TEST_CASE("digit_count brackets the value between powers") {
    std::mt19937_64 rng(20240711);
    std::uniform_int_distribution<unsigned long> dist(1, 1000000);
    for (int iter = 0; iter < 400; ++iter) {
        Nat n = dist(rng);
        for (unsigned b = 2; b <= 10; ++b) {
            unsigned long d = digit_count(n, b);
            CHECK(pow_nat(b, d - 1) <= n);
            CHECK(n < pow_nat(b, d));
        }
    }
    // boundary cases
    for (unsigned b = 2; b <= 10; ++b) {
        for (unsigned long e = 1; e <= 20; ++e) {
            Nat p = pow_nat(b, e);
            CHECK(digit_count(p, b) == e + 1);
            CHECK(digit_count(p - 1, b) == e);
        }
    }
}

TEST_CASE("concat_check examples") {
    auto r1 = concat_check(Equation::eq1, 6, 6, 1, 4);
    CHECK(r1.holds);
    CHECK(r1.digits == 2);
    auto r2 = concat_check(Equation::eq2, 2, 5, 3, 1);
    CHECK(r2.holds);
    CHECK(r2.digits == 1);
    auto r3 = concat_check(Equation::eq1, 2, 6, 1, 4);
    CHECK(!r3.holds);
}

TEST_CASE("trailing-term digit window of valid concatenations") {
    // Q_k < b^d <= b Q_k for eq1, P_k < b^d <= b P_k for eq2 (P_k >= 1):
    // these follow from d being the digit count of the trailing term.
    for (unsigned b = 2; b <= 10; ++b) {
        for (unsigned long k = 0; k <= 200; ++k) {
            Nat qk = pell_lucas(k);
            unsigned long d = digit_count(qk, b);
            Nat bd = pow_nat(b, d);
            CHECK(qk < bd);
            CHECK(bd <= b * qk);

            Nat pk = pell(k);
            if (pk >= 1) {
                unsigned long d2 = digit_count(pk, b);
                Nat bd2 = pow_nat(b, d2);
                CHECK(pk < bd2);
                CHECK(bd2 <= b * pk);
            }
        }
    }
}

TEST_CASE("digit count against the certified log bounds") {
    // (k-2) log alpha / log b < d < 1 + (k+1) log alpha / log b
    const mpfr_prec_t prec = 128;
    for (unsigned b = 2; b <= 10; ++b) {
        RealBall ratio = log_alpha(prec) / log_nat(b, prec);
        for (unsigned long k = 0; k <= 200; ++k) {
            unsigned long d = digit_count(pell_lucas(k), b);
            RealBall d_ball = RealBall::from_ui(d, prec);
            if (k >= 2) {
                CHECK(ratio.mul_ui(k - 2).certainly_less(d_ball));
            }
            RealBall upper = RealBall::from_ui(1, prec) + ratio.mul_ui(k + 1);
            CHECK(d_ball.certainly_less(upper));
        }
    }
}

TEST_CASE("sandwich inequalities against certified alpha powers") {
    const mpfr_prec_t prec = 160;
    RealBall a = alpha_ball(prec);
    {
        // n = 1: P_1 = alpha^0 exactly, the only equality case
        RealBall p1 = RealBall::from_ui(1, prec);
        CHECK(a.recip().certainly_leq(p1));
        CHECK(a.recip().certainly_leq(RealBall::from_ui(2, prec)));
        CHECK(RealBall::from_ui(2, prec).certainly_less(a.pow_ui(2)));
    }
    RealBall apow = RealBall::from_ui(1, prec);  // alpha^{n-2} from n = 2 on
    for (unsigned long n = 2; n <= 500; ++n) {
        // apow tracks alpha^{n-2}
        RealBall pn = RealBall::from_integer(pell(n), prec);
        RealBall qn = RealBall::from_integer(pell_lucas(n), prec);
        CHECK(apow.certainly_leq(pn));
        CHECK(pn.certainly_leq(apow * a));            // P_n <= alpha^{n-1}
        CHECK(apow.certainly_leq(qn));
        CHECK(qn.certainly_less(apow * a.pow_ui(3)));  // Q_n < alpha^{n+1}
        apow = apow * a;
    }
}
