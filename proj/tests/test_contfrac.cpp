#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pellconcat/contfrac.hpp"
#include "pellconcat/sequences.hpp"

using namespace pellconcat;

namespace {

const mpz_class kM("91200000000000000000000000000");  // 9.12e28

void check_invariants(const CFExpansion& cf) {
    REQUIRE(cf.size() >= 2);
    CHECK(cf.q(0) == 1);
    for (std::size_t t = 1; t < cf.size(); ++t) {
        CHECK(cf.a(t) >= 1);
        if (t >= 2) CHECK(cf.q(t - 1) < cf.q(t));
        // p_t q_{t-1} - p_{t-1} q_t = (-1)^{t-1}
        mpz_class det = cf.p(t) * cf.q(t - 1) - cf.p(t - 1) * cf.q(t);
        CHECK(det == ((t - 1) % 2 == 0 ? 1 : -1));
    }
}

}  // namespace

TEST_CASE("first terms and stopping rules") {
    // log 2 < log alpha so a_0 = 0 for b = 2; b >= 3 has a_0 >= 1
    CFExpansion cf2 = expand(2, StopRule::term_count(12));
    CHECK(cf2.a(0) == 0);
    CHECK(cf2.base == 2);
    check_invariants(cf2);

    CFExpansion cf3 = expand(3, StopRule::term_count(12));
    CHECK(cf3.a(0) == 1);  // log 3 / log alpha = 1.246...
    check_invariants(cf3);

    // published stop indices, 1-based in the tables: q_56 (b=2), q_43 (b=6)
    CFExpansion big2 = expand(2, StopRule::denominator_exceeds(mpz_class("100000000000000000000000000000")));
    CHECK(big2.size() == 56);  // a_0 .. a_55, last convergent is published q_56
    CHECK(big2.q(big2.size() - 1) > mpz_class("100000000000000000000000000000"));

    CFExpansion big6 = expand(6, StopRule::denominator_exceeds(mpz_class("600000000000000000000000000000")));
    CHECK(big6.size() == 43);
    check_invariants(big6);
}

TEST_CASE("expansion invariants and approximation quality") {
    for (unsigned b : {2u, 5u, 7u, 10u}) {
        CFExpansion cf = expand(b, StopRule::term_count(40));
        check_invariants(cf);
        // |tau - p_t/q_t| < 1/(q_t q_{t+1})
        const mpfr_prec_t prec = 512;
        RealBall tau = log_nat(b, prec) / log_alpha(prec);
        for (std::size_t t = 0; t + 1 < cf.size(); ++t) {
            RealBall err = (tau - RealBall::from_ratio(cf.p(t), cf.q(t), prec)).abs();
            RealBall cap = RealBall::from_ratio(1, cf.q(t) * cf.q(t + 1), prec);
            CHECK(err.certainly_less(cap));
        }
    }
}

TEST_CASE("recomputation at doubled precision is stable") {
    CFExpansion cf = expand(5, StopRule::term_count(60));
    PrecisionPolicy pol;
    pol.initial_bits = cf.certified_bits;
    pol.max_bits = 1 << 16;
    CFExpansion again = expand(5, StopRule::term_count(60), pol);
    CHECK(cf.quotients == again.quotients);
    CHECK(cf.convergents == again.convergents);
}

TEST_CASE("extension reuses the certified prefix") {
    CFExpansion cf = expand(2, StopRule::term_count(10));
    CFExpansion deeper = extended(cf, StopRule::term_count(45));
    CHECK(deeper.size() >= 45);
    CHECK(std::equal(cf.quotients.begin(), cf.quotients.end(), deeper.quotients.begin()));
    check_invariants(deeper);
}

TEST_CASE("first denominator exceeding a threshold") {
    CFExpansion cf = expand(2, StopRule::term_count(8));
    auto hit0 = first_denominator_exceeding(cf, 0);
    CHECK(hit0.index == 0);
    CHECK(hit0.cf.q(0) == 1);

    // 6M for the eq1 phase-2 modulus
    mpz_class M6 = 6 * mpz_class("65500000000000000");
    auto hit = first_denominator_exceeding(cf, M6);
    CHECK(hit.cf.q(hit.index) > M6);
    REQUIRE(hit.index >= 1);
    CHECK(hit.cf.q(hit.index - 1) <= M6);

    mpz_class M10 = 6 * mpz_class("70000000000000000");
    auto hit10 = first_denominator_exceeding(expand(10, StopRule::term_count(8)), M10);
    CHECK(hit10.cf.q(hit10.index) > M10);
    CHECK(hit10.cf.q(hit10.index - 1) <= M10);
}

TEST_CASE("largest partial quotient below the modulus") {
    // published rows: value and 1-based index of a(M)
    struct Row {
        unsigned b;
        unsigned long value;
        std::size_t index1;
    };
    for (Row row : {Row{2, 100, 28}, Row{6, 509, 9}, Row{7, 33, 8}}) {
        MaxQuotient mq = max_partial_quotient(expand(row.b, StopRule::term_count(8)), kM);
        CHECK(mq.value == row.value);
        CHECK(mq.argmax + 1 == row.index1);
        CHECK(mq.cf.q(mq.depth) > kM);
        CHECK(mq.cf.q(mq.depth - 1) <= kM);
        for (std::size_t i = 0; i <= mq.depth; ++i) CHECK(mq.cf.a(i) <= mq.value);
    }
}

TEST_CASE("legendre gap factor") {
    CHECK(!legendre_rational_gap(509, 128).certainly_less(RealBall::from_ratio(1, 511, 128)));
    CHECK(!RealBall::from_ratio(1, 511, 128).certainly_less(legendre_rational_gap(509, 128)));
    CHECK(!legendre_rational_gap(33, 128).certainly_less(RealBall::from_ratio(1, 35, 128)));
    // every a_i beyond a_0 is >= 1, so the factor never exceeds 1/3
    for (unsigned b = 2; b <= 10; ++b) {
        MaxQuotient mq = max_partial_quotient(expand(b, StopRule::term_count(8)), kM);
        CHECK(mq.value >= 1);
        CHECK(legendre_rational_gap(mq.value, 128)
                  .certainly_leq(RealBall::from_ratio(1, 3, 128)));
    }
}

TEST_CASE("legendre lower bound at toy scale") {
    // |tau - x/y| >= 1/((a(M)+2) y^2) for all 0 < y < M, M = 10^4
    mpz_class M(10000);
    MaxQuotient mq = max_partial_quotient(expand(2, StopRule::term_count(8)), M);
    const mpfr_prec_t prec = 192;
    RealBall tau = log_nat(2, prec) / log_alpha(prec);
    RealBall factor = legendre_rational_gap(mq.value, prec);
    for (unsigned long y = 1; y < 10000; ++y) {
        // x = nearest integer to tau y is the only candidate that could
        // violate the bound
        RealBall ty = tau.mul_ui(y);
        auto fl = ty.certified_floor();
        REQUIRE(fl);
        for (int dx = 0; dx <= 1; ++dx) {
            mpz_class x = *fl + dx;
            if (x <= 0) continue;
            RealBall err = (tau - RealBall::from_ratio(x, y, prec)).abs();
            RealBall cap = factor / RealBall::from_ui(y, prec).pow_ui(2);
            CHECK(cap.certainly_leq(err));
        }
    }
}
