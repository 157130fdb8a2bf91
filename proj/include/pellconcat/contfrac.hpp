#pragma once

#include "pellconcat/ball.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pellconcat {

using BallFn = std::function<RealBall(mpfr_prec_t)>;

struct StopRule {
    enum class Kind { term_count, denominator_exceeds };
    Kind kind = Kind::term_count;
    std::size_t terms = 0;
    mpz_class threshold = 0;

    static StopRule term_count(std::size_t n) { return {Kind::term_count, n, 0}; }
    static StopRule denominator_exceeds(mpz_class t) {
        return {Kind::denominator_exceeds, 0, std::move(t)};
    }
};

// Certified partial quotients and exact convergents of an irrational target.
// Every partial quotient was validated by the interval-floor rule at two
// distinct precisions. Immutable once returned; extension produces a new
// value.
class CFExpansion {
  public:
    std::string descriptor;
    unsigned base = 0;   // nonzero when the target is log(base)/log(1+sqrt 2)
    std::vector<mpz_class> quotients;                          // a_0 .. a_N
    std::vector<std::pair<mpz_class, mpz_class>> convergents;  // (p_t, q_t)
    mpfr_prec_t certified_bits = 0;

    std::size_t size() const { return quotients.size(); }
    const mpz_class& a(std::size_t t) const { return quotients.at(t); }
    const mpz_class& p(std::size_t t) const { return convergents.at(t).first; }
    const mpz_class& q(std::size_t t) const { return convergents.at(t).second; }

    BallFn target;   // retained so deeper terms can be certified on demand

    // resume state per certification pass, so extension continues where the
    // expansion stopped instead of starting over
    struct Resume {
        RealBall x;   // complete quotient after the last accepted term
        mpfr_prec_t bits = 0;
        bool alive = false;
    };
    Resume work, check;
};

// Expansion of an arbitrary positive irrational given as a ball recipe.
CFExpansion expand_target(BallFn target, std::string descriptor, const StopRule& rule,
                          const PrecisionPolicy& policy = PrecisionPolicy::defaults());

// tau = log(base) / log(1 + sqrt 2)
CFExpansion expand(unsigned base, const StopRule& rule,
                   const PrecisionPolicy& policy = PrecisionPolicy::defaults());

BallFn log_ratio_target(unsigned base);

// Same expansion carried at least as far as rule requires.
CFExpansion extended(const CFExpansion& cf, const StopRule& rule);

struct DenominatorHit {
    CFExpansion cf;      // possibly deeper than the input
    std::size_t index;   // minimal t with q_t > M
};
DenominatorHit first_denominator_exceeding(const CFExpansion& cf, const mpz_class& M);

struct MaxQuotient {
    CFExpansion cf;
    std::size_t depth;    // minimal N with q_N > M
    mpz_class value;      // a(M) = max a_i over i <= depth
    std::size_t argmax;   // first index attaining the max
};
MaxQuotient max_partial_quotient(const CFExpansion& cf, const mpz_class& M);

// Certified 1/(a(M)+2): |tau - x/y| >= legendre_rational_gap / y^2 for all
// 0 < y < M.
RealBall legendre_rational_gap(const mpz_class& a_of_M, mpfr_prec_t prec);

}  // namespace pellconcat
