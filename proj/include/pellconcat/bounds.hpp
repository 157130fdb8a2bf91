#pragma once

#include "pellconcat/ball.hpp"
#include "pellconcat/sequences.hpp"

#include <string>
#include <vector>

namespace pellconcat {

// A certified numeric check backing a published constant failed; the chain
// must abort rather than continue from an unproven stage.
class CertificateError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Certified upper bound on a logarithmic height.
struct HeightValue {
    RealBall value;
};

// h(p/q) = log max(|p|, q) for coprime p, q with q > 0.
HeightValue height_rational(const mpz_class& p, const mpz_class& q, mpfr_prec_t prec = 192);

// Closed-form upper bound on h(gamma_3) for the composite algebraic number
// of each equation's second linear form:
//   eq1: (3(n-k)+4)/2 * log alpha + 5/2 * log 2   (m >= 1, n-k >= 2)
//   eq2: (3(n-k)+8)/2 * log alpha + 5/2 * log 2   (n-k >= 1)
HeightValue height_composite_gamma3(Equation eq, unsigned long m, unsigned long n_minus_k,
                                    mpfr_prec_t prec = 192);

struct MatveevNumber {
    RealBall A;         // chosen A_j
    RealBall height;    // certified upper bound on h(gamma_j)
    RealBall abs_log;   // certified upper bound on |log gamma_j|
};

// Instance data for the lower bound on |gamma_1^{b_1} ... gamma_s^{b_s} - 1|.
// The factory certifies A_j >= max(D h(gamma_j), |log gamma_j|, 0.16) and
// B >= 1.
struct MatveevInstance {
    unsigned s = 0;
    unsigned D = 1;
    RealBall B;
    std::vector<RealBall> A;

    static MatveevInstance make(unsigned D, RealBall B, std::vector<MatveevNumber> numbers,
                                mpfr_prec_t prec = 192);
};

// 1.4 * 30^{s+3} * s^{4.5} * D^2 (1 + log D), the parameter-free factor.
RealBall matveev_leading_factor(unsigned s, unsigned D, mpfr_prec_t prec = 192);

// E with |Lambda| >= exp(-E) for nonzero forms:
// E = leading(s, D) * (1 + log B) * A_1 ... A_s.
RealBall matveev_exponent(const MatveevInstance& inst);

// Bound solver: if l >= 1, H > (4 l^2)^l and H > L / (log L)^l then
// L < 2^l H (log H)^l; returns that certified bound. Throws
// std::domain_error when the hypothesis on H fails.
RealBall lemma7_solve(unsigned l, const RealBall& H);

struct BoundStage {
    std::string id;
    std::string b_role;        // B used at this stage, empty when none
    RealBall computed;         // our certified evaluation
    std::string anchor;        // published rounding propagated down the chain
    bool anchor_is_upper;      // computed <= anchor, certified
};

struct AbsoluteBoundReport {
    Equation eq = Equation::eq1;
    unsigned base = 0;
    std::vector<BoundStage> stages;
    unsigned lemma7_l = 2;
    RealBall lemma7_H;
    RealBall final_bound;      // certified: any solution has n < final_bound
    mpz_class final_bound_int; // integer form (ceiling)
    RealBall published_form;   // published closed form at this base
    bool within_published;     // final_bound <= published_form, certified
};

// Replays the equation's bound chain with certified arithmetic. Each stage
// is evaluated from the previous stage's published anchor and must stay
// below its own anchor, otherwise CertificateError is thrown.
AbsoluteBoundReport absolute_bound(Equation eq, unsigned base, mpfr_prec_t prec = 256);

// Certified X with: n < c (1 + log(1.3 (n+1))) implies n < X.
mpz_class solve_log_linear_bound(const RealBall& c, mpfr_prec_t prec = 256);

}  // namespace pellconcat
