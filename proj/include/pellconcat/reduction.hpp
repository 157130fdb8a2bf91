#pragma once

#include "pellconcat/bounds.hpp"
#include "pellconcat/contfrac.hpp"
#include "pellconcat/sequences.hpp"

#include <map>
#include <mutex>
#include <optional>

namespace pellconcat {

// No convergent in the scan window produced a certified positive epsilon.
class NoPositiveEpsilon : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The derived lower bound failed to exceed the ceiling it must contradict.
class ContradictionFailed : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data for one application of the reduction lemma to
// 0 < |m tau - n + mu| < A B^{-w} with m <= M.
struct ReductionInstance {
    BallFn tau;
    BallFn mu;
    BallFn A;   // A > 0
    BallFn B;   // B > 1
    mpz_class M;
    std::string label;
    unsigned base = 0;   // nonzero when tau = log(base)/log alpha
    unsigned max_convergent_advance = 20;
    // After the first certified positive epsilon, also evaluate this many
    // further convergents and keep the smallest w bound. Every candidate is a
    // complete certificate on its own.
    unsigned improve_window = 0;
    PrecisionPolicy policy = PrecisionPolicy::defaults();
};

struct ReductionOutcome {
    std::size_t convergent_index = 0;
    mpz_class q;
    RealBall epsilon;    // certified enclosure with positive lower bound
    mpz_class w_bound;   // least W such that no solution has w >= W
    unsigned advances = 0;
    mpfr_prec_t bits_used = 0;
};

// Shared expansion plus |tau q_t - p_t| enclosures, reused across the many
// reductions against one tau. Read paths are thread safe.
class ReductionContext {
  public:
    ReductionContext(CFExpansion cf, const mpz_class& M, unsigned advance_window);
    const CFExpansion& cf() const { return cf_; }
    std::size_t first_index() const { return first_index_; }
    const mpz_class& modulus() const { return modulus_; }
    // a(M+1): max partial quotient with the lemma window covering y <= M
    const mpz_class& quotient_cap() const { return quotient_cap_; }
    // certified enclosure of |tau q_t - p_t|, an upper bound for ||tau q_t||
    RealBall tau_remainder(std::size_t t, mpfr_prec_t bits);

  private:
    CFExpansion cf_;
    std::size_t first_index_ = 0;
    mpz_class modulus_;
    mpz_class quotient_cap_;
    std::map<std::pair<std::size_t, mpfr_prec_t>, RealBall> cache_;
    std::mutex mu_;
};

// Scans convergent denominators q > 6M in increasing order and returns the
// certificate from the first q whose epsilon = ||mu q|| - M ||tau q|| is
// certified positive. Throws NoPositiveEpsilon after the advance window and
// PrecisionExhausted when an epsilon never resolves its sign.
ReductionOutcome bd_reduce(const ReductionInstance& inst, ReductionContext* ctx = nullptr);

// Bound for cells whose mu lies within delta of r tau plus an integer. Such
// cells starve the reduction lemma: ||mu q|| tracks |r| ||tau q|| on every
// convergent, so epsilon never certifies positive. Writing y = d + r,
//   |d tau - n + mu| = |y tau - n' + delta| >= 1/((a+2) y) - delta
// by the partial-quotient gap, valid for 1 <= y <= M + r. For r < 0 the
// y >= 1 side holds once d > |r|, which the digit count guarantees whenever
// the trailing term reaches b^{|r|}; w_bound is lifted to cover that.
struct QuotientGapBound {
    mpz_class w_bound;
    int shift = 0;          // r
    RealBall mu_int_dist;   // certified enclosure of |mu - r tau - nearest integer|
    mpz_class a_cap;        // a(M+3) used
};

// Certifies the near-relation route for some |r| <= 2 when possible.
// nullopt means mu is certified away from every such relation.
std::optional<QuotientGapBound> quotient_gap_bound(const ReductionInstance& inst,
                                                   ReductionContext& ctx, Equation eq,
                                                   unsigned long cell_gap);

struct CellOutcome {
    unsigned long m = 0;
    unsigned long gap = 0;   // n - k
    enum class Method { reduction, quotient_gap } method = Method::reduction;
    ReductionOutcome red;               // when method == reduction
    QuotientGapBound gap_bound;         // when method == quotient_gap
    const mpz_class& w() const {
        return method == Method::reduction ? red.w_bound : gap_bound.w_bound;
    }
};

struct PhaseAggregate {
    mpz_class w_exclusive;   // max over cells: no solution has w >= this
    unsigned long worst_m = 0;
    unsigned long worst_gap = 0;
    std::size_t worst_index = 0;
    mpz_class worst_q;
    std::string worst_epsilon_lower;
};

struct PhaseReport {
    Equation eq = Equation::eq1;
    unsigned base = 0;
    int phase = 0;
    mpz_class M;
    std::vector<CellOutcome> cells;
    PhaseAggregate aggregate;
    std::string conclusion;
};

// mu recipes for the reduction phases
BallFn mu_eq1_cell(unsigned long m, unsigned long gap);   // log(P_m/(1/(2 sqrt2) - alpha^{-gap}))/log alpha
BallFn mu_eq2_cell(unsigned long m, unsigned long gap);   // log(2 sqrt2 Q_m/(1 - alpha^{-gap}))/log alpha
BallFn mu_eq2_phase1();                                   // log(2 sqrt2)/log alpha

// Phase 1 for eq2: one reduction with w = n-k-1, m-role d <= M.
PhaseReport eq2_phase1(unsigned base, const mpz_class& M,
                       const PrecisionPolicy& policy = PrecisionPolicy::defaults());

struct ContradictionCertificate {
    unsigned base = 0;
    mpz_class M;
    unsigned gap_floor = 0;
    mpz_class a_of_M;
    std::size_t a_index = 0;
    std::size_t depth = 0;
    RealBall derived_lower_bound;   // certified lower bound on d
    bool window_checked = false;    // log alpha alpha^g / (4.4 b) > M
};

// Phase 1 for eq1: Legendre partial-quotient contradiction. Derives
// d > log alpha * alpha^gap_floor / (2.2 b (a(M)+2)) and certifies that this
// exceeds M, which rules out m > 100. Throws ContradictionFailed otherwise.
ContradictionCertificate legendre_phase1_eq1(
    unsigned base, const mpz_class& M, unsigned gap_floor,
    const PrecisionPolicy& policy = PrecisionPolicy::defaults());

struct GridRange {
    unsigned long lo = 0;
    unsigned long hi = 0;   // inclusive
};

// Phase 2: one reduction per (m, n-k) cell, aggregated by max.
PhaseReport phase2(Equation eq, unsigned base, GridRange m_range, GridRange gap_range,
                   const mpz_class& M, unsigned jobs = 1,
                   const PrecisionPolicy& policy = PrecisionPolicy::defaults());

// Certified integer upper bound on n-k given m <= m_max.
unsigned long derive_gap_bound(Equation eq, unsigned base, unsigned long m_max,
                               mpfr_prec_t prec = 192);

}  // namespace pellconcat
