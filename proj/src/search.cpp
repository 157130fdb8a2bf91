#include "pellconcat/search.hpp"

#include <algorithm>

namespace pellconcat {

namespace {

// reference values reproduced by verify_reference_tables, indexed b = 2..10

struct Eq1Phase1Row {
    unsigned t;           // published convergent index with q_t beyond the threshold
    const char* q_gt;     // published threshold
    unsigned a_index;     // index attaining a(M)
    unsigned a_value;     // a(M)
};
constexpr Eq1Phase1Row kEq1Phase1[] = {
    {56, "1e29", 28, 100}, {59, "1e30", 27, 130}, {66, "2e29", 59, 110},
    {55, "1e29", 17, 163}, {43, "6e29", 9, 509},  {58, "1e29", 8, 33},
    {56, "1e29", 25, 34},  {53, "7e29", 5, 68},   {67, "3e29", 24, 52},
};

struct Eq2Phase1Row {
    unsigned t;
    unsigned gap_lt;      // published bound: n-k-1 < gap_lt
    const char* eps_gt;   // published lower bound on epsilon
};
constexpr Eq2Phase1Row kEq2Phase1[] = {
    {65, 89, "0.45"}, {64, 90, "0.24"}, {72, 90, "0.45"}, {63, 90, "0.40"}, {53, 93, "0.43"},
    {62, 90, "0.45"}, {63, 91, "0.49"}, {58, 91, "0.24"}, {73, 92, "0.17"},
};

struct Phase2Row {
    unsigned t;
    unsigned m;
    unsigned gap;
    const char* eps_gt;
    unsigned n_incl;      // published inclusive bound on n
};
constexpr Phase2Row kEq1Phase2[] = {
    {37, 27, 58, "8e-6", 64},  {33, 26, 53, "4e-5", 62}, {43, 15, 46, "0.002", 57},
    {34, 19, 28, "1e-4", 61},  {27, 22, 58, "1e-4", 55}, {35, 1, 41, "1e-4", 61},
    {39, 16, 47, "2e-4", 59},  {31, 27, 55, "6e-4", 58}, {43, 19, 33, "1e-4", 59},
};
constexpr Phase2Row kEq2Phase2[] = {
    {37, 28, 54, "1e-4", 60}, {33, 20, 48, "1e-3", 59}, {43, 7, 53, "9e-5", 59},
    {34, 30, 18, "2e-4", 59}, {27, 12, 41, "9e-5", 59}, {35, 27, 38, "1e-4", 57},
    {39, 3, 9, "7e-4", 56},   {31, 18, 38, "2e-4", 58}, {43, 8, 3, "3e-5", 59},
};

const mpz_class kEq1Phase1M("91200000000000000000000000000");       // 9.12e28
const mpz_class kEq2Phase1M("75000000000000000000000000000000");    // 7.5e31
const mpz_class kEq1Phase2M("65500000000000000");                   // 6.55e16
const mpz_class kEq2Phase2M("70000000000000000");                   // 7e16

constexpr unsigned kMBound = 100;
constexpr unsigned kGapFloor = 96;   // strict lower bound on n-k-2 once m > 100

void append_tables(const SearchConfig& cfg, unsigned base, std::vector<Nat>& pells,
                   std::vector<Nat>& trailing, std::vector<unsigned long>& digits,
                   std::vector<Nat>& powers, std::vector<Nat>& middle,
                   unsigned long k_top) {
    pells.assign(cfg.n_max + 1, 0);
    if (cfg.n_max >= 1) pells[1] = 1;
    for (unsigned long i = 2; i <= cfg.n_max; ++i) pells[i] = 2 * pells[i - 1] + pells[i - 2];

    trailing.assign(k_top + 1, 0);
    digits.assign(k_top + 1, 0);
    unsigned long max_d = 0;
    for (unsigned long k = 0; k <= k_top; ++k) {
        // k_top <= n_max - gap, so k+1 stays inside the Pell table
        trailing[k] = cfg.eq == Equation::eq1 ? Nat(2 * (pells[k + 1] - pells[k])) : pells[k];
        digits[k] = digit_count(trailing[k], base);
        max_d = std::max(max_d, digits[k]);
    }
    powers.assign(max_d + 1, 1);
    for (unsigned long d = 1; d <= max_d; ++d) powers[d] = powers[d - 1] * base;

    middle.assign(cfg.m_max + 1, 0);
    for (unsigned long m = 0; m <= cfg.m_max; ++m) {
        middle[m] = cfg.eq == Equation::eq1 ? (m <= cfg.n_max ? pells[m] : pell(m))
                                            : pell_lucas(m);
    }
}

}  // namespace

std::vector<Solution> brute_force(const SearchConfig& cfg) {
    std::vector<Solution> out;
    const unsigned long gap = cfg.eq == Equation::eq1 ? 2 : 1;
    if (cfg.n_max < gap) return out;

    for (unsigned base = cfg.base_min; base <= cfg.base_max; ++base) {
        std::vector<Nat> pells, trailing, powers, middle;
        std::vector<unsigned long> digits;
        unsigned long k_top = std::min(cfg.k_max, cfg.n_max - gap);
        append_tables(cfg, base, pells, trailing, digits, powers, middle, k_top);

        unsigned long m_lo = (cfg.eq == Equation::eq1 && !cfg.include_degenerate) ? 1 : 0;
        Nat term1, sum;
        for (unsigned long n = gap; n <= cfg.n_max; ++n) {
            const Nat& target = pells[n];
            for (unsigned long m = m_lo; m <= cfg.m_max; ++m) {
                if (cfg.eq == Equation::eq1 && m >= n) break;  // solutions have n > m
                unsigned long k_hi = std::min(k_top, n - gap);
                for (unsigned long k = 0; k <= k_hi; ++k) {
                    term1 = powers[digits[k]] * middle[m];
                    if (term1 > target) break;  // nondecreasing in k
                    sum = term1 + trailing[k];
                    if (sum == target) {
                        Solution s;
                        s.eq = cfg.eq;
                        s.base = base;
                        s.digits = digits[k];
                        s.n = n;
                        s.m = m;
                        s.k = k;
                        s.lhs = target;
                        s.term1 = term1;
                        s.term2 = trailing[k];
                        s.degenerate = (cfg.eq == Equation::eq1 && m == 0);
                        out.push_back(std::move(s));
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Solution& a, const Solution& b) { return a.key() < b.key(); });
    return out;
}

std::vector<Solution> degenerate_scan_eq1(unsigned base_min, unsigned base_max,
                                          unsigned long n_max) {
    std::vector<Solution> out;
    std::vector<Nat> pells(n_max + 1, 0);
    if (n_max >= 1) pells[1] = 1;
    for (unsigned long i = 2; i <= n_max; ++i) pells[i] = 2 * pells[i - 1] + pells[i - 2];
    for (unsigned base = base_min; base <= base_max; ++base) {
        for (unsigned long n = 0; n <= n_max; ++n) {
            for (unsigned long k = 0;; ++k) {
                Nat qk = pell_lucas(k);
                if (qk > pells[n_max]) break;
                if (qk == pells[n]) {
                    Solution s;
                    s.eq = Equation::eq1;
                    s.base = base;
                    s.digits = digit_count(qk, base);
                    s.n = n;
                    s.m = 0;
                    s.k = k;
                    s.lhs = pells[n];
                    s.term1 = 0;
                    s.term2 = qk;
                    s.degenerate = true;
                    out.push_back(std::move(s));
                }
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Solution& a, const Solution& b) { return a.key() < b.key(); });
    return out;
}

PipelineReport run_pipeline(Equation eq, unsigned base, unsigned jobs,
                            const PrecisionPolicy& policy) {
    if (base < 2) throw std::invalid_argument("run_pipeline: base must be >= 2");
    PipelineReport rep;
    rep.eq = eq;
    rep.base = base;
    rep.absolute = absolute_bound(eq, base);

    const mpfr_prec_t prec = 256;
    RealBall factor13 = RealBall::from_decimal("1.3", prec);

    // phase 1: every solution with m > 100 is ruled out
    rep.phase1_M = eq == Equation::eq1 ? kEq1Phase1M : kEq2Phase1M;
    {
        // d < 1.3 (n - m + 1) <= 1.3 (F(10) - 100) under m > 100, so the
        // phase-1 M must dominate that for every base in scope
        AbsoluteBoundReport worst = base == 10 ? rep.absolute : absolute_bound(eq, 10);
        RealBall d_cap = factor13 * worst.final_bound;
        if (!d_cap.certainly_leq(RealBall::from_integer(rep.phase1_M, prec))) {
            throw CertificateError("run_pipeline: phase-1 M below the certified d range");
        }
    }
    if (eq == Equation::eq1) {
        rep.phase1_legendre = legendre_phase1_eq1(base, rep.phase1_M, kGapFloor, policy);
    } else {
        PhaseReport ph1 = eq2_phase1(base, rep.phase1_M, policy);
        // m >= 101 forces n-k-1 >= 98; the reduction excludes w >= W
        if (ph1.aggregate.w_exclusive > 97) {
            throw CertificateError("run_pipeline: eq2 phase-1 bound too weak: w < " +
                                   ph1.aggregate.w_exclusive.get_str());
        }
        rep.phase1_reduction = std::move(ph1);
    }
    rep.m_bound = kMBound;

    rep.gap_bound = derive_gap_bound(eq, base, rep.m_bound);

    // substitute the gap bound into the second linear form's chain:
    // n < anchor * A3(gap) * log b * (1 + log(1.3 (n+1)))
    RealBall a3 = height_composite_gamma3(eq, 1, rep.gap_bound, prec).value.mul_ui(2);
    const char* anchor = eq == Equation::eq1 ? "1.94e12" : "2e12";
    RealBall c = RealBall::from_decimal(anchor, prec) * a3 * log_nat(base, prec);
    rep.pre_reduction_n_bound = solve_log_linear_bound(c, prec);

    rep.phase2_M = eq == Equation::eq1 ? kEq1Phase2M : kEq2Phase2M;
    {
        RealBall d_cap = factor13 * RealBall::from_integer(rep.pre_reduction_n_bound + 1, prec);
        if (!d_cap.certainly_leq(RealBall::from_integer(rep.phase2_M, prec))) {
            throw CertificateError("run_pipeline: phase-2 M below the certified d range");
        }
    }

    GridRange m_range{eq == Equation::eq1 ? 1UL : 0UL, rep.m_bound};
    GridRange gap_range{eq == Equation::eq1 ? 2UL : 1UL, rep.gap_bound};
    rep.phase2 = phase2(eq, base, m_range, gap_range, rep.phase2_M, jobs, policy);

    mpz_class w = rep.phase2.aggregate.w_exclusive;
    // refinement: solutions now have n <= w-1, so d < 1.3 (n+1) <= 1.3 w and
    // the lemma can be rerun with that far smaller modulus
    rep.refined_M = (13 * (w + 1) + 9) / 10;
    if (rep.refined_M < rep.phase2_M) {
        rep.phase2_refined = phase2(eq, base, m_range, gap_range, rep.refined_M, jobs, policy);
        if (rep.phase2_refined->aggregate.w_exclusive < w) {
            w = rep.phase2_refined->aggregate.w_exclusive;
        }
    }
    mpz_class n_bound = w - 1;
    rep.n_bound = n_bound.get_ui();

    rep.final_ranges.eq = eq;
    rep.final_ranges.base_min = base;
    rep.final_ranges.base_max = base;
    rep.final_ranges.n_max = rep.n_bound;
    rep.final_ranges.m_max = rep.m_bound;
    rep.final_ranges.k_max = rep.n_bound;
    rep.solutions = brute_force(rep.final_ranges);
    if (eq == Equation::eq1) {
        rep.degenerate_solutions = degenerate_scan_eq1(base, base, rep.n_bound);
    }
    return rep;
}

const char* to_string(CellComparison c) {
    switch (c) {
        case CellComparison::match: return "MATCH";
        case CellComparison::dominated: return "DOMINATED";
        case CellComparison::mismatch: return "MISMATCH";
    }
    return "?";
}

namespace {

TableCell make_cell(std::string table, std::string row, unsigned base, std::string expected,
                    std::string actual, CellComparison cmp, bool allowed) {
    return {std::move(table), std::move(row), base, std::move(expected), std::move(actual), cmp,
            allowed};
}

CellComparison cmp_exact(bool equal) {
    return equal ? CellComparison::match : CellComparison::mismatch;
}

}  // namespace

VerificationReport verify_reference_tables(unsigned jobs) {
    VerificationReport rep;
    const mpfr_prec_t prec = 256;

    for (unsigned base = 2; base <= 10; ++base) {
        const auto& row = kEq1Phase1[base - 2];
        // published q_t is our 0-based q_{t-1}
        std::size_t internal_t = row.t - 1;
        CFExpansion cf = expand(base, StopRule::term_count(internal_t + 1));
        RealBall threshold = RealBall::from_decimal(row.q_gt, prec);
        bool claim = threshold.certainly_less(RealBall::from_integer(cf.q(internal_t), prec));
        rep.cells.push_back(make_cell("eq1_phase1", "q_threshold", base,
                                      "q_" + std::to_string(row.t) + " > " + row.q_gt,
                                      "q_" + std::to_string(row.t) + " = " +
                                          cf.q(internal_t).get_str().substr(0, 8) + "...",
                                      cmp_exact(claim), false));
        MaxQuotient mq = max_partial_quotient(cf, kEq1Phase1M);
        rep.cells.push_back(make_cell("eq1_phase1", "a_of_M", base, std::to_string(row.a_value),
                                      mq.value.get_str(), cmp_exact(mq.value == row.a_value),
                                      false));
        rep.cells.push_back(make_cell("eq1_phase1", "a_of_M_index", base,
                                      std::to_string(row.a_index),
                                      std::to_string(published_index(mq.argmax)),
                                      cmp_exact(published_index(mq.argmax) == row.a_index),
                                      false));
        rep.cells.push_back(make_cell("eq1_phase1", "minimal_index", base,
                                      std::to_string(row.t),
                                      std::to_string(published_index(mq.depth)),
                                      cmp_exact(published_index(mq.depth) == row.t), true));
    }

    for (unsigned base = 2; base <= 10; ++base) {
        const auto& row = kEq2Phase1[base - 2];
        PhaseReport ph = eq2_phase1(base, kEq2Phase1M);
        bool index_match = published_index(ph.aggregate.worst_index) == row.t;
        rep.cells.push_back(make_cell("eq2_phase1", "q_index", base, "q_" + std::to_string(row.t),
                                      "q_" + std::to_string(published_index(ph.aggregate.worst_index)),
                                      cmp_exact(index_match), true));
        if (index_match) {
            RealBall floor_eps = RealBall::from_decimal(row.eps_gt, prec);
            bool eps_ok =
                floor_eps.certainly_leq(ph.cells[0].red.epsilon);
            rep.cells.push_back(make_cell("eq2_phase1", "epsilon", base,
                                          std::string("> ") + row.eps_gt,
                                          ph.aggregate.worst_epsilon_lower, cmp_exact(eps_ok),
                                          false));
        }
        mpz_class ours = ph.aggregate.w_exclusive;
        CellComparison cmp = ours == row.gap_lt
                                 ? CellComparison::match
                                 : (ours < row.gap_lt ? CellComparison::dominated
                                                      : CellComparison::mismatch);
        rep.cells.push_back(make_cell("eq2_phase1", "gap_bound", base,
                                      "n-k-1 < " + std::to_string(row.gap_lt),
                                      "n-k-1 < " + ours.get_str(), cmp, false));
    }

    auto phase2_table = [&](Equation eq, const char* table, const Phase2Row* rows,
                            const mpz_class& M, GridRange m_range, GridRange gap_range) {
        for (unsigned base = 2; base <= 10; ++base) {
            const auto& row = rows[base - 2];
            PhaseReport ph = phase2(eq, base, m_range, gap_range, M, jobs);
            rep.cells.push_back(
                make_cell(table, "q_index", base, "q_" + std::to_string(row.t),
                          "q_" + std::to_string(published_index(ph.aggregate.worst_index)),
                          cmp_exact(published_index(ph.aggregate.worst_index) == row.t), true));
            rep.cells.push_back(make_cell(table, "worst_m", base, std::to_string(row.m),
                                          std::to_string(ph.aggregate.worst_m),
                                          cmp_exact(ph.aggregate.worst_m == row.m), true));
            rep.cells.push_back(make_cell(table, "worst_gap", base, std::to_string(row.gap),
                                          std::to_string(ph.aggregate.worst_gap),
                                          cmp_exact(ph.aggregate.worst_gap == row.gap), true));
            mpz_class single = ph.aggregate.w_exclusive - 1;   // inclusive bound on n
            rep.cells.push_back(make_cell(table, "n_bound_single_pass", base,
                                          "n <= " + std::to_string(row.n_incl),
                                          "n <= " + single.get_str(),
                                          single <= row.n_incl ? CellComparison::dominated
                                                               : CellComparison::mismatch,
                                          true));
            // refined second pass with the coefficient capped by the first
            mpz_class m2 = (13 * (ph.aggregate.w_exclusive + 1) + 9) / 10;
            mpz_class ours = single;
            if (m2 < M) {
                PhaseReport ph2 = phase2(eq, base, m_range, gap_range, m2, jobs);
                if (ph2.aggregate.w_exclusive - 1 < ours) ours = ph2.aggregate.w_exclusive - 1;
            }
            CellComparison cmp = ours == row.n_incl
                                     ? CellComparison::match
                                     : (ours < row.n_incl ? CellComparison::dominated
                                                          : CellComparison::mismatch);
            rep.cells.push_back(make_cell(table, "n_bound", base,
                                          "n <= " + std::to_string(row.n_incl),
                                          "n <= " + ours.get_str(), cmp, false));
        }
    };

    phase2_table(Equation::eq1, "eq1_phase2", kEq1Phase2, kEq1Phase2M, {1, 100}, {3, 104});
    phase2_table(Equation::eq2, "eq2_phase2", kEq2Phase2, kEq2Phase2M, {0, 100}, {1, 106});

    return rep;
}

}  // namespace pellconcat
