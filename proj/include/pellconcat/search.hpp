#pragma once

#include "pellconcat/bounds.hpp"
#include "pellconcat/reduction.hpp"
#include "pellconcat/sequences.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace pellconcat {

// A verified tuple with exact witnesses: lhs = term1 + term2.
struct Solution {
    Equation eq = Equation::eq1;
    unsigned base = 0;
    unsigned long digits = 0;   // d
    unsigned long n = 0, m = 0, k = 0;
    Nat lhs;     // P_n
    Nat term1;   // b^d P_m (eq1) or b^d Q_m (eq2)
    Nat term2;   // Q_k (eq1) or P_k (eq2)
    bool degenerate = false;   // eq1 family with m = 0, P_m = 0

    auto key() const { return std::tuple(base, n, m, k); }
    friend bool operator==(const Solution& a, const Solution& b) {
        return a.eq == b.eq && a.key() == b.key() && a.digits == b.digits;
    }
};

struct SearchConfig {
    Equation eq = Equation::eq1;
    unsigned base_min = 2;
    unsigned base_max = 10;
    unsigned long n_max = 0;
    unsigned long m_max = 0;
    unsigned long k_max = ~0UL;
    bool include_degenerate = false;   // eq1: also scan m = 0
};

// Exact enumeration over the configured ranges, sorted by (b, n, m, k).
// eq1 scans m >= 1 (unless include_degenerate), n in [m+1, n_max],
// k <= n-2; eq2 scans m >= 0, k <= n-1.
std::vector<Solution> brute_force(const SearchConfig& cfg);

// The m = 0 family of eq1 (P_n = Q_k), reported separately and flagged.
std::vector<Solution> degenerate_scan_eq1(unsigned base_min, unsigned base_max,
                                          unsigned long n_max = 64);

struct PipelineReport {
    Equation eq = Equation::eq1;
    unsigned base = 0;
    AbsoluteBoundReport absolute;
    std::optional<ContradictionCertificate> phase1_legendre;   // eq1
    std::optional<PhaseReport> phase1_reduction;               // eq2
    mpz_class phase1_M;
    unsigned long m_bound = 0;            // 100 once phase 1 certifies
    unsigned long gap_bound = 0;          // certified bound on n-k
    mpz_class pre_reduction_n_bound;      // n bound after substituting the gap
    mpz_class phase2_M;
    PhaseReport phase2;
    // second reduction pass: once n < W is proved, d < 1.3 (n+1) caps the
    // coefficient at a small modulus and the lemma bites much harder
    mpz_class refined_M;
    std::optional<PhaseReport> phase2_refined;
    unsigned long n_bound = 0;            // final searchable bound on n
    SearchConfig final_ranges;
    std::vector<Solution> solutions;
    std::vector<Solution> degenerate_solutions;
};

// Full certified pipeline for one (equation, base): absolute bound,
// phase 1 (m <= 100), gap bound, phase 2 (small n bound), exhaustive search.
PipelineReport run_pipeline(Equation eq, unsigned base, unsigned jobs = 1,
                            const PrecisionPolicy& policy = PrecisionPolicy::defaults());

enum class CellComparison { match, dominated, mismatch };

struct TableCell {
    std::string table;
    std::string row;
    unsigned base = 0;
    std::string expected;
    std::string actual;
    CellComparison cmp = CellComparison::match;
    bool mismatch_allowed = false;
};

struct VerificationReport {
    std::vector<TableCell> cells;
    bool passed() const {
        for (const auto& c : cells) {
            if (c.cmp == CellComparison::mismatch && !c.mismatch_allowed) return false;
        }
        return true;
    }
};

// Recomputes the published per-base tables (both phase-1 tables and both
// phase-2 tables) and marks each cell MATCH / DOMINATED / MISMATCH.
// Mismatches are data, not faults; passed() ignores the known-discrepancy
// rows.
VerificationReport verify_reference_tables(unsigned jobs = 1);

const char* to_string(CellComparison c);

// The published tables number convergents from 1 (q_1 = a_0/1); internal
// indices are 0-based with q_0 = 1. Reports and comparisons use the
// published convention.
constexpr std::size_t published_index(std::size_t internal) { return internal + 1; }

}  // namespace pellconcat
