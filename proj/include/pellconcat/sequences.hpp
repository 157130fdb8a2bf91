#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <utility>

namespace pellconcat {

// Exact nonnegative big integer. All sequence arithmetic is exact; nothing in
// this module ever rounds.
using Nat = mpz_class;

// eq1: P_n = b^d * P_m + Q_k   (d = digits of Q_k in base b)
// eq2: P_n = b^d * Q_m + P_k   (d = digits of P_k in base b)
enum class Equation : int { eq1 = 1, eq2 = 2 };

inline const char* equation_name(Equation eq) {
    return eq == Equation::eq1 ? "P_n = b^d*P_m + Q_k" : "P_n = b^d*Q_m + P_k";
}

// Element a + c*sqrt(2) of Z[sqrt(2)], exact coefficients.
struct ZSqrt2 {
    mpz_class a;
    mpz_class c;

    ZSqrt2() : a(0), c(0) {}
    ZSqrt2(mpz_class a_, mpz_class c_) : a(std::move(a_)), c(std::move(c_)) {}

    static ZSqrt2 unit_alpha() { return {1, 1}; }   // 1 + sqrt(2), norm -1
    static ZSqrt2 unit_beta() { return {1, -1}; }   // 1 - sqrt(2)

    ZSqrt2 conj() const { return {a, -c}; }
    mpz_class norm() const { return a * a - 2 * c * c; }

    friend ZSqrt2 operator+(const ZSqrt2& x, const ZSqrt2& y) {
        return {x.a + y.a, x.c + y.c};
    }
    friend ZSqrt2 operator-(const ZSqrt2& x, const ZSqrt2& y) {
        return {x.a - y.a, x.c - y.c};
    }
    friend ZSqrt2 operator*(const ZSqrt2& x, const ZSqrt2& y) {
        // (a + c*s)(a' + c'*s) = aa' + 2cc' + (ac' + a'c)s   with s^2 = 2
        return {x.a * y.a + 2 * x.c * y.c, x.a * y.c + x.c * y.a};
    }
    friend bool operator==(const ZSqrt2& x, const ZSqrt2& y) {
        return x.a == y.a && x.c == y.c;
    }

    ZSqrt2 pow(unsigned long e) const;
};

// P_n by fast doubling. P_0 = 0, P_1 = 1, P_n = 2P_{n-1} + P_{n-2}.
Nat pell(unsigned long n);

// Q_k. Q_0 = Q_1 = 2, same recurrence.
Nat pell_lucas(unsigned long k);

// Evaluates (alpha^n - beta^n) / (2 sqrt 2) exactly in Z[sqrt 2]. Throws
// std::logic_error if the quotient fails to be a rational integer, which
// would indicate broken ring arithmetic.
Nat pell_binet_exact(unsigned long n);

// Number of base-b digits of value: floor(log_b value) + 1 for value >= 1,
// and 1 for value = 0. Decided by exact comparisons against powers of b,
// never by floating logarithms. Throws std::invalid_argument for base < 2.
unsigned long digit_count(const Nat& value, unsigned base);

// b^e as an exact integer.
Nat pow_nat(unsigned base, unsigned long e);

struct ConcatCheck {
    bool holds;
    unsigned long digits;   // d used on the right-hand side
};

// Exact test of P_n = b^d * P_m + Q_k (eq1) or P_n = b^d * Q_m + P_k (eq2),
// with d the digit count of the trailing term.
ConcatCheck concat_check(Equation eq, unsigned base, unsigned long n, unsigned long m,
                         unsigned long k);

}  // namespace pellconcat
