#include "pellconcat/sequences.hpp"

#include <vector>

namespace pellconcat {

namespace {

// (P_n, P_{n+1}) by the doubling identities
//   P_{2k}   = 2 P_k (P_{k+1} - P_k)
//   P_{2k+1} = P_{k+1}^2 + P_k^2
std::pair<mpz_class, mpz_class> pell_pair(unsigned long n) {
    if (n == 0) return {mpz_class(0), mpz_class(1)};
    auto [a, b] = pell_pair(n >> 1);  // a = P_k, b = P_{k+1}
    mpz_class even = 2 * a * (b - a);
    mpz_class odd = a * a + b * b;
    if (n & 1UL) return {odd, 2 * odd + even};
    return {even, odd};
}

}  // namespace

ZSqrt2 ZSqrt2::pow(unsigned long e) const {
    ZSqrt2 result{1, 0};
    ZSqrt2 base = *this;
    while (e != 0) {
        if (e & 1UL) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

Nat pell(unsigned long n) { return pell_pair(n).first; }

Nat pell_lucas(unsigned long k) {
    // Q_k = P_{k+1} + P_{k-1} = 2(P_{k+1} - P_k), also valid at k = 0.
    auto [pk, pk1] = pell_pair(k);
    return 2 * (pk1 - pk);
}

Nat pell_binet_exact(unsigned long n) {
    ZSqrt2 diff = ZSqrt2::unit_alpha().pow(n) - ZSqrt2::unit_beta().pow(n);
    // alpha^n - beta^n must be a pure sqrt(2) multiple with even coefficient:
    // dividing by 2 sqrt 2 then gives the rational integer diff.c / 2.
    if (diff.a != 0 || mpz_odd_p(diff.c.get_mpz_t())) {
        throw std::logic_error("pell_binet_exact: quotient is not a rational integer");
    }
    return diff.c / 2;
}

unsigned long digit_count(const Nat& value, unsigned base) {
    if (base < 2) throw std::invalid_argument("digit_count: base must be >= 2");
    if (value < 0) throw std::invalid_argument("digit_count: value must be >= 0");
    if (value < base) return 1;  // covers value = 0 as one digit
    // Largest e with base^e <= value, found by squaring up then descending.
    std::vector<mpz_class> squares{mpz_class(base)};  // base^(2^i)
    while (true) {
        mpz_class next = squares.back() * squares.back();
        if (next > value) break;
        squares.push_back(next);
    }
    mpz_class cur = squares.back();
    unsigned long e = 1UL << (squares.size() - 1);
    for (std::size_t i = squares.size() - 1; i-- > 0;) {
        mpz_class t = cur * squares[i];
        if (t <= value) {
            cur = t;
            e += 1UL << i;
        }
    }
    return e + 1;
}

Nat pow_nat(unsigned base, unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

ConcatCheck concat_check(Equation eq, unsigned base, unsigned long n, unsigned long m,
                         unsigned long k) {
    if (base < 2) throw std::invalid_argument("concat_check: base must be >= 2");
    Nat trailing = (eq == Equation::eq1) ? pell_lucas(k) : pell(k);
    unsigned long d = digit_count(trailing, base);
    Nat middle = (eq == Equation::eq1) ? pell(m) : pell_lucas(m);
    Nat rhs = pow_nat(base, d) * middle + trailing;
    return {pell(n) == rhs, d};
}

}  // namespace pellconcat
