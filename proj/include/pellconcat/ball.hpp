#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace pellconcat {

// Thrown when escalation reaches the precision ceiling without certifying.
class PrecisionExhausted : public std::runtime_error {
  public:
    PrecisionExhausted(std::string expression, mpfr_prec_t bits, std::string last_enclosure)
        : std::runtime_error("precision exhausted at " + std::to_string(bits) +
                             " bits while evaluating " + expression +
                             (last_enclosure.empty() ? "" : "; last enclosure " + last_enclosure)),
          expression_(std::move(expression)),
          bits_(bits),
          last_enclosure_(std::move(last_enclosure)) {}

    const std::string& expression() const { return expression_; }
    mpfr_prec_t bits() const { return bits_; }
    const std::string& last_enclosure() const { return last_enclosure_; }

  private:
    std::string expression_;
    mpfr_prec_t bits_;
    std::string last_enclosure_;
};

// Operation outside the certified domain (log of an interval touching 0,
// division by an interval containing 0, ...).
class BallDomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

struct PrecisionPolicy {
    mpfr_prec_t initial_bits = 128;
    mpfr_prec_t max_bits = 1 << 16;
    unsigned escalation_factor = 2;

    // Default policy; PELLCONCAT_PRECISION_MAX in the environment overrides
    // max_bits.
    static PrecisionPolicy defaults();
};

// Arbitrary-precision real with a certified error radius. The represented
// value always lies in [midpoint - radius, midpoint + radius]; every
// operation rounds outward so the output interval contains the exact image
// of the inputs.
class RealBall {
  public:
    explicit RealBall(mpfr_prec_t prec = 128);
    RealBall(const RealBall& o);
    RealBall(RealBall&& o) noexcept;
    RealBall& operator=(const RealBall& o);
    RealBall& operator=(RealBall&& o) noexcept;
    ~RealBall();

    static RealBall from_integer(const mpz_class& n, mpfr_prec_t prec);
    static RealBall from_ui(unsigned long n, mpfr_prec_t prec);
    static RealBall from_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t prec);
    // Exact decimal like "5.746e27" or "11.77"; represented as num/10^k.
    static RealBall from_decimal(std::string_view text, mpfr_prec_t prec);
    // Ball spanning [lo, hi].
    static RealBall from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec);
    static RealBall sqrt2(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    bool exact() const;

    // Directed endpoints; out must be initialized by the caller.
    void lower(mpfr_t out) const;
    void upper(mpfr_t out) const;
    double lower_double() const;
    double upper_double() const;
    double radius_double() const;

    friend RealBall operator+(const RealBall& x, const RealBall& y);
    friend RealBall operator-(const RealBall& x, const RealBall& y);
    friend RealBall operator*(const RealBall& x, const RealBall& y);
    friend RealBall operator/(const RealBall& x, const RealBall& y);
    RealBall operator-() const;

    RealBall abs() const;
    RealBall recip() const;                    // requires certified nonzero
    RealBall log() const;                      // requires certified positive
    RealBall exp() const;
    RealBall sqrt() const;                     // requires certified nonnegative
    RealBall pow_ui(unsigned long e) const;
    RealBall mul_integer(const mpz_class& z) const;
    RealBall mul_ui(unsigned long u) const;
    RealBall div_ui(unsigned long u) const;
    RealBall add_integer(const mpz_class& z) const;

    bool contains_zero() const;
    bool certainly_positive() const;
    bool certainly_negative() const;
    // upper(x) < lower(y) resp. upper(x) <= lower(y); both certify the exact
    // relation between the represented values.
    bool certainly_less(const RealBall& y) const;
    bool certainly_leq(const RealBall& y) const;

    std::optional<int> certified_sign() const;
    // floor when both endpoints agree on it
    std::optional<mpz_class> certified_floor() const;
    // smallest integer >= upper endpoint: a certified integer upper bound
    mpz_class ceil_of_upper() const;
    // largest integer < upper endpoint: certifies value < that integer + 1
    mpz_class strict_integer_bound() const;

    std::string lower_decimal(int digits = 20) const;
    std::string upper_decimal(int digits = 20) const;
    std::string enclosure() const;

  private:
    mpfr_t mid_;
    mpfr_t rad_;   // small fixed precision, always rounded up, >= 0
    mpfr_prec_t prec_;

    void bump_radius_ulp(int ternary);
    static RealBall binary_op(const RealBall& x, const RealBall& y,
                              int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t),
                              bool add_like);
    RealBall monotone_increasing(int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t),
                                 const char* name) const;
};

// Certified enclosure of log x for an exact integer x >= 1. The radius is at
// most 2^(1-prec) * |log x|. Rejects x < 1.
RealBall log_nat(const mpz_class& x, mpfr_prec_t prec);

// 1 + sqrt 2 and its logarithm.
RealBall alpha_ball(mpfr_prec_t prec);
RealBall log_alpha(mpfr_prec_t prec);
// log(2 sqrt 2) = (3/2) log 2
RealBall log_two_sqrt2(mpfr_prec_t prec);

struct IntDistance {
    RealBall dist;   // enclosure of the distance to the nearest integer
    bool resolved;   // false when the input straddles a half-integer
};

// ||x||: distance from x to the nearest integer, as a certified enclosure.
// resolved = false means the caller should escalate precision before relying
// on which integer is nearest.
IntDistance nearest_int_distance(const RealBall& x);

// Reruns f at escalating precision until it returns a value. f must be
// monotone: once it certifies at some precision it certifies at any higher
// precision for the same mathematical quantity.
template <typename F>
auto with_escalation(const PrecisionPolicy& pol, std::string_view what, F&& f) {
    mpfr_prec_t p = pol.initial_bits;
    while (true) {
        if (auto r = f(p)) return std::move(*r);
        if (p >= pol.max_bits) throw PrecisionExhausted(std::string(what), p, "");
        p = std::min<mpfr_prec_t>(pol.max_bits,
                                  p * static_cast<mpfr_prec_t>(pol.escalation_factor));
    }
}

}  // namespace pellconcat
