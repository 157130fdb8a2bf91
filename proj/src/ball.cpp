#include "pellconcat/ball.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace pellconcat {

namespace {

constexpr mpfr_prec_t kRadiusPrec = 32;
constexpr mpfr_prec_t kGuardBits = 8;

// RAII scratch value
struct Scratch {
    mpfr_t v;
    explicit Scratch(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~Scratch() { mpfr_clear(v); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
    // mpfr's function-like macros dereference their argument directly
    mpfr_ptr operator->() { return v; }
    mpfr_srcptr operator->() const { return v; }
};

}  // namespace

PrecisionPolicy PrecisionPolicy::defaults() {
    PrecisionPolicy pol;
    if (const char* env = std::getenv("PELLCONCAT_PRECISION_MAX")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= pol.initial_bits) pol.max_bits = static_cast<mpfr_prec_t>(v);
    }
    return pol;
}

RealBall::RealBall(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(mid_, prec_);
    mpfr_init2(rad_, kRadiusPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

RealBall::RealBall(const RealBall& o) : prec_(o.prec_) {
    mpfr_init2(mid_, prec_);
    mpfr_init2(rad_, kRadiusPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

RealBall::RealBall(RealBall&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(mid_, 2);
    mpfr_init2(rad_, 2);
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
}

RealBall& RealBall::operator=(const RealBall& o) {
    if (this != &o) {
        mpfr_set_prec(mid_, o.prec_);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
        prec_ = o.prec_;
    }
    return *this;
}

RealBall& RealBall::operator=(RealBall&& o) noexcept {
    if (this != &o) {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
        prec_ = o.prec_;
    }
    return *this;
}

RealBall::~RealBall() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

void RealBall::bump_radius_ulp(int ternary) {
    if (ternary == 0) return;
    Scratch ulp(kRadiusPrec);
    if (mpfr_zero_p(mid_)) {
        mpfr_set_ui_2exp(ulp, 1, mpfr_get_emin(), MPFR_RNDU);
    } else {
        mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(mid_) - prec_, MPFR_RNDU);
    }
    mpfr_add(rad_, rad_, ulp, MPFR_RNDU);
}

RealBall RealBall::from_integer(const mpz_class& n, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_z(r.mid_, n.get_mpz_t(), MPFR_RNDN);
    r.bump_radius_ulp(t);
    return r;
}

RealBall RealBall::from_ui(unsigned long n, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_ui(r.mid_, n, MPFR_RNDN);
    r.bump_radius_ulp(t);
    return r;
}

RealBall RealBall::from_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t prec) {
    if (den == 0) throw BallDomainError("from_ratio: zero denominator");
    mpfr_prec_t wide = std::max<mpfr_prec_t>(
        prec + kGuardBits,
        static_cast<mpfr_prec_t>(mpz_sizeinbase(num.get_mpz_t(), 2) + 2));
    Scratch n(wide), d(wide), lo(prec + kGuardBits), hi(prec + kGuardBits);
    mpfr_set_z(n, num.get_mpz_t(), MPFR_RNDN);
    mpfr_set_prec(d, std::max<mpfr_prec_t>(
                         prec + kGuardBits,
                         static_cast<mpfr_prec_t>(mpz_sizeinbase(den.get_mpz_t(), 2) + 2)));
    mpfr_set_z(d, den.get_mpz_t(), MPFR_RNDN);
    mpfr_div(lo, n, d, MPFR_RNDD);
    mpfr_div(hi, n, d, MPFR_RNDU);
    return from_endpoints(lo, hi, prec);
}

RealBall RealBall::from_decimal(std::string_view text, mpfr_prec_t prec) {
    // mantissa digits -> integer, combined with the decimal exponent
    mpz_class mant = 0;
    long frac_digits = 0;
    long exp10 = 0;
    bool neg = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    bool seen_dot = false, any = false;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '.') {
            if (seen_dot) throw std::invalid_argument("from_decimal: bad literal");
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            mant = mant * 10 + (ch - '0');
            if (seen_dot) ++frac_digits;
            any = true;
        } else if (ch == 'e' || ch == 'E') {
            exp10 = std::stol(std::string(text.substr(i + 1)));
            break;
        } else {
            throw std::invalid_argument("from_decimal: bad literal");
        }
    }
    if (!any) throw std::invalid_argument("from_decimal: bad literal");
    if (neg) mant = -mant;
    long scale = exp10 - frac_digits;
    mpz_class ten = 10;
    if (scale >= 0) {
        mpz_class p;
        mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(scale));
        return from_integer(mant * p, prec);
    }
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-scale));
    return from_ratio(mant, p, prec);
}

RealBall RealBall::from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec) {
    if (mpfr_greater_p(lo, hi)) throw std::logic_error("from_endpoints: lo > hi");
    RealBall r(prec);
    mpfr_add(r.mid_, lo, hi, MPFR_RNDN);
    mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);  // exact
    Scratch d1(kRadiusPrec), d2(kRadiusPrec);
    mpfr_sub(d1, hi, r.mid_, MPFR_RNDU);
    mpfr_sub(d2, r.mid_, lo, MPFR_RNDU);
    mpfr_max(r.rad_, d1, d2, MPFR_RNDU);
    if (mpfr_sgn(r.rad_) < 0) mpfr_set_zero(r.rad_, 1);
    return r;
}

RealBall RealBall::sqrt2(mpfr_prec_t prec) {
    Scratch lo(prec + kGuardBits), hi(prec + kGuardBits);
    mpfr_sqrt_ui(lo, 2, MPFR_RNDD);
    mpfr_sqrt_ui(hi, 2, MPFR_RNDU);
    return from_endpoints(lo, hi, prec);
}

bool RealBall::exact() const { return mpfr_zero_p(rad_); }

void RealBall::lower(mpfr_t out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void RealBall::upper(mpfr_t out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

double RealBall::lower_double() const {
    Scratch t(prec_ + kGuardBits);
    lower(t);
    return mpfr_get_d(t, MPFR_RNDD);
}

double RealBall::upper_double() const {
    Scratch t(prec_ + kGuardBits);
    upper(t);
    return mpfr_get_d(t, MPFR_RNDU);
}

double RealBall::radius_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

RealBall RealBall::binary_op(const RealBall& x, const RealBall& y,
                             int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t),
                             bool /*add_like*/) {
    RealBall r(std::max(x.prec_, y.prec_));
    int t = op(r.mid_, x.mid_, y.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, x.rad_, y.rad_, MPFR_RNDU);
    r.bump_radius_ulp(t);
    return r;
}

RealBall operator+(const RealBall& x, const RealBall& y) {
    return RealBall::binary_op(x, y, mpfr_add, true);
}

RealBall operator-(const RealBall& x, const RealBall& y) {
    return RealBall::binary_op(x, y, mpfr_sub, true);
}

RealBall operator*(const RealBall& x, const RealBall& y) {
    RealBall r(std::max(x.prec_, y.prec_));
    int t = mpfr_mul(r.mid_, x.mid_, y.mid_, MPFR_RNDN);
    // |xm|*yr + |ym|*xr + xr*yr
    Scratch am(kRadiusPrec), bm(kRadiusPrec), acc(kRadiusPrec);
    mpfr_abs(am, x.mid_, MPFR_RNDU);
    mpfr_abs(bm, y.mid_, MPFR_RNDU);
    mpfr_mul(am, am, y.rad_, MPFR_RNDU);
    mpfr_mul(bm, bm, x.rad_, MPFR_RNDU);
    mpfr_mul(acc, x.rad_, y.rad_, MPFR_RNDU);
    mpfr_add(acc, acc, am, MPFR_RNDU);
    mpfr_add(acc, acc, bm, MPFR_RNDU);
    mpfr_set(r.rad_, acc, MPFR_RNDU);
    r.bump_radius_ulp(t);
    return r;
}

RealBall operator/(const RealBall& x, const RealBall& y) { return x * y.recip(); }

RealBall RealBall::operator-() const {
    RealBall r(*this);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);  // exact
    return r;
}

RealBall RealBall::abs() const {
    if (certainly_positive()) return *this;
    if (certainly_negative()) return -*this;
    Scratch hi(prec_ + kGuardBits), lo(prec_ + kGuardBits), zero(8);
    lower(lo);
    upper(hi);
    mpfr_abs(lo, lo, MPFR_RNDU);
    mpfr_max(hi, hi, lo, MPFR_RNDU);
    mpfr_set_zero(zero, 1);
    return from_endpoints(zero, hi, prec_);
}

RealBall RealBall::recip() const {
    if (contains_zero()) throw BallDomainError("recip: interval contains zero");
    Scratch lo(prec_ + kGuardBits), hi(prec_ + kGuardBits);
    Scratch rlo(prec_ + kGuardBits), rhi(prec_ + kGuardBits);
    lower(lo);
    upper(hi);
    // 1/x is decreasing on either side of zero
    mpfr_ui_div(rlo, 1, hi, MPFR_RNDD);
    mpfr_ui_div(rhi, 1, lo, MPFR_RNDU);
    return from_endpoints(rlo, rhi, prec_);
}

RealBall RealBall::monotone_increasing(int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t),
                                       const char* name) const {
    (void)name;
    Scratch lo(prec_ + kGuardBits), hi(prec_ + kGuardBits);
    Scratch rlo(prec_ + kGuardBits), rhi(prec_ + kGuardBits);
    lower(lo);
    upper(hi);
    op(rlo, lo, MPFR_RNDD);
    op(rhi, hi, MPFR_RNDU);
    return from_endpoints(rlo, rhi, prec_);
}

RealBall RealBall::log() const {
    if (!certainly_positive()) throw BallDomainError("log: interval not certainly positive");
    return monotone_increasing(mpfr_log, "log");
}

RealBall RealBall::exp() const { return monotone_increasing(mpfr_exp, "exp"); }

RealBall RealBall::sqrt() const {
    Scratch lo(prec_ + kGuardBits);
    lower(lo);
    if (mpfr_sgn(lo) < 0) throw BallDomainError("sqrt: interval not certainly nonnegative");
    return monotone_increasing(mpfr_sqrt, "sqrt");
}

RealBall RealBall::pow_ui(unsigned long e) const {
    if (e == 0) return from_ui(1, prec_);
    if (certainly_positive()) {
        Scratch lo(prec_ + kGuardBits), hi(prec_ + kGuardBits);
        Scratch rlo(prec_ + kGuardBits), rhi(prec_ + kGuardBits);
        lower(lo);
        upper(hi);
        mpfr_pow_ui(rlo, lo, e, MPFR_RNDD);
        mpfr_pow_ui(rhi, hi, e, MPFR_RNDU);
        return from_endpoints(rlo, rhi, prec_);
    }
    RealBall acc = from_ui(1, prec_);
    RealBall base = *this;
    while (e != 0) {
        if (e & 1UL) acc = acc * base;
        if ((e >>= 1) != 0) base = base * base;
    }
    return acc;
}

RealBall RealBall::mul_integer(const mpz_class& z) const {
    RealBall r(prec_);
    int t = mpfr_mul_z(r.mid_, mid_, z.get_mpz_t(), MPFR_RNDN);
    mpz_class az = ::abs(z);
    mpfr_mul_z(r.rad_, rad_, az.get_mpz_t(), MPFR_RNDU);
    r.bump_radius_ulp(t);
    return r;
}

RealBall RealBall::mul_ui(unsigned long u) const {
    RealBall r(prec_);
    int t = mpfr_mul_ui(r.mid_, mid_, u, MPFR_RNDN);
    mpfr_mul_ui(r.rad_, rad_, u, MPFR_RNDU);
    r.bump_radius_ulp(t);
    return r;
}

RealBall RealBall::div_ui(unsigned long u) const {
    if (u == 0) throw BallDomainError("div_ui: zero divisor");
    RealBall r(prec_);
    int t = mpfr_div_ui(r.mid_, mid_, u, MPFR_RNDN);
    mpfr_div_ui(r.rad_, rad_, u, MPFR_RNDU);
    r.bump_radius_ulp(t);   // radius division rounds up, still an upper bound
    return r;
}

RealBall RealBall::add_integer(const mpz_class& z) const {
    RealBall r(prec_);
    int t = mpfr_add_z(r.mid_, mid_, z.get_mpz_t(), MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);
    r.bump_radius_ulp(t);
    return r;
}

bool RealBall::contains_zero() const {
    Scratch lo(prec_ + kGuardBits), hi(prec_ + kGuardBits);
    lower(lo);
    upper(hi);
    return mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0;
}

bool RealBall::certainly_positive() const {
    Scratch lo(prec_ + kGuardBits);
    lower(lo);
    return mpfr_sgn(lo) > 0;
}

bool RealBall::certainly_negative() const {
    Scratch hi(prec_ + kGuardBits);
    upper(hi);
    return mpfr_sgn(hi) < 0;
}

bool RealBall::certainly_less(const RealBall& y) const {
    Scratch a(prec_ + kGuardBits), b(y.prec_ + kGuardBits);
    upper(a);
    y.lower(b);
    return mpfr_less_p(a, b);
}

bool RealBall::certainly_leq(const RealBall& y) const {
    Scratch a(prec_ + kGuardBits), b(y.prec_ + kGuardBits);
    upper(a);
    y.lower(b);
    return mpfr_lessequal_p(a, b);
}

std::optional<int> RealBall::certified_sign() const {
    if (certainly_positive()) return 1;
    if (certainly_negative()) return -1;
    if (exact() && mpfr_zero_p(mid_)) return 0;
    return std::nullopt;
}

std::optional<mpz_class> RealBall::certified_floor() const {
    Scratch lo(prec_ + kGuardBits), hi(prec_ + kGuardBits);
    lower(lo);
    upper(hi);
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
    if (flo == fhi) return flo;
    return std::nullopt;
}

mpz_class RealBall::ceil_of_upper() const {
    Scratch hi(prec_ + kGuardBits);
    upper(hi);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), hi, MPFR_RNDU);
    return z;
}

mpz_class RealBall::strict_integer_bound() const { return ceil_of_upper() - 1; }

std::string RealBall::lower_decimal(int digits) const {
    Scratch t(prec_ + kGuardBits);
    lower(t);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RDe", digits - 1, static_cast<mpfr_srcptr>(t));
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string RealBall::upper_decimal(int digits) const {
    Scratch t(prec_ + kGuardBits);
    upper(t);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*RUe", digits - 1, static_cast<mpfr_srcptr>(t));
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string RealBall::enclosure() const {
    return "[" + lower_decimal() + ", " + upper_decimal() + "]";
}

RealBall log_nat(const mpz_class& x, mpfr_prec_t prec) {
    if (x < 1) throw std::invalid_argument("log_nat: argument must be >= 1");
    if (x == 1) return RealBall(prec);  // exact zero
    mpfr_prec_t wide =
        std::max<mpfr_prec_t>(prec + kGuardBits,
                              static_cast<mpfr_prec_t>(mpz_sizeinbase(x.get_mpz_t(), 2) + 2));
    Scratch t(wide), lo(prec + kGuardBits), hi(prec + kGuardBits);
    int set = mpfr_set_z(t, x.get_mpz_t(), MPFR_RNDN);
    assert(set == 0);
    (void)set;
    mpfr_log(lo, t, MPFR_RNDD);
    mpfr_log(hi, t, MPFR_RNDU);
    return RealBall::from_endpoints(lo, hi, prec);
}

RealBall alpha_ball(mpfr_prec_t prec) {
    return RealBall::sqrt2(prec).add_integer(1);
}

RealBall log_alpha(mpfr_prec_t prec) { return alpha_ball(prec + kGuardBits).log(); }

RealBall log_two_sqrt2(mpfr_prec_t prec) {
    // log(2 sqrt 2) = (3/2) log 2
    return log_nat(2, prec + kGuardBits).mul_ui(3).div_ui(2);
}

IntDistance nearest_int_distance(const RealBall& x) {
    mpfr_prec_t wp = x.precision();
    Scratch lo(wp + kGuardBits), hi(wp + kGuardBits);
    x.lower(lo);
    x.upper(hi);

    Scratch width(kRadiusPrec);
    mpfr_sub(width, hi, lo, MPFR_RNDU);
    Scratch zero(8), half(8);
    mpfr_set_zero(zero, 1);
    mpfr_set_ui_2exp(half, 1, -1, MPFR_RNDN);
    if (mpfr_cmp_ui(width, 1) >= 0) {
        return {RealBall::from_endpoints(zero, half, wp), false};
    }

    mpz_class int_lo, int_hi;
    mpfr_get_z(int_lo.get_mpz_t(), lo, MPFR_RNDU);  // ceil
    mpfr_get_z(int_hi.get_mpz_t(), hi, MPFR_RNDD);  // floor
    bool contains_int = int_lo <= int_hi;

    Scratch two_lo(wp + kGuardBits), two_hi(wp + kGuardBits);
    mpfr_mul_2ui(two_lo, lo, 1, MPFR_RNDN);  // exact
    mpfr_mul_2ui(two_hi, hi, 1, MPFR_RNDN);
    mpz_class h_lo, h_hi;
    mpfr_get_z(h_lo.get_mpz_t(), two_lo, MPFR_RNDU);
    mpfr_get_z(h_hi.get_mpz_t(), two_hi, MPFR_RNDD);
    bool contains_half = false;
    if (h_lo <= h_hi) {
        // odd integer inside [h_lo, h_hi] <=> 2x spans a half-integer
        contains_half = mpz_odd_p(h_lo.get_mpz_t()) || h_lo < h_hi;
    }

    auto endpoint_dist = [&](mpfr_srcptr y, mpfr_rnd_t dir, mpfr_ptr out) {
        mpz_class near;
        mpfr_get_z(near.get_mpz_t(), y, MPFR_RNDN);
        int cmp = mpfr_cmp_z(y, near.get_mpz_t());
        if (cmp >= 0) {
            mpfr_sub_z(out, y, near.get_mpz_t(), dir);
        } else {
            mpfr_rnd_t inv = (dir == MPFR_RNDD) ? MPFR_RNDU : MPFR_RNDD;
            mpfr_sub_z(out, y, near.get_mpz_t(), inv);
            mpfr_neg(out, out, MPFR_RNDN);  // exact
        }
    };

    Scratch dlo(wp + kGuardBits), dhi(wp + kGuardBits), t1(wp + kGuardBits), t2(wp + kGuardBits);
    if (contains_int) {
        mpfr_set_zero(dlo, 1);
    } else {
        endpoint_dist(lo, MPFR_RNDD, t1);
        endpoint_dist(hi, MPFR_RNDD, t2);
        mpfr_min(dlo, t1, t2, MPFR_RNDD);
    }
    if (contains_half) {
        mpfr_set(dhi, half, MPFR_RNDN);
    } else {
        endpoint_dist(lo, MPFR_RNDU, t1);
        endpoint_dist(hi, MPFR_RNDU, t2);
        mpfr_max(dhi, t1, t2, MPFR_RNDU);
        if (mpfr_cmp(dhi, half) > 0) mpfr_set(dhi, half, MPFR_RNDN);
    }
    if (mpfr_sgn(dlo) < 0) mpfr_set_zero(dlo, 1);
    return {RealBall::from_endpoints(dlo, dhi, wp), !contains_half};
}

}  // namespace pellconcat
