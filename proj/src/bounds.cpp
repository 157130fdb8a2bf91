#include "pellconcat/bounds.hpp"

#include <cmath>

namespace pellconcat {

namespace {

RealBall ball_max(const RealBall& a, const RealBall& b) {
    // endpoint-wise max encloses max(a, b)
    mpfr_prec_t p = std::max(a.precision(), b.precision());
    mpfr_t alo, ahi, blo, bhi;
    mpfr_inits2(p + 8, alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
    a.lower(alo);
    a.upper(ahi);
    b.lower(blo);
    b.upper(bhi);
    mpfr_max(alo, alo, blo, MPFR_RNDD);
    mpfr_max(ahi, ahi, bhi, MPFR_RNDU);
    RealBall r = RealBall::from_endpoints(alo, ahi, p);
    mpfr_clears(alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
    return r;
}

BoundStage checked_stage(std::string id, std::string b_role, RealBall computed,
                         const char* anchor, mpfr_prec_t prec) {
    RealBall anchor_ball = RealBall::from_decimal(anchor, prec);
    if (!computed.certainly_leq(anchor_ball)) {
        throw CertificateError("bound stage " + id + ": computed " + computed.enclosure() +
                               " not certified below " + anchor);
    }
    return {std::move(id), std::move(b_role), std::move(computed), anchor, true};
}

void require(bool ok, const char* what) {
    if (!ok) throw CertificateError(what);
}

}  // namespace

HeightValue height_rational(const mpz_class& p, const mpz_class& q, mpfr_prec_t prec) {
    if (q <= 0) throw std::invalid_argument("height_rational: q must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw std::invalid_argument("height_rational: p/q must be in lowest terms");
    mpz_class m = ::abs(p);
    if (q > m) m = q;
    if (m == 0) throw std::invalid_argument("height_rational: 0 has height 0 by convention only");
    return {log_nat(m, prec)};
}

HeightValue height_composite_gamma3(Equation eq, unsigned long m, unsigned long n_minus_k,
                                    mpfr_prec_t prec) {
    if (eq == Equation::eq1) {
        if (m < 1 || n_minus_k < 2) {
            throw std::invalid_argument("height_composite_gamma3: eq1 needs m >= 1, n-k >= 2");
        }
        RealBall la = log_alpha(prec);
        RealBall l2 = log_nat(2, prec);
        return {la.mul_ui(3 * n_minus_k + 4).div_ui(2) + l2.mul_ui(5).div_ui(2)};
    }
    if (n_minus_k < 1) {
        throw std::invalid_argument("height_composite_gamma3: eq2 needs n-k >= 1");
    }
    RealBall la = log_alpha(prec);
    RealBall l2 = log_nat(2, prec);
    return {la.mul_ui(3 * n_minus_k + 8).div_ui(2) + l2.mul_ui(5).div_ui(2)};
}

MatveevInstance MatveevInstance::make(unsigned D, RealBall B, std::vector<MatveevNumber> numbers,
                                      mpfr_prec_t prec) {
    if (numbers.empty()) throw std::invalid_argument("matveev: need at least one number");
    if (D < 1) throw std::invalid_argument("matveev: D >= 1 required");
    RealBall one = RealBall::from_ui(1, prec);
    require(one.certainly_leq(B) || B.exact(), "matveev: B >= 1 required");
    MatveevInstance inst;
    inst.s = static_cast<unsigned>(numbers.size());
    inst.D = D;
    inst.B = std::move(B);
    RealBall floor16 = RealBall::from_ratio(16, 100, prec);
    for (auto& num : numbers) {
        RealBall req = ball_max(ball_max(num.height.mul_ui(D), num.abs_log), floor16);
        require(req.certainly_leq(num.A), "matveev: A_j below max(D h, |log|, 0.16)");
        inst.A.push_back(std::move(num.A));
    }
    return inst;
}

RealBall matveev_leading_factor(unsigned s, unsigned D, mpfr_prec_t prec) {
    mpz_class pow30;
    mpz_ui_pow_ui(pow30.get_mpz_t(), 30, s + 3);
    RealBall r = RealBall::from_ratio(7, 5, prec).mul_integer(pow30);
    // s^{4.5} = s^4 sqrt(s)
    r = r * RealBall::from_ui(s, prec).pow_ui(4) * RealBall::from_ui(s, prec).sqrt();
    r = r.mul_ui(D * D);
    r = r * (RealBall::from_ui(1, prec) + log_nat(D, prec));
    return r;
}

RealBall matveev_exponent(const MatveevInstance& inst) {
    mpfr_prec_t prec = inst.B.precision();
    RealBall e = matveev_leading_factor(inst.s, inst.D, prec);
    e = e * (RealBall::from_ui(1, prec) + inst.B.log());
    for (const auto& a : inst.A) e = e * a;
    return e;
}

RealBall lemma7_solve(unsigned l, const RealBall& H) {
    if (l < 1) throw std::invalid_argument("lemma7_solve: l >= 1 required");
    mpz_class hyp;
    mpz_ui_pow_ui(hyp.get_mpz_t(), 4UL * l * l, l);
    mpfr_prec_t prec = H.precision();
    if (!RealBall::from_integer(hyp, prec).certainly_less(H)) {
        throw std::domain_error("lemma7_solve: hypothesis H > (4 l^2)^l fails");
    }
    mpz_class two_l;
    mpz_ui_pow_ui(two_l.get_mpz_t(), 2, l);
    return H.mul_integer(two_l) * H.log().pow_ui(l);
}

AbsoluteBoundReport absolute_bound(Equation eq, unsigned base, mpfr_prec_t prec) {
    if (base < 2) throw std::invalid_argument("absolute_bound: base must be >= 2");
    AbsoluteBoundReport rep;
    rep.eq = eq;
    rep.base = base;

    RealBall one = RealBall::from_ui(1, prec);
    RealBall lb = log_nat(base, prec);
    RealBall la = log_alpha(prec);
    RealBall l2 = log_nat(2, prec);
    auto dec = [&](const char* s) { return RealBall::from_decimal(s, prec); };

    // 1 + log B lower bounds over each stage's validity range
    RealBall blog_first = one + dec("2.6").log();   // B = 1.3(n-m+1), n-m+1 >= 2

    if (eq == Equation::eq1) {
        RealBall blog_second = one + dec("3.9").log();  // B = 1.3(n+1), n >= 2
        // stage 1: two-number form, coefficient of (1+log B) log b log alpha
        RealBall k1 = matveev_leading_factor(2, 2, prec).mul_ui(2);
        rep.stages.push_back(
            checked_stage("matveev_form_one", "1.3*(n-m+1)", k1, "1.0427e10", prec));
        // stage 2: n-k-2 < C log b (1+log B); the additive log(1.1 b)/log alpha
        // is folded using the range floors
        RealBall c_gap = dec("1.0427e10") +
                         dec("1.1").mul_ui(base).log() / (la * lb * blog_first);
        rep.stages.push_back(checked_stage("gap_exponent", "1.3*(n-m+1)", c_gap, "1.043e10", prec));
        // stage 3: three-number form against 5.885/alpha^n
        RealBall a3_min = la.mul_ui(10) + l2.mul_ui(5);  // value at n-k = 2
        RealBall c_form2 = matveev_leading_factor(3, 2, prec).mul_ui(2) +
                           dec("5.885").log() / (la * blog_second * lb * a3_min);
        rep.stages.push_back(
            checked_stage("matveev_form_two", "1.3*(n+1)", c_form2, "1.94e12", prec));
        // stage 4: substitute the gap bound into A_3
        RealBall c_subst = dec("1.043e10").mul_ui(3) * la +
                           (la.mul_ui(10) + l2.mul_ui(5)) / (blog_second * lb);
        rep.stages.push_back(checked_stage("gap_substitution", "1.3*(n+1)", c_subst, "2.8e10", prec));
        // stage 5: n < C (1+log(1.3(n+1)))^2 log^2 b
        rep.stages.push_back(checked_stage("combined_quadratic", "1.3*(n+1)",
                                           dec("1.94e12") * dec("2.8e10"), "5.432e22", prec));
        // stage 6: 1+log(1.3(n+1)) < 2.5 log(1.3 n) for n >= 2 (gap grows with n;
        // certify at n = 2)
        require(blog_second.certainly_less(dec("2.5") * dec("2.6").log()),
                "eq1: log replacement invalid at n = 2");
        rep.stages.push_back(checked_stage("log_squared_form", "",
                                           dec("5.432e22").mul_ui(25).div_ui(4), "3.4e23", prec));
        // stage 7: L = 1.3 n, H = 1.3 * C log^2 b
        rep.stages.push_back(checked_stage("solver_h_coefficient", "",
                                           dec("3.4e23").mul_ui(13).div_ui(10), "4.42e23", prec));
        rep.lemma7_H = dec("4.42e23") * lb.pow_ui(2);
        RealBall l_max = lemma7_solve(2, rep.lemma7_H);
        rep.final_bound = l_max * RealBall::from_ratio(10, 13, prec);
        rep.published_form = dec("5.746e27") * lb.pow_ui(3);
    } else {
        // stage 1: three-number form against 2b/alpha^{n-k-1}
        RealBall k3 = matveev_leading_factor(3, 2, prec).mul_ui(2) * log_nat(8, prec);
        RealBall c1 = k3 + dec("2").mul_ui(base).log() / (la * blog_first * lb);
        rep.stages.push_back(checked_stage("matveev_form_three", "1.3*(n-m+1)", c1, "4.1e12", prec));
        // stage 2: three-number form against 3.42/alpha^n; B = 1.3(n+1), n >= 1
        RealBall a3_min = la.mul_ui(11) + l2.mul_ui(5);  // value at n-k = 1
        RealBall c2 = matveev_leading_factor(3, 2, prec).mul_ui(2) +
                      dec("3.42").log() / (la * blog_first * lb * a3_min);
        rep.stages.push_back(checked_stage("matveev_form_four", "1.3*(n+1)", c2, "2e12", prec));
        // stage 3: substitute the gap bound into A_3
        RealBall c_subst = dec("4.1e12").mul_ui(3) * la +
                           (la.mul_ui(11) + l2.mul_ui(5)) / (blog_first * lb);
        rep.stages.push_back(checked_stage("gap_substitution", "1.3*(n+1)", c_subst, "1.2e13", prec));
        rep.stages.push_back(checked_stage("combined_quadratic", "1.3*(n+1)",
                                           dec("2e12") * dec("1.2e13"), "2.4e25", prec));
        // 1+log(1.3(n+1)) < 3 log(n+1) for n >= 1, and the trailing +1 of
        // n+1 < 9 C log^2(n+1) log^2 b + 1 folded over log(n+1), log b >= log 2
        require(blog_first.certainly_less(dec("3") * l2), "eq2: log replacement invalid at n = 1");
        RealBall c_sq = dec("2.4e25").mul_ui(9) + one / (l2.pow_ui(2) * l2.pow_ui(2));
        rep.stages.push_back(checked_stage("log_squared_form", "", c_sq, "2.2e26", prec));
        rep.lemma7_H = dec("2.2e26") * lb.pow_ui(2);
        // bound on L = n+1, hence on n
        rep.final_bound = lemma7_solve(2, rep.lemma7_H);
        rep.published_form = dec("4.7e30") * lb.pow_ui(3);
    }

    rep.within_published = rep.final_bound.certainly_leq(rep.published_form);
    if (!rep.within_published) {
        throw CertificateError("absolute_bound: final bound exceeds the published form");
    }
    rep.final_bound_int = rep.final_bound.ceil_of_upper();
    return rep;
}

mpz_class solve_log_linear_bound(const RealBall& c, mpfr_prec_t prec) {
    require(c.certainly_positive(), "solve_log_linear_bound: c must be positive");
    double cu = c.upper_double();
    double x = cu;
    for (int i = 0; i < 64; ++i) x = cu * (1.0 + std::log(1.3 * (x + 1.0)));
    mpz_class X;
    mpz_set_d(X.get_mpz_t(), x * 1.0001 + 16.0);
    RealBall one = RealBall::from_ui(1, prec);
    for (int tries = 0; tries < 64; ++tries) {
        // certify f(X) <= X with f concave increasing and slope c/(X+1) <= 1,
        // so n < f(n) forces n < X
        RealBall fx = c * (one + RealBall::from_decimal("1.3", prec).mul_integer(X + 1).log());
        bool slope_ok = c.certainly_leq(RealBall::from_integer(X + 1, prec));
        if (slope_ok && fx.certainly_leq(RealBall::from_integer(X, prec))) return X;
        X += X / 8 + 16;
    }
    throw CertificateError("solve_log_linear_bound: failed to certify a fixed point");
}

}  // namespace pellconcat
