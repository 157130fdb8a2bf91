#include "pellconcat/contfrac.hpp"

#include <algorithm>

namespace pellconcat {

namespace {

constexpr std::size_t kMaxTerms = 200000;

bool rule_satisfied(const StopRule& r, const std::vector<mpz_class>& a,
                    const std::vector<std::pair<mpz_class, mpz_class>>& conv) {
    switch (r.kind) {
        case StopRule::Kind::term_count:
            return a.size() >= r.terms;
        case StopRule::Kind::denominator_exceeds:
            return !conv.empty() && conv.back().second > r.threshold;
    }
    return true;
}

// Appends certified terms from the pass state until the rule is satisfied.
// Each accepted a_t is the unambiguous interval floor of the complete
// quotient; the pass dies when the floor or the reciprocal cannot be
// certified at this precision.
bool extend_pass(CFExpansion::Resume& st, const StopRule& rule, std::vector<mpz_class>& a,
                 std::vector<std::pair<mpz_class, mpz_class>>& conv) {
    if (rule_satisfied(rule, a, conv)) return true;
    if (!st.alive) return false;
    while (!rule_satisfied(rule, a, conv)) {
        if (a.size() > kMaxTerms) return false;
        auto fl = st.x.certified_floor();
        if (!fl) {
            st.alive = false;
            return false;
        }
        if (!a.empty() && *fl < 1) {
            // complete quotients beyond a_0 exceed 1; a smaller floor is a
            // precision artifact
            st.alive = false;
            return false;
        }
        std::size_t t = a.size();
        mpz_class pm1 = t >= 1 ? conv[t - 1].first : mpz_class(1);
        mpz_class pm2 = t >= 2 ? conv[t - 2].first : mpz_class(t == 1 ? 1 : 0);
        mpz_class qm1 = t >= 1 ? conv[t - 1].second : mpz_class(0);
        mpz_class qm2 = t >= 2 ? conv[t - 2].second : mpz_class(t == 1 ? 0 : 1);
        if (t == 1) {
            pm2 = 1;  // p_{-1}
            qm2 = 0;  // q_{-1}
        }
        conv.emplace_back(*fl * pm1 + pm2, *fl * qm1 + qm2);
        a.push_back(*fl);
        RealBall rem = st.x.add_integer(-*fl);
        if (rem.certainly_positive()) {
            st.x = rem.recip();
        } else {
            st.alive = false;
            return rule_satisfied(rule, a, conv);
        }
    }
    return true;
}

std::optional<CFExpansion> attempt(const BallFn& target, const std::string& descriptor,
                                   const StopRule& rule, mpfr_prec_t bits) {
    CFExpansion cf;
    cf.descriptor = descriptor;
    cf.target = target;
    cf.work = {target(bits), bits, true};
    if (!extend_pass(cf.work, rule, cf.quotients, cf.convergents)) return std::nullopt;
    // full revalidation at doubled precision
    std::vector<mpz_class> a2;
    std::vector<std::pair<mpz_class, mpz_class>> c2;
    cf.check = {target(2 * bits), 2 * bits, true};
    if (!extend_pass(cf.check, rule, a2, c2)) return std::nullopt;
    if (a2 != cf.quotients) return std::nullopt;
    cf.certified_bits = 2 * bits;
    return cf;
}

}  // namespace

BallFn log_ratio_target(unsigned base) {
    return [base](mpfr_prec_t p) { return log_nat(base, p) / log_alpha(p); };
}

CFExpansion expand_target(BallFn target, std::string descriptor, const StopRule& rule,
                          const PrecisionPolicy& policy) {
    std::string what = "continued fraction of " + descriptor;
    return with_escalation(policy, what, [&](mpfr_prec_t p) {
        return attempt(target, descriptor, rule, p);
    });
}

CFExpansion expand(unsigned base, const StopRule& rule, const PrecisionPolicy& policy) {
    if (base < 2) throw std::invalid_argument("expand: base must be >= 2");
    CFExpansion cf = expand_target(log_ratio_target(base),
                                   "log(" + std::to_string(base) + ")/log(1+sqrt2)", rule,
                                   policy);
    cf.base = base;
    return cf;
}

CFExpansion extended(const CFExpansion& cf, const StopRule& rule) {
    if (rule_satisfied(rule, cf.quotients, cf.convergents)) return cf;
    CFExpansion out = cf;
    bool ok = extend_pass(out.work, rule, out.quotients, out.convergents);
    if (ok) {
        std::vector<mpz_class> a2(cf.quotients);
        std::vector<std::pair<mpz_class, mpz_class>> c2(cf.convergents);
        if (extend_pass(out.check, rule, a2, c2) && a2 == out.quotients) return out;
    }
    // resume state too wide: recertify from scratch at higher precision
    PrecisionPolicy policy = PrecisionPolicy::defaults();
    policy.initial_bits =
        std::min(policy.max_bits, std::max<mpfr_prec_t>(policy.initial_bits, cf.certified_bits));
    CFExpansion fresh = expand_target(cf.target, cf.descriptor, rule, policy);
    fresh.base = cf.base;
    if (fresh.quotients.size() < cf.quotients.size() ||
        !std::equal(cf.quotients.begin(), cf.quotients.end(), fresh.quotients.begin())) {
        throw std::logic_error("extended: expansion disagrees with certified prefix");
    }
    return fresh;
}

DenominatorHit first_denominator_exceeding(const CFExpansion& cf, const mpz_class& M) {
    CFExpansion deep = extended(cf, StopRule::denominator_exceeds(M));
    for (std::size_t t = 0; t < deep.size(); ++t) {
        if (deep.q(t) > M) return {std::move(deep), t};
    }
    throw std::logic_error("first_denominator_exceeding: extension failed to reach threshold");
}

MaxQuotient max_partial_quotient(const CFExpansion& cf, const mpz_class& M) {
    DenominatorHit hit = first_denominator_exceeding(cf, M);
    std::size_t best = 0;
    for (std::size_t i = 1; i <= hit.index; ++i) {
        if (hit.cf.a(i) > hit.cf.a(best)) best = i;
    }
    mpz_class value = hit.cf.a(best);
    return {std::move(hit.cf), hit.index, std::move(value), best};
}

RealBall legendre_rational_gap(const mpz_class& a_of_M, mpfr_prec_t prec) {
    return RealBall::from_ratio(1, a_of_M + 2, prec);
}

}  // namespace pellconcat
