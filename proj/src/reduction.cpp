#include "pellconcat/reduction.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace pellconcat {

namespace {

RealBall lower_point(const RealBall& x) {
    mpfr_t lo;
    mpfr_init2(lo, x.precision() + 8);
    x.lower(lo);
    RealBall r = RealBall::from_endpoints(lo, lo, x.precision() + 8);
    mpfr_clear(lo);
    return r;
}

RealBall upper_point(const RealBall& x) {
    mpfr_t hi;
    mpfr_init2(hi, x.precision() + 8);
    x.upper(hi);
    RealBall r = RealBall::from_endpoints(hi, hi, x.precision() + 8);
    mpfr_clear(hi);
    return r;
}

}  // namespace

ReductionContext::ReductionContext(CFExpansion cf, const mpz_class& M, unsigned advance_window)
    : cf_(std::move(cf)), modulus_(M) {
    mpz_class six_m = 6 * M;
    DenominatorHit hit = first_denominator_exceeding(cf_, six_m);
    first_index_ = hit.index;
    cf_ = extended(hit.cf, StopRule::term_count(hit.index + advance_window + 2));
    MaxQuotient mq = max_partial_quotient(cf_, M + 3);   // window covers y <= M+2
    quotient_cap_ = mq.value;
}

RealBall ReductionContext::tau_remainder(std::size_t t, mpfr_prec_t bits) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find({t, bits});
        if (it != cache_.end()) return it->second;
    }
    RealBall tau = cf_.target(bits);
    RealBall rem = (tau.mul_integer(cf_.q(t)) - RealBall::from_integer(cf_.p(t), bits)).abs();
    std::lock_guard<std::mutex> lk(mu_);
    return cache_.emplace(std::make_pair(t, bits), std::move(rem)).first->second;
}

ReductionOutcome bd_reduce(const ReductionInstance& inst, ReductionContext* ctx) {
    if (inst.M < 1) throw std::invalid_argument("bd_reduce: M >= 1 required");
    std::optional<ReductionContext> local;
    if (ctx == nullptr) {
        CFExpansion cf = inst.base != 0
                             ? expand(inst.base, StopRule::denominator_exceeds(6 * inst.M),
                                      inst.policy)
                             : expand_target(inst.tau, inst.label.empty() ? "tau" : inst.label,
                                             StopRule::denominator_exceeds(6 * inst.M),
                                             inst.policy);
        local.emplace(std::move(cf), inst.M, inst.max_convergent_advance);
        ctx = &*local;
    }

    const CFExpansion& cf = ctx->cf();
    std::size_t t0 = ctx->first_index();
    std::string last_enclosure;
    std::optional<ReductionOutcome> best;
    unsigned budget = inst.max_convergent_advance;
    for (unsigned adv = 0; adv <= budget; ++adv) {
        std::size_t t = t0 + adv;
        if (t >= cf.size()) break;
        const mpz_class& q = cf.q(t);

        // escalate until epsilon's sign is certified
        mpfr_prec_t p = inst.policy.initial_bits;
        while (true) {
            RealBall a_ball = inst.A(p);
            RealBall b_ball = inst.B(p);
            if (!a_ball.certainly_positive()) {
                p = std::min<mpfr_prec_t>(inst.policy.max_bits, 2 * p);
                continue;
            }
            if (!RealBall::from_ui(1, p).certainly_less(b_ball)) {
                throw std::invalid_argument("bd_reduce: B > 1 required");
            }
            RealBall mu_q = inst.mu(p).mul_integer(q);
            IntDistance dist_mu = nearest_int_distance(mu_q);
            RealBall tau_rem = ctx->tau_remainder(t, p);
            RealBall eps = dist_mu.dist - tau_rem.mul_integer(inst.M);
            last_enclosure = eps.enclosure();
            if (eps.certainly_positive()) {
                // W >= log(A q / eps) / log B using the certified lower bound
                RealBall ratio = a_ball.mul_integer(q) / lower_point(eps);
                RealBall w = ratio.log() / b_ball.log();
                ReductionOutcome out;
                out.convergent_index = t;
                out.q = q;
                out.epsilon = eps;
                out.w_bound = w.ceil_of_upper();
                out.advances = adv;
                out.bits_used = p;
                if (!best) {
                    budget = std::min<unsigned>(budget, adv + inst.improve_window);
                    best = std::move(out);
                } else if (out.w_bound < best->w_bound) {
                    best = std::move(out);
                }
                break;
            }
            if (eps.certainly_negative()) break;
            if (p >= inst.policy.max_bits) break;  // sign never resolved: next convergent
            p = std::min<mpfr_prec_t>(inst.policy.max_bits,
                                      p * static_cast<mpfr_prec_t>(inst.policy.escalation_factor));
        }
    }
    if (best) return std::move(*best);
    throw NoPositiveEpsilon("bd_reduce: no certified positive epsilon within " +
                            std::to_string(inst.max_convergent_advance + 1) + " convergents of " +
                            (inst.label.empty() ? std::string("tau") : inst.label) +
                            "; last enclosure " + last_enclosure);
}

namespace {

// least k whose trailing term reaches b^pow, so that d = digit_count >= pow+1
unsigned long trailing_threshold(Equation eq, unsigned base, unsigned pow) {
    Nat need = pow_nat(base, pow);
    for (unsigned long k = 0;; ++k) {
        Nat t = eq == Equation::eq1 ? pell_lucas(k) : pell(k);
        if (t >= need) return k;
    }
}

}  // namespace

std::optional<QuotientGapBound> quotient_gap_bound(const ReductionInstance& inst,
                                                   ReductionContext& ctx, Equation eq,
                                                   unsigned long cell_gap) {
    using Result = std::optional<QuotientGapBound>;
    const mpz_class& a_cap = ctx.quotient_cap();
    mpz_class y_window = ctx.modulus() + 2;   // y = d + r <= M + 2 for |r| <= 2

    auto attempt_shift = [&](int r, mpfr_prec_t p) -> std::optional<Result> {
        RealBall mu = inst.mu(p);
        RealBall rho = mu;
        if (r > 0) rho = mu - inst.tau(p).mul_ui(static_cast<unsigned long>(r));
        if (r < 0) rho = mu + inst.tau(p).mul_ui(static_cast<unsigned long>(-r));
        IntDistance d = nearest_int_distance(rho);
        RealBall floor = legendre_rational_gap(a_cap, p) / RealBall::from_integer(y_window, p);
        RealBall margin = floor - upper_point(d.dist);
        if (margin.certainly_positive()) {
            RealBall a_ball = inst.A(p);
            RealBall b_ball = inst.B(p);
            RealBall x = (a_ball / lower_point(margin)).log() / b_ball.log();
            mpz_class w = x.ceil_of_upper();
            // need A B^{-w} strictly below the margin
            bool ok = false;
            for (int bump = 0; bump < 4 && !ok; ++bump) {
                RealBall rhs = lower_point(margin) * b_ball.pow_ui(w.get_ui());
                if (a_ball.certainly_less(rhs)) {
                    ok = true;
                    break;
                }
                w += 1;
            }
            if (!ok) return std::nullopt;  // escalate
            if (r < 0) {
                // excluded candidates must have d >= |r|+1, i.e. the trailing
                // term has reached b^{|r|}; lift the bound to enforce it
                unsigned long k_min =
                    trailing_threshold(eq, inst.base, static_cast<unsigned>(-r));
                mpz_class lift(cell_gap + k_min);
                if (w < lift) w = lift;
            }
            return Result{QuotientGapBound{w, r, d.dist, a_cap}};
        }
        // certified not near this relation
        if (floor.certainly_less(lower_point(d.dist))) return Result{std::nullopt};
        return std::nullopt;  // unresolved, escalate
    };

    for (int r : {0, -1, 1, -2, 2}) {
        Result got = with_escalation(
            inst.policy, "near-relation mu - r tau for " + inst.label,
            [&](mpfr_prec_t p) { return attempt_shift(r, p); });
        if (got) return got;
    }
    return std::nullopt;
}

BallFn mu_eq1_cell(unsigned long m, unsigned long gap) {
    if (m < 1 || gap < 2) throw std::invalid_argument("mu_eq1_cell: m >= 1, gap >= 2 required");
    Nat pm = pell(m);
    return [pm, gap](mpfr_prec_t p) {
        RealBall two_sqrt2 = RealBall::sqrt2(p).mul_ui(2);
        RealBall den = two_sqrt2.recip() - alpha_ball(p).pow_ui(gap).recip();
        return (log_nat(pm, p) - den.log()) / log_alpha(p);
    };
}

BallFn mu_eq2_cell(unsigned long m, unsigned long gap) {
    if (gap < 1) throw std::invalid_argument("mu_eq2_cell: gap >= 1 required");
    Nat qm = pell_lucas(m);
    return [qm, gap](mpfr_prec_t p) {
        RealBall den = RealBall::from_ui(1, p) - alpha_ball(p).pow_ui(gap).recip();
        return (log_two_sqrt2(p) + log_nat(qm, p) - den.log()) / log_alpha(p);
    };
}

BallFn mu_eq2_phase1() {
    return [](mpfr_prec_t p) { return log_two_sqrt2(p) / log_alpha(p); };
}

PhaseReport eq2_phase1(unsigned base, const mpz_class& M, const PrecisionPolicy& policy) {
    ReductionInstance inst;
    inst.base = base;
    inst.tau = log_ratio_target(base);
    inst.mu = mu_eq2_phase1();
    inst.A = [base](mpfr_prec_t p) { return RealBall::from_ui(4UL * base, p) / log_alpha(p); };
    inst.B = [](mpfr_prec_t p) { return alpha_ball(p); };
    inst.M = M;
    inst.policy = policy;
    inst.label = "eq2 phase1 base " + std::to_string(base);

    PhaseReport rep;
    rep.eq = Equation::eq2;
    rep.base = base;
    rep.phase = 1;
    rep.M = M;
    CellOutcome cell;
    cell.red = bd_reduce(inst);
    rep.aggregate.w_exclusive = cell.red.w_bound;
    rep.aggregate.worst_index = cell.red.convergent_index;
    rep.aggregate.worst_q = cell.red.q;
    rep.aggregate.worst_epsilon_lower = cell.red.epsilon.lower_decimal(6);
    rep.conclusion = "n-k-1 < " + rep.aggregate.w_exclusive.get_str();
    rep.cells.push_back(std::move(cell));
    return rep;
}

ContradictionCertificate legendre_phase1_eq1(unsigned base, const mpz_class& M,
                                             unsigned gap_floor, const PrecisionPolicy& policy) {
    CFExpansion cf = expand(base, StopRule::denominator_exceeds(M), policy);
    MaxQuotient mq = max_partial_quotient(cf, M);

    const mpfr_prec_t prec = 256;
    RealBall la = log_alpha(prec);
    RealBall apow = alpha_ball(prec).pow_ui(gap_floor);
    RealBall m_ball = RealBall::from_integer(M, prec);
    RealBall half = RealBall::from_ratio(1, 2, prec);

    // |Lambda_1| < 1.1 b / alpha^gap < 1/2 so |Gamma_1| < 2.2 b / alpha^gap
    RealBall small = RealBall::from_decimal("1.1", prec).mul_ui(base) / apow;
    if (!small.certainly_less(half)) {
        throw ContradictionFailed("legendre_phase1_eq1: linear form not certified below 1/2");
    }
    // window for the quotient criterion: log alpha alpha^gap / (4.4 b) > M
    RealBall window = la * apow / RealBall::from_decimal("4.4", prec).mul_ui(base);
    bool window_ok = m_ball.certainly_less(window);

    RealBall denom = RealBall::from_decimal("2.2", prec).mul_ui(base).mul_integer(mq.value + 2);
    RealBall lower = la * apow / denom;
    if (!window_ok || !m_ball.certainly_less(lower)) {
        throw ContradictionFailed("legendre_phase1_eq1: derived lower bound " +
                                  lower.enclosure() + " does not exceed M = " + M.get_str() +
                                  " at gap_floor " + std::to_string(gap_floor));
    }

    ContradictionCertificate cert;
    cert.base = base;
    cert.M = M;
    cert.gap_floor = gap_floor;
    cert.a_of_M = mq.value;
    cert.a_index = mq.argmax;
    cert.depth = mq.depth;
    cert.derived_lower_bound = lower;
    cert.window_checked = window_ok;
    return cert;
}

PhaseReport phase2(Equation eq, unsigned base, GridRange m_range, GridRange gap_range,
                   const mpz_class& M, unsigned jobs, const PrecisionPolicy& policy) {
    if (eq == Equation::eq1 && m_range.lo < 1) {
        throw std::invalid_argument("phase2: eq1 needs m >= 1");
    }
    if (gap_range.lo < (eq == Equation::eq1 ? 2UL : 1UL)) {
        throw std::invalid_argument("phase2: gap below the equation's minimum");
    }

    PhaseReport rep;
    rep.eq = eq;
    rep.base = base;
    rep.phase = 2;
    rep.M = M;

    CFExpansion cf = expand(base, StopRule::denominator_exceeds(6 * M), policy);
    ReductionContext ctx(std::move(cf), M, 24);

    const unsigned long m_count = m_range.hi - m_range.lo + 1;
    const unsigned long gap_count = gap_range.hi - gap_range.lo + 1;
    const std::size_t total = static_cast<std::size_t>(m_count) * gap_count;
    rep.cells.resize(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&]() {
        while (true) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            {
                std::lock_guard<std::mutex> lk(error_mu);
                if (first_error) return;
            }
            unsigned long m = m_range.lo + static_cast<unsigned long>(idx / gap_count);
            unsigned long gap = gap_range.lo + static_cast<unsigned long>(idx % gap_count);
            try {
                ReductionInstance inst;
                inst.base = base;
                inst.label = "phase2 base " + std::to_string(base) + " cell m=" +
                             std::to_string(m) + " gap=" + std::to_string(gap);
                inst.tau = log_ratio_target(base);
                inst.mu = eq == Equation::eq1 ? mu_eq1_cell(m, gap) : mu_eq2_cell(m, gap);
                const char* a_lit = eq == Equation::eq1 ? "11.77" : "6.84";
                inst.A = [a_lit](mpfr_prec_t p) {
                    return RealBall::from_decimal(a_lit, p) / log_alpha(p);
                };
                inst.B = [](mpfr_prec_t p) { return alpha_ball(p); };
                inst.M = M;
                inst.max_convergent_advance = 20;
                inst.improve_window = 0;
                inst.policy = policy;
                CellOutcome cell;
                cell.m = m;
                cell.gap = gap;
                // cells whose mu sits next to an integer shift of r tau starve
                // the reduction lemma (||mu q|| tracks ||tau q||); the
                // partial-quotient gap closes them directly
                std::optional<QuotientGapBound> near = quotient_gap_bound(inst, ctx, eq, gap);
                if (near) {
                    cell.method = CellOutcome::Method::quotient_gap;
                    cell.gap_bound = std::move(*near);
                } else {
                    cell.method = CellOutcome::Method::reduction;
                    cell.red = bd_reduce(inst, &ctx);
                }
                rep.cells[idx] = std::move(cell);
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!first_error) {
                    try {
                        std::throw_with_nested(std::runtime_error(
                            "phase2 cell m=" + std::to_string(m) + " gap=" + std::to_string(gap)));
                    } catch (...) {
                        first_error = std::current_exception();
                    }
                }
                return;
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // deterministic max aggregation in grid order
    bool first = true;
    for (const auto& cell : rep.cells) {
        if (first || cell.w() > rep.aggregate.w_exclusive) {
            rep.aggregate.w_exclusive = cell.w();
            rep.aggregate.worst_m = cell.m;
            rep.aggregate.worst_gap = cell.gap;
            if (cell.method == CellOutcome::Method::reduction) {
                rep.aggregate.worst_index = cell.red.convergent_index;
                rep.aggregate.worst_q = cell.red.q;
                rep.aggregate.worst_epsilon_lower = cell.red.epsilon.lower_decimal(6);
            } else {
                rep.aggregate.worst_index = 0;
                rep.aggregate.worst_q = 0;
                rep.aggregate.worst_epsilon_lower =
                    "near-integral mu, |mu - round(mu)| <= " +
                    cell.gap_bound.mu_int_dist.upper_decimal(6);
            }
            first = false;
        }
    }
    mpz_class n_max = rep.aggregate.w_exclusive - 1;
    rep.conclusion = "n <= " + n_max.get_str();
    return rep;
}

unsigned long derive_gap_bound(Equation eq, unsigned base, unsigned long m_max,
                               mpfr_prec_t prec) {
    if (m_max < 1) throw std::invalid_argument("derive_gap_bound: m_max >= 1 required");
    RealBall v = log_nat(base + 1, prec) / log_alpha(prec);
    if (eq == Equation::eq1) {
        // n - k < m_max + 2 + log(b+1)/log alpha
        mpz_class bound = v.add_integer(mpz_class(m_max) + 2).strict_integer_bound();
        return bound.get_ui();
    }
    // n - k <= m_max + 3 + log(b+1)/log alpha
    mpz_class bound = v.add_integer(mpz_class(m_max) + 3).ceil_of_upper();
    return bound.get_ui();
}

}  // namespace pellconcat
