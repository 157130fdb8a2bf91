#include "pellconcat/cli.hpp"

#include "pellconcat/report_io.hpp"
#include "pellconcat/search.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

namespace pellconcat {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitCertificate = 4;
constexpr int kExitMismatch = 5;

mpz_class parse_decimal_mpz(const std::string& text) {
    mpz_class mant = 0;
    long frac = 0, exp10 = 0;
    bool seen_dot = false;
    std::size_t i = 0;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '.') {
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            mant = mant * 10 + (ch - '0');
            if (seen_dot) ++frac;
        } else if (ch == 'e' || ch == 'E') {
            exp10 = std::stol(text.substr(i + 1));
            break;
        } else {
            throw CLI::ValidationError("--until-q", "not a decimal integer: " + text);
        }
    }
    long scale = exp10 - frac;
    if (scale < 0) throw CLI::ValidationError("--until-q", "not an integer: " + text);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(scale));
    return mant * p;
}

struct CliConfig {
    int equation = 0;
    unsigned base = 0;
    unsigned base_min = 2;
    unsigned base_max = 10;
    std::string until_q;
    std::size_t terms = 0;
    unsigned long m_max = 100;
    std::string out;
    std::string format = "json";
    long precision_initial = 0;
    long precision_max = 0;
    unsigned jobs = 0;

    PrecisionPolicy policy() const {
        PrecisionPolicy pol = PrecisionPolicy::defaults();
        if (precision_initial > 0) pol.initial_bits = precision_initial;
        if (precision_max > 0) pol.max_bits = precision_max;
        if (const char* env = std::getenv("PELLCONCAT_PRECISION_MAX")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= pol.initial_bits) pol.max_bits = v;
        }
        return pol;
    }

    unsigned effective_jobs() const {
        if (jobs != 0) return jobs;
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
};

std::string dump(const ordered_json& j) { return j.dump(2); }

int cmd_solve(const CliConfig& cfg) {
    Equation eq = static_cast<Equation>(cfg.equation);
    std::vector<PipelineReport> reports;
    std::vector<Solution> solutions, degenerate;
    for (unsigned b = cfg.base_min; b <= cfg.base_max; ++b) {
        PipelineReport rep = run_pipeline(eq, b, cfg.effective_jobs(), cfg.policy());
        solutions.insert(solutions.end(), rep.solutions.begin(), rep.solutions.end());
        degenerate.insert(degenerate.end(), rep.degenerate_solutions.begin(),
                          rep.degenerate_solutions.end());
        reports.push_back(std::move(rep));
    }
    std::sort(solutions.begin(), solutions.end(),
              [](const Solution& a, const Solution& b) { return a.key() < b.key(); });
    std::sort(degenerate.begin(), degenerate.end(),
              [](const Solution& a, const Solution& b) { return a.key() < b.key(); });

    if (cfg.format == "csv") {
        std::vector<Solution> all(solutions);
        all.insert(all.end(), degenerate.begin(), degenerate.end());
        std::sort(all.begin(), all.end(),
                  [](const Solution& a, const Solution& b) { return a.key() < b.key(); });
        write_output(cfg.out, solutions_csv(all));
        return kExitOk;
    }
    if (cfg.format == "text") {
        std::ostringstream os;
        os << "equation " << cfg.equation << ", bases " << cfg.base_min << ".." << cfg.base_max
           << "\n";
        for (const auto& s : solutions) {
            os << "P_" << s.n << " = " << s.lhs.get_str() << " = " << s.base << "^" << s.digits
               << " * " << (s.eq == Equation::eq1 ? "P_" : "Q_") << s.m << " + "
               << (s.eq == Equation::eq1 ? "Q_" : "P_") << s.k << "\n";
        }
        if (!degenerate.empty()) {
            os << "degenerate (m = 0):\n";
            for (const auto& s : degenerate) {
                os << "P_" << s.n << " = Q_" << s.k << " = " << s.lhs.get_str() << " (b=" << s.base
                   << ")\n";
            }
        }
        write_output(cfg.out, os.str());
        return kExitOk;
    }
    ordered_json j{{"equation", cfg.equation},
                   {"base_min", cfg.base_min},
                   {"base_max", cfg.base_max}};
    ordered_json sols = ordered_json::array();
    for (const auto& s : solutions) sols.push_back(to_json(s));
    j["solutions"] = std::move(sols);
    ordered_json degen = ordered_json::array();
    for (const auto& s : degenerate) degen.push_back(to_json(s));
    j["degenerate_solutions"] = std::move(degen);
    ordered_json pipes = ordered_json::array();
    for (const auto& r : reports) pipes.push_back(to_json(r));
    j["pipelines"] = std::move(pipes);
    write_output(cfg.out, dump(j));
    return kExitOk;
}

int cmd_cf(const CliConfig& cfg) {
    StopRule rule = StopRule::term_count(cfg.terms > 0 ? cfg.terms : 40);
    if (!cfg.until_q.empty()) rule = StopRule::denominator_exceeds(parse_decimal_mpz(cfg.until_q));
    CFExpansion cf = expand(cfg.base, rule, cfg.policy());
    write_output(cfg.out, dump(to_json(cf)));
    return kExitOk;
}

int cmd_bounds(const CliConfig& cfg) {
    AbsoluteBoundReport rep = absolute_bound(static_cast<Equation>(cfg.equation), cfg.base);
    write_output(cfg.out, dump(to_json(rep)));
    return kExitOk;
}

int cmd_reduce(const CliConfig& cfg) {
    Equation eq = static_cast<Equation>(cfg.equation);
    unsigned bmin = cfg.base != 0 ? cfg.base : cfg.base_min;
    unsigned bmax = cfg.base != 0 ? cfg.base : cfg.base_max;
    const mpz_class phase1_M =
        eq == Equation::eq1 ? mpz_class("91200000000000000000000000000")
                            : mpz_class("75000000000000000000000000000000");
    const mpz_class phase2_M = eq == Equation::eq1 ? mpz_class("65500000000000000")
                                                   : mpz_class("70000000000000000");
    ordered_json phase1 = ordered_json::array();
    std::vector<PhaseReport> phase2_reports;
    for (unsigned b = bmin; b <= bmax; ++b) {
        if (eq == Equation::eq1) {
            phase1.push_back(to_json(legendre_phase1_eq1(b, phase1_M, 96, cfg.policy())));
        } else {
            phase1.push_back(to_json(eq2_phase1(b, phase1_M, cfg.policy())));
        }
        unsigned long gap = derive_gap_bound(eq, b, cfg.m_max);
        GridRange m_range{eq == Equation::eq1 ? 1UL : 0UL, cfg.m_max};
        GridRange gap_range{eq == Equation::eq1 ? 2UL : 1UL, gap};
        phase2_reports.push_back(
            phase2(eq, b, m_range, gap_range, phase2_M, cfg.effective_jobs(), cfg.policy()));
    }
    if (cfg.format == "csv") {
        write_output(cfg.out, phase_table_csv(phase2_reports));
        return kExitOk;
    }
    ordered_json ph2 = ordered_json::array();
    for (const auto& r : phase2_reports) ph2.push_back(to_json(r));
    ordered_json j{{"equation", cfg.equation}, {"phase1", std::move(phase1)},
                   {"phase2", std::move(ph2)}};
    write_output(cfg.out, dump(j));
    return kExitOk;
}

int cmd_verify(const CliConfig& cfg) {
    VerificationReport rep = verify_reference_tables(cfg.effective_jobs());
    write_output(cfg.out, dump(to_json(rep)));
    return rep.passed() ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"certified solver for Pell-number b-concatenation equations"};
    app.require_subcommand(1);

    CliConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output path, - for stdout");
        sub->add_option("--format", cfg.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--precision-initial", cfg.precision_initial, "initial working bits");
        sub->add_option("--precision-max", cfg.precision_max, "precision ceiling in bits");
        sub->add_option("--jobs", cfg.jobs, "worker threads, 0 = hardware");
    };

    CLI::App* solve = app.add_subcommand("solve", "run the full pipeline and list solutions");
    solve->add_option("--equation", cfg.equation)->required()->check(CLI::Range(1, 2));
    solve->add_option("--base-min", cfg.base_min)->check(CLI::Range(2u, 65536u));
    solve->add_option("--base-max", cfg.base_max)->check(CLI::Range(2u, 65536u));
    solve->add_option("--m-max", cfg.m_max);
    add_common(solve);

    CLI::App* cf = app.add_subcommand("cf", "continued fraction of log b / log(1+sqrt2)");
    cf->add_option("--base", cfg.base)->required()->check(CLI::Range(2u, 65536u));
    cf->add_option("--until-q", cfg.until_q, "expand until q_t exceeds this");
    cf->add_option("--terms", cfg.terms, "number of partial quotients");
    add_common(cf);

    CLI::App* bounds = app.add_subcommand("bounds", "absolute bound chain for one base");
    bounds->add_option("--equation", cfg.equation)->required()->check(CLI::Range(1, 2));
    bounds->add_option("--base", cfg.base)->required()->check(CLI::Range(2u, 65536u));
    add_common(bounds);

    CLI::App* reduce = app.add_subcommand("reduce", "phase-1 and phase-2 reductions");
    reduce->add_option("--equation", cfg.equation)->required()->check(CLI::Range(1, 2));
    reduce->add_option("--base", cfg.base)->check(CLI::Range(2u, 65536u));
    reduce->add_option("--base-min", cfg.base_min)->check(CLI::Range(2u, 65536u));
    reduce->add_option("--base-max", cfg.base_max)->check(CLI::Range(2u, 65536u));
    reduce->add_option("--m-max", cfg.m_max);
    add_common(reduce);

    CLI::App* verify = app.add_subcommand("verify", "recompute the published tables");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (cf->parsed()) return cmd_cf(cfg);
        if (bounds->parsed()) return cmd_bounds(cfg);
        if (reduce->parsed()) return cmd_reduce(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        return kExitUsage;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const CertificateError& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const ContradictionFailed& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const NoPositiveEpsilon& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pellconcat
