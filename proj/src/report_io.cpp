#include "pellconcat/report_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace pellconcat {

ordered_json ball_json(const RealBall& x, int digits) {
    return ordered_json{{"lower_bound", x.lower_decimal(digits)},
                        {"upper_bound", x.upper_decimal(digits)}};
}

ordered_json to_json(const Solution& s) {
    ordered_json j{{"equation", static_cast<int>(s.eq)}, {"b", s.base},
                   {"d", s.digits},                      {"n", s.n},
                   {"m", s.m},                           {"k", s.k},
                   {"lhs", s.lhs.get_str()},             {"term1", s.term1.get_str()},
                   {"term2", s.term2.get_str()}};
    if (s.degenerate) j["degenerate"] = true;
    return j;
}

ordered_json to_json(const CFExpansion& cf) {
    ordered_json quots = ordered_json::array();
    for (const auto& a : cf.quotients) quots.push_back(a.get_str());
    ordered_json convs = ordered_json::array();
    for (std::size_t t = 0; t < cf.convergents.size(); ++t) {
        convs.push_back(ordered_json{
            {"t", t}, {"p", cf.p(t).get_str()}, {"q", cf.q(t).get_str()}});
    }
    return ordered_json{{"b", cf.base},
                        {"partial_quotients", std::move(quots)},
                        {"convergents", std::move(convs)}};
}

ordered_json to_json(const BoundStage& st) {
    ordered_json j{{"stage", st.id},
                   {"computed", ball_json(st.computed)},
                   {"anchor", st.anchor},
                   {"anchor_is_upper_bound", st.anchor_is_upper}};
    if (!st.b_role.empty()) j["B"] = st.b_role;
    return j;
}

ordered_json to_json(const AbsoluteBoundReport& rep) {
    ordered_json stages = ordered_json::array();
    for (const auto& st : rep.stages) stages.push_back(to_json(st));
    return ordered_json{{"equation", static_cast<int>(rep.eq)},
                        {"b", rep.base},
                        {"stages", std::move(stages)},
                        {"solver_l", rep.lemma7_l},
                        {"solver_H", ball_json(rep.lemma7_H)},
                        {"n_bound", ball_json(rep.final_bound)},
                        {"n_bound_int", rep.final_bound_int.get_str()},
                        {"published_form", ball_json(rep.published_form)},
                        {"within_published_form", rep.within_published}};
}

ordered_json to_json(const ContradictionCertificate& cert) {
    return ordered_json{{"b", cert.base},
                        {"M", cert.M.get_str()},
                        {"gap_floor", cert.gap_floor},
                        {"a_of_M", cert.a_of_M.get_str()},
                        {"a_index", published_index(cert.a_index)},
                        {"depth", published_index(cert.depth)},
                        {"derived_d_lower_bound", ball_json(cert.derived_lower_bound)},
                        {"window_checked", cert.window_checked},
                        {"conclusion", "m <= 100"}};
}

ordered_json to_json(const PhaseReport& rep) {
    ordered_json j{{"equation", static_cast<int>(rep.eq)},
                   {"b", rep.base},
                   {"phase", rep.phase},
                   {"M", rep.M.get_str()},
                   {"cells", rep.cells.size()}};
    j["worst"] = ordered_json{{"q_index", published_index(rep.aggregate.worst_index)},
                              {"q", rep.aggregate.worst_q.get_str()},
                              {"m", rep.aggregate.worst_m},
                              {"gap", rep.aggregate.worst_gap},
                              {"epsilon_lower_bound", rep.aggregate.worst_epsilon_lower},
                              {"w_exclusive", rep.aggregate.w_exclusive.get_str()}};
    j["conclusion"] = rep.conclusion;
    return j;
}

ordered_json to_json(const PipelineReport& rep) {
    ordered_json j{{"equation", static_cast<int>(rep.eq)}, {"b", rep.base}};
    j["absolute_bound"] = to_json(rep.absolute);
    j["phase1_M"] = rep.phase1_M.get_str();
    if (rep.phase1_legendre) j["phase1"] = to_json(*rep.phase1_legendre);
    if (rep.phase1_reduction) j["phase1"] = to_json(*rep.phase1_reduction);
    j["m_bound"] = rep.m_bound;
    j["gap_bound"] = rep.gap_bound;
    j["pre_reduction_n_bound"] = rep.pre_reduction_n_bound.get_str();
    j["phase2_M"] = rep.phase2_M.get_str();
    j["phase2"] = to_json(rep.phase2);
    if (rep.phase2_refined) {
        j["refined_M"] = rep.refined_M.get_str();
        j["phase2_refined"] = to_json(*rep.phase2_refined);
    }
    j["n_bound"] = rep.n_bound;
    ordered_json sols = ordered_json::array();
    for (const auto& s : rep.solutions) sols.push_back(to_json(s));
    j["solutions"] = std::move(sols);
    ordered_json degen = ordered_json::array();
    for (const auto& s : rep.degenerate_solutions) degen.push_back(to_json(s));
    j["degenerate_solutions"] = std::move(degen);
    return j;
}

ordered_json to_json(const VerificationReport& rep) {
    ordered_json cells = ordered_json::array();
    for (const auto& c : rep.cells) {
        cells.push_back(ordered_json{{"table", c.table},
                                     {"row", c.row},
                                     {"b", c.base},
                                     {"expected", c.expected},
                                     {"actual", c.actual},
                                     {"comparison", to_string(c.cmp)},
                                     {"mismatch_allowed", c.mismatch_allowed}});
    }
    return ordered_json{{"cells", std::move(cells)}, {"passed", rep.passed()}};
}

std::string solutions_csv(std::span<const Solution> sols) {
    std::ostringstream out;
    out << "equation,b,d,n,m,k,lhs,term1,term2,degenerate\n";
    for (const auto& s : sols) {
        out << static_cast<int>(s.eq) << ',' << s.base << ',' << s.digits << ',' << s.n << ','
            << s.m << ',' << s.k << ',' << s.lhs.get_str() << ',' << s.term1.get_str() << ','
            << s.term2.get_str() << ',' << (s.degenerate ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string phase_table_csv(std::span<const PhaseReport> reports) {
    std::ostringstream out;
    out << "row";
    for (const auto& r : reports) out << ",b=" << r.base;
    out << "\nq_index";
    for (const auto& r : reports) out << ",q_" << published_index(r.aggregate.worst_index);
    out << "\nm";
    for (const auto& r : reports) out << ',' << r.aggregate.worst_m;
    out << "\nn_minus_k";
    for (const auto& r : reports) out << ',' << r.aggregate.worst_gap;
    out << "\nepsilon_lower_bound";
    for (const auto& r : reports) out << ',' << r.aggregate.worst_epsilon_lower;
    out << "\nbound";
    for (const auto& r : reports) out << ',' << r.conclusion;
    out << '\n';
    return out.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << content;
}

}  // namespace pellconcat
