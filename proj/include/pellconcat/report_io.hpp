#pragma once

#include "pellconcat/contfrac.hpp"
#include "pellconcat/search.hpp"

#include <json.hpp>

#include <span>
#include <string>

namespace pellconcat {

using ordered_json = nlohmann::ordered_json;

// Reals in reports are decimal strings with explicit role tags, never bare
// floats: {"lower_bound": "...", "upper_bound": "..."}.
ordered_json ball_json(const RealBall& x, int digits = 20);

ordered_json to_json(const Solution& s);
ordered_json to_json(const CFExpansion& cf);
ordered_json to_json(const BoundStage& st);
ordered_json to_json(const AbsoluteBoundReport& rep);
ordered_json to_json(const ContradictionCertificate& cert);
ordered_json to_json(const PhaseReport& rep);
ordered_json to_json(const PipelineReport& rep);
ordered_json to_json(const VerificationReport& rep);

std::string solutions_csv(std::span<const Solution> sols);
// Paper-style layout: one column per base, rows q-index, m, n-k, epsilon,
// n-bound.
std::string phase_table_csv(std::span<const PhaseReport> reports);

// path "-" or "" writes to stdout
void write_output(const std::string& path, const std::string& content);

}  // namespace pellconcat
