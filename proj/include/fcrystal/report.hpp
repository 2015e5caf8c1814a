#pragma once

// Analysis reports in JSON and as an aligned text table.

#include "fcrystal/level_torsion.hpp"
#include "fcrystal/spec_file.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fcrystal {

inline constexpr const char* kReportSchema = "fcrystal-report/1";

struct AnalysisInput {
    CrystalSpec spec;
    ResolvedPrecision precision;
    std::optional<int> requested_precision;
    std::string modulus;
};

// Runs the full analysis of a spec (precision already resolved).
IsoReport analyze(const AnalysisInput& input);

// Lower convex polygon vertices of a slope multiset starting at (0, 0).
std::vector<std::pair<int, Rational>> polygon_vertices(const std::vector<Rational>& slopes);

nlohmann::ordered_json report_json(const AnalysisInput& input, const IsoReport& report);
std::string report_table(const AnalysisInput& input, const IsoReport& report);

}  // namespace fcrystal
