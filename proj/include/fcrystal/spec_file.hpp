#pragma once

// JSON crystal specifications: explicit matrices or named families.

#include "fcrystal/fcrystal.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fcrystal {

struct FamilySpec {
    std::string kind;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
};

struct CrystalSpec {
    long p = 0;
    int m = 1;
    int rank = 0;
    std::optional<int> precision;
    // matrix[i][j] = coefficients (x^0 first) of the entry in row i, column j.
    std::optional<std::vector<std::vector<std::vector<mpz_class>>>> matrix;
    std::vector<int> summands;
    std::optional<FamilySpec> family;
    nlohmann::json provenance;  // null when absent
};

// Throws ParseError on malformed input.
CrystalSpec parse_spec(const nlohmann::json& doc);
CrystalSpec load_spec(const std::string& path);
nlohmann::ordered_json spec_to_json(const CrystalSpec& spec);

const std::vector<std::string>& family_kinds();

// Builds the crystal at the given context (whose p and m must match).
FCrystal build_crystal(const CrystalSpec& spec, const Context& ctx);

// Rewrites a family spec as an explicit matrix at its own automatic precision,
// keeping the family descriptor under "provenance".
CrystalSpec materialize_family(const CrystalSpec& spec);

// Precision resolution: Hodge data at a provisional precision, then the
// horizon and the precision it needs.
struct ResolvedPrecision {
    int horizon = 0;
    int automatic = 0;  // smallest precision the analysis accepts
    int used = 0;
};
ResolvedPrecision resolve_precision(const CrystalSpec& spec, std::optional<int> horizon);

}  // namespace fcrystal
