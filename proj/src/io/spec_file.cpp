#include "fcrystal/spec_file.hpp"

#include "fcrystal/errors.hpp"
#include "fcrystal/families.hpp"
#include "fcrystal/level_torsion.hpp"

#include <fstream>
#include <limits>

namespace fcrystal {

namespace {

using nlohmann::json;

mpz_class parse_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return mpz_class(std::to_string(v.get<std::uint64_t>()));
        return mpz_class(std::to_string(v.get<std::int64_t>()));
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        mpz_class out;
        const std::string digits = !s.empty() && s.front() == '+' ? s.substr(1) : s;
        if (digits.empty() || out.set_str(digits, 10) != 0)
            throw ParseError(where + ": '" + s + "' is not a decimal integer");
        return out;
    }
    throw ParseError(where + ": expected an integer");
}

int parse_small(const json& v, const std::string& where) {
    const mpz_class z = parse_integer(v, where);
    if (!z.fits_sint_p()) throw ParseError(where + ": integer out of range");
    return static_cast<int>(z.get_si());
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
    return obj.at(key);
}

int param_int(const json& params, const char* key) {
    return parse_small(require(params, key, "family params"), std::string("family params.") + key);
}

std::vector<int> param_list(const json& params, const char* key) {
    const json& v = require(params, key, "family params");
    if (!v.is_array()) throw ParseError(std::string("family params.") + key + ": expected a list");
    std::vector<int> out;
    for (const auto& x : v) out.push_back(parse_small(x, std::string("family params.") + key));
    return out;
}

nlohmann::ordered_json integer_json(const mpz_class& z) {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

FCrystal build_family(const FamilySpec& f, const Context& ctx) {
    const json& prm = f.params;
    if (f.kind == "permutational") {
        std::vector<int> pi = param_list(prm, "pi");
        for (int& x : pi) --x;  // 1-based in files
        return make_permutational(ctx, PermSpec{pi, param_list(prm, "e")});
    }
    if (f.kind == "cyclic") return make_cyclic(ctx, param_list(prm, "e"));
    if (f.kind == "k3-isoclinic") return make_k3_isoclinic(ctx, param_int(prm, "r"));
    if (f.kind == "k3-nonisoclinic")
        return make_k3_nonisoclinic(ctx, param_int(prm, "r1"), param_int(prm, "mid"), param_int(prm, "r2"));
    if (f.kind == "rank2") return make_rank2(ctx, param_int(prm, "l1"), param_int(prm, "l2"), f.seed);
    if (f.kind == "supersingular") return make_supersingular_like(ctx, param_int(prm, "d"), param_int(prm, "e"));
    throw BadParameters("unknown family kind '" + f.kind + "'");
}

}  // namespace

const std::vector<std::string>& family_kinds() {
    static const std::vector<std::string> kinds{"permutational", "cyclic",  "k3-isoclinic",
                                                "k3-nonisoclinic", "rank2", "supersingular"};
    return kinds;
}

CrystalSpec parse_spec(const json& doc) {
    if (!doc.is_object()) throw ParseError("spec must be a JSON object");
    CrystalSpec spec;
    const mpz_class p = parse_integer(require(doc, "p", "spec"), "p");
    if (!p.fits_slong_p() || p < 2) throw ParseError("p out of range");
    spec.p = p.get_si();
    spec.m = parse_small(require(doc, "m", "spec"), "m");
    spec.rank = parse_small(require(doc, "rank", "spec"), "rank");
    if (spec.m < 1) throw ParseError("m must be >= 1");
    if (spec.rank < 1) throw ParseError("rank must be >= 1");
    if (doc.contains("precision") && !doc.at("precision").is_null()) {
        spec.precision = parse_small(doc.at("precision"), "precision");
        if (*spec.precision < 1) throw ParseError("precision must be >= 1");
    }

    const bool has_matrix = doc.contains("matrix");
    const bool has_family = doc.contains("family");
    if (has_matrix == has_family) throw ParseError("spec needs exactly one of 'matrix' and 'family'");

    if (has_matrix) {
        const json& rows = doc.at("matrix");
        if (!rows.is_array() || static_cast<int>(rows.size()) != spec.rank)
            throw ParseError("matrix must have 'rank' rows");
        std::vector<std::vector<std::vector<mpz_class>>> mat;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const json& row = rows[i];
            if (!row.is_array() || static_cast<int>(row.size()) != spec.rank)
                throw ParseError("matrix row " + std::to_string(i) + " must have 'rank' entries");
            std::vector<std::vector<mpz_class>> out_row;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const std::string where = "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                std::vector<mpz_class> coeffs(static_cast<std::size_t>(spec.m), 0);
                const json& entry = row[j];
                if (entry.is_array()) {
                    if (static_cast<int>(entry.size()) != spec.m)
                        throw ParseError(where + ": expected " + std::to_string(spec.m) + " coefficients");
                    for (std::size_t k = 0; k < entry.size(); ++k) coeffs[k] = parse_integer(entry[k], where);
                } else {
                    coeffs[0] = parse_integer(entry, where);
                }
                out_row.push_back(std::move(coeffs));
            }
            mat.push_back(std::move(out_row));
        }
        spec.matrix = std::move(mat);
    } else {
        const json& fam = doc.at("family");
        if (!fam.is_object()) throw ParseError("family must be an object");
        FamilySpec f;
        const json& kind = require(fam, "kind", "family");
        if (!kind.is_string()) throw ParseError("family.kind must be a string");
        f.kind = kind.get<std::string>();
        if (fam.contains("params")) {
            if (!fam.at("params").is_object()) throw ParseError("family.params must be an object");
            f.params = fam.at("params");
        }
        if (fam.contains("seed")) {
            const mpz_class s = parse_integer(fam.at("seed"), "family.seed");
            if (s < 0 || mpz_sizeinbase(s.get_mpz_t(), 2) > 64) throw ParseError("family.seed must fit in 64 bits");
            f.seed = std::stoull(s.get_str());
        }
        spec.family = std::move(f);
    }

    if (doc.contains("summands") && !doc.at("summands").is_null()) {
        const json& s = doc.at("summands");
        if (!s.is_array()) throw ParseError("summands must be a list of block sizes");
        int total = 0;
        for (const auto& x : s) {
            spec.summands.push_back(parse_small(x, "summands"));
            if (spec.summands.back() < 1) throw ParseError("summand sizes must be positive");
            total += spec.summands.back();
        }
        if (total != spec.rank) throw ParseError("summand sizes must sum to rank");
    }
    if (doc.contains("provenance")) spec.provenance = doc.at("provenance");
    return spec;
}

CrystalSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read spec file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_spec(doc);
}

nlohmann::ordered_json spec_to_json(const CrystalSpec& spec) {
    nlohmann::ordered_json out;
    out["p"] = spec.p;
    out["m"] = spec.m;
    out["rank"] = spec.rank;
    if (spec.precision) out["precision"] = *spec.precision;
    if (spec.matrix) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : *spec.matrix) {
            auto r = nlohmann::ordered_json::array();
            for (const auto& entry : row) {
                auto e = nlohmann::ordered_json::array();
                for (const auto& c : entry) e.push_back(integer_json(c));
                r.push_back(std::move(e));
            }
            rows.push_back(std::move(r));
        }
        out["matrix"] = std::move(rows);
    }
    if (spec.family) {
        nlohmann::ordered_json f;
        f["kind"] = spec.family->kind;
        f["params"] = spec.family->params;
        f["seed"] = spec.family->seed;
        out["family"] = std::move(f);
    }
    if (!spec.summands.empty()) out["summands"] = spec.summands;
    if (!spec.provenance.is_null()) out["provenance"] = spec.provenance;
    return out;
}

FCrystal build_crystal(const CrystalSpec& spec, const Context& ctx) {
    if (ctx->p() != spec.p || ctx->degree() != spec.m) throw ContextMismatch();
    if (spec.family) {
        FCrystal c = build_family(*spec.family, ctx);
        if (spec.rank > 0 && c.rank() != spec.rank)
            throw BadParameters("family has rank " + std::to_string(c.rank()) + " but the spec says " +
                                std::to_string(spec.rank));
        if (!spec.summands.empty()) return FCrystal::create(c.matrix(), spec.summands);
        return c;
    }
    const auto& mat = *spec.matrix;
    WMatrix a(ctx, spec.rank, spec.rank);
    for (int i = 0; i < spec.rank; ++i)
        for (int j = 0; j < spec.rank; ++j)
            a(i, j) = WittApprox(ctx, mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return FCrystal::create(std::move(a), spec.summands);
}

ResolvedPrecision resolve_precision(const CrystalSpec& spec, std::optional<int> horizon) {
    if (!is_prime(spec.p)) throw NotPrime(std::to_string(spec.p) + " is not prime");
    constexpr int kLimit = 4096;
    int n = std::max(spec.precision.value_or(0), 16);
    std::optional<FCrystal> probe;
    while (!probe) {
        try {
            probe = build_crystal(spec, PrimeContext::create(spec.p, spec.m, n));
        } catch (const PrecisionExhausted& e) {
            if (n >= kLimit) throw;
            n = std::min(kLimit, std::max(2 * n, e.needed()));
        } catch (const SingularAtPrecision&) {
            if (n >= kLimit) throw;
            n = std::min(kLimit, 2 * n);
        }
    }
    const auto& hodge = probe->hodge();
    int sum = 0;
    for (int e : hodge) sum += e;
    ResolvedPrecision out;
    out.horizon = horizon.value_or(default_horizon(probe->rank(), hodge.back()));
    if (out.horizon < 1) throw BadParameters("horizon must be >= 1");
    out.automatic = required_precision(hodge.back(), sum, spec.m, out.horizon);
    out.used = std::max(out.automatic, spec.precision.value_or(0));
    return out;
}

CrystalSpec materialize_family(const CrystalSpec& spec) {
    if (!spec.family) return spec;
    const auto res = resolve_precision(spec, std::nullopt);
    const auto ctx = PrimeContext::create(spec.p, spec.m, res.used);
    const FCrystal c = build_crystal(spec, ctx);
    CrystalSpec out;
    out.p = spec.p;
    out.m = spec.m;
    out.rank = c.rank();
    out.precision = res.used;
    std::vector<std::vector<std::vector<mpz_class>>> mat;
    for (int i = 0; i < c.rank(); ++i) {
        std::vector<std::vector<mpz_class>> row;
        for (int j = 0; j < c.rank(); ++j) row.push_back(c.matrix()(i, j).coeffs());
        mat.push_back(std::move(row));
    }
    out.matrix = std::move(mat);
    out.summands = c.summand_sizes();
    json prov = spec.provenance.is_object() ? spec.provenance : json::object();
    prov["family"] = {{"kind", spec.family->kind}, {"params", spec.family->params}, {"seed", spec.family->seed}};
    out.provenance = std::move(prov);
    return out;
}

}  // namespace fcrystal
