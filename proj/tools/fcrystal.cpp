// fcrystal: analyze F-crystals given as Frobenius-twisted matrices.
//
// Exit codes: 0 success, 1 bad input or flags, 2 precision exhausted or
// singular matrix, 3 verification failure.

#include "fcrystal/errors.hpp"
#include "fcrystal/families.hpp"
#include "fcrystal/level_torsion.hpp"
#include "fcrystal/report.hpp"
#include "fcrystal/spec_file.hpp"
#include "fcrystal/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fcrystal;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitPrecision = 2;
constexpr int kExitCheck = 3;

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw BadParameters(flag + ": '" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw BadParameters(flag + ": empty list");
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::string spec_path;
    std::optional<int> q_max;
    std::optional<int> precision;
    std::string format = "json";
};

int cmd_analyze(const AnalyzeArgs& args) {
    AnalysisInput input;
    input.spec = load_spec(args.spec_path);
    input.requested_precision = args.precision ? args.precision : input.spec.precision;
    input.precision = resolve_precision(input.spec, args.q_max);
    if (args.precision && *args.precision < input.precision.automatic) {
        std::cerr << "error: --precision " << *args.precision << " is below the automatic precision "
                  << input.precision.automatic << " for horizon " << input.precision.horizon << "\n";
        return kExitPrecision;
    }
    if (args.precision) input.precision.used = *args.precision;
    input.modulus = PrimeContext::create(input.spec.p, input.spec.m, input.precision.used)->modulus_string();
    const IsoReport report = analyze(input);
    if (args.format == "table") std::cout << report_table(input, report);
    else std::cout << report_json(input, report).dump(2) << "\n";
    return 0;
}

// ---- bound ------------------------------------------------------------------

struct BoundArgs {
    std::string hodge;
    std::string lambda;
    std::optional<int> c;
    std::optional<int> d;
};

int cmd_bound(const BoundArgs& args) {
    const bool slope_mode = !args.hodge.empty();
    const bool pdiv_mode = args.c || args.d;
    if (slope_mode == pdiv_mode) throw BadParameters("give either --hodge/--lambda or --c/--d");
    if (slope_mode) {
        std::vector<int> hodge = parse_int_list(args.hodge, "--hodge");
        std::sort(hodge.begin(), hodge.end());
        if (hodge.front() < 0) throw BadParameters("--hodge: slopes must be nonnegative");
        if (args.lambda.empty()) throw BadParameters("--lambda is required with --hodge");
        const Rational lambda = parse_rational(args.lambda);
        if (lambda < Rational(hodge.front()) || lambda > Rational(hodge.back()))
            throw BadParameters("--lambda must lie between the smallest and largest Hodge slope");
        std::cout << "theorem12      " << theorem12_bound(hodge, lambda) << "\n";
        std::cout << "quasi_special  " << quasi_special_bound(hodge) << "\n";
        const int low = hodge.front();
        const auto c = std::count(hodge.begin(), hodge.end(), low);
        const auto d = std::count(hodge.begin(), hodge.end(), low + 1);
        if (c > 0 && d > 0 && c + d == static_cast<long>(hodge.size()))
            std::cout << "pdiv           " << pdiv_bound(static_cast<int>(c), static_cast<int>(d)) << "\n";
        return 0;
    }
    if (!args.c || !args.d) throw BadParameters("--c and --d go together");
    std::cout << "pdiv           " << pdiv_bound(*args.c, *args.d) << "\n";
    ValList hodge(static_cast<std::size_t>(*args.c), 0);
    hodge.insert(hodge.end(), static_cast<std::size_t>(*args.d), 1);
    std::cout << "theorem12      " << theorem12_bound(hodge, Rational(*args.d, *args.c + *args.d)) << "\n";
    std::cout << "quasi_special  " << quasi_special_bound(hodge) << "\n";
    return 0;
}

// ---- make-family --------------------------------------------------------------

struct FamilyArgs {
    std::string kind;
    long p = 2;
    int m = 1;
    std::uint64_t seed = 0;
    std::string e, pi;
    std::optional<int> r, r1, mid, r2, l1, l2, d;
    std::string output;
};

int cmd_make_family(const FamilyArgs& args) {
    const auto& kinds = family_kinds();
    if (std::find(kinds.begin(), kinds.end(), args.kind) == kinds.end())
        throw BadParameters("unknown family kind '" + args.kind + "'");
    auto need = [&](const std::optional<int>& v, const char* flag) {
        if (!v) throw BadParameters(args.kind + " needs --" + std::string(flag));
        return *v;
    };
    nlohmann::json params = nlohmann::json::object();
    if (args.kind == "permutational") {
        if (args.pi.empty() || args.e.empty()) throw BadParameters("permutational needs --pi and --e");
        params["pi"] = parse_int_list(args.pi, "--pi");
        params["e"] = parse_int_list(args.e, "--e");
    } else if (args.kind == "cyclic") {
        if (args.e.empty()) throw BadParameters("cyclic needs --e");
        params["e"] = parse_int_list(args.e, "--e");
    } else if (args.kind == "k3-isoclinic") {
        params["r"] = need(args.r, "r");
    } else if (args.kind == "k3-nonisoclinic") {
        params["r1"] = need(args.r1, "r1");
        params["mid"] = need(args.mid, "mid");
        params["r2"] = need(args.r2, "r2");
    } else if (args.kind == "rank2") {
        params["l1"] = need(args.l1, "l1");
        params["l2"] = need(args.l2, "l2");
    } else if (args.kind == "supersingular") {
        params["d"] = need(args.d, "d");
        const auto e = parse_int_list(args.e.empty() ? std::string() : args.e, "--e");
        if (e.size() != 1) throw BadParameters("supersingular needs a single --e value");
        params["e"] = e.front();
    }
    if (!is_prime(args.p)) throw NotPrime(std::to_string(args.p) + " is not prime");
    CrystalSpec spec;
    spec.p = args.p;
    spec.m = args.m;
    spec.family = FamilySpec{args.kind, params, args.seed};
    const CrystalSpec explicit_spec = materialize_family(spec);
    write_output(spec_to_json(explicit_spec).dump(2) + "\n", args.output);
    return 0;
}

// ---- verify-paper ---------------------------------------------------------------

int cmd_verify(const std::string& subset) {
    const auto ids = verify::subset_criteria(subset);
    int failed = 0;
    for (int id : ids) {
        const auto r = verify::run_criterion(id);
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.label << "  (" << r.detail << ")\n";
        if (!r.passed) ++failed;
    }
    std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " checks passed\n";
    if (failed) {
        std::cerr << failed << " check(s) failed\n";
        return kExitCheck;
    }
    return 0;
}

// ---- smith ------------------------------------------------------------------------

struct SmithArgs {
    std::string spec_path;
    std::string matrix;
    long p = 0;
    int m = 1;
    std::optional<int> precision;
};

int cmd_smith(const SmithArgs& args) {
    CrystalSpec spec;
    if (!args.spec_path.empty() == !args.matrix.empty())
        throw BadParameters("give either a spec file or --matrix");
    if (!args.spec_path.empty()) {
        spec = load_spec(args.spec_path);
    } else {
        if (args.p == 0) throw BadParameters("--matrix needs --p");
        nlohmann::json doc;
        try {
            doc["matrix"] = nlohmann::json::parse(args.matrix);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("--matrix is not valid JSON: ") + e.what());
        }
        doc["p"] = args.p;
        doc["m"] = args.m;
        doc["rank"] = doc["matrix"].is_array() ? doc["matrix"].size() : 0;
        spec = parse_spec(doc);
    }
    if (args.precision) spec.precision = args.precision;
    if (!is_prime(spec.p)) throw NotPrime(std::to_string(spec.p) + " is not prime");

    ValList vals;
    if (spec.precision) {
        vals = build_crystal(spec, PrimeContext::create(spec.p, spec.m, *spec.precision)).hodge();
    } else {
        const auto res = resolve_precision(spec, 1);
        vals = build_crystal(spec, PrimeContext::create(spec.p, spec.m, res.used)).hodge();
    }
    for (std::size_t i = 0; i < vals.size(); ++i) std::cout << (i ? "," : "") << vals[i];
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hodge/Newton invariants, level torsion and isomorphism numbers of F-crystals"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a crystal spec file");
    analyze_cmd->add_option("spec", analyze_args.spec_path, "Spec file (JSON)")->required();
    analyze_cmd->add_option("--q-max", analyze_args.q_max, "Horizon Q (default 4 r (e_r + 1))")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--precision", analyze_args.precision, "p-adic precision N (rejected below the automatic value)")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--format", analyze_args.format, "json or table")
        ->check(CLI::IsMember({"json", "table"}));

    BoundArgs bound_args;
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate the closed-form bounds");
    bound_cmd->add_option("--hodge", bound_args.hodge, "Hodge slopes, comma separated");
    bound_cmd->add_option("--lambda", bound_args.lambda, "Newton slope, a or a/b");
    bound_cmd->add_option("--c", bound_args.c, "Codimension")->check(CLI::PositiveNumber);
    bound_cmd->add_option("--d", bound_args.d, "Dimension")->check(CLI::PositiveNumber);

    FamilyArgs family_args;
    auto* family_cmd = app.add_subcommand("make-family", "Write a spec file for a named family");
    family_cmd->add_option("kind", family_args.kind, "permutational | cyclic | k3-isoclinic | k3-nonisoclinic | rank2 | supersingular")
        ->required();
    family_cmd->add_option("--p", family_args.p, "Prime (default 2)");
    family_cmd->add_option("--m", family_args.m, "Residue degree (default 1)")->check(CLI::PositiveNumber);
    family_cmd->add_option("--seed", family_args.seed, "Seed for generated units");
    family_cmd->add_option("--e", family_args.e, "Exponents (comma separated); a single value for supersingular");
    family_cmd->add_option("--pi", family_args.pi, "Permutation, 1-based images of 1..r");
    family_cmd->add_option("--r", family_args.r, "Rank (k3-isoclinic)");
    family_cmd->add_option("--r1", family_args.r1, "First cycle length minus one (k3-nonisoclinic)");
    family_cmd->add_option("--mid", family_args.mid, "Middle block size (k3-nonisoclinic)");
    family_cmd->add_option("--r2", family_args.r2, "Last cycle length minus one (k3-nonisoclinic)");
    family_cmd->add_option("--l1", family_args.l1, "Smaller Newton slope (rank2)");
    family_cmd->add_option("--l2", family_args.l2, "Larger Newton slope (rank2)");
    family_cmd->add_option("--d", family_args.d, "Half rank (supersingular)");
    family_cmd->add_option("-o,--output", family_args.output, "Output path (default stdout)");

    std::string subset = "all";
    auto* verify_cmd = app.add_subcommand("verify-paper", "Run the built-in verification suite");
    verify_cmd->add_option("--subset", subset, "all | k3 | rank2 | quasi-special | bounds")
        ->check(CLI::IsMember({"all", "k3", "rank2", "quasi-special", "bounds"}));

    SmithArgs smith_args;
    auto* smith_cmd = app.add_subcommand("smith", "Elementary divisor valuations of a matrix");
    smith_cmd->add_option("spec", smith_args.spec_path, "Spec file (JSON)");
    smith_cmd->add_option("--matrix", smith_args.matrix, "Inline JSON matrix, e.g. [[1,0],[0,8]]");
    smith_cmd->add_option("--p", smith_args.p, "Prime for --matrix");
    smith_cmd->add_option("--m", smith_args.m, "Residue degree for --matrix")->check(CLI::PositiveNumber);
    smith_cmd->add_option("--precision", smith_args.precision, "p-adic precision N")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(analyze_args);
        if (*bound_cmd) return cmd_bound(bound_args);
        if (*family_cmd) return cmd_make_family(family_args);
        if (*verify_cmd) return cmd_verify(subset);
        if (*smith_cmd) return cmd_smith(smith_args);
    } catch (const PrecisionExhausted& e) {
        std::cerr << "error: " << e.what() << " (needs precision >= " << e.needed() << ")\n";
        return kExitPrecision;
    } catch (const SingularAtPrecision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
