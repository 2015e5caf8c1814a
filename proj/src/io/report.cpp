#include "fcrystal/report.hpp"

#include <iomanip>
#include <sstream>

namespace fcrystal {

using nlohmann::ordered_json;

IsoReport analyze(const AnalysisInput& input) {
    const auto ctx = PrimeContext::create(input.spec.p, input.spec.m, input.precision.used);
    const FCrystal crystal = build_crystal(input.spec, ctx);
    return isomorphism_number(crystal, input.precision.horizon);
}

std::vector<std::pair<int, Rational>> polygon_vertices(const std::vector<Rational>& slopes) {
    std::vector<std::pair<int, Rational>> out{{0, Rational(0)}};
    Rational y(0);
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        y += slopes[i];
        const bool corner = i + 1 == slopes.size() || slopes[i + 1] != slopes[i];
        if (corner) out.emplace_back(static_cast<int>(i + 1), y);
    }
    return out;
}

namespace {

ordered_json rational_json(const Rational& r) {
    if (r.denominator() == 1) return r.numerator();
    return to_string(r);
}

ordered_json polygon_json(const std::vector<Rational>& slopes) {
    auto out = ordered_json::array();
    for (const auto& [x, y] : polygon_vertices(slopes)) out.push_back(ordered_json::array({x, rational_json(y)}));
    return out;
}

ordered_json trace_json(const std::vector<AlphaBetaDelta>& trace) {
    auto out = ordered_json::array();
    for (const auto& t : trace) {
        ordered_json row;
        row["q"] = t.q;
        row["alpha"] = t.alpha;
        row["beta"] = t.beta;
        row["delta"] = t.delta;
        out.push_back(std::move(row));
    }
    return out;
}

std::string n_certificate(const IsoReport& report) {
    if (report.n.kind == NKind::FamilyFormula) return "FamilyFormula";
    if (report.n.kind == NKind::Equal && report.ell) return report.ell->certificate.to_string();
    return "none";
}

}  // namespace

ordered_json report_json(const AnalysisInput& input, const IsoReport& report) {
    const auto& spec = input.spec;
    const auto& sd = report.slope_data;
    ordered_json out;
    out["schema"] = kReportSchema;

    ordered_json in;
    in["p"] = spec.p;
    in["m"] = spec.m;
    in["rank"] = spec.rank;
    ordered_json prec;
    prec["used"] = input.precision.used;
    prec["automatic"] = input.precision.automatic;
    prec["requested"] = input.requested_precision ? ordered_json(*input.requested_precision) : ordered_json(nullptr);
    prec["rule"] = "max(horizon * e_max + 2, m * sum(e) + 2)";
    in["precision"] = std::move(prec);
    in["horizon"] = input.precision.horizon;
    in["modulus"] = input.modulus;
    in["summands"] = spec.summands.empty() ? ordered_json(nullptr) : ordered_json(spec.summands);
    in["seed"] = spec.family ? ordered_json(spec.family->seed) : ordered_json(nullptr);
    if (spec.family) {
        ordered_json f;
        f["kind"] = spec.family->kind;
        f["params"] = spec.family->params;
        in["family"] = std::move(f);
    }
    if (!spec.provenance.is_null()) in["provenance"] = spec.provenance;
    out["input"] = std::move(in);

    ordered_json slopes;
    slopes["hodge"] = sd.hodge;
    ordered_json hn = ordered_json::object();
    for (const auto& [i, h] : sd.hodge_numbers) hn[std::to_string(i)] = h;
    slopes["hodge_numbers"] = std::move(hn);
    auto newton = ordered_json::array();
    for (const auto& x : sd.newton) newton.push_back(rational_json(x));
    slopes["newton"] = std::move(newton);
    slopes["isoclinic"] = sd.isoclinic;
    slopes["lambda"] = sd.lambda ? rational_json(*sd.lambda) : ordered_json(nullptr);
    slopes["ordinary"] = sd.ordinary;
    std::vector<Rational> hodge_r(sd.hodge.begin(), sd.hodge.end());
    slopes["hodge_polygon"] = polygon_json(hodge_r);
    slopes["newton_polygon"] = polygon_json(sd.newton);
    out["slopes"] = std::move(slopes);

    if (report.ell) {
        const auto& ell = *report.ell;
        ordered_json lt;
        lt["lower"] = ell.lower;
        lt["upper"] = ell.upper;
        lt["exact"] = ell.exact;
        lt["certificate"] = ell.certificate.to_string();
        lt["epsilon_rule"] = ell.epsilon_rule;
        lt["trace"] = trace_json(ell.trace);
        out["level_torsion"] = std::move(lt);
    } else {
        out["level_torsion"] = nullptr;
    }

    ordered_json bounds = ordered_json::object();
    for (const auto& [name, value] : report.bounds) bounds[name] = value;
    out["bounds"] = std::move(bounds);

    ordered_json n;
    n["status"] = report.n.kind_name();
    n["value"] = report.n.value ? ordered_json(*report.n.value) : ordered_json(nullptr);
    n["certificate"] = n_certificate(report);
    n["note"] = report.n.note;
    out["n"] = std::move(n);
    return out;
}

std::string report_table(const AnalysisInput& input, const IsoReport& report) {
    const auto& sd = report.slope_data;
    std::ostringstream os;
    auto join = [](const auto& xs, auto fmt) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : ", ") + fmt(x);
        return s;
    };
    const auto int_fmt = [](int x) { return std::to_string(x); };
    const auto rat_fmt = [](const Rational& x) { return to_string(x); };

    os << "p = " << input.spec.p << ", m = " << input.spec.m << ", rank = " << input.spec.rank << "\n";
    os << "modulus       " << input.modulus << "\n";
    os << "precision     " << input.precision.used << " (automatic " << input.precision.automatic << ")\n";
    os << "horizon       " << input.precision.horizon << "\n";
    os << "hodge         " << join(sd.hodge, int_fmt) << "\n";
    os << "newton        " << join(sd.newton, rat_fmt) << "\n";
    os << "isoclinic     " << (sd.isoclinic ? "yes, lambda = " + to_string(*sd.lambda) : std::string("no")) << "\n";
    os << "ordinary      " << (sd.ordinary ? "yes" : "no") << "\n";
    if (report.ell) {
        const auto& ell = *report.ell;
        os << "level torsion ";
        if (ell.exact) os << ell.lower;
        else os << "[" << ell.lower << ", " << ell.upper << "]";
        os << "  " << ell.certificate.to_string() << (ell.epsilon_rule ? "  (epsilon rule)" : "") << "\n";
        os << "\n" << std::setw(6) << "q" << std::setw(8) << "alpha" << std::setw(8) << "beta" << std::setw(8)
           << "delta" << "\n";
        for (const auto& t : ell.trace)
            os << std::setw(6) << t.q << std::setw(8) << t.alpha << std::setw(8) << t.beta << std::setw(8) << t.delta
               << "\n";
        os << "\n";
    }
    for (const auto& [name, value] : report.bounds) os << "bound " << std::left << std::setw(14) << name << std::right << value << "\n";
    os << "n             " << report.n.kind_name();
    if (report.n.value) os << " " << *report.n.value;
    os << "  [" << n_certificate(report) << "]";
    if (!report.n.note.empty()) os << "  " << report.n.note;
    os << "\n";
    return os.str();
}

}  // namespace fcrystal
