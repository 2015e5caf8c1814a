#include "fcrystal/level_torsion.hpp"

#include "fcrystal/errors.hpp"
#include "fcrystal/families.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fcrystal {

std::string Certificate::to_string() const {
    switch (kind) {
        case CertificateKind::Period: return "Period(" + std::to_string(value) + ")";
        case CertificateKind::BoundAttained: return "BoundAttained";
        case CertificateKind::HorizonExhausted: return "HorizonExhausted(" + std::to_string(value) + ")";
    }
    return "?";
}

std::string NStatus::kind_name() const {
    switch (kind) {
        case NKind::Equal: return "Equal";
        case NKind::UpperBoundOnly: return "UpperBoundOnly";
        case NKind::FamilyFormula: return "FamilyFormula";
    }
    return "?";
}

int theorem12_bound(const ValList& hodge, const Rational& lambda) {
    if (hodge.empty()) throw BadParameters("no Hodge slopes");
    const int shift = hodge.front();
    const Rational lam = lambda - shift;
    const int e = hodge.back() - shift;
    std::int64_t below = 0, above = 0;
    for (int h : hodge) {
        const Rational x(h - shift);
        if (x < lam) ++below;
        else if (x > lam) ++above;
    }
    return static_cast<int>(floor(Rational(e * above) + Rational(below - above) * lam));
}

int theorem12_bound(const SlopeData& sd) {
    if (!sd.isoclinic) throw NotIsoclinic("the bound needs an isoclinic crystal");
    return theorem12_bound(sd.hodge, *sd.lambda);
}

int pdiv_bound(int c, int d) {
    if (c < 1 || d < 1) throw BadParameters("codimension and dimension must be >= 1");
    return (2 * c * d) / (c + d);
}

int quasi_special_bound(const ValList& hodge) {
    const int s = std::accumulate(hodge.begin(), hodge.end(), 0);
    const int r = static_cast<int>(hodge.size());
    return std::min(s, r * hodge.back() - s);
}

int quasi_special_bound(const SlopeData& sd) { return quasi_special_bound(sd.hodge); }

int direct_sum_estimate(const std::vector<int>& n_values) {
    if (n_values.empty()) throw BadParameters("no values");
    if (n_values.size() == 1) return n_values.front();
    int best = 1;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        best = std::max(best, n_values[i]);
        for (std::size_t j = 0; j < n_values.size(); ++j)
            if (i != j) best = std::max(best, n_values[i] + n_values[j] - 1);
    }
    return best;
}

int default_horizon(int rank, int max_hodge) { return 4 * rank * (max_hodge + 1); }

int required_precision(int max_hodge, int hodge_sum, int degree, int horizon) {
    return std::max(horizon * max_hodge + 2, degree * hodge_sum + 2);
}

DeltaScan::DeltaScan(const FCrystal& crystal, int horizon) : horizon_(horizon) {
    if (horizon < 1) throw BadParameters("horizon must be >= 1");
    for (int q = 1; q <= horizon; ++q) {
        trace_.push_back(crystal.alpha_beta_delta(q));
        if (trace_.back().delta == 0) {
            period_ = Period{q, trace_.back().alpha};
            break;
        }
    }
}

AlphaBetaDelta DeltaScan::at(int q) const {
    if (q < 1) throw BadParameters("q must be >= 1");
    if (!period_) {
        if (q > horizon_) throw std::out_of_range("q beyond the scanned horizon");
        return trace_[static_cast<std::size_t>(q - 1)];
    }
    const int t = period_->length;
    const int k = (q - 1) / t;
    AlphaBetaDelta out = trace_[static_cast<std::size_t>((q - 1) % t)];
    out.q = q;
    out.alpha += k * period_->s;
    out.beta += k * period_->s;
    return out;
}

namespace {

const Rational& require_isoclinic(const FCrystal& m) {
    const auto& sd = m.slope_data();
    if (!sd.isoclinic) throw NotIsoclinic("crystal is not isoclinic");
    return *sd.lambda;
}

LevelTorsionResult isoclinic_from_scan(const FCrystal& m, const DeltaScan& scan) {
    LevelTorsionResult out;
    out.trace = scan.trace();
    for (const auto& abd : out.trace) out.lower = std::max(out.lower, abd.delta);
    if (scan.period()) {
        out.upper = out.lower;
        out.exact = true;
        out.certificate = Certificate::period(scan.period()->length);
        return out;
    }
    const int bound = theorem12_bound(m.slope_data());
    if (out.lower > bound)
        throw std::logic_error("delta scan exceeds the closed-form bound (" + std::to_string(out.lower) + " > " +
                               std::to_string(bound) + ")");
    out.upper = bound;
    out.exact = out.lower == bound;
    out.certificate = out.exact ? Certificate::bound_attained() : Certificate::horizon_exhausted(scan.horizon());
    return out;
}

LevelTorsionResult cross_from_scans(const DeltaScan& sj, const DeltaScan& si, int upper_j, int upper_i,
                                    int horizon) {
    LevelTorsionResult out;
    const bool periodic = sj.period() && si.period();
    const int length = periodic ? std::lcm(sj.period()->length, si.period()->length) : horizon;
    for (int q = 1; q <= length; ++q) {
        AlphaBetaDelta abd;
        abd.q = q;
        abd.alpha = si.at(q).alpha;
        abd.beta = sj.at(q).beta;
        abd.delta = std::max(0, abd.beta - abd.alpha);
        out.lower = std::max(out.lower, abd.delta);
        out.trace.push_back(abd);
    }
    if (periodic) {
        out.upper = out.lower;
        out.exact = true;
        out.certificate = Certificate::period(length);
        return out;
    }
    const int cap = std::max(0, upper_j + upper_i - 1);
    if (out.lower > cap)
        throw std::logic_error("cross term exceeds max{0, l_i + l_j - 1}");
    out.upper = cap;
    out.exact = out.lower == cap;
    out.certificate = out.exact ? Certificate::bound_attained() : Certificate::horizon_exhausted(horizon);
    return out;
}

}  // namespace

LevelTorsionResult level_torsion_isoclinic(const FCrystal& m, int horizon) {
    require_isoclinic(m);
    return isoclinic_from_scan(m, DeltaScan(m, horizon));
}

LevelTorsionResult cross_level(const FCrystal& mj, const FCrystal& mi, int horizon) {
    const Rational lj = require_isoclinic(mj);
    const Rational li = require_isoclinic(mi);
    if (lj > li)
        throw SlopeOrderViolated("cross term needs lambda_j <= lambda_i, got " + to_string(lj) + " > " +
                                 to_string(li));
    const DeltaScan sj(mj, horizon);
    const DeltaScan si(mi, horizon);
    const auto rj = isoclinic_from_scan(mj, sj);
    const auto ri = isoclinic_from_scan(mi, si);
    return cross_from_scans(sj, si, rj.upper, ri.upper, horizon);
}

LevelTorsionResult level_torsion_sum(const std::vector<FCrystal>& summands, int horizon) {
    if (summands.empty()) throw BadParameters("no summands");
    std::vector<Rational> lambdas;
    std::vector<DeltaScan> scans;
    std::vector<LevelTorsionResult> diag;
    for (const auto& s : summands) {
        lambdas.push_back(require_isoclinic(s));
        scans.emplace_back(s, horizon);
        diag.push_back(isoclinic_from_scan(s, scans.back()));
    }

    std::vector<LevelTorsionResult> parts = diag;
    for (std::size_t j = 0; j < summands.size(); ++j)
        for (std::size_t i = 0; i < summands.size(); ++i)
            if (i != j && lambdas[j] <= lambdas[i])
                parts.push_back(cross_from_scans(scans[j], scans[i], diag[j].upper, diag[i].upper, horizon));

    LevelTorsionResult out;
    bool all_periodic = true;
    int total_period = 1;
    for (const auto& s : scans) {
        if (s.period()) total_period = std::lcm(total_period, s.period()->length);
        else all_periodic = false;
    }
    for (const auto& part : parts) {
        out.lower = std::max(out.lower, part.lower);
        out.upper = std::max(out.upper, part.upper);
    }
    out.exact = out.lower == out.upper;
    if (all_periodic) out.certificate = Certificate::period(total_period);
    else if (out.exact) out.certificate = Certificate::bound_attained();
    else out.certificate = Certificate::horizon_exhausted(horizon);

    bool ordinary = true;
    const int first = summands.front().hodge().front();
    for (const auto& s : summands)
        for (int e : s.hodge()) ordinary = ordinary && e == first;
    if (out.upper == 0) {
        out.lower = out.upper = ordinary ? 0 : 1;
        out.epsilon_rule = true;
    } else if (out.lower == 0 && !ordinary) {
        out.lower = 1;
        out.epsilon_rule = true;
        out.exact = out.lower == out.upper;
    }

    const int length = all_periodic ? total_period : horizon;
    for (int q = 1; q <= length; ++q) {
        AlphaBetaDelta abd;
        abd.q = q;
        for (std::size_t k = 0; k < scans.size(); ++k) {
            const auto v = scans[k].at(q);
            abd.alpha = k == 0 ? v.alpha : std::min(abd.alpha, v.alpha);
            abd.beta = k == 0 ? v.beta : std::max(abd.beta, v.beta);
        }
        abd.delta = abd.beta - abd.alpha;
        out.trace.push_back(abd);
    }
    return out;
}

namespace {

void add_bounds(const FCrystal& m, IsoReport& report) {
    const auto& sd = report.slope_data;
    if (sd.isoclinic) {
        report.bounds["theorem12"] = theorem12_bound(sd);
        int c = 0, d = 0;
        for (int e : sd.hodge) {
            if (e == sd.min_hodge()) ++c;
            else if (e == sd.min_hodge() + 1) ++d;
        }
        if (c > 0 && d > 0 && c + d == sd.rank()) report.bounds["pdiv"] = pdiv_bound(c, d);
    }
    if (report.ell && report.ell->certificate.kind == CertificateKind::Period)
        report.bounds["quasi_special"] = quasi_special_bound(sd);
    if (m.monomial_permutation()) report.bounds["permutational"] = permutational_closed_bound(sd.hodge);
}

bool all_isoclinic(const std::vector<FCrystal>& parts) {
    return std::all_of(parts.begin(), parts.end(), [](const FCrystal& c) { return c.slope_data().isoclinic; });
}

void settle_equal(IsoReport& report, LevelTorsionResult ell, const std::string& note) {
    report.n.kind = NKind::Equal;
    report.n.note = note;
    if (ell.exact) report.n.value = ell.lower;
    report.ell = std::move(ell);
}

}  // namespace

IsoReport isomorphism_number(const FCrystal& m, int horizon) {
    IsoReport report;
    report.slope_data = m.slope_data();
    const auto& sd = report.slope_data;
    report.horizon = horizon > 0 ? horizon : default_horizon(m.rank(), sd.max_hodge());
    const int q = report.horizon;

    if (m.has_summands()) {
        const auto parts = m.summands();
        if (all_isoclinic(parts)) {
            settle_equal(report, level_torsion_sum(parts, q), "direct sum of isoclinic summands");
            add_bounds(m, report);
            return report;
        }
    }
    if (sd.isoclinic) {
        settle_equal(report, level_torsion_isoclinic(m, q), "isoclinic");
        add_bounds(m, report);
        return report;
    }
    if (auto split = m.split_monomial_cycles()) {
        const auto parts = split->summands();
        if (all_isoclinic(parts)) {
            settle_equal(report, level_torsion_sum(parts, q), "monomial matrix split into its cycles");
            add_bounds(m, report);
            return report;
        }
    }

    const int r = sd.rank();
    const int shift = sd.min_hodge();
    if (r == 2) {
        const Rational lambda1 = sd.newton.front() - shift;
        if (lambda1 == Rational(0)) {
            report.n = {NKind::FamilyFormula, 1, "rank 2 with Newton polygon equal to the Hodge polygon: split"};
        } else {
            report.n = {NKind::UpperBoundOnly, static_cast<int>(floor(lambda1 * 2)),
                        "rank 2, non-isoclinic: n <= 2 * lambda_1"};
        }
    } else if (r >= 3 && sd.max_hodge() - shift == 2 && sd.hodge_numbers.at(shift) == 1 &&
               sd.hodge_numbers.count(shift + 1) && sd.hodge_numbers.at(shift + 1) == r - 2 &&
               sd.hodge_numbers.at(shift + 2) == 1) {
        report.n = {NKind::FamilyFormula, 1, "non-isoclinic K3 type"};
    } else {
        report.n = {NKind::UpperBoundOnly, std::nullopt,
                    "non-isoclinic input: declare an isoclinic decomposition through summands"};
    }
    add_bounds(m, report);
    return report;
}

}  // namespace fcrystal
